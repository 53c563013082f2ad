#include "gradfem/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>

#include "gradfem/error.hpp"
#include "gradfem/refine.hpp"

namespace gradfem {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Parser {
 public:
  explicit Parser(std::filesystem::path source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ConfigParse, source_.string() + ":" + std::to_string(line_) + ": " + msg);
  }

  void set_line(int line) { line_ = line; }

  double number(const std::string& text) const {
    std::istringstream is(text);
    double v = 0;
    std::string rest;
    if (!(is >> v) || (is >> rest)) fail("expected a number, got '" + text + "'");
    return v;
  }

  int integer(const std::string& text) const {
    std::istringstream is(text);
    long v = 0;
    std::string rest;
    if (!(is >> v) || (is >> rest)) fail("expected an integer, got '" + text + "'");
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const std::string& text) const {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(number(tok));
    return out;
  }

  Point2 point(const std::string& text) const {
    const auto v = numbers(text);
    if (v.size() != 2) fail("expected 'x y', got '" + text + "'");
    return {v[0], v[1]};
  }

  std::vector<Point2> points(const std::string& text) const {
    std::vector<Point2> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(point(item));
    return out;
  }

  bool boolean(const std::string& text) const {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail("expected true or false, got '" + text + "'");
  }

  KappaSetting kappa(const std::string& text) const {
    try {
      return KappaSetting::parse(text);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  std::filesystem::path source_;
  int line_ = 0;
};

struct PendingFracture {
  std::optional<Point2> from, to;
  int line = 0;
};

}  // namespace

KappaSetting KappaSetting::parse(const std::string& text) {
  KappaSetting k;
  const std::string t = trim(text);
  std::istringstream is(t.rfind("auto:", 0) == 0 ? t.substr(5) : t);
  double v = 0;
  std::string rest;
  if (!(is >> v) || (is >> rest)) throw Error(ErrorKind::ConfigParse, "bad kappa '" + text + "'");
  if (t.rfind("auto:", 0) == 0) {
    k.auto_exponent = v;
  } else {
    k.value = v;
  }
  return k;
}

StudyConfig parse_config(std::istream& in, const std::filesystem::path& source) {
  StudyConfig cfg;
  cfg.source = source;
  Parser p(source);
  enum class Section { Top, Fracture, Singular } section = Section::Top;
  std::vector<PendingFracture> fractures;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    p.set_line(lineno);
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[fracture]") {
        section = Section::Fracture;
        fractures.push_back({});
        fractures.back().line = lineno;
      } else if (line == "[singular]") {
        section = Section::Singular;
        cfg.singular.push_back({});
        cfg.singular.back().line = lineno;
      } else {
        p.fail("unknown section " + line);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == Section::Fracture) {
      auto& f = fractures.back();
      if (key == "from") {
        f.from = p.point(value);
      } else if (key == "to") {
        f.to = p.point(value);
      } else {
        p.fail("unknown fracture key '" + key + "'");
      }
      continue;
    }
    if (section == Section::Singular) {
      auto& s = cfg.singular.back();
      if (key == "at") {
        s.at = p.point(value);
      } else if (key == "kappa") {
        s.kappa = p.kappa(value);
      } else if (key == "kind") {
        if (value == "fracture_endpoint") {
          s.kind = SingularKind::FractureEndpoint;
        } else if (value == "domain_vertex") {
          s.kind = SingularKind::DomainVertex;
        } else {
          p.fail("unknown singular kind '" + value + "'");
        }
      } else {
        p.fail("unknown singular key '" + key + "'");
      }
      continue;
    }

    if (key == "domain") {
      cfg.domain = p.points(value);
    } else if (key == "mesh") {
      if (value != "grid" && value != "union-jack" && value != "file") p.fail("unknown mesh template '" + value + "'");
      cfg.mesh = value;
    } else if (key == "grid.x") {
      cfg.grid.x_lines = p.numbers(value);
    } else if (key == "grid.y") {
      cfg.grid.y_lines = p.numbers(value);
    } else if (key == "union_jack.x") {
      cfg.union_jack.x_lines = p.numbers(value);
    } else if (key == "union_jack.y") {
      cfg.union_jack.y_lines = p.numbers(value);
    } else if (key == "union_jack.cells") {
      cfg.union_jack.cells = p.integer(value);
    } else if (key == "mesh.file") {
      cfg.mesh_file = source.parent_path() / value;
    } else if (key == "degree") {
      cfg.degree = p.integer(value);
    } else if (key == "levels") {
      cfg.levels = p.integer(value);
    } else if (key == "kappa") {
      cfg.kappa = p.kappa(value);
      cfg.kappa_line = lineno;
    } else if (key == "grade_endpoints") {
      cfg.grade_endpoints = p.boolean(value);
    } else if (key == "solver.rel_tol") {
      cfg.solver.rel_tol = p.number(value);
    } else if (key == "solver.max_iter") {
      cfg.solver.max_iter = p.integer(value);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      p.fail("unknown key '" + key + "'");
    }
  }

  for (const auto& f : fractures) {
    p.set_line(f.line);
    if (!f.from || !f.to) p.fail("[fracture] needs both 'from' and 'to'");
    cfg.fractures.push_back({*f.from, *f.to});
  }
  if (cfg.domain.empty()) {
    p.set_line(lineno);
    p.fail("missing 'domain'");
  }
  return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, "cannot open " + path.string());
  return parse_config(in, path);
}

ResolvedStudy resolve(const StudyConfig& cfg) {
  ResolvedStudy r;
  ProblemSpec& spec = r.spec;
  spec.domain = cfg.domain;
  spec.fractures = cfg.fractures;
  spec.degree = cfg.degree;
  spec.refinements = cfg.levels;

  auto context = [&](int line) { return cfg.source.string() + ":" + std::to_string(line) + ": "; };
  const double omega = cfg.domain.size() >= 3 ? largest_interior_angle(spec) : 0.0;

  auto resolve_kappa = [&](const KappaSetting& own, SingularKind kind, int line) {
    const KappaSetting& k = own.empty() ? cfg.kappa : own;
    if (k.empty()) throw Error(ErrorKind::ConfigParse, context(line) + "no kappa given");
    try {
      if (k.auto_exponent) {
        if (kind == SingularKind::FractureEndpoint) {
          return kappa_from_theory({cfg.degree, kind, *k.auto_exponent, omega, 0.0});
        }
        const double a = *k.auto_exponent;
        if (!(a > 0.0 && a < 1.0)) {
          throw Error(ErrorKind::KappaOutOfRange, "grading exponent must lie in (0, 1)");
        }
        // Corner analogue of 2^(-m/a): strictly below the 2^(-m omega / pi) bound.
        const double kappa = std::min(0.5, std::exp2(-cfg.degree * omega / (std::numbers::pi * a)));
        return kappa_from_theory({cfg.degree, kind, a, omega, kappa});
      }
      if (kind == SingularKind::DomainVertex) {
        return kappa_from_theory({cfg.degree, kind, 0.0, omega, *k.value});
      }
      if (!(*k.value > 0.0 && *k.value <= 0.5)) {
        std::ostringstream os;
        os << "kappa " << *k.value << " is outside (0, 0.5]";
        throw Error(ErrorKind::KappaOutOfRange, os.str());
      }
      return *k.value;
    } catch (const Error& e) {
      throw Error(e.kind(), context(line) + e.what());
    }
  };

  const bool crossing = cfg.mesh == "union-jack";
  for (const auto& s : cfg.singular) {
    spec.singular_points.push_back({s.at, resolve_kappa(s.kappa, s.kind, s.line), s.kind});
  }
  if (!crossing && cfg.grade_endpoints) {
    for (const auto& f : cfg.fractures) {
      for (Point2 end : {f.a, f.b}) {
        const bool listed = std::any_of(spec.singular_points.begin(), spec.singular_points.end(),
                                        [&](const SingularPoint& sp) { return distance(sp.at, end) <= 1e-12; });
        if (!listed) {
          spec.singular_points.push_back({end, resolve_kappa({}, SingularKind::FractureEndpoint, cfg.kappa_line),
                                          SingularKind::FractureEndpoint});
        }
      }
    }
  }

  if (cfg.mesh == "grid") {
    r.recipe = cfg.grid;
  } else if (cfg.mesh == "union-jack") {
    r.recipe = cfg.union_jack;
  } else {
    if (cfg.mesh_file.empty()) throw Error(ErrorKind::ConfigParse, context(0) + "mesh = file needs 'mesh.file'");
    r.recipe = FileTemplate{cfg.mesh_file};
  }

  try {
    check_problem(spec, !crossing);
  } catch (const Error& e) {
    throw Error(e.kind(), cfg.source.string() + ": " + e.what());
  }
  return r;
}

}  // namespace gradfem
