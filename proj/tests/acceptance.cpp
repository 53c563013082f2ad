// Reproduction runs for the bundled configurations plus the property suite.
// Prints one PASS/FAIL line per criterion and exits non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gradfem/config.hpp"
#include "gradfem/fem.hpp"
#include "gradfem/linalg.hpp"
#include "gradfem/study.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gradfem;
using namespace gradfem::testing;

namespace {

constexpr double kRateTolP1 = 0.05;
constexpr double kRateTolP2 = 0.07;
constexpr double kOptimalMin = 0.97;
constexpr double kSuboptimalMax = 0.95;
constexpr double kNearTwo = 1.80;
constexpr double kBelowTwo = 1.75;
constexpr double kLoadTol = 1e-12;
constexpr double kClipTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kAngleRatio = 0.9;
constexpr double kProlongTol = 1e-12;
constexpr double kDenseTol = 1e-8;
constexpr std::size_t kDenseMaxDim = 2000;
constexpr int kProlongMaxLevel = 3;
constexpr double kSlopeTol = 0.1;
constexpr int kSlopePoints = 3;

struct Properties {
  double load_sum_error = 0;
  double clip_mismatch = 0;
  double asymmetry = 0;
  double worst_residual = 0;
  bool all_converged = true;
  bool growth_ok = true;
  std::size_t violations = 0;
  std::string first_violation;
  std::vector<double> min_angles;
  double prolong_diff = 0;
  int prolong_checks = 0;
  double dense_diff = 0;
  int dense_checks = 0;
};

struct Run {
  std::string name;
  StudyReport report;
  Properties props;
  double seconds = 0;

  double rate(int j) const { return report.levels.at(j).rate.value_or(std::nan("")); }
};

double fracture_length(const ProblemSpec& spec) {
  double total = 0;
  for (const auto& f : spec.fractures) total += length(f);
  return total;
}

Run run_config(const std::string& name) {
  const auto cfg = load_config(source_dir() / "configs" / (name + ".cfg"));
  const ResolvedStudy study = resolve(cfg);
  const double gamma = fracture_length(study.spec);

  Run run{name, {}, {}, 0};
  Properties& p = run.props;
  std::optional<FeFunction> previous;
  std::size_t base_triangles = 0;

  StudyOptions options;
  options.solver = cfg.solver;
  options.on_level = [&](const LevelView& v) {
    const double sum = std::accumulate(v.load.begin(), v.load.end(), 0.0);
    p.load_sum_error = std::max(p.load_sum_error, std::abs(sum - gamma));

    if (v.mesh.fracture_mode == FractureMode::Conforming) {
      const auto clipped = assemble_line_load_clipped(v.dofs, study.spec.fractures);
      p.clip_mismatch = std::max(p.clip_mismatch, max_abs_diff(clipped, v.load));
    }

    p.asymmetry = std::max(p.asymmetry, asymmetry(v.stiffness));
    p.all_converged = p.all_converged && v.record.solve.converged;
    p.worst_residual = std::max(p.worst_residual, v.record.solve.relative_residual);

    if (v.mesh.level == 0) base_triangles = v.mesh.triangle_count();
    p.growth_ok = p.growth_ok && v.mesh.triangle_count() == (base_triangles << (2 * v.mesh.level));
    const auto violations = validate(v.mesh, study.spec);
    if (!violations.empty() && p.first_violation.empty()) p.first_violation = violations.front().message;
    p.violations += violations.size();
    p.min_angles.push_back(min_angle(v.mesh));

    if (previous && v.mesh.level <= kProlongMaxLevel) {
      const FeFunction fine = prolongate(*previous, v.solution.dofs);
      p.prolong_diff = std::max(p.prolong_diff, h1_seminorm_diff(fine, *previous));
      ++p.prolong_checks;
    }
    previous = v.solution;

    if (v.dofs.dof_count <= kDenseMaxDim) {
      SparseSystem s{v.stiffness, v.load};
      apply_dirichlet(s, v.dofs.boundary_dofs);
      p.dense_diff = std::max(p.dense_diff, max_abs_diff(dense_solve(s.matrix, s.load), v.solution.coefficients));
      ++p.dense_checks;
    }
  };

  const auto start = std::chrono::steady_clock::now();
  run.report = run_study(study.spec, study.recipe, cfg.levels, options);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "  " << name << " (" << run.seconds << " s):";
  for (const auto& r : run.report.levels) {
    if (r.rate) std::printf(" e%d=%.3f", r.level, *r.rate);
  }
  std::cout << std::endl;
  return run;
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    std::cout << "    " << (ok ? "ok   " : "MISS ") << what << "\n";
  }

  bool report(int number) const {
    std::cout << (ok_ ? "PASS" : "FAIL") << " criterion " << number << ": " << title_ << std::endl;
    return ok_;
  }

 private:
  std::string title_;
  bool ok_ = true;
};

}  // namespace

int main() {
  std::map<std::string, Run> runs;
  auto get = [&](const std::string& name) -> const Run& {
    auto it = runs.find(name);
    if (it == runs.end()) it = runs.emplace(name, run_config(name)).first;
    return it->second;
  };

  int failed = 0;
  auto finish = [&](const Criterion& c, int number) { failed += c.report(number) ? 0 : 1; };

  std::cout << "criterion 1\n";
  {
    Criterion c("P1 rates on the unit square, graded kappa 0.1..0.5 and Union-Jack, j=4,5 within 0.05");
    const std::vector<std::pair<std::string, std::array<double, 2>>> targets{
        {"example51_graded_k01", {0.97, 0.99}}, {"example51_graded_k02", {0.99, 1.00}},
        {"example51_graded_k03", {0.99, 1.00}}, {"example51_graded_k04", {0.94, 0.98}},
        {"example51_graded_k05", {0.89, 0.91}}, {"example51_unionjack", {0.49, 0.49}}};
    for (const auto& [name, want] : targets) {
      const Run& r = get(name);
      for (int j : {4, 5}) {
        const double e = r.rate(j);
        c.check(std::abs(e - want[j - 4]) <= kRateTolP1,
                name + " e" + std::to_string(j) + "=" + fmt(e) + " target " + fmt(want[j - 4], 2));
      }
    }
    finish(c, 1);
  }

  std::cout << "criterion 2\n";
  {
    Criterion c("long and diagonal fractures: e5 >= 0.97 for kappa 0.1..0.3, e5 <= 0.95 for kappa 0.5");
    for (const std::string family : {"long_line", "diagonal_line"}) {
      for (const std::string k : {"01", "02", "03"}) {
        const double e = get(family + "_k" + k).rate(5);
        c.check(e >= kOptimalMin, family + "_k" + k + " e5=" + fmt(e));
      }
      const double e = get(family + "_k05").rate(5);
      c.check(e <= kSuboptimalMax, family + "_k05 e5=" + fmt(e));
    }
    finish(c, 2);
  }

  std::cout << "criterion 3\n";
  {
    Criterion c("two fractures: e5 >= 0.97 for kappa 0.2, e5 <= 0.95 for kappa 0.5");
    const double good = get("two_fractures_k02").rate(5);
    c.check(good >= kOptimalMin, "two_fractures_k02 e5=" + fmt(good));
    const double bad = get("two_fractures_k05").rate(5);
    c.check(bad <= kSuboptimalMax, "two_fractures_k05 e5=" + fmt(bad));
    finish(c, 3);
  }

  std::cout << "criterion 4\n";
  {
    Criterion c("P2 on the triangle: e5 within 0.07 of targets, rate near 2 only for kappa < 0.25");
    const std::vector<std::pair<std::string, double>> targets{
        {"triangle_p2_k02", 1.88}, {"triangle_p2_k03", 1.68}, {"triangle_p2_k04", 1.32}, {"triangle_p2_k05", 1.00}};
    double seconds = 0;
    for (const auto& [name, want] : targets) {
      const double e = get(name).rate(5);
      c.check(std::abs(e - want) <= kRateTolP2, name + " e5=" + fmt(e) + " target " + fmt(want, 2));
    }
    for (const std::string name : {"triangle_p2_k01", "triangle_p2_k02"}) {
      const Run& r = get(name);
      c.check(r.rate(5) >= kNearTwo && r.rate(5) > r.rate(4),
              name + " climbing toward 2: e4=" + fmt(r.rate(4)) + " e5=" + fmt(r.rate(5)));
    }
    for (const std::string name : {"triangle_p2_k03", "triangle_p2_k04", "triangle_p2_k05"}) {
      c.check(get(name).rate(5) <= kBelowTwo, name + " stays below 2: e5=" + fmt(get(name).rate(5)));
    }
    for (const std::string k : {"01", "02", "03", "04", "05"}) seconds += get("triangle_p2_k" + k).seconds;
    c.check(seconds < 600.0, "five P2 rows took " + fmt(seconds, 1) + " s");
    finish(c, 4);
  }

  std::cout << "criterion 5\n";
  {
    Criterion c("property suite over every acceptance run");
    for (const auto& [name, r] : runs) {
      const Properties& p = r.props;
      const double deepest = p.min_angles.back();
      const double level3 = p.min_angles.at(3);
      std::ostringstream detail;
      detail.precision(3);
      detail << name << ": load " << p.load_sum_error << ", clip " << p.clip_mismatch << ", asym " << p.asymmetry
             << ", resid " << p.worst_residual << ", angle " << deepest / level3 << ", prolong " << p.prolong_diff
             << " (" << p.prolong_checks << "), dense " << p.dense_diff << " (" << p.dense_checks << ")";
      const bool ok = p.load_sum_error <= kLoadTol && p.clip_mismatch <= kClipTol && p.asymmetry <= kSymmetryTol &&
                      p.all_converged && p.worst_residual <= kResidualTol && p.growth_ok && p.violations == 0 &&
                      deepest >= kAngleRatio * level3 && p.prolong_diff <= kProlongTol && p.prolong_checks > 0 &&
                      p.dense_diff <= kDenseTol && p.dense_checks > 0;
      if (p.violations) detail << ", " << p.violations << " violations, first: " << p.first_violation;
      c.check(ok, detail.str());
    }
    finish(c, 5);
  }

  std::cout << "criterion 6\n";
  {
    Criterion c("kappa 0.2 runs: slope of log|u_{j+1}-u_j| against log dim S_j is -m/2 within 0.1");
    for (const auto& [name, m] : {std::pair<std::string, int>{"example51_graded_k02", 1}, {"triangle_p2_k02", 2}}) {
      const double slope = dof_scaling_slope(get(name).report, kSlopePoints);
      c.check(std::abs(slope + m / 2.0) <= kSlopeTol, name + " slope " + fmt(slope) + " target " + fmt(-m / 2.0, 2));
    }
    finish(c, 6);
  }

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
