#include "gradfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradfem/error.hpp"

namespace gradfem {

namespace {

int g_threads = 1;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void set_thread_count(int threads) { g_threads = std::max(1, threads); }

std::ptrdiff_t CsrMatrix::find(std::size_t row, std::size_t col) const {
  const auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
  const auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(col));
  if (it == last || *it != static_cast<std::int32_t>(col)) return -1;
  return it - columns.begin();
}

double CsrMatrix::at(std::size_t row, std::size_t col) const {
  const auto k = find(row, col);
  return k < 0 ? 0.0 : values[k];
}

std::uint64_t pack_entry(std::uint32_t row, std::uint32_t col) {
  return (static_cast<std::uint64_t>(row) << 32) | col;
}

CsrMatrix csr_pattern(std::size_t rows, std::vector<std::uint64_t> packed) {
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  CsrMatrix m;
  m.rows = rows;
  m.row_offsets.assign(rows + 1, 0);
  m.columns.reserve(packed.size());
  for (const auto key : packed) {
    const auto row = static_cast<std::size_t>(key >> 32);
    if (row >= rows || (key & 0xffffffffu) >= rows) {
      throw Error(ErrorKind::DimensionMismatch, "pattern entry outside a " + std::to_string(rows) + "-row matrix");
    }
    ++m.row_offsets[row + 1];
    m.columns.push_back(static_cast<std::int32_t>(key & 0xffffffffu));
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  m.values.assign(m.columns.size(), 0.0);
  return m;
}

CsrMatrix csr_from_dense(std::size_t n, std::span<const double> dense) {
  if (dense.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "dense matrix size");
  CsrMatrix m;
  m.rows = n;
  m.row_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dense[i * n + j] != 0.0) {
        m.columns.push_back(static_cast<std::int32_t>(j));
        m.values.push_back(dense[i * n + j]);
      }
    }
    m.row_offsets[i + 1] = m.columns.size();
  }
  return m;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.rows || y.size() != a.rows) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix has " + std::to_string(a.rows) + " rows, vector has " + std::to_string(x.size()));
  }
  const auto n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static) num_threads(g_threads) if (g_threads > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) s += a.values[k] * x[a.columns[k]];
    y[i] = s;
  }
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows);
  spmv(a, x, y);
  return y;
}

double asymmetry(const CsrMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      worst = std::max(worst, std::abs(a.values[k] - a.at(a.columns[k], i)));
    }
  }
  return worst;
}

std::pair<std::vector<double>, SolveReport> cg_solve(const SparseSystem& system, const SolveOptions& options,
                                                     std::span<const double> initial_guess) {
  const CsrMatrix& a = system.matrix;
  const std::size_t n = a.rows;
  if (system.load.size() != n) throw Error(ErrorKind::DimensionMismatch, "load vector size");
  if (!initial_guess.empty() && initial_guess.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "initial guess size");
  }
  const int max_iter =
      options.max_iter > 0 ? options.max_iter : static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 1000;

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.at(i, i);
    if (!(d > 0.0)) throw Error(ErrorKind::Breakdown, "non-positive diagonal at row " + std::to_string(i));
    inv_diag[i] = 1.0 / d;
  }

  std::vector<double> x(n, 0.0);
  if (!initial_guess.empty()) std::copy(initial_guess.begin(), initial_guess.end(), x.begin());
  const double b_norm = norm2(system.load);
  SolveReport report;
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return {std::move(x), report};
  }
  const double target = options.rel_tol * b_norm;

  std::vector<double> r(n), z(n), p(n), q(n);
  auto true_residual = [&] {
    spmv(a, x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.load[i] - q[i];
    return norm2(r);
  };
  auto restart = [&] {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    return dot(r, z);
  };

  double r_norm = true_residual();
  double rz = restart();
  while (r_norm > target && report.iterations < max_iter) {
    spmv(a, p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw Error(ErrorKind::Breakdown, "p^T A p = " + std::to_string(pq) + " at iteration " +
                                            std::to_string(report.iterations));
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    ++report.iterations;
    r_norm = norm2(r);
    if (r_norm <= target) {
      // The recursive residual drifts on ill-conditioned systems; confirm and restart if needed.
      r_norm = true_residual();
      if (r_norm > target) rz = restart();
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  report.relative_residual = true_residual() / b_norm;
  report.converged = report.relative_residual <= options.rel_tol;
  return {std::move(x), report};
}

}  // namespace gradfem
