#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gradfem {

/// Compressed-row matrix. Column indices are sorted within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::int32_t> columns;
  std::vector<double> values;

  std::size_t nonzeros() const { return values.size(); }
  /// Position of (row, col) in values, or -1 if not stored.
  std::ptrdiff_t find(std::size_t row, std::size_t col) const;
  double at(std::size_t row, std::size_t col) const;
};

/// Sparsity pattern from (row, col) pairs; duplicates are merged and values zeroed.
CsrMatrix csr_pattern(std::size_t rows, std::vector<std::uint64_t> packed_entries);
std::uint64_t pack_entry(std::uint32_t row, std::uint32_t col);

CsrMatrix csr_from_dense(std::size_t n, std::span<const double> dense);

struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> load;

  std::size_t dimension() const { return matrix.rows; }
};

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

/// Largest |a_ij - a_ji| over stored entries (missing transposes count as 0).
double asymmetry(const CsrMatrix& a);

struct SolveOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0 selects 20 * sqrt(n) + 1000
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b||, recomputed from x
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients. Throws Breakdown when a search
/// direction has p^T A p <= 0 and DimensionMismatch on inconsistent sizes.
std::pair<std::vector<double>, SolveReport> cg_solve(const SparseSystem& system, const SolveOptions& options = {},
                                                     std::span<const double> initial_guess = {});

/// Number of worker threads used by spmv. 1 disables threading.
void set_thread_count(int threads);

}  // namespace gradfem
