#pragma once

// Thin row-major wrappers over LAPACK. All matrices are dense, row-major and
// passed by value or span.

#include <cstddef>
#include <span>
#include <vector>

namespace swapent::linalg {

struct MatrixSvd {
  std::size_t rows = 0, cols = 0, rank = 0;  // rank = min(rows, cols)
  std::vector<double> u;                      // rows x rank
  std::vector<double> s;                      // non-increasing
  std::vector<double> vt;                     // rank x cols
};

MatrixSvd svd(std::size_t rows, std::size_t cols, std::span<const double> a);

/// Singular values only.
std::vector<double> singular_values(std::size_t rows, std::size_t cols, std::span<const double> a);

struct MatrixQr {
  std::size_t rows = 0, cols = 0, rank = 0;
  std::vector<double> q;  // rows x rank, orthonormal columns
  std::vector<double> r;  // rank x cols, upper triangular with non-negative diagonal
};

MatrixQr qr(std::size_t rows, std::size_t cols, std::span<const double> a);

struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // n x n, column j is the eigenvector of values[j]
};

SymmetricEigen symmetric_eigen(std::size_t n, std::span<const double> a);
std::vector<double> symmetric_eigenvalues(std::size_t n, std::span<const double> a);

/// Eigen-decomposition of the symmetric tridiagonal matrix (diag, offdiag).
SymmetricEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag);

struct LeastSquares {
  std::vector<double> coefficients;
  std::size_t rank = 0;
};

/// Minimizes |A x - b| for A (rows x cols) by rank-revealing QR; `rcond`
/// decides the numerical rank.
LeastSquares least_squares(std::size_t rows, std::size_t cols, std::span<const double> a,
                           std::span<const double> b, double rcond = 1e-12);

}  // namespace swapent::linalg
