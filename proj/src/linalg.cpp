#include "swapent/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "swapent/errors.hpp"

namespace swapent::linalg {
namespace {

lapack_int to_int(std::size_t n) { return static_cast<lapack_int>(n); }

void check(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error("lapack", std::string(routine) + " failed with info " + std::to_string(info));
  }
}

}  // namespace

MatrixSvd svd(std::size_t rows, std::size_t cols, std::span<const double> a) {
  MatrixSvd out;
  out.rows = rows;
  out.cols = cols;
  out.rank = std::min(rows, cols);
  out.u.assign(rows * out.rank, 0.0);
  out.s.assign(out.rank, 0.0);
  out.vt.assign(out.rank * cols, 0.0);
  if (out.rank == 0) return out;

  std::vector<double> work(a.begin(), a.end());
  lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', to_int(rows), to_int(cols), work.data(),
                                   to_int(cols), out.s.data(), out.u.data(), to_int(out.rank),
                                   out.vt.data(), to_int(cols));
  if (info > 0) {
    // Divide and conquer occasionally fails to converge; QR iteration is slower but robust.
    work.assign(a.begin(), a.end());
    std::vector<double> superb(out.rank);
    info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'S', 'S', to_int(rows), to_int(cols), work.data(),
                          to_int(cols), out.s.data(), out.u.data(), to_int(out.rank),
                          out.vt.data(), to_int(cols), superb.data());
  }
  check(info, "dgesvd");
  return out;
}

std::vector<double> singular_values(std::size_t rows, std::size_t cols, std::span<const double> a) {
  std::size_t k = std::min(rows, cols);
  std::vector<double> s(k, 0.0);
  if (k == 0) return s;
  std::vector<double> work(a.begin(), a.end());
  lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'N', to_int(rows), to_int(cols), work.data(),
                                   to_int(cols), s.data(), nullptr, to_int(std::max(rows, cols)), nullptr,
                                   to_int(std::max(rows, cols)));
  check(info, "dgesdd");
  return s;
}

MatrixQr qr(std::size_t rows, std::size_t cols, std::span<const double> a) {
  MatrixQr out;
  out.rows = rows;
  out.cols = cols;
  out.rank = std::min(rows, cols);
  std::vector<double> work(a.begin(), a.end());
  std::vector<double> tau(out.rank);
  check(LAPACKE_dgeqrf(LAPACK_ROW_MAJOR, to_int(rows), to_int(cols), work.data(), to_int(cols),
                       tau.data()),
        "dgeqrf");

  out.r.assign(out.rank * cols, 0.0);
  for (std::size_t i = 0; i < out.rank; ++i)
    for (std::size_t j = i; j < cols; ++j) out.r[i * cols + j] = work[i * cols + j];

  // Q occupies the first `rank` columns of the factored matrix.
  out.q.assign(rows * out.rank, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < out.rank; ++j) out.q[i * out.rank + j] = work[i * cols + j];
  check(LAPACKE_dorgqr(LAPACK_ROW_MAJOR, to_int(rows), to_int(out.rank), to_int(out.rank),
                       out.q.data(), to_int(out.rank), tau.data()),
        "dorgqr");

  for (std::size_t i = 0; i < out.rank; ++i) {
    if (out.r[i * cols + i] < 0.0) {
      for (std::size_t j = i; j < cols; ++j) out.r[i * cols + j] = -out.r[i * cols + j];
      for (std::size_t k = 0; k < rows; ++k) out.q[k * out.rank + i] = -out.q[k * out.rank + i];
    }
  }
  return out;
}

SymmetricEigen symmetric_eigen(std::size_t n, std::span<const double> a) {
  SymmetricEigen out;
  out.values.assign(n, 0.0);
  out.vectors.assign(a.begin(), a.end());
  if (n == 0) return out;
  check(LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', to_int(n), out.vectors.data(), to_int(n),
                       out.values.data()),
        "dsyevd");
  return out;
}

std::vector<double> symmetric_eigenvalues(std::size_t n, std::span<const double> a) {
  std::vector<double> values(n, 0.0);
  if (n == 0) return values;
  std::vector<double> work(a.begin(), a.end());
  check(LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'U', to_int(n), work.data(), to_int(n),
                       values.data()),
        "dsyevd");
  return values;
}

SymmetricEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  SymmetricEigen out;
  out.values.assign(diag.begin(), diag.end());
  out.vectors.assign(n * n, 0.0);
  if (n == 0) return out;
  std::vector<double> e(offdiag.begin(), offdiag.end());
  e.resize(n > 1 ? n - 1 : 1, 0.0);
  check(LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', to_int(n), out.values.data(), e.data(),
                      out.vectors.data(), to_int(n)),
        "dstev");
  return out;
}

LeastSquares least_squares(std::size_t rows, std::size_t cols, std::span<const double> a,
                           std::span<const double> b, double rcond) {
  std::vector<double> work(a.begin(), a.end());
  const std::size_t ldb_rows = std::max(rows, cols);
  std::vector<double> rhs(ldb_rows, 0.0);
  std::copy(b.begin(), b.end(), rhs.begin());
  std::vector<lapack_int> jpvt(cols, 0);
  lapack_int rank = 0;
  check(LAPACKE_dgelsy(LAPACK_ROW_MAJOR, to_int(rows), to_int(cols), 1, work.data(), to_int(cols),
                       rhs.data(), 1, jpvt.data(), rcond, &rank),
        "dgelsy");
  LeastSquares out;
  out.coefficients.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(cols));
  out.rank = static_cast<std::size_t>(rank);
  return out;
}

}  // namespace swapent::linalg
