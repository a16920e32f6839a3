#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace swapent {

using Shape = std::vector<std::size_t>;
using AxisPair = std::pair<std::size_t, std::size_t>;

std::size_t shape_volume(const Shape& shape);

/// Dense real tensor stored in row-major order. Rank >= 1 and all extents >= 1.
class DenseTensor {
 public:
  /// A rank-1 tensor holding a single zero.
  DenseTensor();
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  static DenseTensor scalar(double value);
  static DenseTensor identity(std::size_t n);

  std::size_t rank() const noexcept { return shape_.size(); }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::vector<double>& storage() noexcept { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;

  /// Same data, new shape with equal volume.
  DenseTensor reshaped(Shape shape) const&;
  DenseTensor reshaped(Shape shape) &&;

  /// Result axis i is input axis perm[i].
  DenseTensor permuted(std::span<const std::size_t> perm) const;
  DenseTensor permuted(std::initializer_list<std::size_t> perm) const;

  double norm() const;
  double dot(const DenseTensor& other) const;
  DenseTensor& operator*=(double alpha);
  DenseTensor& operator+=(const DenseTensor& other);

 private:
  std::size_t flat_index(std::initializer_list<std::size_t> index) const;

  Shape shape_;
  std::vector<double> data_;
};

DenseTensor operator*(double alpha, DenseTensor t);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);

/// Sums over the listed axis pairs. Result axes are the free axes of `a`
/// followed by the free axes of `b`, each in their original order. A full
/// contraction yields a rank-1 tensor of extent 1.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b, std::span<const AxisPair> pairs);
DenseTensor contract(const DenseTensor& a, const DenseTensor& b, std::initializer_list<AxisPair> pairs);

/// Kept singular values are chosen by first dropping the smallest values whose
/// summed squares stay within `cutoff` times the total, then capping at `chi_max`.
struct TruncationPolicy {
  std::size_t chi_max = 256;
  double cutoff = 1e-10;

  /// No cap and no relative cutoff; only exact zeros are dropped.
  static TruncationPolicy exact();
  void validate() const;
};

struct SvdFactors {
  DenseTensor left_isometry;    // (left extents..., k)
  std::vector<double> singular_values;
  DenseTensor right_isometry;   // (k, right extents...)
  double discarded_weight = 0.0;
};

/// Splits `t` into left and right groups of axes. Right axes keep their
/// original relative order.
SvdFactors svd_split(const DenseTensor& t, std::span<const std::size_t> left_axes,
                     const TruncationPolicy& policy);
SvdFactors svd_split(const DenseTensor& t, std::initializer_list<std::size_t> left_axes,
                     const TruncationPolicy& policy);

/// Number of singular values kept under `policy` and the relative discarded weight.
std::pair<std::size_t, double> truncation_rank(std::span<const double> singular_values,
                                               const TruncationPolicy& policy);

/// y = A x for a symmetric operator of dimension d.
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct EigOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;  // matrix-vector products
  std::size_t krylov_dim = 32;
  bool throw_on_failure = true;
  std::vector<double> initial;  // optional starting vector
};

struct EigResult {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  std::size_t matvecs = 0;
  bool converged = false;
  /// Second Ritz value of the final Krylov space minus `value`; infinite when
  /// the space was one-dimensional.
  double gap_estimate = 0.0;
};

/// Algebraically smallest eigenpair of a symmetric map by restarted Lanczos
/// with full reorthogonalization.
EigResult eigs_smallest(const LinearMap& apply, std::size_t d, const EigOptions& options = {});

}  // namespace swapent
