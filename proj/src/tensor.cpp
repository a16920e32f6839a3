#include "swapent/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "swapent/errors.hpp"
#include "swapent/kernels.hpp"
#include "swapent/linalg.hpp"

namespace swapent {

std::size_t shape_volume(const Shape& shape) {
  std::size_t v = 1;
  for (std::size_t e : shape) v *= e;
  return v;
}

namespace {

void validate_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor rank must be at least 1");
  for (std::size_t e : shape)
    if (e == 0) throw ShapeError("tensor extents must be positive");
}

bool is_identity(std::span<const std::size_t> perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i) return false;
  return true;
}

}  // namespace

DenseTensor::DenseTensor() : shape_{1}, data_(1, 0.0) {}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(shape_volume(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != shape_volume(shape_)) throw ShapeError("data length differs from shape volume");
}

DenseTensor DenseTensor::scalar(double value) { return DenseTensor({1}, {value}); }

DenseTensor DenseTensor::identity(std::size_t n) {
  DenseTensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

std::size_t DenseTensor::flat_index(std::initializer_list<std::size_t> index) const {
  if (index.size() != shape_.size()) throw ShapeError("index rank mismatch");
  std::size_t flat = 0, axis = 0;
  for (std::size_t i : index) {
    if (i >= shape_[axis]) throw ShapeError("index out of range");
    flat = flat * shape_[axis] + i;
    ++axis;
  }
  return flat;
}

double& DenseTensor::at(std::initializer_list<std::size_t> index) { return data_[flat_index(index)]; }
double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[flat_index(index)];
}

DenseTensor DenseTensor::reshaped(Shape shape) const& { return DenseTensor(std::move(shape), data_); }
DenseTensor DenseTensor::reshaped(Shape shape) && {
  return DenseTensor(std::move(shape), std::move(data_));
}

DenseTensor DenseTensor::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != rank()) throw ShapeError("permutation rank mismatch");
  Shape out_shape(rank());
  for (std::size_t i = 0; i < rank(); ++i) out_shape[i] = shape_.at(perm[i]);
  if (is_identity(perm)) return *this;
  DenseTensor out(out_shape);
  kernels::permute_parallel(data_, shape_, perm, out.data_);
  return out;
}

DenseTensor DenseTensor::permuted(std::initializer_list<std::size_t> perm) const {
  return permuted(std::span<const std::size_t>(perm.begin(), perm.size()));
}

double DenseTensor::norm() const { return std::sqrt(dot(*this)); }

double DenseTensor::dot(const DenseTensor& other) const {
  if (other.size() != size()) throw ShapeError("dot of tensors with different volume");
  return std::inner_product(data_.begin(), data_.end(), other.data_.begin(), 0.0);
}

DenseTensor& DenseTensor::operator*=(double alpha) {
  for (double& x : data_) x *= alpha;
  return *this;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.shape_ != shape_) throw ShapeError("sum of tensors with different shapes");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor operator*(double alpha, DenseTensor t) {
  t *= alpha;
  return t;
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor out = a;
  out += -1.0 * b;
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b, std::span<const AxisPair> pairs) {
  std::vector<bool> paired_a(a.rank(), false), paired_b(b.rank(), false);
  for (auto [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw ShapeError("contraction axis out of range");
    if (paired_a[ia] || paired_b[ib]) throw ShapeError("contraction axis listed twice");
    if (a.extent(ia) != b.extent(ib))
      throw ShapeError("paired extents differ: " + std::to_string(a.extent(ia)) + " vs " +
                       std::to_string(b.extent(ib)));
    paired_a[ia] = paired_b[ib] = true;
  }

  std::vector<std::size_t> perm_a, perm_b;
  Shape out_shape;
  std::size_t m = 1, n = 1, k = 1;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!paired_a[i]) {
      perm_a.push_back(i);
      out_shape.push_back(a.extent(i));
      m *= a.extent(i);
    }
  for (auto [ia, ib] : pairs) {
    perm_a.push_back(ia);
    perm_b.push_back(ib);
    k *= a.extent(ia);
  }
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!paired_b[i]) {
      perm_b.push_back(i);
      out_shape.push_back(b.extent(i));
      n *= b.extent(i);
    }
  if (out_shape.empty()) out_shape.push_back(1);

  // Operands already in GEMM layout are used in place.
  const DenseTensor* pa = &a;
  const DenseTensor* pb = &b;
  DenseTensor ta, tb;
  if (!is_identity(perm_a)) {
    ta = a.permuted(perm_a);
    pa = &ta;
  }
  if (!is_identity(perm_b)) {
    tb = b.permuted(perm_b);
    pb = &tb;
  }
  DenseTensor out(out_shape);
  kernels::gemm(m, n, k, pa->data().data(), pb->data().data(), out.data().data());
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b, std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

TruncationPolicy TruncationPolicy::exact() {
  return TruncationPolicy{std::numeric_limits<std::size_t>::max(), 0.0};
}

void TruncationPolicy::validate() const {
  if (chi_max < 1) throw DomainError("chi_max must be at least 1");
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw DomainError("cutoff must lie in [0, 1)");
}

std::pair<std::size_t, double> truncation_rank(std::span<const double> s,
                                               const TruncationPolicy& policy) {
  policy.validate();
  double total = 0.0;
  for (double x : s) total += x * x;
  if (s.empty()) return {0, 0.0};
  if (total == 0.0) return {1, 0.0};

  std::size_t keep = s.size();
  double dropped = 0.0;
  const double budget = policy.cutoff * total;
  while (keep > 1) {
    const double w = s[keep - 1] * s[keep - 1];
    if (dropped + w > budget) break;
    dropped += w;
    --keep;
  }
  while (keep > policy.chi_max) {
    --keep;
    dropped += s[keep] * s[keep];
  }
  return {keep, dropped / total};
}

SvdFactors svd_split(const DenseTensor& t, std::span<const std::size_t> left_axes,
                     const TruncationPolicy& policy) {
  if (left_axes.empty() || left_axes.size() >= t.rank())
    throw ShapeError("left axes must be a non-empty proper subset");
  std::vector<bool> is_left(t.rank(), false);
  for (std::size_t ax : left_axes) {
    if (ax >= t.rank() || is_left[ax]) throw ShapeError("invalid left axis list");
    is_left[ax] = true;
  }
  std::vector<std::size_t> perm(left_axes.begin(), left_axes.end());
  Shape left_shape, right_shape;
  std::size_t rows = 1, cols = 1;
  for (std::size_t ax : left_axes) {
    left_shape.push_back(t.extent(ax));
    rows *= t.extent(ax);
  }
  for (std::size_t ax = 0; ax < t.rank(); ++ax)
    if (!is_left[ax]) {
      perm.push_back(ax);
      right_shape.push_back(t.extent(ax));
      cols *= t.extent(ax);
    }

  const DenseTensor mat = t.permuted(perm);
  linalg::MatrixSvd f = linalg::svd(rows, cols, mat.data());
  auto [keep, discarded] = truncation_rank(f.s, policy);

  SvdFactors out;
  out.singular_values.assign(f.s.begin(), f.s.begin() + static_cast<std::ptrdiff_t>(keep));
  out.discarded_weight = discarded;

  std::vector<double> u(rows * keep);
  for (std::size_t i = 0; i < rows; ++i)
    std::copy_n(f.u.begin() + static_cast<std::ptrdiff_t>(i * f.rank), keep,
                u.begin() + static_cast<std::ptrdiff_t>(i * keep));
  left_shape.push_back(keep);
  out.left_isometry = DenseTensor(std::move(left_shape), std::move(u));

  std::vector<double> vt(f.vt.begin(), f.vt.begin() + static_cast<std::ptrdiff_t>(keep * cols));
  right_shape.insert(right_shape.begin(), keep);
  out.right_isometry = DenseTensor(std::move(right_shape), std::move(vt));
  return out;
}

SvdFactors svd_split(const DenseTensor& t, std::initializer_list<std::size_t> left_axes,
                     const TruncationPolicy& policy) {
  return svd_split(t, std::span<const std::size_t>(left_axes.begin(), left_axes.size()), policy);
}

namespace {

double vec_dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

EigResult eigs_smallest(const LinearMap& apply, std::size_t d, const EigOptions& options) {
  if (d == 0) throw DomainError("eigenproblem dimension must be positive");
  EigResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.gap_estimate = std::numeric_limits<double>::infinity();

  std::vector<double> v(d);
  if (options.initial.size() == d && vec_dot(options.initial, options.initial) > 0.0) {
    v = options.initial;
  } else {
    std::mt19937_64 rng(0x5eed5eedULL + d);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : v) x = dist(rng);
  }
  {
    const double nv = std::sqrt(vec_dot(v, v));
    for (double& x : v) x /= nv;
  }

  const std::size_t m_max = std::max<std::size_t>(2, std::min(options.krylov_dim, d));
  std::vector<std::vector<double>> basis;
  std::vector<double> w(d), alpha, beta;
  std::size_t matvecs = 0;

  while (matvecs < options.max_iter) {
    basis.clear();
    alpha.clear();
    beta.clear();
    basis.push_back(v);

    for (std::size_t j = 0; j < m_max && matvecs < options.max_iter; ++j) {
      apply(basis[j], w);
      ++matvecs;
      const double a = vec_dot(basis[j], w);
      alpha.push_back(a);
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) axpy(-vec_dot(q, w), q, w);
      const double b = std::sqrt(vec_dot(w, w));
      if (j + 1 == m_max || j + 1 == d) break;
      if (b <= 1e-13 * std::max(1.0, std::abs(a))) break;  // invariant subspace
      if (j >= 2) {
        // |beta_j * y_j| is the Lanczos residual estimate of the lowest Ritz pair
        linalg::SymmetricEigen t = linalg::tridiagonal_eigen(alpha, beta);
        const double estimate = b * std::abs(t.vectors[j * (j + 1) + 0]);
        if (estimate <= 0.5 * options.tol) break;
      }
      beta.push_back(b);
      std::vector<double> next(d);
      for (std::size_t i = 0; i < d; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }

    const std::size_t m = alpha.size();
    linalg::SymmetricEigen tri = linalg::tridiagonal_eigen(alpha, std::span(beta.data(), m - 1));
    std::vector<double> x(d, 0.0);
    for (std::size_t j = 0; j < m; ++j) axpy(tri.vectors[j * m + 0], basis[j], x);
    const double nx = std::sqrt(vec_dot(x, x));
    for (double& xi : x) xi /= nx;

    // true residual
    apply(x, w);
    ++matvecs;
    const double theta = vec_dot(x, w);
    axpy(-theta, x, w);
    const double res = std::sqrt(vec_dot(w, w));

    if (res < best.residual) {
      best.value = theta;
      best.vector = x;
      best.residual = res;
      best.gap_estimate = m > 1 ? tri.values[1] - tri.values[0]
                                : std::numeric_limits<double>::infinity();
    }
    if (res <= options.tol) break;
    v = std::move(x);
  }

  best.matvecs = matvecs;
  best.converged = best.residual <= options.tol;
  // sign convention: the largest-magnitude component is positive
  if (!best.vector.empty()) {
    auto it = std::max_element(best.vector.begin(), best.vector.end(),
                               [](double p, double q) { return std::abs(p) < std::abs(q); });
    if (*it < 0.0)
      for (double& xi : best.vector) xi = -xi;
  }
  if (!best.converged && options.throw_on_failure)
    throw ConvergenceError("eigensolver did not converge within " +
                               std::to_string(options.max_iter) + " matrix-vector products",
                           best.residual);
  return best;
}

}  // namespace swapent
