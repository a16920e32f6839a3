#include "swapent/mps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "swapent/errors.hpp"
#include "swapent/linalg.hpp"

namespace swapent {

std::size_t MatrixProductState::bond_dim(std::size_t b) const {
  if (b > sites.size()) throw DomainError("bond out of range");
  if (sites.empty()) return 1;
  return b < sites.size() ? sites[b].extent(0) : sites.back().extent(2);
}

std::size_t MatrixProductState::max_bond_dim() const {
  std::size_t chi = 1;
  for (const auto& t : sites) chi = std::max(chi, t.extent(2));
  return chi;
}

void MatrixProductState::validate() const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& t = sites[i];
    if (t.rank() != 3 || t.extent(1) != kPhysDim) throw ShapeError("MPS site must be (dl, 2, dr)");
    if (i == 0 && t.extent(0) != 1) throw ShapeError("first MPS bond must have extent 1");
    if (i + 1 == sites.size() && t.extent(2) != 1) throw ShapeError("last MPS bond must have extent 1");
    if (i + 1 < sites.size() && t.extent(2) != sites[i + 1].extent(0))
      throw ShapeError("MPS bond mismatch at bond " + std::to_string(i + 1));
  }
  if (center && *center >= sites.size()) throw ShapeError("MPS center out of range");
}

void MatrixProductOperator::validate() const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& t = sites[i];
    if (t.rank() != 4 || t.extent(1) != kPhysDim || t.extent(2) != kPhysDim)
      throw ShapeError("MPO site must be (wl, 2, 2, wr)");
    if (i == 0 && t.extent(0) != 1) throw ShapeError("first MPO bond must have extent 1");
    if (i + 1 == sites.size() && t.extent(3) != 1) throw ShapeError("last MPO bond must have extent 1");
    if (i + 1 < sites.size() && t.extent(3) != sites[i + 1].extent(0))
      throw ShapeError("MPO bond mismatch at bond " + std::to_string(i + 1));
  }
}

SchmidtSpectrum SchmidtSpectrum::from_weights(std::vector<double> weights) {
  double total = 0.0;
  for (double& w : weights) {
    w = std::max(w, 0.0);
    total += w;
  }
  if (total <= 0.0) throw DomainError("Schmidt weights sum to zero");
  for (double& w : weights) w /= total;
  std::sort(weights.begin(), weights.end(), std::greater<>());
  return SchmidtSpectrum{std::move(weights)};
}

SchmidtSpectrum SchmidtSpectrum::from_singular_values(std::span<const double> s) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = s[i] * s[i];
  return from_weights(std::move(w));
}

double entropy(const SchmidtSpectrum& p, double n) {
  if (n < 0.0) throw DomainError("Renyi index must be non-negative");
  if (n == 1.0) {
    double s = 0.0;
    for (double x : p.probabilities)
      if (x > 0.0) s -= x * std::log(x);
    return std::max(s, 0.0);
  }
  double sum = 0.0;
  for (double x : p.probabilities)
    if (x > 0.0) sum += std::pow(x, n);
  return std::max(std::log(sum) / (1.0 - n), 0.0);
}

MatrixProductState product_state(std::span<const std::array<double, 2>> locals) {
  MatrixProductState s;
  for (const auto& v : locals) {
    const double nv = std::hypot(v[0], v[1]);
    if (nv == 0.0) throw DomainError("local state vector is zero");
    s.sites.emplace_back(Shape{1, 2, 1}, std::vector<double>{v[0] / nv, v[1] / nv});
    s.log_norm += std::log(nv);
  }
  if (!s.sites.empty()) s.center = 0;
  return s;
}

MatrixProductState random_state(std::size_t length, std::size_t bond_dim, std::uint64_t seed) {
  if (length == 0) throw DomainError("random state needs at least one site");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto bond = [&](std::size_t b) {
    std::size_t chi = 1;
    const std::size_t edge = std::min(b, length - b);
    for (std::size_t k = 0; k < edge && chi < bond_dim; ++k) chi *= 2;
    return std::min(chi, std::max<std::size_t>(bond_dim, 1));
  };
  MatrixProductState s;
  for (std::size_t i = 0; i < length; ++i) {
    DenseTensor t({bond(i), 2, bond(i + 1)});
    for (double& x : t.data()) x = gauss(rng);
    s.sites.push_back(std::move(t));
  }
  s = canonicalize(std::move(s), length - 1);
  s.log_norm = 0.0;
  return s;
}

MatrixProductState concatenate(const MatrixProductState& a, const MatrixProductState& b) {
  MatrixProductState out;
  out.sites = a.sites;
  out.sites.insert(out.sites.end(), b.sites.begin(), b.sites.end());
  out.log_norm = a.log_norm + b.log_norm;
  if (a.sites.empty()) {
    out.center = b.center;
  } else if (b.sites.empty()) {
    out.center = a.center;
  } else if (a.center == a.length() - 1 && b.center == 0) {
    // a's last tensor has unit norm, so it is a left isometry over the extent-1 joining bond
    out.center = a.length();
  }
  return out;
}

MatrixProductState mirrored(const MatrixProductState& s) {
  MatrixProductState out;
  out.log_norm = s.log_norm;
  for (std::size_t i = s.length(); i-- > 0;) out.sites.push_back(s.sites[i].permuted({2, 1, 0}));
  if (s.center) out.center = s.length() - 1 - *s.center;
  return out;
}

namespace {

// Left-orthonormalizes site i and pushes the remainder into site i+1.
void shift_center_right(MatrixProductState& s, std::size_t i) {
  DenseTensor& a = s.sites[i];
  const std::size_t dl = a.extent(0), dr = a.extent(2);
  linalg::MatrixQr f = linalg::qr(dl * 2, dr, a.data());
  a = DenseTensor({dl, 2, f.rank}, std::move(f.q));
  DenseTensor r({f.rank, dr}, std::move(f.r));
  s.sites[i + 1] = contract(r, s.sites[i + 1], {{1, 0}});
}

// Right-orthonormalizes site i and pushes the remainder into site i-1.
void shift_center_left(MatrixProductState& s, std::size_t i) {
  DenseTensor& a = s.sites[i];
  const std::size_t dl = a.extent(0), dr = a.extent(2);
  const DenseTensor at = a.reshaped({dl, 2 * dr}).permuted({1, 0});
  linalg::MatrixQr f = linalg::qr(2 * dr, dl, at.data());
  // a = R^T Q^T
  a = DenseTensor({2 * dr, f.rank}, std::move(f.q)).permuted({1, 0}).reshaped({f.rank, 2, dr});
  DenseTensor rt = DenseTensor({f.rank, dl}, std::move(f.r)).permuted({1, 0});
  s.sites[i - 1] = contract(s.sites[i - 1], rt, {{2, 0}});
}

}  // namespace

MatrixProductState canonicalize(MatrixProductState s, std::size_t center) {
  if (s.sites.empty()) return s;
  if (center >= s.length()) throw DomainError("canonical center out of range");
  const std::size_t n = s.length();
  const std::size_t left_start = s.center ? std::min(*s.center, center) : 0;
  const std::size_t right_start = s.center ? std::max(*s.center, center) : n - 1;
  for (std::size_t i = left_start; i < center; ++i) shift_center_right(s, i);
  for (std::size_t i = right_start; i > center; --i) shift_center_left(s, i);
  s.center = center;
  const double nc = s.sites[center].norm();
  if (nc == 0.0) throw DomainError("cannot canonicalize the zero state");
  s.sites[center] *= 1.0 / nc;
  s.log_norm += std::log(nc);
  return s;
}

namespace {

double overlap_network(const MatrixProductState& a, const MatrixProductState& b) {
  if (a.length() != b.length()) throw ShapeError("inner product of states with different lengths");
  if (a.sites.empty()) return 1.0;
  DenseTensor env({1, 1}, {1.0});
  for (std::size_t i = 0; i < a.length(); ++i) {
    DenseTensor t = contract(env, b.sites[i], {{1, 0}});
    env = contract(a.sites[i], t, {{0, 0}, {1, 1}});
  }
  return env[0];
}

}  // namespace

double inner_product(const MatrixProductState& a, const MatrixProductState& b) {
  return overlap_network(a, b) * std::exp(a.log_norm + b.log_norm);
}

double network_norm_squared(const MatrixProductState& s) {
  if (s.center) return s.sites[*s.center].dot(s.sites[*s.center]);
  return overlap_network(s, s);
}

SchmidtSpectrum schmidt_at_bond(const MatrixProductState& s, std::size_t bond) {
  if (bond > s.length()) throw DomainError("bond out of range");
  if (bond == 0 || bond == s.length()) return SchmidtSpectrum{{1.0}};

  auto spectrum_at_center = [&](const MatrixProductState& c) {
    const DenseTensor& t = c.sites[*c.center];
    const std::size_t dl = t.extent(0), dr = t.extent(2);
    if (*c.center + 1 == bond) return SchmidtSpectrum::from_singular_values(
        linalg::singular_values(dl * 2, dr, t.data()));
    return SchmidtSpectrum::from_singular_values(linalg::singular_values(dl, 2 * dr, t.data()));
  };
  if (s.center && (*s.center + 1 == bond || *s.center == bond)) return spectrum_at_center(s);
  return spectrum_at_center(canonicalize(s, bond - 1));
}

std::vector<SchmidtSpectrum> all_schmidt_spectra(const MatrixProductState& s) {
  std::vector<SchmidtSpectrum> out;
  if (s.length() < 2) return out;
  MatrixProductState c = canonicalize(s, 0);
  for (std::size_t i = 0; i + 1 < c.length(); ++i) {
    SvdFactors f = svd_split(c.sites[i], {0, 1}, TruncationPolicy::exact());
    out.push_back(SchmidtSpectrum::from_singular_values(f.singular_values));
    DenseTensor sv = f.right_isometry;
    const std::size_t k = f.singular_values.size();
    const std::size_t cols = sv.size() / k;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t j = 0; j < cols; ++j) sv[r * cols + j] *= f.singular_values[r];
    c.sites[i] = std::move(f.left_isometry);
    c.sites[i + 1] = contract(sv, c.sites[i + 1], {{1, 0}});
  }
  return out;
}

namespace {

MatrixProductState centered_near(const MatrixProductState& s, std::size_t pos) {
  if (pos + 1 >= s.length()) throw DomainError("two-site position out of range");
  if (s.center && (*s.center == pos || *s.center == pos + 1)) return s;
  return canonicalize(s, pos);
}

// Rows of `t` (first axis) scaled by `s`.
DenseTensor scale_rows(DenseTensor t, std::span<const double> s) {
  const std::size_t cols = t.size() / s.size();
  for (std::size_t r = 0; r < s.size(); ++r)
    for (std::size_t j = 0; j < cols; ++j) t[r * cols + j] *= s[r];
  return t;
}

// Columns of `t` (last axis) scaled by `s`.
DenseTensor scale_last_axis(DenseTensor t, std::span<const double> s) {
  const std::size_t k = s.size();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] *= s[i % k];
  return t;
}

}  // namespace

TwoSiteResult apply_two_site(const MatrixProductState& s, std::size_t pos,
                             std::span<const double> op, const TruncationPolicy& policy) {
  if (op.size() != 16) throw ShapeError("two-site operator must be 4x4");
  MatrixProductState c = centered_near(s, pos);
  const DenseTensor theta = contract(c.sites[pos], c.sites[pos + 1], {{2, 0}});
  const DenseTensor gate({2, 2, 2, 2}, std::vector<double>(op.begin(), op.end()));
  DenseTensor applied = contract(theta, gate, {{1, 2}, {2, 3}}).permuted({0, 2, 3, 1});

  const double before = theta.norm();
  const double after = applied.norm();
  if (after == 0.0) throw DomainError("two-site operator annihilates the state");
  applied *= 1.0 / after;

  SvdFactors f = svd_split(applied, {0, 1}, policy);
  double kept = 0.0;
  for (double x : f.singular_values) kept += x * x;
  std::vector<double> sv = f.singular_values;
  for (double& x : sv) x /= std::sqrt(kept);

  c.sites[pos] = std::move(f.left_isometry);
  c.sites[pos + 1] = scale_rows(std::move(f.right_isometry), sv);
  c.center = pos + 1;
  return TwoSiteResult{std::move(c), after / before, f.discarded_weight};
}

namespace {

DenseTensor project_pair(const DenseTensor& theta, std::span<const double> target) {
  const DenseTensor bra({2, 2}, std::vector<double>(target.begin(), target.end()));
  return contract(theta, bra, {{1, 0}, {2, 1}});
}

}  // namespace

std::array<double, 4> pair_probabilities(const MatrixProductState& s, std::size_t pos,
                                         std::span<const std::array<double, 4>> targets) {
  if (targets.size() != 4) throw ShapeError("expected four projection targets");
  MatrixProductState c = centered_near(s, pos);
  const DenseTensor theta = contract(c.sites[pos], c.sites[pos + 1], {{2, 0}});
  const double total = theta.dot(theta);
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) {
    const DenseTensor m = project_pair(theta, targets[k]);
    p[k] = m.dot(m) / total;
  }
  return p;
}

ExcisionResult project_and_excise_pair(const MatrixProductState& s, std::size_t pos,
                                       std::span<const double> target) {
  if (target.size() != 4) throw ShapeError("pair target must be a 4-vector");
  MatrixProductState c = centered_near(s, pos);
  const DenseTensor theta = contract(c.sites[pos], c.sites[pos + 1], {{2, 0}});
  DenseTensor bond_op = project_pair(theta, target);  // (dl, dr)
  const double m2 = bond_op.dot(bond_op);
  const double prob = m2 / theta.dot(theta);
  if (!(prob >= kImpossibleFloor)) throw ImpossibleOutcome(pos, prob);
  bond_op *= 1.0 / std::sqrt(m2);

  const std::size_t n = c.length();
  const bool has_left = pos > 0;
  const bool has_right = pos + 2 < n;
  MatrixProductState out;
  out.log_norm = c.log_norm;

  if (has_left && has_right) {
    SvdFactors f = svd_split(bond_op, {0}, TruncationPolicy::exact());
    DenseTensor us = scale_last_axis(std::move(f.left_isometry), f.singular_values);
    c.sites[pos - 1] = contract(c.sites[pos - 1], us, {{2, 0}});
    c.sites[pos + 2] = contract(f.right_isometry, c.sites[pos + 2], {{1, 0}});
    out.center = pos - 1;
  } else if (has_left) {
    c.sites[pos - 1] = contract(c.sites[pos - 1], bond_op, {{2, 0}});
    out.center = pos - 1;
  } else if (has_right) {
    c.sites[pos + 2] = contract(bond_op, c.sites[pos + 2], {{1, 0}});
    out.center = 0;
  }
  out.sites.reserve(n - 2);
  for (std::size_t i = 0; i < n; ++i)
    if (i != pos && i != pos + 1) out.sites.push_back(std::move(c.sites[i]));
  return ExcisionResult{std::move(out), prob};
}

double expectation(const MatrixProductOperator& h, const MatrixProductState& s) {
  if (h.length() != s.length()) throw ShapeError("operator and state lengths differ");
  if (s.sites.empty()) return 0.0;
  DenseTensor env({1, 1, 1}, {1.0});  // (bra, w, ket)
  for (std::size_t i = 0; i < s.length(); ++i) {
    DenseTensor t1 = contract(env, s.sites[i], {{2, 0}});         // (bra, w, s, ket')
    DenseTensor t2 = contract(t1, h.sites[i], {{1, 0}, {2, 2}});  // (bra, ket', t, w')
    env = contract(s.sites[i], t2, {{0, 0}, {1, 2}});             // (bra', ket', w')
    env = env.permuted({0, 2, 1});
  }
  return env[0] / network_norm_squared(s);
}

DenseTensor mpo_to_dense(const MatrixProductOperator& h) {
  if (h.sites.empty()) throw ShapeError("empty operator");
  const auto& w0 = h.sites[0];
  DenseTensor acc = w0.reshaped({2, 2, w0.extent(3)});
  std::size_t dim = 2;
  for (std::size_t i = 1; i < h.length(); ++i) {
    DenseTensor t = contract(acc, h.sites[i], {{2, 0}});  // (O, I, o, i, w)
    const std::size_t w = h.sites[i].extent(3);
    acc = t.permuted({0, 2, 1, 3, 4}).reshaped({dim * 2, dim * 2, w});
    dim *= 2;
  }
  return std::move(acc).reshaped({dim, dim});
}

std::vector<double> mps_to_dense(const MatrixProductState& s) {
  if (s.sites.empty()) return {std::exp(s.log_norm)};
  DenseTensor acc = s.sites[0].reshaped({2, s.sites[0].extent(2)});
  for (std::size_t i = 1; i < s.length(); ++i) {
    DenseTensor t = contract(acc, s.sites[i], {{1, 0}});
    acc = std::move(t).reshaped({t.extent(0) * 2, t.extent(2)});
  }
  std::vector<double> out(acc.data().begin(), acc.data().end());
  const double scale = std::exp(s.log_norm);
  for (double& x : out) x *= scale;
  return out;
}

MatrixProductState mps_from_dense(std::span<const double> amplitudes, std::size_t nsites,
                                  const TruncationPolicy& policy) {
  if (nsites == 0 || amplitudes.size() != (std::size_t{1} << nsites))
    throw ShapeError("statevector length must be 2^nsites");
  DenseTensor rest({1, amplitudes.size()}, std::vector<double>(amplitudes.begin(), amplitudes.end()));
  const double nrm = rest.norm();
  if (nrm == 0.0) throw DomainError("cannot decompose the zero vector");
  rest *= 1.0 / nrm;

  MatrixProductState s;
  s.log_norm = std::log(nrm);
  for (std::size_t i = 0; i + 1 < nsites; ++i) {
    const std::size_t dl = rest.extent(0);
    const std::size_t cols = rest.size() / (dl * 2);
    SvdFactors f = svd_split(rest.reshaped({dl, 2, cols}), {0, 1}, policy);
    s.sites.push_back(std::move(f.left_isometry));
    rest = scale_rows(std::move(f.right_isometry), f.singular_values);
  }
  s.sites.push_back(std::move(rest).reshaped({rest.extent(0), 2, 1}));
  s.center = nsites - 1;
  const double nc = s.sites.back().norm();
  s.sites.back() *= 1.0 / nc;
  s.log_norm += std::log(nc);
  return s;
}

}  // namespace swapent
