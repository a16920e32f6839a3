#include "swapent/dmrg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "swapent/errors.hpp"
#include "swapent/kernels.hpp"

namespace swapent {
namespace {

// Environments: left blocks are (bra, w, ket), right blocks are (ket, w, bra).
DenseTensor grow_left(const DenseTensor& env, const DenseTensor& a, const DenseTensor& w) {
  DenseTensor t1 = contract(env, a, {{2, 0}});           // (bra, w, s, ket')
  DenseTensor t2 = contract(t1, w, {{1, 0}, {2, 2}});    // (bra, ket', t, w')
  DenseTensor t3 = contract(a, t2, {{0, 0}, {1, 2}});    // (bra', ket', w')
  return t3.permuted({0, 2, 1});
}

DenseTensor grow_right(const DenseTensor& env, const DenseTensor& b, const DenseTensor& w) {
  DenseTensor t1 = contract(b, env, {{2, 0}});           // (ket, s, w', bra')
  DenseTensor t2 = contract(t1, w, {{1, 2}, {2, 3}});    // (ket, bra', w, t)
  return contract(t2, b, {{1, 2}, {3, 1}});              // (ket, w, bra)
}

// H_eff on theta (a, s1, s2, b), written as batched GEMMs so no full-size
// intermediate needs a transpose. Operator tensors are reordered once per bond.
class TwoSiteHeff {
 public:
  TwoSiteHeff(const DenseTensor& left, const DenseTensor& w1, const DenseTensor& w2,
              const DenseTensor& right)
      : left_(left),
        w1_(w1.permuted({1, 3, 0, 2})),      // (t1, w2, w, s1)
        w2_(w2.permuted({1, 3, 0, 2})),      // (t2, w3, w2, s2)
        right_(right.permuted({1, 0, 2})) {  // (w3, b, b')
    dl_ = left.extent(0);
    wl_ = left.extent(1);
    wm_ = w1.extent(3);
    wr_ = w2.extent(3);
    dr_ = right.extent(0);
    x_.resize(dl_ * wl_ * 4 * dr_);
    y_.resize(dl_ * 2 * wm_ * 2 * dr_);
    z_.resize(dl_ * 4 * wr_ * dr_);
  }

  void operator()(std::span<const double> theta, std::span<double> out) {
    // (a', w) x (s1 s2 b)
    kernels::gemm(dl_ * wl_, 4 * dr_, dl_, left_.data().data(), theta.data(), x_.data());
    // per a': (t1 w2) x (s2 b)
    const std::size_t xs = wl_ * 2 * 2 * dr_, ys = 2 * wm_ * 2 * dr_;
    for (std::size_t a = 0; a < dl_; ++a)
      kernels::gemm(2 * wm_, 2 * dr_, wl_ * 2, w1_.data().data(), x_.data() + a * xs,
                    y_.data() + a * ys);
    // per (a', t1): (t2 w3) x b
    const std::size_t yb = wm_ * 2 * dr_, zb = 2 * wr_ * dr_;
    for (std::size_t at = 0; at < dl_ * 2; ++at)
      kernels::gemm(2 * wr_, dr_, wm_ * 2, w2_.data().data(), y_.data() + at * yb,
                    z_.data() + at * zb);
    // (a' t1 t2) x b'
    kernels::gemm(dl_ * 4, dr_, wr_ * dr_, z_.data(), right_.data().data(), out.data());
  }

 private:
  const DenseTensor& left_;
  DenseTensor w1_, w2_, right_;
  std::size_t dl_, wl_, wm_, wr_, dr_;
  std::vector<double> x_, y_, z_;
};

DenseTensor trivial_env() { return DenseTensor({1, 1, 1}, {1.0}); }

}  // namespace

DmrgResult dmrg_minimize(const MatrixProductOperator& h, const MatrixProductState& init,
                         const DmrgParams& params) {
  h.validate();
  init.validate();
  params.policy.validate();
  const std::size_t n = h.length();
  if (init.length() != n) throw ShapeError("MPO and initial state lengths differ");
  if (n < 2) throw DomainError("DMRG needs at least two sites");

  MatrixProductState psi = canonicalize(init, 0);
  psi.log_norm = 0.0;

  std::vector<DenseTensor> left(n + 1), right(n + 1);
  left[0] = trivial_env();
  right[n] = trivial_env();
  for (std::size_t i = n; i-- > 1;) right[i] = grow_right(right[i + 1], psi.sites[i], h.sites[i]);

  DmrgResult result;
  DmrgDiagnostics& diag = result.diagnostics;
  std::size_t chi_cap = std::min(params.policy.chi_max, std::max<std::size_t>(params.chi_ramp_start, 1));
  double previous = std::numeric_limits<double>::infinity();

  for (std::size_t sweep = 0; sweep < params.max_sweeps; ++sweep) {
    const TruncationPolicy policy{chi_cap, params.policy.cutoff};
    double energy = 0.0;
    double max_discarded = 0.0;
    double gap = std::numeric_limits<double>::infinity();

    auto optimize = [&](std::size_t i, bool moving_right) {
      DenseTensor theta = contract(psi.sites[i], psi.sites[i + 1], {{2, 0}});
      const Shape shape = theta.shape();
      const DenseTensor& env_l = left[i];
      const DenseTensor& env_r = right[i + 2];
      const DenseTensor& w1 = h.sites[i];
      const DenseTensor& w2 = h.sites[i + 1];
      TwoSiteHeff op(env_l, w1, w2, env_r);
      LinearMap heff = [&](std::span<const double> x, std::span<double> y) { op(x, y); };
      EigOptions opts;
      opts.tol = params.eig_tol;
      opts.krylov_dim = params.eig_krylov;
      opts.max_iter = params.eig_max_matvecs;
      opts.throw_on_failure = false;
      opts.initial.assign(theta.data().begin(), theta.data().end());
      EigResult eig = eigs_smallest(heff, theta.size(), opts);
      energy = eig.value;
      gap = std::min(gap, eig.gap_estimate);

      DenseTensor opt(shape, std::move(eig.vector));
      SvdFactors f = svd_split(opt, {0, 1}, policy);
      max_discarded = std::max(max_discarded, f.discarded_weight);
      double kept = 0.0;
      for (double s : f.singular_values) kept += s * s;
      const double scale = 1.0 / std::sqrt(kept);
      const std::size_t k = f.singular_values.size();

      if (moving_right) {
        DenseTensor sv = std::move(f.right_isometry);
        const std::size_t cols = sv.size() / k;
        for (std::size_t r = 0; r < k; ++r)
          for (std::size_t j = 0; j < cols; ++j) sv[r * cols + j] *= f.singular_values[r] * scale;
        psi.sites[i] = std::move(f.left_isometry);
        psi.sites[i + 1] = std::move(sv);
        left[i + 1] = grow_left(left[i], psi.sites[i], h.sites[i]);
        psi.center = i + 1;
      } else {
        DenseTensor us = std::move(f.left_isometry);
        for (std::size_t j = 0; j < us.size(); ++j) us[j] *= f.singular_values[j % k] * scale;
        psi.sites[i] = std::move(us);
        psi.sites[i + 1] = std::move(f.right_isometry);
        right[i + 1] = grow_right(right[i + 2], psi.sites[i + 1], h.sites[i + 1]);
        psi.center = i;
      }
    };

    for (std::size_t i = 0; i + 1 < n; ++i) optimize(i, true);
    for (std::size_t i = n - 1; i-- > 0;) optimize(i, false);

    diag.sweep_energies.push_back(energy);
    diag.sweep_max_discarded.push_back(max_discarded);
    diag.sweeps = sweep + 1;
    diag.gap_estimate = gap;
    if (params.verbose)
      std::fprintf(stderr, "dmrg sweep %zu chi %zu/%zu E=%.14f discarded=%.3e\n", sweep + 1,
                   psi.max_bond_dim(), chi_cap, energy, max_discarded);

    // Convergence only counts once the bond cap has stopped growing.
    const bool at_cap = chi_cap == params.policy.chi_max || psi.max_bond_dim() < chi_cap;
    if (at_cap && sweep + 1 >= params.min_sweeps && std::abs(previous - energy) < params.energy_tol) {
      diag.converged = true;
      break;
    }
    previous = energy;
    chi_cap = std::min(params.policy.chi_max, chi_cap * 2);
  }

  diag.max_bond_dim = psi.max_bond_dim();
  diag.near_degenerate = diag.gap_estimate < kDegeneracyGap;
  result.energy = expectation(h, psi);
  result.state = std::move(psi);
  return result;
}

}  // namespace swapent
