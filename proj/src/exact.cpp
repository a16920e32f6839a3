#include "swapent/exact.hpp"

#include <algorithm>
#include <cmath>

#include "swapent/errors.hpp"
#include "swapent/kernels.hpp"
#include "swapent/linalg.hpp"
#include "swapent/random.hpp"

namespace swapent {

double Statevector::norm() const {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return std::sqrt(s);
}

namespace {

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v[best] < 0.0)
    for (double& x : v) x = -x;
}

double gershgorin_bound(const DenseTensor& h, std::size_t dim) {
  double bound = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < dim; ++c) s += std::abs(h[r * dim + c]);
    bound = std::max(bound, s);
  }
  return bound;
}

double von_neumann(std::span<const double> values) {
  double s = 0.0;
  for (double v : values)
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

void check_pipeline_args(const Statevector& chain, std::size_t l) {
  if (chain.qubits == 0 || chain.amplitudes.size() != (std::size_t{1} << chain.qubits))
    throw ShapeError("statevector size does not match its qubit count");
  if (chain.qubits > kPipelineMaxLength) throw LimitExceeded("dense pipeline limited to L <= 7");
  if (l > chain.qubits) throw DomainError("number of measured pairs exceeds the chain length");
}

}  // namespace

ExactGroundState exact_ground_state(const ModelSpec& spec) {
  spec.validate();
  if (spec.length > kExactMaxLength) throw LimitExceeded("exact ground state limited to L <= 12");
  const std::size_t dim = std::size_t{1} << spec.length;
  const DenseTensor h = dense_hamiltonian(spec);

  auto apply = [&](std::span<const double> x, std::span<double> y) {
    kernels::gemm(dim, 1, dim, h.data().data(), x.data(), y.data());
  };
  EigOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 20000;
  opts.krylov_dim = std::min<std::size_t>(dim, 64);
  // a generic start vector overlaps every symmetry sector
  RandomStream rng(0x5eed, spec.length);
  opts.initial.resize(dim);
  for (double& x : opts.initial) x = rng.uniform() - 0.5;
  EigResult ground = eigs_smallest(apply, dim, opts);

  // second level: push the ground state up by more than the spectral width
  const double shift = 2.0 * gershgorin_bound(h, dim) + 1.0;
  const std::vector<double> v0 = ground.vector;
  auto deflated = [&](std::span<const double> x, std::span<double> y) {
    apply(x, y);
    double overlap = 0.0;
    for (std::size_t i = 0; i < dim; ++i) overlap += v0[i] * x[i];
    for (std::size_t i = 0; i < dim; ++i) y[i] += shift * overlap * v0[i];
  };
  // a fresh start vector: the first one has no ground-space weight orthogonal to v0
  RandomStream rng2(0x5eed + 1, spec.length);
  for (double& x : opts.initial) x = rng2.uniform() - 0.5;
  EigResult excited = eigs_smallest(deflated, dim, opts);

  ExactGroundState out;
  out.state.qubits = spec.length;
  out.state.amplitudes = std::move(ground.vector);
  fix_sign(out.state.amplitudes);
  out.energy = ground.value;
  out.gap = excited.value - ground.value;
  out.degenerate = out.gap < kExactDegeneracyGap;
  return out;
}

ExactSwapResult exact_swap_pipeline(const Statevector& chain, std::size_t l,
                                    const OutcomeString& outcome) {
  check_pipeline_args(chain, l);
  if (outcome.size() < l) throw DomainError("outcome string shorter than the number of pairs");
  const std::size_t L = chain.qubits;
  const std::size_t n = 2 * L;
  const std::size_t half_dim = std::size_t{1} << L;
  const std::size_t dim = std::size_t{1} << n;

  std::vector<double> psi(dim);
  for (std::size_t x1 = 0; x1 < half_dim; ++x1)
    for (std::size_t x2 = 0; x2 < half_dim; ++x2)
      psi[x1 * half_dim + x2] = chain.amplitudes[x1] * chain.amplitudes[x2];

  double before = 1.0;
  for (std::size_t k = 1; k <= l; ++k) {
    const std::size_t q1 = L - k, q2 = L + k - 1;
    const std::size_t m1 = std::size_t{1} << (n - 1 - q1);
    const std::size_t m2 = std::size_t{1} << (n - 1 - q2);
    const auto p = bell_projector(outcome[k - 1]);
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & (m1 | m2)) continue;
      const std::size_t idx[4] = {base, base | m2, base | m1, base | m1 | m2};
      double v[4], w[4] = {0, 0, 0, 0};
      for (int a = 0; a < 4; ++a) v[a] = psi[idx[a]];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) w[a] += p[a * 4 + b] * v[b];
      for (int a = 0; a < 4; ++a) psi[idx[a]] = w[a];
    }
    double after = 0.0;
    for (double a : psi) after += a * a;
    if (after < kImpossibleFloor * before) throw ImpossibleOutcome(k, after / before);
    before = after;
  }

  ExactSwapResult out;
  out.born_prob = before;
  const double scale = 1.0 / std::sqrt(before);
  for (double& a : psi) a *= scale;

  // rho_A over the leading L - l qubits; everything else is traced out
  const std::size_t rows = std::size_t{1} << (L - l);
  const std::size_t cols = dim / rows;
  std::vector<double> rho(rows * rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += psi[i * cols + c] * psi[j * cols + c];
      rho[i * rows + j] = rho[j * rows + i] = s;
    }
  std::vector<double> ev = linalg::symmetric_eigenvalues(rows, rho);
  for (double& e : ev) e = std::max(e, 0.0);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  out.entropy = von_neumann(ev);
  out.spectrum = std::move(ev);
  return out;
}

ExactSwapResult exact_swap_pipeline(const ModelSpec& spec, std::size_t l,
                                    const OutcomeString& outcome) {
  if (spec.length > kPipelineMaxLength) throw LimitExceeded("dense pipeline limited to L <= 7");
  return exact_swap_pipeline(exact_ground_state(spec).state, l, outcome);
}

double exact_average(const Statevector& chain, std::size_t l) {
  check_pipeline_args(chain, l);
  std::size_t count = 1;
  for (std::size_t k = 0; k < l; ++k) {
    count *= 4;
    if (count > kEnumerationLimit) throw LimitExceeded("4^l outcomes exceed the enumeration limit");
  }
  double avg = 0.0;
  for (std::size_t code = 0; code < count; ++code) {
    OutcomeString o(l);
    std::size_t c = code;
    for (std::size_t k = l; k-- > 0;) {
      o[k] = BellOutcome::from_index(c % 4);
      c /= 4;
    }
    try {
      const ExactSwapResult r = exact_swap_pipeline(chain, l, o);
      avg += r.born_prob * r.entropy;
    } catch (const ImpossibleOutcome&) {
    }
  }
  return avg;
}

double exact_average(const ModelSpec& spec, std::size_t l) {
  if (spec.length > kPipelineMaxLength) throw LimitExceeded("dense pipeline limited to L <= 7");
  return exact_average(exact_ground_state(spec).state, l);
}

}  // namespace swapent
