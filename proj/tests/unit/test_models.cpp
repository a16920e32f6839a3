#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "swapent/errors.hpp"
#include "swapent/linalg.hpp"
#include "swapent/models.hpp"

using namespace swapent;
using testing::kron_chain;
using testing::max_abs_diff;

namespace {

const std::vector<double> kI{1, 0, 0, 1}, kX{0, 1, 1, 0}, kZ{1, 0, 0, -1};
// Y = i * kIY, so Y (x) Y = -(kIY (x) kIY)
const std::vector<double> kIY{0, -1, 1, 0};

ModelSpec xxz(double delta, std::size_t L) {
  ModelSpec s;
  s.kind = ModelKind::XXZ;
  s.delta = delta;
  s.length = L;
  return s;
}

ModelSpec tfim(std::size_t L) {
  ModelSpec s;
  s.kind = ModelKind::TFIM;
  s.length = L;
  return s;
}

std::vector<double> two_body(std::size_t L, std::size_t i, std::size_t j, const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<std::vector<double>> ops(L, kI);
  ops[i] = a;
  ops[j] = b;
  return kron_chain(ops);
}

double total_sz(const std::vector<double>& psi, std::size_t L) {
  double m = 0.0;
  for (std::size_t x = 0; x < psi.size(); ++x) {
    int up = 0;
    for (std::size_t q = 0; q < L; ++q) up += (x >> q) & 1 ? -1 : 1;
    m += psi[x] * psi[x] * up;
  }
  return m;
}

// 2x2 reduced density matrix of site i.
std::array<double, 4> site_rdm(const MatrixProductState& s, std::size_t i) {
  const MatrixProductState c = canonicalize(s, i);
  const DenseTensor r = contract(c.sites[i], c.sites[i], {{0, 0}, {2, 2}});
  return {r[0], r[1], r[2], r[3]};
}

DmrgParams tight() {
  DmrgParams p;
  p.energy_tol = 1e-12;
  p.eig_tol = 1e-11;
  p.eig_max_matvecs = 200;
  p.max_sweeps = 30;
  return p;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(xxz(-1.0, 8).validate(), DomainError);
  CHECK_THROWS_AS(xxz(1.5, 8).validate(), DomainError);
  CHECK_NOTHROW(xxz(1.0, 8).validate());
  CHECK_THROWS_AS(xxz(0.0, 2).validate(), DomainError);
  ModelSpec two = xxz(1.0, 2);
  two.allow_two_sites = true;
  CHECK_NOTHROW(two.validate());
  CHECK(parse_model_kind("tfim") == ModelKind::TFIM);
  CHECK_THROWS_AS(parse_model_kind("ising"), DomainError);
  CHECK(xxz(0, 4).central_charge() == 1.0);
  CHECK(tfim(4).central_charge() == 0.5);
}

TEST_CASE("XXZ MPO at L=3 is the Pauli sum") {
  const std::size_t L = 3;
  std::vector<double> expect(64, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    const std::size_t k = (j + 1) % L;
    const auto xx = two_body(L, j, k, kX, kX);
    const auto yy = two_body(L, j, k, kIY, kIY);
    for (std::size_t e = 0; e < 64; ++e) expect[e] += xx[e] - yy[e];
  }
  const DenseTensor h = mpo_to_dense(xxz_mpo(xxz(0.0, L)));
  CHECK(max_abs_diff(h.data(), expect) <= 1e-14);
}

TEST_CASE("dense Hamiltonian matches the MPO expansion") {
  for (const ModelSpec& s : {xxz(0.3, 4), xxz(-0.6, 4), tfim(4)}) {
    const DenseTensor a = dense_hamiltonian(s);
    const DenseTensor b = mpo_to_dense(model_mpo(s));
    CHECK(max_abs_diff(a.data(), b.data()) <= 1e-12);
  }
  CHECK_THROWS_AS(dense_hamiltonian(xxz(0.0, 15)), LimitExceeded);
}

TEST_CASE("dense Hamiltonian symmetries") {
  const DenseTensor h = dense_hamiltonian(tfim(3));
  double tr = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    tr += h[i * 8 + i];
    for (std::size_t j = 0; j < 8; ++j) CHECK(h[i * 8 + j] == h[j * 8 + i]);
  }
  CHECK(tr == doctest::Approx(0.0));

  // [H, sum_j Z_j] = 0 for XXZ
  const DenseTensor x = dense_hamiltonian(xxz(0.0, 3));
  std::vector<double> sz(8, 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<std::vector<double>> ops(3, kI);
    ops[j] = kZ;
    const auto z = kron_chain(ops);
    for (std::size_t i = 0; i < 8; ++i) sz[i] += z[i * 8 + i];
  }
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(x[i * 8 + j] * (sz[j] - sz[i])) <= 1e-12);
}

TEST_CASE("product-state expectations") {
  std::vector<std::array<double, 2>> up(6, {1.0, 0.0}), plus(6, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  CHECK(expectation(xxz_mpo(xxz(0.4, 6)), product_state(up)) == doctest::Approx(0.4 * 6));
  CHECK(expectation(tfim_mpo(tfim(6)), product_state(plus)) == doctest::Approx(-6.0));
  CHECK(expectation(tfim_mpo(tfim(6)), product_state(up)) == doctest::Approx(-6.0));
}

TEST_CASE("dense ground energies") {
  // reference values from an independent Pauli-matrix construction
  const auto e = linalg::symmetric_eigenvalues(16, dense_hamiltonian(xxz(1.0, 4)).data());
  CHECK(e.front() == doctest::Approx(-8.0).epsilon(1e-12));
}

TEST_CASE("DMRG ground energies") {
  ModelSpec two = xxz(1.0, 2);
  two.allow_two_sites = true;
  CHECK(chain_ground_state(two).energy == doctest::Approx(-6.0).epsilon(1e-10));

  const GroundState x8 = chain_ground_state(xxz(0.0, 8));
  CHECK(std::abs(x8.energy - -10.452503719010998) <= 1e-8);
  const GroundState t8 = chain_ground_state(tfim(8));
  CHECK(std::abs(t8.energy - -10.251661790966036) <= 1e-8);
  const GroundState t6 = chain_ground_state(tfim(6), tight());
  CHECK(std::abs(t6.energy - -7.727406610312549) <= 1e-10);

  for (const GroundState* g : {&x8, &t8}) {
    const auto& e = g->diagnostics.sweep_energies;
    for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] <= e[k - 1] + 1e-9);
    CHECK(g->diagnostics.converged);
  }
}

TEST_CASE("ground-state symmetries") {
  const GroundState x8 = chain_ground_state(xxz(0.0, 8));
  const auto psi = mps_to_dense(x8.state);
  CHECK(std::abs(total_sz(psi, 8)) <= 1e-8);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto r = site_rdm(x8.state, i);
    CHECK(std::abs(r[0] - 0.5) <= 1e-8);
    CHECK(std::abs(r[1]) <= 1e-8);
    CHECK(std::abs(r[3] - 0.5) <= 1e-8);
  }

  const GroundState t8 = chain_ground_state(tfim(8));
  const auto phi = mps_to_dense(t8.state);
  double g = 0.0;
  for (std::size_t x = 0; x < phi.size(); ++x) g += phi[x] * phi[phi.size() - 1 - x];
  CHECK(std::abs(g - 1.0) <= 1e-8);
  const auto r0 = site_rdm(t8.state, 0);
  for (std::size_t i = 1; i < 8; ++i) CHECK(max_abs_diff(site_rdm(t8.state, i), r0) <= 1e-6);
}

TEST_CASE("XXZ L=8 half-chain spectrum") {
  // leading Schmidt probabilities from a dense SVD of the exact ground state
  const double ref[] = {0.641504755840387, 0.156009088379096, 0.156009088379096, 0.03794022637446,
                        0.002755869480508, 0.002755869480508};
  const GroundState g = chain_ground_state(xxz(0.0, 8));
  const auto sp = schmidt_at_bond(g.state, 4);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(sp.probabilities[i] - ref[i]) <= 1e-9);
}

TEST_CASE("doubled ground states") {
  const ModelSpec s = xxz(0.0, 8);
  const GroundState cat = doubled_ground_state(s, DoublingMethod::Concatenate);
  const GroundState joint = doubled_ground_state(s, DoublingMethod::JointDmrg);
  CHECK(std::abs(std::abs(inner_product(cat.state, joint.state)) - 1.0) <= 1e-8);
  const double single = chain_ground_state(s).energy;
  CHECK(std::abs(expectation(doubled_mpo(s), cat.state) - 2.0 * single) <= 1e-8);
  CHECK(std::abs(joint.energy - 2.0 * single) <= 1e-8);
  const auto mid = schmidt_at_bond(cat.state, 8);
  REQUIRE(mid.rank() == 1);
  CHECK(mid.probabilities[0] == doctest::Approx(1.0));
  CHECK(cat.state.center == std::optional<std::size_t>{7});
}

}
