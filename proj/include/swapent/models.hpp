#pragma once

#include <cstddef>
#include <string>

#include "swapent/dmrg.hpp"
#include "swapent/mps.hpp"
#include "swapent/tensor.hpp"

namespace swapent {

enum class ModelKind { XXZ, TFIM };

/// Periodic critical spin chain.
///   XXZ:  H = sum_j (X_j X_{j+1} + Y_j Y_{j+1} + delta Z_j Z_{j+1}),  delta in (-1, 1]
///   TFIM: H = -sum_j (Z_j Z_{j+1} + X_j)
/// Site L+1 is site 1.
struct ModelSpec {
  ModelKind kind = ModelKind::XXZ;
  double delta = 0.0;
  std::size_t length = 8;
  /// L = 2 puts the same bond in the sum twice; only tests opt in.
  bool allow_two_sites = false;

  void validate() const;
  double central_charge() const { return kind == ModelKind::XXZ ? 1.0 : 0.5; }
  std::string name() const;
};

ModelKind parse_model_kind(const std::string& text);

MatrixProductOperator xxz_mpo(const ModelSpec& spec);
MatrixProductOperator tfim_mpo(const ModelSpec& spec);
MatrixProductOperator model_mpo(const ModelSpec& spec);

/// H (x) I + I (x) H on 2L sites; chain 1 occupies sites [0, L), chain 2 sites [L, 2L).
MatrixProductOperator doubled_mpo(const ModelSpec& spec);

inline constexpr std::size_t kDenseMaxLength = 14;

/// Dense 2^L x 2^L Hamiltonian by Kronecker assembly; site 0 is the most significant bit.
DenseTensor dense_hamiltonian(const ModelSpec& spec);

struct GroundState {
  MatrixProductState state;
  double energy = 0.0;
  DmrgDiagnostics diagnostics;
};

/// Single-chain DMRG ground state from a deterministic random start.
GroundState chain_ground_state(const ModelSpec& spec, const DmrgParams& params = {},
                               std::uint64_t seed = 7);

enum class DoublingMethod { Concatenate, JointDmrg };

/// |Psi0> (x) |Psi0> on 2L sites. Concatenate runs DMRG once on L sites and
/// joins two copies; JointDmrg optimizes the doubled Hamiltonian directly.
/// The energy is that of the doubled Hamiltonian.
GroundState doubled_ground_state(const ModelSpec& spec, DoublingMethod method,
                                 const DmrgParams& params = {}, std::uint64_t seed = 7);

/// Joins a single-chain state with itself, canonical at site L-1.
MatrixProductState double_chain(const MatrixProductState& chain);

}  // namespace swapent
