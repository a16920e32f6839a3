#pragma once

// Dense statevector reference for small chains. Everything here works on
// explicit 2^N amplitude vectors and is meant for cross-checking the MPS code.

#include <cstddef>
#include <vector>

#include "swapent/measurement.hpp"
#include "swapent/models.hpp"

namespace swapent {

/// Real amplitudes of an N-qubit state; qubit 0 is the most significant bit.
struct Statevector {
  std::vector<double> amplitudes;
  std::size_t qubits = 0;

  double norm() const;
};

struct ExactGroundState {
  Statevector state;
  double energy = 0.0;
  /// E1 - E0 from a deflated second solve.
  double gap = 0.0;
  bool degenerate = false;
};

inline constexpr std::size_t kExactMaxLength = 12;
inline constexpr std::size_t kPipelineMaxLength = 7;
inline constexpr double kExactDegeneracyGap = 1e-10;

ExactGroundState exact_ground_state(const ModelSpec& spec);

struct ExactSwapResult {
  double born_prob = 0.0;
  /// Eigenvalues of rho_A, non-increasing.
  std::vector<double> spectrum;
  double entropy = 0.0;
};

/// Projects |psi>|psi> onto the Bell outcomes of the l innermost pairs (same
/// pairing as measure_pairs), then diagonalizes the reduced density matrix of
/// the remaining chain-1 block.
ExactSwapResult exact_swap_pipeline(const Statevector& chain, std::size_t l,
                                    const OutcomeString& outcome);
ExactSwapResult exact_swap_pipeline(const ModelSpec& spec, std::size_t l,
                                    const OutcomeString& outcome);

/// Born-weighted mean of the swapped entropy over all 4^l outcomes.
double exact_average(const Statevector& chain, std::size_t l);
double exact_average(const ModelSpec& spec, std::size_t l);

}  // namespace swapent
