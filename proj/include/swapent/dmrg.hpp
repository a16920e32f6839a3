#pragma once

#include <cstddef>
#include <vector>

#include "swapent/mps.hpp"
#include "swapent/tensor.hpp"

namespace swapent {

struct DmrgParams {
  std::size_t max_sweeps = 16;
  TruncationPolicy policy{256, 1e-10};
  double energy_tol = 1e-10;
  /// Bond cap of the first sweep; it doubles every sweep until policy.chi_max.
  std::size_t chi_ramp_start = 16;
  std::size_t min_sweeps = 2;
  // local eigensolver
  double eig_tol = 1e-9;
  std::size_t eig_krylov = 12;
  std::size_t eig_max_matvecs = 48;
  bool verbose = false;
};

struct DmrgDiagnostics {
  /// Lowest local eigenvalue at the end of each full (left-right-left) sweep.
  std::vector<double> sweep_energies;
  std::vector<double> sweep_max_discarded;
  std::size_t sweeps = 0;
  bool converged = false;
  /// Smallest local Krylov gap seen during the final sweep.
  double gap_estimate = 0.0;
  bool near_degenerate = false;
  std::size_t max_bond_dim = 0;
};

struct DmrgResult {
  MatrixProductState state;  // canonical at site 0, unit network norm, log_norm 0
  double energy = 0.0;       // <psi|H|psi>
  DmrgDiagnostics diagnostics;
};

inline constexpr double kDegeneracyGap = 1e-8;

/// Two-site DMRG ground-state search.
DmrgResult dmrg_minimize(const MatrixProductOperator& h, const MatrixProductState& init,
                         const DmrgParams& params = {});

}  // namespace swapent
