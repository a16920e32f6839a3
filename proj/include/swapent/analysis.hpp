#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swapent/mps.hpp"

namespace swapent {

/// K = pi / (2 pi - 2 acos(delta)) for the XXZ chain, delta in (-1, 1].
double luttinger_parameter(double delta);

/// l_c = (L / pi) sin(pi l / L), 0 < l < L.
double chord_length(std::size_t l, std::size_t L);

/// q_i = p_i^2 / sum_j p_j^2.
SchmidtSpectrum trs_swapped_spectrum(const SchmidtSpectrum& p);

/// 2^-l sum_i p_i^2.
double trs_born_probability(const SchmidtSpectrum& p, std::size_t l);

/// (1 - 2n)/(1 - n) S(2n) + n/(1 - n) S(2) of the input spectrum, n != 1.
double trs_renyi_combination(const SchmidtSpectrum& p, double n);

struct ScalingPoint {
  std::size_t l = 0;
  double entropy = 0.0;
};

/// S(l) = c0 + c ln l_c + c1 (c2 + (-1)^l) l_c^-K, solved as a linear problem.
struct ScalingFit {
  double c_coeff = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  /// False when |c1| < 1e-12 so that c2 = a / c1 is meaningless.
  bool c2_defined = false;
  bool oscillation = true;
  double K_used = 0.0;
  std::size_t points_used = 0;
  std::size_t excluded_per_edge = 0;
  double rss = 0.0;

  std::string to_json() const;
  static ScalingFit from_json(const std::string& text);
};

inline constexpr std::size_t kDefaultEdgeExclusion = 4;

/// Points are sorted by l and `exclude_per_edge` are dropped from each end.
/// Without oscillation the basis reduces to {1, ln l_c}.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, std::size_t L, double K,
                       std::size_t exclude_per_edge = kDefaultEdgeExclusion,
                       bool include_oscillation = true);

double delta_F();
double delta_T(double n);
/// (c/12)(n - 1/n).
double delta_AB(double central_charge, double n);
/// -pi c / (6 L_cyl).
double casimir_energy(double central_charge, double cylinder_length);
/// d (E_ab - E_aa) / pi.
double bcco_dimension(double energy_ab, double energy_aa, double strip_width);

struct CftPrediction {
  double central_charge = 0.0;
  double delta_F = 0.0;
  double c_mu = 0.0;
  std::vector<double> n_values;
  std::vector<double> delta_T;
  std::vector<double> delta_AB;
};

CftPrediction cft_predictions(double central_charge, std::span<const double> n_values);

}  // namespace swapent
