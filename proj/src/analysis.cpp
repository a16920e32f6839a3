#include "swapent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "swapent/errors.hpp"
#include "swapent/linalg.hpp"

namespace swapent {

double luttinger_parameter(double delta) {
  if (!(delta > -1.0 && delta <= 1.0)) throw DomainError("XXZ anisotropy must lie in (-1, 1]");
  const double pi = std::numbers::pi;
  return pi / (2.0 * pi - 2.0 * std::acos(delta));
}

double chord_length(std::size_t l, std::size_t L) {
  if (l == 0 || l >= L) throw DomainError("chord length needs 0 < l < L");
  const double pi = std::numbers::pi;
  // sin(pi l / L) evaluated on the folded argument keeps l and L - l bitwise equal
  const std::size_t m = std::min(l, L - l);
  return static_cast<double>(L) / pi * std::sin(pi * static_cast<double>(m) / static_cast<double>(L));
}

SchmidtSpectrum trs_swapped_spectrum(const SchmidtSpectrum& p) {
  std::vector<double> sq;
  sq.reserve(p.rank());
  for (double x : p.probabilities) sq.push_back(x * x);
  return SchmidtSpectrum::from_weights(std::move(sq));
}

double trs_born_probability(const SchmidtSpectrum& p, std::size_t l) {
  double s = 0.0;
  for (double x : p.probabilities) s += x * x;
  return std::ldexp(s, -static_cast<int>(l));
}

double trs_renyi_combination(const SchmidtSpectrum& p, double n) {
  if (n == 1.0) throw DomainError("combination formula needs n != 1");
  return (1.0 - 2.0 * n) / (1.0 - n) * entropy(p, 2.0 * n) + n / (1.0 - n) * entropy(p, 2.0);
}

std::string ScalingFit::to_json() const {
  nlohmann::ordered_json j;
  j["c"] = c_coeff;
  j["c0"] = c0;
  j["c1"] = c1;
  j["c2"] = c2_defined ? nlohmann::ordered_json(c2) : nlohmann::ordered_json(nullptr);
  j["K"] = K_used;
  j["oscillation"] = oscillation;
  j["points_used"] = points_used;
  j["excluded_per_edge"] = excluded_per_edge;
  j["rss"] = rss;
  return j.dump(2);
}

ScalingFit ScalingFit::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ScalingFit f;
  f.c_coeff = j.at("c").get<double>();
  f.c0 = j.at("c0").get<double>();
  f.c1 = j.at("c1").get<double>();
  f.c2_defined = !j.at("c2").is_null();
  f.c2 = f.c2_defined ? j.at("c2").get<double>() : 0.0;
  f.K_used = j.at("K").get<double>();
  f.oscillation = j.value("oscillation", true);
  f.points_used = j.at("points_used").get<std::size_t>();
  f.excluded_per_edge = j.at("excluded_per_edge").get<std::size_t>();
  f.rss = j.at("rss").get<double>();
  return f;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, std::size_t L, double K,
                       std::size_t exclude_per_edge, bool include_oscillation) {
  std::vector<ScalingPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) { return a.l < b.l; });
  const std::size_t need = include_oscillation ? 4 : 2;
  if (sorted.size() < 2 * exclude_per_edge + need)
    throw DomainError("not enough points left after edge exclusion");
  std::vector<ScalingPoint> used(sorted.begin() + static_cast<std::ptrdiff_t>(exclude_per_edge),
                                 sorted.end() - static_cast<std::ptrdiff_t>(exclude_per_edge));

  const std::size_t rows = used.size();
  const std::size_t cols = need;
  std::vector<double> a(rows * cols), b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double lc = chord_length(used[r].l, L);
    a[r * cols + 0] = 1.0;
    a[r * cols + 1] = std::log(lc);
    if (include_oscillation) {
      const double decay = std::pow(lc, -K);
      a[r * cols + 2] = decay;
      a[r * cols + 3] = (used[r].l % 2 == 0 ? 1.0 : -1.0) * decay;
    }
    b[r] = used[r].entropy;
  }
  const linalg::LeastSquares ls = linalg::least_squares(rows, cols, a, b);
  if (ls.rank < cols) throw DomainError("singular fit: basis functions are linearly dependent");

  ScalingFit fit;
  fit.c0 = ls.coefficients[0];
  fit.c_coeff = ls.coefficients[1];
  fit.oscillation = include_oscillation;
  if (include_oscillation) {
    const double amp = ls.coefficients[2];
    fit.c1 = ls.coefficients[3];
    fit.c2_defined = std::abs(fit.c1) >= 1e-12;
    fit.c2 = fit.c2_defined ? amp / fit.c1 : 0.0;
  }
  fit.K_used = K;
  fit.points_used = rows;
  fit.excluded_per_edge = exclude_per_edge;
  for (std::size_t r = 0; r < rows; ++r) {
    double model = 0.0;
    for (std::size_t c = 0; c < cols; ++c) model += a[r * cols + c] * ls.coefficients[c];
    fit.rss += (b[r] - model) * (b[r] - model);
  }
  return fit;
}

double delta_F() { return 1.0 / 8.0; }

double delta_T(double n) { return n / 6.0 - 1.0 / (24.0 * n); }

double delta_AB(double central_charge, double n) { return central_charge / 12.0 * (n - 1.0 / n); }

double casimir_energy(double central_charge, double cylinder_length) {
  if (!(cylinder_length > 0.0)) throw DomainError("cylinder length must be positive");
  return -std::numbers::pi * central_charge / (6.0 * cylinder_length);
}

double bcco_dimension(double energy_ab, double energy_aa, double strip_width) {
  return strip_width * (energy_ab - energy_aa) / std::numbers::pi;
}

CftPrediction cft_predictions(double central_charge, std::span<const double> n_values) {
  if (!(central_charge > 0.0)) throw DomainError("central charge must be positive");
  CftPrediction p;
  p.central_charge = central_charge;
  p.delta_F = delta_F();
  p.c_mu = central_charge / 6.0;
  p.n_values.assign(n_values.begin(), n_values.end());
  for (double n : n_values) {
    if (!(n > 0.0)) throw DomainError("Renyi index must be positive");
    p.delta_T.push_back(delta_T(n));
    p.delta_AB.push_back(delta_AB(central_charge, n));
  }
  return p;
}

}  // namespace swapent
