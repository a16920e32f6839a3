#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swapent/mps.hpp"

namespace swapent {

/// Bell basis label b1 b2: |Bell^{b1 b2}> = (|0 b1> + (-1)^b2 |1 !b1>) / sqrt(2).
struct BellOutcome {
  std::uint8_t b1 = 0;
  std::uint8_t b2 = 0;

  std::size_t index() const noexcept { return std::size_t{b1} * 2 + b2; }
  static BellOutcome from_index(std::size_t i);
  /// "00", "01", "10" or "11".
  static BellOutcome parse(const std::string& bits);
  std::string bits() const;
  friend bool operator==(const BellOutcome&, const BellOutcome&) = default;
};

inline constexpr std::array<BellOutcome, 4> kBellOutcomes{
    BellOutcome{0, 0}, BellOutcome{0, 1}, BellOutcome{1, 0}, BellOutcome{1, 1}};

using OutcomeString = std::vector<BellOutcome>;

/// "0001" -> ((0,0), (0,1)). The string length must be even.
OutcomeString parse_outcome_string(const std::string& bits);
std::string format_outcome_string(const OutcomeString& outcomes);

/// Amplitudes in the basis order (00, 01, 10, 11).
std::array<double, 4> bell_state_vector(BellOutcome o);
/// |Bell><Bell| as a row-major 4x4 matrix.
std::array<double, 16> bell_projector(BellOutcome o);
/// (I + (-1)^b1 ZZ)/2 * (I + (-1)^b2 XX)/2 evaluated as a matrix product.
std::array<double, 16> bell_projector_pauli(BellOutcome o);

struct MeasurementRecord {
  OutcomeString outcome;
  std::vector<double> step_probs;
  double log_born_prob = 0.0;
  /// Unmeasured sites: chain-1 sites [0, L-l) followed by chain-2 sites [l, L).
  MatrixProductState survivor;
  std::size_t center_bond = 0;

  double born_prob() const;
};

struct FixedOutcomes {
  OutcomeString outcomes;
};
struct UniformOutcome {
  BellOutcome outcome;
};
/// Sequential Born-rule sampling on the stream (seed, trajectory); one draw per pair.
struct BornSampling {
  std::uint64_t seed = 0;
  std::uint64_t trajectory = 0;
};
using MeasurementMode = std::variant<FixedOutcomes, UniformOutcome, BornSampling>;

/// Called after each measured pair with the record so far.
using StepObserver = std::function<void(const MeasurementRecord&)>;

/// Measures the l innermost interchain pairs of a doubled state (chain 1 on
/// [0, L), chain 2 on [L, 2L)). Pair k = 1..l joins chain-1 site L-k with
/// chain-2 site k-1 (0-based); both sit next to the center when measured and
/// are removed afterwards.
MeasurementRecord measure_pairs(const MatrixProductState& doubled, std::size_t l,
                                const MeasurementMode& mode, const StepObserver& observer = {});

/// Entropy of the survivor across the A | A' cut.
double swapped_entropy(const MeasurementRecord& record, double n = 1.0);

struct EnumeratedOutcome {
  OutcomeString outcome;
  double born_prob = 0.0;
  double swapped_entropy = 0.0;
  bool possible = true;
};

inline constexpr std::size_t kEnumerationLimit = 4096;

/// Every outcome string of length l in lexicographic order by depth-first
/// traversal with shared prefixes. Impossible branches are listed with zero
/// probability.
std::vector<EnumeratedOutcome> enumerate_all_outcomes(const MatrixProductState& doubled,
                                                      std::size_t l,
                                                      std::size_t limit = kEnumerationLimit);

struct TrajectorySample {
  OutcomeString outcome;
  double log_born_prob = 0.0;
  double entropy = 0.0;
};

/// Born-sampled trajectories measured up to max(ls); entry [i][j] holds
/// trajectory i observed after ls[j] pairs. Trajectory i uses stream (seed, i),
/// so the result does not depend on `threads` (0 = OpenMP default).
std::vector<std::vector<TrajectorySample>> sample_trajectories(const MatrixProductState& doubled,
                                                               std::span<const std::size_t> ls,
                                                               std::size_t samples,
                                                               std::uint64_t seed,
                                                               int threads = 0);

struct AveragedEntropy {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

AveragedEntropy summarize(std::span<const double> values);

AveragedEntropy averaged_entropy(const MatrixProductState& doubled, std::size_t l,
                                 std::size_t samples, std::uint64_t seed, int threads = 0);

std::vector<AveragedEntropy> averaged_entropy_profile(const MatrixProductState& doubled,
                                                      std::span<const std::size_t> ls,
                                                      std::size_t samples, std::uint64_t seed,
                                                      int threads = 0);

}  // namespace swapent
