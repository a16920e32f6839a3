#include "swapent/measurement.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include "swapent/errors.hpp"
#include "swapent/random.hpp"

namespace swapent {

BellOutcome BellOutcome::from_index(std::size_t i) {
  if (i > 3) throw DomainError("Bell outcome index must be 0..3");
  return BellOutcome{static_cast<std::uint8_t>(i / 2), static_cast<std::uint8_t>(i % 2)};
}

BellOutcome BellOutcome::parse(const std::string& bits) {
  if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1'))
    throw DomainError("Bell outcome must be one of 00, 01, 10, 11; got '" + bits + "'");
  return BellOutcome{static_cast<std::uint8_t>(bits[0] - '0'), static_cast<std::uint8_t>(bits[1] - '0')};
}

std::string BellOutcome::bits() const {
  return std::string{static_cast<char>('0' + b1), static_cast<char>('0' + b2)};
}

OutcomeString parse_outcome_string(const std::string& bits) {
  if (bits.size() % 2 != 0) throw DomainError("outcome string needs an even number of bits");
  OutcomeString out;
  for (std::size_t i = 0; i < bits.size(); i += 2) out.push_back(BellOutcome::parse(bits.substr(i, 2)));
  return out;
}

std::string format_outcome_string(const OutcomeString& outcomes) {
  std::string s;
  for (const auto& o : outcomes) s += o.bits();
  return s;
}

std::array<double, 4> bell_state_vector(BellOutcome o) {
  const double r = 1.0 / std::sqrt(2.0);
  const double sign = o.b2 ? -1.0 : 1.0;
  std::array<double, 4> v{};
  v[0 * 2 + o.b1] = r;             // |0 b1>
  v[1 * 2 + (1 - o.b1)] = sign * r;  // (-1)^b2 |1 !b1>
  return v;
}

std::array<double, 16> bell_projector(BellOutcome o) {
  const auto v = bell_state_vector(o);
  std::array<double, 16> p{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) p[i * 4 + j] = v[i] * v[j];
  return p;
}

std::array<double, 16> bell_projector_pauli(BellOutcome o) {
  // ZZ is diag(1, -1, -1, 1); XX flips both bits.
  std::array<double, 16> zz{}, xx{};
  const double zdiag[4] = {1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    zz[i * 4 + i] = zdiag[i];
    xx[i * 4 + (3 - i)] = 1.0;
  }
  const double sz = o.b1 ? -1.0 : 1.0;
  const double sx = o.b2 ? -1.0 : 1.0;
  std::array<double, 16> a{}, b{};
  for (std::size_t i = 0; i < 16; ++i) {
    const double id = (i % 5 == 0) ? 1.0 : 0.0;
    a[i] = 0.5 * (id + sz * zz[i]);
    b[i] = 0.5 * (id + sx * xx[i]);
  }
  std::array<double, 16> p{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) p[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return p;
}

double MeasurementRecord::born_prob() const { return std::exp(log_born_prob); }

namespace {

std::size_t half_length(const MatrixProductState& doubled) {
  if (doubled.length() % 2 != 0) throw DomainError("doubled state must have an even number of sites");
  return doubled.length() / 2;
}

const std::array<std::array<double, 4>, 4>& bell_targets() {
  static const std::array<std::array<double, 4>, 4> targets{
      bell_state_vector(kBellOutcomes[0]), bell_state_vector(kBellOutcomes[1]),
      bell_state_vector(kBellOutcomes[2]), bell_state_vector(kBellOutcomes[3])};
  return targets;
}

// Position of the next pair after `done` excisions: the two sites around the center.
std::size_t pair_position(std::size_t half, std::size_t done) { return half - done - 1; }

MeasurementRecord initial_record(const MatrixProductState& doubled, std::size_t half) {
  MeasurementRecord rec;
  rec.survivor = doubled;
  if (half > 0) {
    if (!(rec.survivor.center && (*rec.survivor.center == half - 1 || *rec.survivor.center == half)))
      rec.survivor = canonicalize(std::move(rec.survivor), half - 1);
  }
  rec.center_bond = half;
  return rec;
}

void excise_into(MeasurementRecord& rec, std::size_t half, BellOutcome o) {
  const std::size_t done = rec.outcome.size();
  const auto target = bell_state_vector(o);
  ExcisionResult r = project_and_excise_pair(rec.survivor, pair_position(half, done), target);
  rec.survivor = std::move(r.state);
  rec.outcome.push_back(o);
  rec.step_probs.push_back(r.cond_prob);
  rec.log_born_prob += std::log(r.cond_prob);
  rec.center_bond = half - done - 1;
}

BellOutcome draw_outcome(const std::array<double, 4>& probs, RandomStream& stream) {
  const double total = probs[0] + probs[1] + probs[2] + probs[3];
  const double u = stream.uniform() * total;
  double acc = 0.0;
  std::size_t pick = 3;
  for (std::size_t k = 0; k < 4; ++k) {
    acc += probs[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  // never land on an outcome below the floor because of rounding at the top end
  while (probs[pick] < kImpossibleFloor && pick > 0) --pick;
  return kBellOutcomes[pick];
}

}  // namespace

MeasurementRecord measure_pairs(const MatrixProductState& doubled, std::size_t l,
                                const MeasurementMode& mode, const StepObserver& observer) {
  const std::size_t half = half_length(doubled);
  if (l > half) throw DomainError("number of measured pairs exceeds the chain length");
  if (const auto* fixed = std::get_if<FixedOutcomes>(&mode); fixed && fixed->outcomes.size() < l)
    throw DomainError("fixed outcome string shorter than the number of pairs");

  MeasurementRecord rec = initial_record(doubled, half);
  std::optional<RandomStream> stream;
  if (const auto* s = std::get_if<BornSampling>(&mode)) stream.emplace(s->seed, s->trajectory);

  for (std::size_t k = 0; k < l; ++k) {
    BellOutcome o;
    if (const auto* fixed = std::get_if<FixedOutcomes>(&mode)) {
      o = fixed->outcomes[k];
    } else if (const auto* uniform = std::get_if<UniformOutcome>(&mode)) {
      o = uniform->outcome;
    } else {
      const auto probs = pair_probabilities(rec.survivor, pair_position(half, k), bell_targets());
      o = draw_outcome(probs, *stream);
    }
    excise_into(rec, half, o);
    if (observer) observer(rec);
  }
  return rec;
}

double swapped_entropy(const MeasurementRecord& record, double n) {
  return entropy(schmidt_at_bond(record.survivor, record.center_bond), n);
}

std::vector<EnumeratedOutcome> enumerate_all_outcomes(const MatrixProductState& doubled,
                                                      std::size_t l, std::size_t limit) {
  const std::size_t half = half_length(doubled);
  if (l > half) throw DomainError("number of measured pairs exceeds the chain length");
  std::size_t count = 1;
  for (std::size_t k = 0; k < l; ++k) {
    count *= 4;
    if (count > limit) throw LimitExceeded("4^l outcomes exceed the enumeration limit");
  }

  std::vector<EnumeratedOutcome> out;
  out.reserve(count);
  auto impossible_leaves = [&](OutcomeString prefix) {
    // all completions of prefix get zero probability
    const std::size_t rest = l - prefix.size();
    std::size_t n = 1;
    for (std::size_t k = 0; k < rest; ++k) n *= 4;
    for (std::size_t c = 0; c < n; ++c) {
      OutcomeString full = prefix;
      std::size_t code = c;
      OutcomeString tail(rest);
      for (std::size_t k = rest; k-- > 0;) {
        tail[k] = BellOutcome::from_index(code % 4);
        code /= 4;
      }
      full.insert(full.end(), tail.begin(), tail.end());
      out.push_back({std::move(full), 0.0, 0.0, false});
    }
  };

  std::function<void(const MeasurementRecord&)> visit = [&](const MeasurementRecord& node) {
    if (node.outcome.size() == l) {
      out.push_back({node.outcome, node.born_prob(), swapped_entropy(node), true});
      return;
    }
    for (const BellOutcome o : kBellOutcomes) {
      MeasurementRecord child = node;
      try {
        excise_into(child, half, o);
      } catch (const ImpossibleOutcome&) {
        OutcomeString prefix = node.outcome;
        prefix.push_back(o);
        impossible_leaves(std::move(prefix));
        continue;
      }
      visit(child);
    }
  };
  visit(initial_record(doubled, half));
  return out;
}

std::vector<std::vector<TrajectorySample>> sample_trajectories(const MatrixProductState& doubled,
                                                               std::span<const std::size_t> ls,
                                                               std::size_t samples,
                                                               std::uint64_t seed, int threads) {
  const std::size_t half = half_length(doubled);
  std::size_t max_l = 0;
  for (std::size_t l : ls) {
    if (l > half) throw DomainError("number of measured pairs exceeds the chain length");
    max_l = std::max(max_l, l);
  }
  std::vector<std::vector<TrajectorySample>> results(samples,
                                                     std::vector<TrajectorySample>(ls.size()));
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();

  auto run_one = [&](std::size_t i) {
    auto& row = results[i];
    auto record_at = [&](const MeasurementRecord& rec) {
      for (std::size_t j = 0; j < ls.size(); ++j)
        if (ls[j] == rec.outcome.size())
          row[j] = TrajectorySample{rec.outcome, rec.log_born_prob, swapped_entropy(rec)};
    };
    const MeasurementRecord start = initial_record(doubled, half);
    record_at(start);
    measure_pairs(doubled, max_l, BornSampling{seed, i}, record_at);
  };

  // Errors cannot propagate out of an OpenMP region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for num_threads(nthreads) schedule(dynamic)
  for (std::size_t i = 0; i < samples; ++i) {
    try {
      run_one(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

AveragedEntropy summarize(std::span<const double> values) {
  AveragedEntropy out;
  out.samples = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double n = static_cast<double>(values.size());
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::vector<AveragedEntropy> averaged_entropy_profile(const MatrixProductState& doubled,
                                                      std::span<const std::size_t> ls,
                                                      std::size_t samples, std::uint64_t seed,
                                                      int threads) {
  if (samples < 1) throw DomainError("averaging needs at least one sample");
  const auto traj = sample_trajectories(doubled, ls, samples, seed, threads);
  std::vector<AveragedEntropy> out;
  std::vector<double> values(samples);
  for (std::size_t j = 0; j < ls.size(); ++j) {
    for (std::size_t i = 0; i < samples; ++i) values[i] = traj[i][j].entropy;
    out.push_back(summarize(values));
  }
  return out;
}

AveragedEntropy averaged_entropy(const MatrixProductState& doubled, std::size_t l,
                                 std::size_t samples, std::uint64_t seed, int threads) {
  const std::size_t ls[1] = {l};
  return averaged_entropy_profile(doubled, ls, samples, seed, threads).front();
}

}  // namespace swapent
