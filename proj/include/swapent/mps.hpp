#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swapent/tensor.hpp"

namespace swapent {

inline constexpr std::size_t kPhysDim = 2;

/// Open-boundary MPS of qubits. Site tensors have axes (left bond, physical, right bond).
/// The represented vector is exp(log_norm) times the contraction of `sites`.
struct MatrixProductState {
  std::vector<DenseTensor> sites;
  std::optional<std::size_t> center;
  double log_norm = 0.0;

  std::size_t length() const noexcept { return sites.size(); }
  /// Extent of bond b, the bond left of site b; b ranges over [0, length()].
  std::size_t bond_dim(std::size_t b) const;
  std::size_t max_bond_dim() const;
  /// Throws ShapeError when adjacent bonds or terminal bonds are inconsistent.
  void validate() const;
};

/// Axes (left bond, physical out, physical in, right bond).
struct MatrixProductOperator {
  std::vector<DenseTensor> sites;

  std::size_t length() const noexcept { return sites.size(); }
  void validate() const;
};

/// Non-increasing Schmidt probabilities across a cut.
struct SchmidtSpectrum {
  std::vector<double> probabilities;

  /// Sorts, drops negatives from rounding and normalizes to unit sum.
  static SchmidtSpectrum from_weights(std::vector<double> weights);
  static SchmidtSpectrum from_singular_values(std::span<const double> s);
  std::size_t rank() const noexcept { return probabilities.size(); }
};

/// Renyi entropy of order n; n == 1 is the von Neumann entropy. Zero entries are skipped.
double entropy(const SchmidtSpectrum& p, double n = 1.0);

MatrixProductState product_state(std::span<const std::array<double, 2>> locals);

/// Deterministic pseudo-random state with the given interior bond dimension
/// (clipped by the exact maximum at each bond), left-canonical at the last site.
MatrixProductState random_state(std::size_t length, std::size_t bond_dim, std::uint64_t seed);

/// Tensor product a (x) b as one chain of length a.length() + b.length().
MatrixProductState concatenate(const MatrixProductState& a, const MatrixProductState& b);

/// Spatial reflection: site j becomes site length-1-j.
MatrixProductState mirrored(const MatrixProductState& s);

/// Mixed-canonical form with the given center; pulled-out norms go to log_norm
/// and the network is left with unit norm.
MatrixProductState canonicalize(MatrixProductState s, std::size_t center);

/// <a|b> including both log_norm factors.
double inner_product(const MatrixProductState& a, const MatrixProductState& b);

/// <s|s> of the bare network, ignoring log_norm.
double network_norm_squared(const MatrixProductState& s);

/// Schmidt spectrum of the cut between sites [0, bond) and [bond, length).
/// Bonds 0 and length give the trivial spectrum {1}.
SchmidtSpectrum schmidt_at_bond(const MatrixProductState& s, std::size_t bond);

/// All interior Schmidt spectra in one canonicalization sweep; entry b is bond b+1.
std::vector<SchmidtSpectrum> all_schmidt_spectra(const MatrixProductState& s);

struct TwoSiteResult {
  MatrixProductState state;
  double norm_factor = 1.0;
  double discarded_weight = 0.0;
};

/// Applies a 4x4 operator (row index = out1*2 + out2, column = in1*2 + in2) to
/// sites (pos, pos+1); the returned state is renormalized with center pos+1.
TwoSiteResult apply_two_site(const MatrixProductState& s, std::size_t pos,
                             std::span<const double> op, const TruncationPolicy& policy);

inline constexpr double kImpossibleFloor = 1e-14;

struct ExcisionResult {
  MatrixProductState state;
  double cond_prob = 0.0;
};

/// Conditional probabilities of all four basis-target projections on sites (pos, pos+1).
/// `targets` holds four unit 4-vectors in the order (00, 01, 10, 11) of the site pair.
std::array<double, 4> pair_probabilities(const MatrixProductState& s, std::size_t pos,
                                         std::span<const std::array<double, 4>> targets);

/// Projects sites (pos, pos+1) onto <target| and removes them. The remaining
/// state is normalized, its log_norm is unchanged, and its center sits on the
/// site left of the removed pair (or the site right of it at the left edge).
/// Throws ImpossibleOutcome below kImpossibleFloor.
ExcisionResult project_and_excise_pair(const MatrixProductState& s, std::size_t pos,
                                       std::span<const double> target);

/// <s|H|s> / <s|s> of the bare network.
double expectation(const MatrixProductOperator& h, const MatrixProductState& s);

/// Dense 2^N x 2^N matrix of an MPO (site 0 is the most significant bit).
DenseTensor mpo_to_dense(const MatrixProductOperator& h);

/// Dense 2^N statevector of an MPS including log_norm.
std::vector<double> mps_to_dense(const MatrixProductState& s);

/// Exact MPS of a 2^N statevector by successive SVDs (cutoff applies per bond).
MatrixProductState mps_from_dense(std::span<const double> amplitudes, std::size_t nsites,
                                  const TruncationPolicy& policy = TruncationPolicy::exact());

// MPS1 portable state files.
void write_mps1(std::ostream& out, const MatrixProductState& s);
MatrixProductState read_mps1(std::istream& in);
void save_mps1(const std::string& path, const MatrixProductState& s);
MatrixProductState load_mps1(const std::string& path);

}  // namespace swapent
