#pragma once

// Batch experiment runner behind the command-line tool.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swapent/measurement.hpp"
#include "swapent/models.hpp"

namespace swapent {

enum class ModeKind { Uniform, Fixed, Sample, Enumerate };

/// `uniform:MU`, `fixed:BITS`, `sample` or `enumerate`.
struct ModeSpec {
  ModeKind kind = ModeKind::Uniform;
  BellOutcome mu{};
  OutcomeString fixed;

  static ModeSpec parse(const std::string& text);
  std::string to_string() const;
};

/// `4`, `2..30` or `2..30:2` (inclusive bounds).
std::vector<std::size_t> parse_pairs(const std::string& text);

struct ExperimentConfig {
  ModelKind model = ModelKind::XXZ;
  double delta = 0.0;
  std::size_t length = 16;
  std::string pairs;
  ModeSpec mode;
  std::size_t chi = 256;
  double cutoff = 1e-10;
  std::size_t sweeps = 16;
  double energy_tol = 1e-10;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  int threads = 0;
  std::size_t exclude = 4;
  std::optional<double> k;
  std::string state_path;
  std::string in_path;
  std::string out_path;

  /// Sets one field from its config-file key; throws DomainError on an unknown key or bad value.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  ModelSpec model_spec() const;
  DmrgParams dmrg_params() const;
  std::vector<std::size_t> pair_values() const;

  /// `key = value` lines; blank lines and `#` comments are ignored.
  std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_text(const std::string& text, ExperimentConfig base);
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig load(const std::string& path, ExperimentConfig base);
};

struct CsvRow {
  std::string model;
  double delta = 0.0;
  std::size_t L = 0;
  std::size_t l = 0;
  std::string mode;
  std::string outcome;
  double log_born_prob = 0.0;
  double S = 0.0;
  std::size_t chi_max = 0;
  double cutoff = 0.0;
  std::uint64_t seed = 0;
  std::size_t sample_index = 0;
};

std::string csv_header();
std::string format_csv_row(const CsvRow& row);
std::vector<CsvRow> read_csv(std::istream& in);

/// Single-chain ground state: loaded from `state_path` when that file exists,
/// otherwise computed by DMRG (and saved there when a path is set).
MatrixProductState prepare_chain(const ExperimentConfig& config, std::ostream& log);

/// Runs one subcommand (ground, swap, sweep, average, enumerate, oracle, fit,
/// predict). Library errors propagate as swapent::Error.
void run_command(const std::string& command, const ExperimentConfig& config, std::ostream& out,
                 std::ostream& log);

/// One-line JSON error record for the CLI.
std::string error_record(const std::exception& e);

}  // namespace swapent
