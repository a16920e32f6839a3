#include "swapent/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "swapent/analysis.hpp"
#include "swapent/errors.hpp"
#include "swapent/exact.hpp"

namespace swapent {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw DomainError("bad value for " + key + ": '" + text + "'");
  return value;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string model_name(ModelKind k) { return k == ModelKind::XXZ ? "xxz" : "tfim"; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// CSV rows go to --out (appended, header only for a new or empty file) or to stdout.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    bool header = true;
    if (!path.empty()) {
      std::error_code ec;
      header = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
      file_.open(path, std::ios::app);
      if (!file_) throw IoError("cannot open " + path + " for writing");
      os_ = &file_;
    }
    if (header) *os_ << csv_header() << '\n';
  }
  void write(const CsvRow& row) { *os_ << format_csv_row(row) << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_json(const ordered_json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

CsvRow base_row(const ExperimentConfig& c, std::size_t l) {
  CsvRow r;
  r.model = model_name(c.model);
  r.delta = c.model == ModelKind::XXZ ? c.delta : 0.0;
  r.L = c.length;
  r.l = l;
  r.mode = c.mode.to_string();
  r.chi_max = c.chi;
  r.cutoff = c.cutoff;
  r.seed = c.seed;
  return r;
}

std::vector<std::size_t> pairs_or(const ExperimentConfig& c, const std::string& fallback) {
  return parse_pairs(c.pairs.empty() ? fallback : c.pairs);
}

void check_pairs(const std::vector<std::size_t>& ls, std::size_t L) {
  for (std::size_t l : ls)
    if (l > L) throw DomainError("number of measured pairs exceeds the chain length");
}

void run_ground(const ExperimentConfig& c, std::ostream& out, std::ostream& log) {
  if (c.state_path.empty()) throw DomainError("ground needs --state PATH for the MPS1 output");
  const ModelSpec spec = c.model_spec();
  log << "dmrg " << spec.name() << " chi=" << c.chi << '\n';
  GroundState g = chain_ground_state(spec, c.dmrg_params(), c.seed);
  save_mps1(c.state_path, g.state);

  ordered_json j;
  j["model"] = model_name(c.model);
  j["delta"] = c.model == ModelKind::XXZ ? c.delta : 0.0;
  j["L"] = c.length;
  j["energy"] = g.energy;
  j["energy_per_site"] = g.energy / static_cast<double>(c.length);
  j["sweeps"] = g.diagnostics.sweeps;
  j["converged"] = g.diagnostics.converged;
  j["near_degenerate"] = g.diagnostics.near_degenerate;
  j["max_bond_dim"] = g.diagnostics.max_bond_dim;
  j["max_discarded"] = g.diagnostics.sweep_max_discarded.empty()
                           ? 0.0
                           : g.diagnostics.sweep_max_discarded.back();
  j["chi_max"] = c.chi;
  j["cutoff"] = c.cutoff;
  j["seed"] = c.seed;
  j["state"] = c.state_path;
  std::vector<double> ent;
  for (const auto& sp : all_schmidt_spectra(g.state)) ent.push_back(entropy(sp));
  j["entropy"] = ent;
  emit_json(j, c.out_path, out);
}

void run_swap(const ExperimentConfig& c, const std::vector<std::size_t>& ls, std::ostream& out,
              std::ostream& log) {
  check_pairs(ls, c.length);
  const MatrixProductState doubled = double_chain(prepare_chain(c, log));
  CsvSink sink(c.out_path, out);
  const std::size_t max_l = ls.empty() ? 0 : *std::max_element(ls.begin(), ls.end());

  switch (c.mode.kind) {
    case ModeKind::Uniform:
    case ModeKind::Fixed: {
      MeasurementMode mode;
      if (c.mode.kind == ModeKind::Uniform)
        mode = UniformOutcome{c.mode.mu};
      else
        mode = FixedOutcomes{c.mode.fixed};
      std::map<std::size_t, CsvRow> rows;
      auto record = [&](const MeasurementRecord& rec) {
        if (std::find(ls.begin(), ls.end(), rec.outcome.size()) == ls.end()) return;
        CsvRow r = base_row(c, rec.outcome.size());
        r.outcome = format_outcome_string(rec.outcome);
        r.log_born_prob = rec.log_born_prob;
        r.S = swapped_entropy(rec);
        rows[r.l] = r;
      };
      record(measure_pairs(doubled, 0, mode));
      measure_pairs(doubled, max_l, mode, record);
      for (std::size_t l : ls) sink.write(rows.at(l));
      break;
    }
    case ModeKind::Sample: {
      const auto traj = sample_trajectories(doubled, ls, c.samples, c.seed, c.threads);
      for (std::size_t j = 0; j < ls.size(); ++j)
        for (std::size_t i = 0; i < traj.size(); ++i) {
          CsvRow r = base_row(c, ls[j]);
          r.outcome = format_outcome_string(traj[i][j].outcome);
          r.log_born_prob = traj[i][j].log_born_prob;
          r.S = traj[i][j].entropy;
          r.sample_index = i;
          sink.write(r);
        }
      break;
    }
    case ModeKind::Enumerate: {
      for (std::size_t l : ls) {
        const auto all = enumerate_all_outcomes(doubled, l);
        for (std::size_t i = 0; i < all.size(); ++i) {
          CsvRow r = base_row(c, l);
          r.outcome = format_outcome_string(all[i].outcome);
          r.log_born_prob = all[i].possible ? std::log(all[i].born_prob)
                                            : -std::numeric_limits<double>::infinity();
          r.S = all[i].swapped_entropy;
          r.sample_index = i;
          sink.write(r);
        }
      }
      break;
    }
  }
}

void run_average(const ExperimentConfig& c, std::ostream& out, std::ostream& log) {
  const auto ls = pairs_or(c, "");
  check_pairs(ls, c.length);
  if (c.samples < 1) throw DomainError("averaging needs at least one sample");
  const MatrixProductState doubled = double_chain(prepare_chain(c, log));
  const auto traj = sample_trajectories(doubled, ls, c.samples, c.seed, c.threads);

  if (!c.out_path.empty()) {
    CsvSink sink(c.out_path, out);
    ExperimentConfig sc = c;
    sc.mode.kind = ModeKind::Sample;
    for (std::size_t j = 0; j < ls.size(); ++j)
      for (std::size_t i = 0; i < traj.size(); ++i) {
        CsvRow r = base_row(sc, ls[j]);
        r.outcome = format_outcome_string(traj[i][j].outcome);
        r.log_born_prob = traj[i][j].log_born_prob;
        r.S = traj[i][j].entropy;
        r.sample_index = i;
        sink.write(r);
      }
  }

  ordered_json j;
  j["model"] = model_name(c.model);
  j["delta"] = c.model == ModelKind::XXZ ? c.delta : 0.0;
  j["L"] = c.length;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  ordered_json results = ordered_json::array();
  std::vector<double> values(traj.size());
  for (std::size_t k = 0; k < ls.size(); ++k) {
    for (std::size_t i = 0; i < traj.size(); ++i) values[i] = traj[i][k].entropy;
    const AveragedEntropy a = summarize(values);
    results.push_back({{"l", ls[k]}, {"mean", a.mean}, {"stderr", a.std_error}});
  }
  j["results"] = results;
  out << j.dump(2) << '\n';
}

void run_oracle(const ExperimentConfig& c, std::ostream& out, std::ostream& log) {
  const ModelSpec spec = c.model_spec();
  if (spec.length > kPipelineMaxLength) throw LimitExceeded("oracle comparison limited to L <= 7");
  auto ls = pairs_or(c, "1.." + std::to_string(std::min<std::size_t>(3, spec.length)));
  check_pairs(ls, spec.length);

  const ExactGroundState exact = exact_ground_state(spec);
  MatrixProductState chain;
  std::string source;
  if (exact.degenerate) {
    // a degenerate ground space has no unique state to compare against
    chain = mps_from_dense(exact.state.amplitudes, spec.length);
    source = "dense";
  } else {
    DmrgParams p = c.dmrg_params();
    p.energy_tol = 1e-14;
    p.eig_tol = 1e-12;
    p.eig_max_matvecs = 400;
    p.max_sweeps = std::max<std::size_t>(p.max_sweeps, 30);
    chain = chain_ground_state(spec, p, c.seed).state;
    source = "dmrg";
  }
  log << "oracle " << spec.name() << " state from " << source << '\n';
  const MatrixProductState doubled = double_chain(chain);

  double max_dp = 0.0, max_ds = 0.0, max_sum_dev = 0.0;
  std::size_t checked = 0;
  for (std::size_t l : ls) {
    const auto mps = enumerate_all_outcomes(doubled, l);
    double total = 0.0;
    for (const auto& m : mps) {
      double p_ref = 0.0, s_ref = 0.0;
      try {
        const ExactSwapResult r = exact_swap_pipeline(exact.state, l, m.outcome);
        p_ref = r.born_prob;
        s_ref = r.entropy;
      } catch (const ImpossibleOutcome&) {
      }
      max_dp = std::max(max_dp, std::abs(m.born_prob - p_ref));
      if (m.possible && p_ref > 0.0) max_ds = std::max(max_ds, std::abs(m.swapped_entropy - s_ref));
      total += m.born_prob;
      ++checked;
    }
    max_sum_dev = std::max(max_sum_dev, std::abs(total - 1.0));
  }

  ordered_json j;
  j["model"] = model_name(c.model);
  j["delta"] = c.model == ModelKind::XXZ ? c.delta : 0.0;
  j["L"] = spec.length;
  j["pairs"] = ls;
  j["state_source"] = source;
  j["exact_energy"] = exact.energy;
  j["exact_gap"] = exact.gap;
  j["outcomes_checked"] = checked;
  j["max_abs_dp"] = max_dp;
  j["max_abs_dS"] = max_ds;
  j["max_sum_p_deviation"] = max_sum_dev;
  j["agree"] = max_dp <= 1e-8 && max_ds <= 1e-7 && max_sum_dev <= 1e-9;
  emit_json(j, c.out_path, out);
}

void run_fit(const ExperimentConfig& c, std::ostream& out) {
  if (c.in_path.empty()) throw DomainError("fit needs --in PATH with CSV rows");
  std::ifstream in(c.in_path);
  if (!in) throw IoError("cannot open " + c.in_path);
  const auto rows = read_csv(in);
  if (rows.empty()) throw DomainError("no rows in " + c.in_path);

  const std::size_t L = rows.front().L;
  const std::string model = rows.front().model;
  std::map<std::size_t, std::pair<double, std::size_t>> by_l;
  for (const auto& r : rows) {
    if (r.L != L || r.model != model) throw DomainError("fit input mixes chains of different models or lengths");
    if (r.l == 0 || r.l >= L) continue;
    auto& acc = by_l[r.l];
    acc.first += r.S;
    acc.second += 1;
  }
  std::vector<ScalingPoint> pts;
  for (const auto& [l, acc] : by_l) pts.push_back({l, acc.first / static_cast<double>(acc.second)});

  std::optional<double> K = c.k;
  if (!K && model == "xxz") K = luttinger_parameter(rows.front().delta);
  const ScalingFit fit = fit_scaling(pts, L, K.value_or(0.0), c.exclude, K.has_value());
  const std::string text = fit.to_json();
  if (c.out_path.empty()) {
    out << text << '\n';
  } else {
    std::ofstream f(c.out_path);
    if (!f) throw IoError("cannot open " + c.out_path + " for writing");
    f << text << '\n';
  }
}

void run_predict(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec spec = c.model_spec();
  const double ns[] = {0.5, 1.0, 2.0, 3.0};
  const CftPrediction p = cft_predictions(spec.central_charge(), ns);
  ordered_json j;
  j["model"] = model_name(c.model);
  if (c.model == ModelKind::XXZ) {
    j["delta"] = c.delta;
    j["K"] = luttinger_parameter(c.delta);
  }
  j["central_charge"] = p.central_charge;
  j["c_mu"] = p.c_mu;
  j["initial_log_coefficient"] = p.central_charge / 3.0;
  j["delta_F"] = p.delta_F;
  ordered_json dt = ordered_json::object(), dab = ordered_json::object();
  for (std::size_t i = 0; i < p.n_values.size(); ++i) {
    dt[fmt_double(p.n_values[i])] = p.delta_T[i];
    dab[fmt_double(p.n_values[i])] = p.delta_AB[i];
  }
  j["delta_T"] = dt;
  j["delta_AB"] = dab;
  j["casimir_energy_L1"] = casimir_energy(p.central_charge, 1.0);
  out << j.dump(2) << '\n';
}

}  // namespace

ModeSpec ModeSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  ModeSpec m;
  if (t == "sample") {
    m.kind = ModeKind::Sample;
  } else if (t == "enumerate") {
    m.kind = ModeKind::Enumerate;
  } else if (t.rfind("uniform:", 0) == 0) {
    m.kind = ModeKind::Uniform;
    m.mu = BellOutcome::parse(t.substr(8));
  } else if (t.rfind("fixed:", 0) == 0) {
    m.kind = ModeKind::Fixed;
    m.fixed = parse_outcome_string(t.substr(6));
  } else {
    throw DomainError("mode must be uniform:MU, fixed:BITS, sample or enumerate; got '" + text + "'");
  }
  return m;
}

std::string ModeSpec::to_string() const {
  switch (kind) {
    case ModeKind::Uniform: return "uniform:" + mu.bits();
    case ModeKind::Fixed: return "fixed:" + format_outcome_string(fixed);
    case ModeKind::Sample: return "sample";
    case ModeKind::Enumerate: return "enumerate";
  }
  return {};
}

std::vector<std::size_t> parse_pairs(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw DomainError("empty pair specification");
  const auto dots = t.find("..");
  if (dots == std::string::npos) return {parse_number<std::size_t>("pairs", t)};
  const std::size_t lo = parse_number<std::size_t>("pairs", t.substr(0, dots));
  std::string rest = t.substr(dots + 2);
  std::size_t step = 1;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    step = parse_number<std::size_t>("pairs", rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const std::size_t hi = parse_number<std::size_t>("pairs", rest);
  if (step == 0 || hi < lo) throw DomainError("bad pair range '" + text + "'");
  std::vector<std::size_t> out;
  for (std::size_t l = lo; l <= hi; l += step) out.push_back(l);
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "model") model = parse_model_kind(value);
  else if (key == "delta") delta = parse_number<double>(key, value);
  else if (key == "length") length = parse_number<std::size_t>(key, value);
  else if (key == "pairs") pairs = value;
  else if (key == "mode") mode = ModeSpec::parse(value);
  else if (key == "chi") chi = parse_number<std::size_t>(key, value);
  else if (key == "cutoff") cutoff = parse_number<double>(key, value);
  else if (key == "sweeps") sweeps = parse_number<std::size_t>(key, value);
  else if (key == "energy_tol") energy_tol = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "samples") samples = parse_number<std::size_t>(key, value);
  else if (key == "threads") threads = parse_number<int>(key, value);
  else if (key == "exclude") exclude = parse_number<std::size_t>(key, value);
  else if (key == "k") k = parse_number<double>(key, value);
  else if (key == "state") state_path = value;
  else if (key == "in") in_path = value;
  else if (key == "out") out_path = value;
  else throw DomainError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
  model_spec().validate();
  TruncationPolicy{chi, cutoff}.validate();
  if (sweeps < 1) throw DomainError("sweeps must be at least 1");
  if (!(energy_tol > 0.0)) throw DomainError("energy_tol must be positive");
  if (threads < 0) throw DomainError("threads must be non-negative");
  if (k && !(*k > 0.0)) throw DomainError("K must be positive");
  if (!pairs.empty()) check_pairs(parse_pairs(pairs), length);
}

ModelSpec ExperimentConfig::model_spec() const {
  ModelSpec s;
  s.kind = model;
  s.delta = model == ModelKind::XXZ ? delta : 0.0;
  s.length = length;
  return s;
}

DmrgParams ExperimentConfig::dmrg_params() const {
  DmrgParams p;
  p.policy = TruncationPolicy{chi, cutoff};
  p.max_sweeps = sweeps;
  p.energy_tol = energy_tol;
  p.min_sweeps = std::min(p.min_sweeps, sweeps);
  return p;
}

std::vector<std::size_t> ExperimentConfig::pair_values() const { return parse_pairs(pairs); }

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "model = " << model_name(model) << '\n'
     << "delta = " << fmt_double(delta) << '\n'
     << "length = " << length << '\n';
  if (!pairs.empty()) os << "pairs = " << pairs << '\n';
  os << "mode = " << mode.to_string() << '\n'
     << "chi = " << chi << '\n'
     << "cutoff = " << fmt_double(cutoff) << '\n'
     << "sweeps = " << sweeps << '\n'
     << "energy_tol = " << fmt_double(energy_tol) << '\n'
     << "seed = " << seed << '\n'
     << "samples = " << samples << '\n'
     << "threads = " << threads << '\n'
     << "exclude = " << exclude << '\n';
  if (k) os << "k = " << fmt_double(*k) << '\n';
  if (!state_path.empty()) os << "state = " << state_path << '\n';
  if (!in_path.empty()) os << "in = " << in_path << '\n';
  if (!out_path.empty()) os << "out = " << out_path << '\n';
  return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) + " is not 'key = value'");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  return from_text(text, ExperimentConfig{});
}

ExperimentConfig ExperimentConfig::load(const std::string& path) { return load(path, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::load(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str(), std::move(base));
}

std::string csv_header() {
  return "model,delta,L,l,mode,outcome,log_born_prob,S,chi_max,cutoff,seed,sample_index";
}

std::string format_csv_row(const CsvRow& r) {
  std::ostringstream os;
  os << r.model << ',' << fmt_double(r.delta) << ',' << r.L << ',' << r.l << ',' << r.mode << ','
     << r.outcome << ',' << fmt_double(r.log_born_prob) << ',' << fmt_double(r.S) << ','
     << r.chi_max << ',' << fmt_double(r.cutoff) << ',' << r.seed << ',' << r.sample_index;
  return os.str();
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == csv_header()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw DomainError("CSV line " + std::to_string(lineno) + " needs 12 fields");
    auto real = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0')
        throw DomainError("CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
      return v;
    };
    CsvRow r;
    r.model = f[0];
    r.delta = real(f[1]);
    r.L = parse_number<std::size_t>("L", f[2]);
    r.l = parse_number<std::size_t>("l", f[3]);
    r.mode = f[4];
    r.outcome = f[5];
    r.log_born_prob = real(f[6]);
    r.S = real(f[7]);
    r.chi_max = parse_number<std::size_t>("chi_max", f[8]);
    r.cutoff = real(f[9]);
    r.seed = parse_number<std::uint64_t>("seed", f[10]);
    r.sample_index = parse_number<std::size_t>("sample_index", f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

MatrixProductState prepare_chain(const ExperimentConfig& c, std::ostream& log) {
  if (!c.state_path.empty() && std::filesystem::exists(c.state_path)) {
    MatrixProductState s = load_mps1(c.state_path);
    if (s.length() != c.length)
      throw DomainError("state file " + c.state_path + " has " + std::to_string(s.length()) +
                        " sites, expected " + std::to_string(c.length));
    return s;
  }
  const ModelSpec spec = c.model_spec();
  log << "dmrg " << spec.name() << " chi=" << c.chi << '\n';
  GroundState g = chain_ground_state(spec, c.dmrg_params(), c.seed);
  if (!c.state_path.empty()) save_mps1(c.state_path, g.state);
  return std::move(g.state);
}

void run_command(const std::string& command, const ExperimentConfig& config, std::ostream& out,
                 std::ostream& log) {
  config.validate();
  if (command == "ground") {
    run_ground(config, out, log);
  } else if (command == "swap") {
    if (config.pairs.empty()) throw DomainError("swap needs --pairs");
    run_swap(config, config.pair_values(), out, log);
  } else if (command == "sweep") {
    run_swap(config, pairs_or(config, "0.." + std::to_string(config.length)), out, log);
  } else if (command == "average") {
    if (config.pairs.empty()) throw DomainError("average needs --pairs");
    run_average(config, out, log);
  } else if (command == "enumerate") {
    if (config.pairs.empty()) throw DomainError("enumerate needs --pairs");
    ExperimentConfig c = config;
    c.mode.kind = ModeKind::Enumerate;
    run_swap(c, c.pair_values(), out, log);
  } else if (command == "oracle") {
    run_oracle(config, out, log);
  } else if (command == "fit") {
    run_fit(config, out);
  } else if (command == "predict") {
    run_predict(config, out);
  } else {
    throw DomainError("unknown command '" + command + "'");
  }
}

std::string error_record(const std::exception& e) {
  ordered_json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = err->kind();
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  if (const auto* imp = dynamic_cast<const ImpossibleOutcome*>(&e)) {
    j["position"] = imp->position();
    j["probability"] = imp->probability();
  }
  if (const auto* conv = dynamic_cast<const ConvergenceError*>(&e)) j["best_residual"] = conv->best_residual();
  return j.dump();
}

}  // namespace swapent
