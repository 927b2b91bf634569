#include "bqa/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "bqa/spin.hpp"

namespace bqa {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Ex^(1) values of the fidelity figures (Hz).
constexpr double kFigureStrainsHz[] = {0.0, 8e3, 16e3};

}  // namespace

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Spectrum: return "spectrum";
    case RunMode::Anneal: return "anneal";
    case RunMode::Sweep: return "sweep";
  }
  return "?";
}

const char* to_string(RateConvention c) {
  return c == RateConvention::Angular ? "angular" : "plain";
}

RateConvention rate_convention_from_string(const std::string& s) {
  if (s == "angular") return RateConvention::Angular;
  if (s == "plain") return RateConvention::Plain;
  throw ConfigError("rate convention must be 'angular' or 'plain' (got '" + s + "')");
}

namespace {

RunMode mode_from_string(const std::string& s, const std::string& where) {
  if (s == "spectrum") return RunMode::Spectrum;
  if (s == "anneal") return RunMode::Anneal;
  if (s == "sweep") return RunMode::Sweep;
  throw ConfigError(where + ": mode must be spectrum, anneal or sweep (got '" + s + "')");
}

// --- schema helpers ----------------------------------------------------------

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + "." + key + ": unknown field");
  }
}

const json& require_object(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key)) throw ConfigError(where + "." + key + ": missing");
  const json& v = doc.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + ": must be an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const std::string path = where + "." + key;
  if (!obj.contains(key)) throw ConfigError(path + ": missing");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + ": must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + ": must be finite");
  return d;
}

double number_or(const json& obj, const std::string& key, const std::string& where, double def) {
  return obj.contains(key) ? number(obj, key, where) : def;
}

double non_negative(const json& obj, const std::string& key, const std::string& where,
                    double def) {
  const double d = number_or(obj, key, where, def);
  if (d < 0.0) throw ConfigError(where + "." + key + ": must be >= 0");
  return d;
}

int integer_or(const json& obj, const std::string& key, const std::string& where, int def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": must be an integer");
  return v.get<int>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& where,
                      const std::string& def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": must be a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": must be a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
      throw ConfigError(path + "[" + std::to_string(i) + "]: must be a finite number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Scalar -> nearest-neighbour value with 1/r^exponent fill; list of lists ->
// explicit symmetric matrix.
CouplingMatrix coupling_matrix(const json& chain, const std::string& key, int n,
                               double exponent, const std::string& where) {
  const std::string path = where + "." + key;
  if (!chain.contains(key)) return CouplingMatrix::Zero(n, n);
  const json& v = chain.at(key);
  if (v.is_number()) {
    const double nn = v.get<double>();
    if (!std::isfinite(nn) || nn < 0.0) throw ConfigError(path + ": must be finite and >= 0");
    if (n < 2) return CouplingMatrix::Zero(n, n);
    return kTwoPi * dipolar_couplings(nn, n, exponent);
  }
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    throw ConfigError(path + ": must be a number or a " + std::to_string(n) + "x" +
                      std::to_string(n) + " matrix");
  }
  CouplingMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    const auto row = number_list(v[a], path + "[" + std::to_string(a) + "]");
    if (static_cast<int>(row.size()) != n) {
      throw ConfigError(path + "[" + std::to_string(a) + "]: row must have " +
                        std::to_string(n) + " entries");
    }
    for (int b = 0; b < n; ++b) {
      if (row[b] < 0.0) throw ConfigError(path + ": entries must be >= 0");
      m(a, b) = kTwoPi * row[b];
    }
  }
  for (int a = 0; a < n; ++a) {
    if (m(a, a) != 0.0) throw ConfigError(path + ": diagonal must be zero");
    for (int b = a + 1; b < n; ++b) {
      if (m(a, b) != m(b, a)) throw ConfigError(path + ": matrix must be symmetric");
    }
  }
  return m;
}

std::vector<double> strains(const json& chain, int n, const std::string& where) {
  const bool list = chain.contains("ex_hz");
  const bool base = chain.contains("ex_base_hz");
  if (list && base) throw ConfigError(where + ": give either ex_hz or ex_base_hz, not both");
  std::vector<double> ex(n, 0.0);
  if (list) {
    const auto v = number_list(chain.at("ex_hz"), where + ".ex_hz");
    if (static_cast<int>(v.size()) != n) {
      throw ConfigError(where + ".ex_hz: must have num_sites = " + std::to_string(n) +
                        " entries");
    }
    ex = v;
  } else if (base) {
    ex[0] = number(chain, "ex_base_hz", where);
    std::vector<double> ratios;
    if (chain.contains("ex_ratios")) ratios = number_list(chain.at("ex_ratios"), where + ".ex_ratios");
    if (static_cast<int>(ratios.size()) != n - 1) {
      throw ConfigError(where + ".ex_ratios: must have num_sites - 1 = " +
                        std::to_string(n - 1) + " entries");
    }
    for (int s = 1; s < n; ++s) ex[s] = ex[s - 1] * ratios[s - 1];
  } else if (chain.contains("ex_ratios")) {
    throw ConfigError(where + ".ex_ratios: requires ex_base_hz");
  }
  for (int s = 0; s < n; ++s) {
    if (ex[s] < 0.0) throw ConfigError(where + ".ex_hz[" + std::to_string(s) + "]: must be >= 0");
    ex[s] *= kTwoPi;
  }
  return ex;
}

ChainSpec parse_chain(const json& chain, RateConvention rate) {
  const std::string where = "chain";
  reject_unknown(chain, where,
                 {"num_sites", "d0_hz", "omega_hz", "d0_prime_max_hz", "ex_hz", "ex_base_hz",
                  "ex_ratios", "j_ff_hz", "j_zz_hz", "dipolar_exponent", "b_amp_hz",
                  "t_total_s", "sigma_s", "sigma_over_t", "gamma_hz"});
  ChainSpec spec;
  spec.num_sites = integer_or(chain, "num_sites", where, -1);
  if (!chain.contains("num_sites")) throw ConfigError("chain.num_sites: missing");
  if (spec.num_sites < 1 || spec.num_sites > kMaxSites) {
    throw ConfigError("chain.num_sites: must lie in [1, " + std::to_string(kMaxSites) + "]");
  }
  const int n = spec.num_sites;
  spec.t_total = number(chain, "t_total_s", where);
  if (!(spec.t_total > 0.0)) throw ConfigError("chain.t_total_s: must be > 0");

  const bool has_sigma = chain.contains("sigma_s");
  const bool has_ratio = chain.contains("sigma_over_t");
  if (has_sigma == has_ratio) throw ConfigError("chain: give exactly one of sigma_s, sigma_over_t");
  spec.sigma = has_sigma ? number(chain, "sigma_s", where)
                         : number(chain, "sigma_over_t", where) * spec.t_total;
  if (!(spec.sigma > 0.0)) {
    throw ConfigError(std::string("chain.") + (has_sigma ? "sigma_s" : "sigma_over_t") +
                      ": must be > 0");
  }

  spec.d0 = kTwoPi * non_negative(chain, "d0_hz", where, 40e6);
  spec.omega = kTwoPi * non_negative(chain, "omega_hz", where, spec.d0 / kTwoPi);
  spec.d0_prime_max = kTwoPi * number_or(chain, "d0_prime_max_hz", where, 0.0);
  spec.b_amp = kTwoPi * non_negative(chain, "b_amp_hz", where, 0.0);
  const double gamma_hz = non_negative(chain, "gamma_hz", where, 0.0);
  spec.gamma = rate == RateConvention::Angular ? kTwoPi * gamma_hz : gamma_hz;
  spec.ex = strains(chain, n, where);
  const double exponent = number_or(chain, "dipolar_exponent", where, 3.0);
  spec.j_ff = coupling_matrix(chain, "j_ff_hz", n, exponent, where);
  spec.j_zz = coupling_matrix(chain, "j_zz_hz", n, exponent, where);
  spec.validate();
  return spec;
}

RunSettings parse_run(const json& doc) {
  RunSettings run;
  if (!doc.contains("run")) return run;
  const json& r = require_object(doc, "run", "config");
  const std::string where = "run";
  reject_unknown(r, where,
                 {"mode", "frame", "integrator", "n_steps", "n_out", "rate_convention",
                  "initial_state", "n_times", "n_levels", "rk_rel_tol", "rk_abs_tol"});
  run.mode = mode_from_string(string_or(r, "mode", where, "anneal"), "run.mode");
  try {
    run.frame = frame_from_string(string_or(r, "frame", where, "rwa"));
    run.evolve.integrator = integrator_from_string(string_or(r, "integrator", where, "midpoint"));
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(std::string("run: ") + e.what());
  }
  if (r.contains("n_steps")) {
    run.evolve.n_steps = integer_or(r, "n_steps", where, 0);
    run.steps_explicit = true;
    if (run.evolve.n_steps < 1) throw ConfigError("run.n_steps: must be >= 1");
  }
  run.evolve.n_out = integer_or(r, "n_out", where, 101);
  if (run.evolve.n_out < 1) throw ConfigError("run.n_out: must be >= 1");
  run.rate_convention = rate_convention_from_string(string_or(r, "rate_convention", where, "angular"));
  const std::string init = string_or(r, "initial_state", where, "product");
  if (init == "product") {
    run.initial_state = InitialState::Product;
  } else if (init == "ground") {
    run.initial_state = InitialState::Ground;
  } else {
    throw ConfigError("run.initial_state: must be 'product' or 'ground'");
  }
  run.n_times = integer_or(r, "n_times", where, 201);
  if (run.n_times < 1) throw ConfigError("run.n_times: must be >= 1");
  run.n_levels = integer_or(r, "n_levels", where, 0);
  if (run.n_levels < 0) throw ConfigError("run.n_levels: must be >= 0");
  run.evolve.rk_rel_tol = number_or(r, "rk_rel_tol", where, run.evolve.rk_rel_tol);
  run.evolve.rk_abs_tol = number_or(r, "rk_abs_tol", where, run.evolve.rk_abs_tol);
  return run;
}

// "chain.ex_hz[1]" -> JSON pointer "/chain/ex_hz/1".
json::json_pointer parameter_pointer(const std::string& parameter) {
  if (parameter.empty()) throw ConfigError("sweep.parameter: empty path");
  std::string ptr;
  std::stringstream ss(parameter);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("sweep.parameter: malformed path '" + parameter + "'");
    std::string key = part;
    std::string index;
    if (const auto lb = part.find('['); lb != std::string::npos) {
      if (part.back() != ']') throw ConfigError("sweep.parameter: malformed index in '" + parameter + "'");
      key = part.substr(0, lb);
      index = part.substr(lb + 1, part.size() - lb - 2);
      if (index.empty() || index.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("sweep.parameter: malformed index in '" + parameter + "'");
      }
    }
    ptr += "/" + key;
    if (!index.empty()) ptr += "/" + index;
  }
  return json::json_pointer(ptr);
}

}  // namespace

ExperimentConfig parse_config_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "config", {"label", "chain", "run", "sweep"});
  ExperimentConfig config;
  config.source = doc;
  config.label = string_or(doc, "label", "config", "run");
  if (config.label.empty() || config.label.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("config.label: must be a non-empty file-name-safe string");
  }
  config.run = parse_run(doc);
  config.chain = parse_chain(require_object(doc, "chain", "config"), config.run.rate_convention);
  config.chain.frame = config.run.frame;
  if (doc.contains("sweep")) {
    const json& s = require_object(doc, "sweep", "config");
    reject_unknown(s, "sweep", {"parameter", "values"});
    SweepSettings sweep;
    sweep.parameter = string_or(s, "parameter", "sweep", "");
    if (sweep.parameter.empty()) throw ConfigError("sweep.parameter: missing");
    if (!s.contains("values")) throw ConfigError("sweep.values: missing");
    sweep.values = number_list(s.at("values"), "sweep.values");
    config.sweep = std::move(sweep);
  }
  if (config.run.mode == RunMode::Sweep && !config.sweep) {
    throw ConfigError("sweep: required when run.mode = sweep");
  }
  return config;
}

ExperimentConfig parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config_json(doc);
}

namespace {

json matrix_hz(const CouplingMatrix& m) {
  json rows = json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(m(a, b) / kTwoPi);
    rows.push_back(row);
  }
  return rows;
}

json vector_hz(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(x / kTwoPi);
  return out;
}

double gamma_hz(const ChainSpec& c, RateConvention rate) {
  return rate == RateConvention::Angular ? c.gamma / kTwoPi : c.gamma;
}

}  // namespace

json serialize_config(const ExperimentConfig& config) {
  const ChainSpec& c = config.chain;
  const RunSettings& r = config.run;
  json doc;
  doc["label"] = config.label;
  doc["chain"] = {
      {"num_sites", c.num_sites},
      {"d0_hz", c.d0 / kTwoPi},
      {"omega_hz", c.omega / kTwoPi},
      {"d0_prime_max_hz", c.d0_prime_max / kTwoPi},
      {"ex_hz", vector_hz(c.ex)},
      {"b_amp_hz", c.b_amp / kTwoPi},
      {"t_total_s", c.t_total},
      {"sigma_s", c.sigma},
      {"gamma_hz", gamma_hz(c, r.rate_convention)},
  };
  if (c.num_sites > 1) {
    doc["chain"]["j_ff_hz"] = matrix_hz(c.j_ff);
    doc["chain"]["j_zz_hz"] = matrix_hz(c.j_zz);
  }
  doc["run"] = {
      {"mode", to_string(r.mode)},
      {"frame", to_string(r.frame)},
      {"integrator", to_string(r.evolve.integrator)},
      {"n_out", r.evolve.n_out},
      {"rate_convention", to_string(r.rate_convention)},
      {"initial_state", r.initial_state == InitialState::Product ? "product" : "ground"},
      {"n_times", r.n_times},
      {"n_levels", r.n_levels},
      {"rk_rel_tol", r.evolve.rk_rel_tol},
      {"rk_abs_tol", r.evolve.rk_abs_tol},
  };
  if (r.steps_explicit) doc["run"]["n_steps"] = r.evolve.n_steps;
  if (config.sweep) {
    doc["sweep"] = {{"parameter", config.sweep->parameter}, {"values", config.sweep->values}};
  }
  return doc;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter,
                                double value) {
  const json::json_pointer ptr = parameter_pointer(parameter);
  json doc = config.source.is_null() ? serialize_config(config) : config.source;
  if (!doc.contains(ptr) || !doc.at(ptr).is_number()) {
    throw ConfigError("sweep.parameter: '" + parameter + "' does not name a numeric config field");
  }
  doc[ptr] = value;
  return parse_config_json(doc);
}

int default_steps(const ChainSpec& chain, Frame frame) {
  if (frame == Frame::Rwa) return 16000;
  const double periods = chain.omega * chain.t_total / kTwoPi;
  // ceil with slack so that an integral period count is not bumped by round-off
  return std::max(4000, static_cast<int>(std::ceil(50.0 * periods - 1e-6)));
}

EvolveOptions resolved_options(const ExperimentConfig& config) {
  EvolveOptions opts = config.run.evolve;
  if (!config.run.steps_explicit) opts.n_steps = default_steps(config.chain, config.run.frame);
  if (config.run.frame == Frame::Lab) opts.max_step = lab_frame_max_step(config.chain.omega);
  return opts;
}

AnnealResult run_anneal(const ExperimentConfig& config) {
  const ChainSpec& chain = config.chain;
  const ChainHamiltonian model(chain);
  const HamiltonianFn h = model.function(config.run.frame);
  const EvolveOptions opts = resolved_options(config);
  const Targets targets = Targets::for_chain(chain.num_sites);

  StateVector psi0 = targets.all_zero;
  if (config.run.initial_state == InitialState::Ground) {
    psi0 = instantaneous_ground_state(h(0.0), targets.parity, +1);
  }

  AnnealResult result;
  result.integrator = to_string(opts.integrator);
  result.n_steps = opts.n_steps;
  if (chain.gamma > 0.0) {
    result.open_system = true;
    const auto jumps = dephasing_jump_ops(chain.num_sites);
    result.trajectory = evolve_lindblad(h, DensityMatrix::pure(psi0), jumps, chain.gamma,
                                        chain.t_total, opts, &targets)
                            .trajectory;
  } else {
    result.trajectory = evolve_schrodinger(h, psi0, chain.t_total, opts, &targets).trajectory;
  }
  return result;
}

SpectrumResult run_spectrum(const ExperimentConfig& config) {
  const ChainSpec& chain = config.chain;
  const int n_levels = config.run.n_levels == 0 ? static_cast<int>(chain.dim()) : config.run.n_levels;
  SpectrumResult result;
  result.full = track_spectrum(chain, config.run.n_times, n_levels);
  result.sectors = parity_resolved_track(chain, config.run.n_times);
  if (result.full.n_levels() >= 2) result.min_gap_01 = min_gap(result.full, 0, 1);
  if (result.sectors.even.n_levels() >= 2) result.min_gap_even = min_gap(result.sectors.even, 0, 1);
  return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& parameter,
                                const std::vector<double>& values) {
  // Validate the path up front so an invalid path fails even for an empty list.
  {
    const json::json_pointer ptr = parameter_pointer(parameter);
    const json doc = config.source.is_null() ? serialize_config(config) : config.source;
    if (!doc.contains(ptr) || !doc.at(ptr).is_number()) {
      throw ConfigError("sweep.parameter: '" + parameter + "' does not name a numeric config field");
    }
  }
  auto one = [&config, &parameter](double value) {
    ExperimentConfig c = with_parameter(config, parameter, value);
    c.run.mode = RunMode::Anneal;
    SweepRow row;
    row.value = value;
    row.final_fidelity = run_anneal(c).trajectory.final_fidelity();
    const SpectrumTrack track = track_spectrum(c.chain, c.run.n_times, 2);
    const Gap g = min_gap(track, 0, 1);
    row.min_gap_hz = g.gap / kTwoPi;
    row.min_gap_t_s = g.t_at;
    return row;
  };

  std::vector<SweepRow> rows(values.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < values.size(); start += workers) {
    const std::size_t stop = std::min(values.size(), start + workers);
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, one, values[i]));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

// --- output ---------------------------------------------------------------------

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& tr) {
  std::ofstream out = open_out(path);
  out << "t_s,fidelity_ghz_plus,fidelity_ghz_minus,parity_expect,purity,pop_all_zero,"
         "pop_ghz_manifold\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << format_number(tr.times[i]) << ',' << format_number(tr.fidelity_plus[i]) << ','
        << format_number(tr.fidelity_minus[i]) << ',' << format_number(tr.parity_expect[i]) << ','
        << format_number(tr.purity[i]) << ',' << format_number(tr.pop_all_zero[i]) << ','
        << format_number(tr.pop_ghz_manifold[i]) << '\n';
  }
}

void write_spectrum_csv(const fs::path& path, const SpectrumTrack& track) {
  std::ofstream out = open_out(path);
  out << "t_s";
  for (Eigen::Index k = 0; k < track.n_levels(); ++k) out << ",level_" << k << "_hz";
  out << '\n';
  for (Eigen::Index i = 0; i < track.n_times(); ++i) {
    out << format_number(track.times[i]);
    for (Eigen::Index k = 0; k < track.n_levels(); ++k) {
      out << ',' << format_number(track.levels(i, k) / kTwoPi);
    }
    out << '\n';
  }
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out = open_out(path);
  out << "value,final_fidelity,min_gap_hz,min_gap_t_s\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.value) << ',' << format_number(r.final_fidelity) << ','
        << format_number(r.min_gap_hz) << ',' << format_number(r.min_gap_t_s) << '\n';
  }
}

json describe_parameters(const ExperimentConfig& config) {
  const ChainSpec& c = config.chain;
  const EvolveOptions opts = resolved_options(config);
  auto both = [](double angular) { return json{{"hz", angular / kTwoPi}, {"rad_s", angular}}; };
  json ex = json::array();
  for (double e : c.ex) ex.push_back(both(e));
  json p = {
      {"num_sites", c.num_sites},
      {"d0", both(c.d0)},
      {"omega", both(c.omega)},
      {"d0_prime_max", both(c.d0_prime_max)},
      {"ex", ex},
      {"j_ff_hz", matrix_hz(c.j_ff)},
      {"j_zz_hz", matrix_hz(c.j_zz)},
      {"b_amp", both(c.b_amp)},
      {"sigma_s", c.sigma},
      {"t_total_s", c.t_total},
      {"gamma", {{"hz", gamma_hz(c, config.run.rate_convention)}, {"per_s", c.gamma}}},
      {"rate_convention", to_string(config.run.rate_convention)},
      {"frame", to_string(config.run.frame)},
      {"integrator", to_string(opts.integrator)},
      {"n_steps", opts.n_steps},
      {"n_out", opts.n_out},
      {"initial_state", config.run.initial_state == InitialState::Product ? "product" : "ground"},
      {"n_times", config.run.n_times},
  };
  return p;
}

// --- presets -------------------------------------------------------------------

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig5", "fig6"};
  return names;
}

namespace {

json base_chain(int num_sites) {
  return {
      {"num_sites", num_sites},
      {"d0_hz", 40e6},
      {"omega_hz", 40e6},
      {"j_ff_hz", 30e3},
      {"j_zz_hz", 60e3},
      {"t_total_s", 1e-4},
      {"sigma_over_t", 0.2},
  };
}

std::string strain_label(const std::string& fig, double strain_hz) {
  return fig + "_E" + std::to_string(static_cast<int>(std::lround(strain_hz / 1e3))) + "kHz";
}

// Fidelity figures: (num_sites, strain ratios, gamma_hz).
struct FidelityFigure {
  int num_sites;
  std::vector<double> ratios;
  double gamma_hz;
};

std::optional<FidelityFigure> fidelity_figure(const std::string& name) {
  if (name == "fig3") return FidelityFigure{2, {1.2}, 0.0};
  if (name == "fig4") return FidelityFigure{2, {1.2}, 500.0};
  if (name == "fig5") return FidelityFigure{3, {1.2, 1.2}, 0.0};
  if (name == "fig6") return FidelityFigure{3, {1.2, 1.4}, 500.0};
  return std::nullopt;
}

std::vector<json> preset_documents(const std::string& name) {
  if (name == "fig2") {
    json chain = base_chain(2);
    chain["d0_prime_max_hz"] = 400e3;
    // Site 1 at 1 kHz, site 2 at 1.2 kHz.
    chain["ex_hz"] = {1e3, 1.2e3};
    chain["b_amp_hz"] = 100e3;
    return {{{"label", "fig2"},
             {"chain", chain},
             {"run", {{"mode", "spectrum"}, {"frame", "rwa"}, {"n_times", 201}}}}};
  }
  const auto fig = fidelity_figure(name);
  if (!fig) throw ConfigError("unknown preset '" + name + "' (expected fig2..fig6)");
  std::vector<json> docs;
  for (double strain : kFigureStrainsHz) {
    json chain = base_chain(fig->num_sites);
    chain["d0_prime_max_hz"] = 200e3;
    chain["b_amp_hz"] = 340e3;
    chain["ex_base_hz"] = strain;
    chain["ex_ratios"] = fig->ratios;
    chain["gamma_hz"] = fig->gamma_hz;
    // "gamma = 0.5 kHz" is read as a plain rate of 500 1/s; see README.
    docs.push_back({{"label", strain_label(name, strain)},
                    {"chain", chain},
                    {"run",
                     {{"mode", "anneal"},
                      {"frame", "rwa"},
                      {"n_out", 201},
                      {"rate_convention", "plain"}}}});
  }
  return docs;
}

void apply_overrides(json& doc, const PresetOverrides& o) {
  if (o.frame) doc["run"]["frame"] = to_string(*o.frame);
  if (o.n_steps) doc["run"]["n_steps"] = *o.n_steps;
  if (o.rate_convention) doc["run"]["rate_convention"] = to_string(*o.rate_convention);
}

json spectrum_summary(const ExperimentConfig& config, const SpectrumResult& s) {
  const double t_total = config.chain.t_total;
  json out = {
      {"min_gap_01_hz", s.min_gap_01.gap / kTwoPi},
      {"min_gap_01_t_s", s.min_gap_01.t_at},
      {"min_gap_even_hz", s.min_gap_even.gap / kTwoPi},
      {"min_gap_even_t_s", s.min_gap_even.t_at},
  };
  if (s.full.n_levels() >= 2) {
    out["gap_01_at_half_T_hz"] = gap_at(s.full, 0.5 * t_total, 0, 1) / kTwoPi;
    out["gap_01_at_0p9_T_hz"] = gap_at(s.full, 0.9 * t_total, 0, 1) / kTwoPi;
  }
  if (s.sectors.even.n_levels() >= 2) {
    out["gap_even_at_0p9_T_hz"] = gap_at(s.sectors.even, 0.9 * t_total, 0, 1) / kTwoPi;
  }
  return out;
}

json write_spectrum_outputs(const ExperimentConfig& config, const SpectrumResult& s,
                            const fs::path& out_dir) {
  const std::string levels = config.label + "_levels.csv";
  const std::string even = config.label + "_even.csv";
  const std::string odd = config.label + "_odd.csv";
  write_spectrum_csv(out_dir / levels, s.full);
  write_spectrum_csv(out_dir / even, s.sectors.even);
  write_spectrum_csv(out_dir / odd, s.sectors.odd);
  return {
      {"kind", "spectrum"},
      {"label", config.label},
      {"time_unit", "s"},
      {"energy_unit", "Hz"},
      {"files",
       {{{"role", "levels"}, {"csv", levels}},
        {{"role", "even_sector"}, {"csv", even}},
        {{"role", "odd_sector"}, {"csv", odd}}}},
      {"summary", spectrum_summary(config, s)},
      {"parameters", describe_parameters(config)},
  };
}

}  // namespace

std::vector<ExperimentConfig> preset_configs(const std::string& name) {
  std::vector<ExperimentConfig> configs;
  for (const json& doc : preset_documents(name)) configs.push_back(parse_config_json(doc));
  return configs;
}

PresetResult run_preset(const std::string& name, const fs::path& out_dir,
                        const PresetOverrides& overrides) {
  std::vector<json> docs = preset_documents(name);
  ensure_dir(out_dir);
  PresetResult result;
  result.name = name;
  result.manifest = out_dir / "manifest.json";
  json manifest = {{"preset", name}};

  if (name == "fig2") {
    apply_overrides(docs[0], overrides);
    const ExperimentConfig config = parse_config_json(docs[0]);
    const SpectrumResult s = run_spectrum(config);
    json entry = write_spectrum_outputs(config, s, out_dir);
    manifest.update(entry);
    result.spectrum = s;
  } else {
    manifest["kind"] = "fidelity";
    manifest["time_unit"] = "s";
    manifest["curves"] = json::array();
    for (json& doc : docs) {
      apply_overrides(doc, overrides);
      const ExperimentConfig config = parse_config_json(doc);
      const AnnealResult run = run_anneal(config);
      CurveOutput curve;
      curve.label = config.label;
      curve.csv = out_dir / (config.label + ".csv");
      curve.strain_hz = config.chain.ex[0] / kTwoPi;
      curve.final_fidelity = run.trajectory.final_fidelity();
      write_trajectory_csv(curve.csv, run.trajectory);
      manifest["curves"].push_back({
          {"label", curve.label},
          {"csv", curve.csv.filename().string()},
          {"strain_hz", curve.strain_hz},
          {"final_fidelity", curve.final_fidelity},
          {"open_system", run.open_system},
          {"parameters", describe_parameters(config)},
      });
      result.curves.push_back(curve);
    }
  }
  write_json(result.manifest, manifest);
  return result;
}

void run_config(const ExperimentConfig& config, const fs::path& out_dir) {
  ensure_dir(out_dir);
  json manifest = {{"config", config.source.is_null() ? serialize_config(config) : config.source},
                   {"mode", to_string(config.run.mode)}};
  switch (config.run.mode) {
    case RunMode::Spectrum: {
      manifest.update(write_spectrum_outputs(config, run_spectrum(config), out_dir));
      break;
    }
    case RunMode::Anneal: {
      const AnnealResult run = run_anneal(config);
      const std::string csv = config.label + ".csv";
      write_trajectory_csv(out_dir / csv, run.trajectory);
      manifest["kind"] = "fidelity";
      manifest["time_unit"] = "s";
      manifest["curves"] = {{{"label", config.label},
                             {"csv", csv},
                             {"strain_hz", config.chain.ex[0] / kTwoPi},
                             {"final_fidelity", run.trajectory.final_fidelity()},
                             {"open_system", run.open_system},
                             {"parameters", describe_parameters(config)}}};
      break;
    }
    case RunMode::Sweep: {
      const SweepSettings& sweep = *config.sweep;
      const auto rows = run_sweep(config, sweep.parameter, sweep.values);
      const std::string csv = config.label + "_sweep.csv";
      write_sweep_csv(out_dir / csv, rows);
      manifest["kind"] = "sweep";
      manifest["parameter"] = sweep.parameter;
      manifest["csv"] = csv;
      manifest["parameters"] = describe_parameters(config);
      break;
    }
  }
  write_json(out_dir / "manifest.json", manifest);
}

}  // namespace bqa
