#pragma once

// Experiment configuration, figure presets, sweeps and result files.
//
// Configs are JSON documents with frequencies given in Hz (plain
// frequency f); they are converted to angular frequencies 2 pi f on load.
// See docs/config.md for the schema.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqa/dynamics.hpp"
#include "bqa/hamiltonians.hpp"
#include "bqa/spectra.hpp"

namespace bqa {

// Malformed or out-of-range configuration; the message names the field path.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

inline constexpr int kMaxSites = 4;

enum class RunMode { Spectrum, Anneal, Sweep };
// How a dephasing rate given as "gamma_hz = f" becomes a rate in 1/s:
// angular -> 2 pi f, plain -> f.
enum class RateConvention { Angular, Plain };
enum class InitialState { Product, Ground };

const char* to_string(RunMode m);
const char* to_string(RateConvention c);
RateConvention rate_convention_from_string(const std::string& s);

struct RunSettings {
  RunMode mode = RunMode::Anneal;
  Frame frame = Frame::Rwa;
  EvolveOptions evolve;
  bool steps_explicit = false;   // n_steps given; otherwise chosen per frame
  RateConvention rate_convention = RateConvention::Angular;
  InitialState initial_state = InitialState::Product;
  int n_times = 201;             // spectrum samples
  int n_levels = 0;              // 0 -> full spectrum
};

struct SweepSettings {
  std::string parameter;         // e.g. "chain.gamma_hz" or "chain.ex_hz[1]"
  std::vector<double> values;
};

struct ExperimentConfig {
  ChainSpec chain;               // angular units
  RunSettings run;
  std::optional<SweepSettings> sweep;
  std::string label = "run";
  nlohmann::json source;         // document as given (Hz units)
};

ExperimentConfig parse_config_json(const nlohmann::json& doc);
ExperimentConfig parse_config(const std::filesystem::path& path);
// Canonical Hz-unit document; parse_config_json(serialize_config(c)) == c.
nlohmann::json serialize_config(const ExperimentConfig& config);

// Re-derive the config with one numeric field replaced.
ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter,
                                double value);

// Default fixed-step counts: the RWA frame uses 16000 steps, the lab frame 50
// steps per drive period.
int default_steps(const ChainSpec& chain, Frame frame);
EvolveOptions resolved_options(const ExperimentConfig& config);

struct AnnealResult {
  Trajectory trajectory;
  std::string integrator;
  int n_steps = 0;
  bool open_system = false;
};

AnnealResult run_anneal(const ExperimentConfig& config);

struct SpectrumResult {
  SpectrumTrack full;
  ParityTracks sectors;
  Gap min_gap_01{};               // ground / first excited
  Gap min_gap_even{};             // within the P = +1 sector
};

SpectrumResult run_spectrum(const ExperimentConfig& config);

struct SweepRow {
  double value = 0.0;
  double final_fidelity = 0.0;
  double min_gap_hz = 0.0;
  double min_gap_t_s = 0.0;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& parameter,
                                const std::vector<double>& values);

// --- output ---------------------------------------------------------------

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumTrack& track);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::string format_number(double v);

// Every physical parameter of a run, in Hz and rad/s.
nlohmann::json describe_parameters(const ExperimentConfig& config);

// --- presets ----------------------------------------------------------------

struct CurveOutput {
  std::string label;
  std::filesystem::path csv;
  double strain_hz = 0.0;          // Ex^(1)
  double final_fidelity = 0.0;
};

struct PresetResult {
  std::string name;
  std::vector<CurveOutput> curves;     // fidelity presets
  std::optional<SpectrumResult> spectrum;
  std::filesystem::path manifest;
};

struct PresetOverrides {
  std::optional<Frame> frame;
  std::optional<int> n_steps;
  std::optional<RateConvention> rate_convention;
};

const std::vector<std::string>& preset_names();

// Configs of the named preset, one per curve (fig2: a single spectrum config).
std::vector<ExperimentConfig> preset_configs(const std::string& name);

PresetResult run_preset(const std::string& name, const std::filesystem::path& out_dir,
                        const PresetOverrides& overrides = {});

// Runs a config file's mode and writes results plus manifest.json to out_dir.
void run_config(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace bqa
