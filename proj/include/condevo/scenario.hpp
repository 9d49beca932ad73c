#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condevo/metrics.hpp"

namespace condevo {

/// Initial field state: completely mixed, or the Fock state |n>.
struct InitialState {
  std::optional<int> fock;  // empty for the mixed state

  std::string to_string() const;
  FieldDensityMatrix make(Dimension d) const;
};

struct ScenarioConfig {
  ModelParams params{cplx{0.0, 0.0}, 0.0, 0.0, 0.0, 0.0, Dimension(1)};
  AtomicLabel prepared = AtomicLabel::g;
  AtomicLabel detected = AtomicLabel::g;
  InitialState initial;
  Method method = Method::exact;
  int order = 1;
  double tau_max = 0.0;  // in units of |Omega| tau
  int steps = 0;
  int quad_steps = kDefaultQuadSteps;
  std::vector<double> snapshots;  // Omega tau values
  std::string out_prefix;
};

/// Parses a flat `key = value` document (one key per line, `#` comments).
/// Throws ParseError (with line number) or ValidationError (naming the key).
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Re-parseable config text; keys in a fixed order.
std::string format_config(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

struct ScenarioRow {
  double tau_omega;
  double p_g;
  double p_e;
  double info_gain;  // NaN when the detected branch is empty or nonphysical
  double fidelity;
  bool valid;
};

struct Snapshot {
  double tau_omega;
  CMatrix state;
};

struct ScenarioTimeseries {
  ScenarioConfig config;
  std::vector<ScenarioRow> rows;
  std::vector<Snapshot> snapshots;
};

inline constexpr std::string_view kCsvHeader = "tau_omega,P_g,P_e,info_gain,fidelity,validity";

/// Evaluates the configured solver on the uniform grid
/// tau_omega = tau_max * i / steps, i = 0..steps.
ScenarioTimeseries run_scenario(const ScenarioConfig& cfg);

std::string format_csv(const ScenarioTimeseries& ts);
std::string format_snapshot_json(Dimension d, const Snapshot& snap);

/// Writes <prefix>.csv, <prefix>.meta.cfg and <prefix>_tau<value>.json per
/// snapshot. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ScenarioTimeseries& ts);

struct ColumnDeviation {
  std::string column;
  double max_abs;
  double rms;
};

struct DeviationReport {
  std::vector<ColumnDeviation> columns;
  double epsilon_strong;  // kappa Gamma / gamma_eg
  double epsilon_weak;    // gamma_eg / (kappa Gamma)
};

/// Throws ConfigMismatch unless the configs differ only in method/order.
DeviationReport compare_methods(const ScenarioConfig& a, const ScenarioConfig& b);
DeviationReport compare_timeseries(const ScenarioTimeseries& a, const ScenarioTimeseries& b);
std::string format_deviation_csv(const DeviationReport& report);

/// Figure-style sweep cells: d in {2, 4, 6} for the mixed state,
/// n in {1, 3, 5} for a Fock state (with d raised to n + 1 when needed).
std::vector<ScenarioConfig> sweep_cells(const ScenarioConfig& base);

}  // namespace condevo
