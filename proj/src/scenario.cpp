#include "condevo/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "condevo/error.hpp"

namespace condevo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void invalid(std::string_view key, const std::string& why) {
  throw Error(ErrorCode::ValidationError, "invalid value for '" + std::string(key) + "': " + why);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    invalid(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    invalid(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

InitialState parse_initial(std::string_view text) {
  if (text == "mixed") return {};
  if (text.starts_with("fock:")) return {parse_int("initial", text.substr(5))};
  invalid("initial", "expected 'mixed' or 'fock:<n>', got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) invalid(key, "empty list item");
    out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_tau_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Called with the row index and its time t; index -1 marks an off-grid time.
using SolverFn = std::function<ConditionalPropagators(int, double)>;

SolverFn make_solver(const ScenarioConfig& cfg) {
  const ModelParams p = cfg.params;
  const AtomicLabel prep = cfg.prepared;
  const double h = cfg.tau_max / cfg.steps / std::abs(p.omega);
  switch (cfg.method) {
    case Method::exact: {
      auto solver = std::make_shared<ExactSolver>(p);
      return [solver, prep](int, double t) { return solver->conditional(prep, t); };
    }
    case Method::strong: {
      const int order = cfg.order, quad = cfg.quad_steps;
      return [p, prep, order, quad](int, double t) { return strong_perturbative(p, prep, t, order, quad); };
    }
    case Method::weak: {
      auto solver = std::make_shared<WeakSolver>(p);
      const bool valid = weak_regime_valid(p);
      const int order = cfg.order;
      // Rows are visited in increasing order, as the stepper requires.
      auto stepper = std::make_shared<WeakFirstOrderStepper>(*solver, h, prep, cfg.quad_steps);
      const int quad = cfg.quad_steps;
      return [solver, stepper, prep, order, quad, valid](int i, double t) {
        const BlockPropagator g = order == 0 ? solver->zero_order(t)
                                  : i < 0    ? solver->first_order(t, prep, quad)
                                             : stepper->at(i);
        return column(g, prep, t, Method::weak, order, valid);
      };
    }
  }
  throw Error(ErrorCode::ValidationError, "unknown method");
}

bool is_state_failure(ErrorCode code) {
  return code == ErrorCode::NonphysicalState || code == ErrorCode::NonphysicalProbability ||
         code == ErrorCode::NonHermitianInput || code == ErrorCode::InvalidState;
}

[[noreturn]] void rethrow_at(const Error& e, double tau) {
  std::ostringstream msg;
  msg << "at tau_omega = " << tau << ": " << e.what();
  throw Error(e.code(), msg.str());
}

double raw_probability(const Superoperator& m, const FieldDensityMatrix& rho) {
  return m.apply(rho.matrix()).trace().real();
}

}  // namespace

std::string InitialState::to_string() const { return fock ? "fock:" + std::to_string(*fock) : "mixed"; }

FieldDensityMatrix InitialState::make(Dimension d) const { return fock ? fock_state(d, *fock) : mixed_state(d); }

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
    if (value.empty() && key != "snapshots") {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    }
    if (!entries.emplace(key, std::make_pair(value, line_no)).second) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    if (text.empty()) break;
  }

  static const std::set<std::string> known{"omega",  "omega_im", "delta",    "gamma_phase", "gamma_ge",
                                           "gamma_eg", "d",      "prepared", "detected",    "initial",
                                           "method", "order",    "tau_max",  "steps",       "quad_steps",
                                           "snapshots", "out_prefix"};
  for (const auto& [key, value] : entries) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::ValidationError,
                  "unknown key '" + key + "' on line " + std::to_string(value.second));
    }
  }
  auto required = [&](const std::string& key) -> const std::string& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw Error(ErrorCode::ValidationError, "missing required key '" + key + "'");
    return it->second.first;
  };
  auto optional = [&](const std::string& key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.first;
  };

  ScenarioConfig cfg;
  const double omega_re = parse_double("omega", required("omega"));
  const double omega_im = optional("omega_im") ? parse_double("omega_im", *optional("omega_im")) : 0.0;
  const int d = parse_int("d", required("d"));
  if (d < 1) invalid("d", "must be >= 1");
  cfg.params = ModelParams{cplx{omega_re, omega_im},
                           parse_double("delta", required("delta")),
                           parse_double("gamma_phase", required("gamma_phase")),
                           parse_double("gamma_ge", required("gamma_ge")),
                           parse_double("gamma_eg", required("gamma_eg")),
                           Dimension(d)};
  try {
    cfg.prepared = parse_atomic_label(required("prepared"));
  } catch (const Error&) {
    invalid("prepared", "expected g or e");
  }
  try {
    cfg.detected = parse_atomic_label(required("detected"));
  } catch (const Error&) {
    invalid("detected", "expected g or e");
  }
  cfg.initial = parse_initial(required("initial"));
  try {
    cfg.method = parse_method(required("method"));
  } catch (const Error&) {
    invalid("method", "expected exact, strong or weak");
  }
  if (const auto* v = optional("order")) cfg.order = parse_int("order", *v);
  cfg.tau_max = parse_double("tau_max", required("tau_max"));
  cfg.steps = parse_int("steps", required("steps"));
  if (const auto* v = optional("quad_steps")) cfg.quad_steps = parse_int("quad_steps", *v);
  if (const auto* v = optional("snapshots")) cfg.snapshots = parse_list("snapshots", *v);
  cfg.out_prefix = optional("out_prefix") ? *optional("out_prefix") : "scenario";
  validate(cfg);
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  const ModelParams& p = cfg.params;
  if (std::abs(p.omega) == 0.0) invalid("omega", "coupling must be nonzero (time axis is |omega| tau)");
  if (p.gamma_phase < 0.0) invalid("gamma_phase", "must be >= 0");
  if (p.gamma_ge < 0.0) invalid("gamma_ge", "must be >= 0");
  if (p.gamma_eg < 0.0) invalid("gamma_eg", "must be >= 0");
  if (p.gamma_phase == 0.0 && p.delta == 0.0) invalid("gamma_phase", "gamma_phase and delta cannot both be 0");
  if (cfg.initial.fock && (*cfg.initial.fock < 0 || *cfg.initial.fock > p.d.value() - 1)) {
    invalid("initial", "Fock index must lie in [0, d-1]");
  }
  if (cfg.order != 0 && cfg.order != 1) invalid("order", "must be 0 or 1");
  if (!(cfg.tau_max > 0.0)) invalid("tau_max", "must be > 0");
  if (cfg.steps < 2) invalid("steps", "must be >= 2");
  if (cfg.quad_steps < 8 || cfg.quad_steps % 2 != 0) invalid("quad_steps", "must be even and >= 8");
  for (double s : cfg.snapshots) {
    if (s < 0.0 || s > cfg.tau_max) invalid("snapshots", "values must lie in [0, tau_max]");
  }
  if (cfg.method == Method::strong && cfg.order == 1 && p.gamma_eg == 0.0) {
    invalid("gamma_eg", "strong first order needs gamma_eg > 0");
  }
  if (cfg.out_prefix.empty()) invalid("out_prefix", "must not be empty");
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const ScenarioConfig& cfg) {
  const ModelParams& p = cfg.params;
  std::ostringstream out;
  out << "omega = " << format_exact(p.omega.real()) << "\n";
  if (p.omega.imag() != 0.0) out << "omega_im = " << format_exact(p.omega.imag()) << "\n";
  out << "delta = " << format_exact(p.delta) << "\n"
      << "gamma_phase = " << format_exact(p.gamma_phase) << "\n"
      << "gamma_ge = " << format_exact(p.gamma_ge) << "\n"
      << "gamma_eg = " << format_exact(p.gamma_eg) << "\n"
      << "d = " << p.d.value() << "\n"
      << "prepared = " << to_string(cfg.prepared) << "\n"
      << "detected = " << to_string(cfg.detected) << "\n"
      << "initial = " << cfg.initial.to_string() << "\n"
      << "method = " << to_string(cfg.method) << "\n"
      << "order = " << cfg.order << "\n"
      << "tau_max = " << format_exact(cfg.tau_max) << "\n"
      << "steps = " << cfg.steps << "\n"
      << "quad_steps = " << cfg.quad_steps << "\n";
  out << "snapshots =";
  for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) {
    out << (i == 0 ? " " : ", ") << format_exact(cfg.snapshots[i]);
  }
  out << "\n"
      << "out_prefix = " << cfg.out_prefix << "\n";
  return out.str();
}

ScenarioTimeseries run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const SolverFn solver = make_solver(cfg);
  const FieldDensityMatrix rho0 = cfg.initial.make(cfg.params.d);
  const double omega = std::abs(cfg.params.omega);
  const bool perturbative = cfg.method != Method::exact;

  ScenarioTimeseries ts{cfg, {}, {}};
  ts.rows.reserve(cfg.steps + 1);
  for (int i = 0; i <= cfg.steps; ++i) {
    const double tau = cfg.tau_max * i / cfg.steps;
    ScenarioRow row{tau, kNaN, kNaN, kNaN, kNaN, true};
    try {
      const ConditionalPropagators props = solver(i, tau / omega);
      row.valid = props.regime_valid;
      try {
        row.p_g = detection_probability(props.m_g, rho0);
        row.p_e = detection_probability(props.m_e, rho0);
      } catch (const Error& e) {
        if (!perturbative || e.code() != ErrorCode::NonphysicalProbability) throw;
        row.p_g = raw_probability(props.m_g, rho0);
        row.p_e = raw_probability(props.m_e, rho0);
        row.valid = false;
      }
      try {
        const FieldDensityMatrix after = conditional_state(props.detected(cfg.detected), rho0);
        row.info_gain = information_gain(rho0, after);
        row.fidelity = uhlmann_fidelity(rho0, after);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroProbabilityBranch) {
          // Empty branch: nothing to condition on.
        } else if (perturbative && is_state_failure(e.code())) {
          row.valid = false;
        } else {
          throw;
        }
      }
    } catch (const Error& e) {
      rethrow_at(e, tau);
    }
    ts.rows.push_back(row);
  }

  for (double tau : cfg.snapshots) {
    try {
      const ConditionalPropagators props = solver(-1, tau / omega);
      const Superoperator& m = props.detected(cfg.detected);
      CMatrix state;
      try {
        state = conditional_state(m, rho0).matrix();
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroProbabilityBranch) {
          state = m.apply(rho0.matrix());
        } else if (perturbative && is_state_failure(e.code())) {
          const CMatrix image = m.apply(rho0.matrix());
          state = 0.5 * (image + image.adjoint()) / image.trace().real();
        } else {
          throw;
        }
      }
      ts.snapshots.push_back({tau, std::move(state)});
    } catch (const Error& e) {
      rethrow_at(e, tau);
    }
  }
  return ts;
}

std::string format_csv(const ScenarioTimeseries& ts) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : ts.rows) {
    out += format_number(r.tau_omega) + ',' + format_number(r.p_g) + ',' + format_number(r.p_e) + ',' +
           format_number(r.info_gain) + ',' + format_number(r.fidelity) + ',' + (r.valid ? '1' : '0') + '\n';
  }
  return out;
}

std::string format_snapshot_json(Dimension d, const Snapshot& snap) {
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < snap.state.rows(); ++i) {
    nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
    nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < snap.state.cols(); ++j) {
      re_row.push_back(snap.state(i, j).real());
      im_row.push_back(snap.state(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  nlohmann::ordered_json doc;
  doc["d"] = d.value();
  doc["tau_omega"] = snap.tau_omega;
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump() + "\n";
}

std::vector<std::filesystem::path> write_outputs(const ScenarioTimeseries& ts) {
  namespace fs = std::filesystem;
  const std::string prefix = ts.config.out_prefix;
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty()) fs::create_directories(parent);

  std::vector<fs::path> written;
  auto write = [&](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path.string());
    out << content;
    written.push_back(path);
  };
  write(prefix + ".csv", format_csv(ts));
  write(prefix + ".meta.cfg", format_config(ts.config));
  for (const auto& snap : ts.snapshots) {
    write(prefix + "_tau" + format_tau_tag(snap.tau_omega) + ".json",
          format_snapshot_json(ts.config.params.d, snap));
  }
  return written;
}

DeviationReport compare_timeseries(const ScenarioTimeseries& a, const ScenarioTimeseries& b) {
  if (a.rows.size() != b.rows.size()) throw Error(ErrorCode::ConfigMismatch, "timeseries lengths differ");
  const std::pair<const char*, double ScenarioRow::*> cols[] = {{"P_g", &ScenarioRow::p_g},
                                                                {"P_e", &ScenarioRow::p_e},
                                                                {"info_gain", &ScenarioRow::info_gain},
                                                                {"fidelity", &ScenarioRow::fidelity}};
  DeviationReport report;
  for (const auto& [name, field] : cols) {
    double max_abs_dev = 0.0, sum_sq = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      const double x = a.rows[i].*field, y = b.rows[i].*field;
      if (std::isnan(x) || std::isnan(y)) continue;
      max_abs_dev = std::max(max_abs_dev, std::abs(x - y));
      sum_sq += (x - y) * (x - y);
      ++count;
    }
    report.columns.push_back({name, count ? max_abs_dev : kNaN, count ? std::sqrt(sum_sq / count) : kNaN});
  }
  const ModelParams& p = a.config.params;
  const double alpha = derived_constants(p).alpha;
  report.epsilon_strong = p.gamma_eg > 0.0 ? alpha / p.gamma_eg : std::numeric_limits<double>::infinity();
  report.epsilon_weak = alpha > 0.0 ? p.gamma_eg / alpha : std::numeric_limits<double>::infinity();
  return report;
}

DeviationReport compare_methods(const ScenarioConfig& a, const ScenarioConfig& b) {
  ScenarioConfig a_norm = a, b_norm = b;
  for (ScenarioConfig* c : {&a_norm, &b_norm}) {
    c->method = Method::exact;
    c->order = 1;
    c->out_prefix = "x";
  }
  if (format_config(a_norm) != format_config(b_norm)) {
    throw Error(ErrorCode::ConfigMismatch, "configs differ in more than method/order");
  }
  return compare_timeseries(run_scenario(a), run_scenario(b));
}

std::string format_deviation_csv(const DeviationReport& report) {
  std::string out = "# epsilon_strong=" + format_number(report.epsilon_strong) +
                    ",epsilon_weak=" + format_number(report.epsilon_weak) + "\n";
  out += "column,max_abs,rms\n";
  for (const auto& c : report.columns) {
    out += c.column + ',' + format_number(c.max_abs) + ',' + format_number(c.rms) + '\n';
  }
  return out;
}

std::vector<ScenarioConfig> sweep_cells(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> cells;
  if (!base.initial.fock) {
    for (int d : {2, 4, 6}) {
      ScenarioConfig c = base;
      c.params.d = Dimension(d);
      c.out_prefix = base.out_prefix + "_d" + std::to_string(d);
      cells.push_back(std::move(c));
    }
  } else {
    for (int n : {1, 3, 5}) {
      ScenarioConfig c = base;
      c.initial.fock = n;
      c.params.d = Dimension(std::max(base.params.d.value(), n + 1));
      c.out_prefix = base.out_prefix + "_n" + std::to_string(n);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

}  // namespace condevo
