// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "condevo/scenario.hpp"

using namespace condevo;

namespace {

constexpr AtomicLabel G = AtomicLabel::g;
constexpr AtomicLabel E = AtomicLabel::e;
constexpr double kOmega = 0.7;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ModelParams strong_preset(int d) { return {cplx{kOmega, 0.0}, 0.5, 2.0, 0.1, 1.0, Dimension(d)}; }
ModelParams weak_preset(int d) { return {cplx{kOmega, 0.0}, 0.5, 2.0, 0.0, 0.01, Dimension(d)}; }

ModelParams cold(ModelParams p) {
  p.gamma_ge = p.gamma_eg = 0.0;
  return p;
}

// Omega tau grid [0, tau_max] with `points` samples, returned as times t.
std::vector<double> time_grid(double tau_max, int points, double omega = kOmega) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(tau_max * i / (points - 1) / omega);
  return out;
}

double trace_of(const Superoperator& m, const CMatrix& rho) { return m.apply(rho).trace().real(); }

double safe_error(const Superoperator& s) {
  const Dimension d = s.dim();
  double err = 0.0;
  for (int m = 0; m + 2 <= d.value(); ++m)
    for (int n = 0; n + 2 <= d.value(); ++n) err = std::max(err, max_abs(s.apply(matrix_unit(m, n, d))));
  return err;
}

Outcome su11_algebra() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const Dimension dim(d);
    const Superoperator k0 = elementary(Elementary::K0, dim), kp = elementary(Elementary::KPlus, dim),
                        km = elementary(Elementary::KMinus, dim), n = elementary(Elementary::N, dim);
    for (const Superoperator& r :
         {commutator(km, kp) - 2.0 * k0, commutator(k0, kp) - kp, commutator(k0, km) + km, commutator(k0, n),
          commutator(kp, n), commutator(km, n)}) {
      worst = std::max(worst, safe_error(r));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 1.0,
          fmt("max error %.3g (<= 1e-12), runtime %.3f s (< 1 s)", worst, elapsed)};
}

Outcome casimir_value() {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const Dimension dim(d);
    const Superoperator c = casimir(dim);
    for (int n = 0; n + 2 <= d; ++n) {
      const CMatrix e = matrix_unit(n, n, dim);
      worst = std::max(worst, max_abs(c.apply(e) + 0.25 * e));
    }
  }
  return {worst <= 1e-13, fmt("max |C E_nn + E_nn/4| = %.3g (<= 1e-13)", worst)};
}

Outcome probability_conservation() {
  const auto start = Clock::now();
  const auto grid = time_grid(50.0, 501);
  double worst = 0.0;
  for (int d : {2, 4, 6}) {
    std::vector<CMatrix> states{mixed_state(Dimension(d)).matrix()};
    for (int n = 0; n < d; ++n) states.push_back(fock_state(Dimension(d), n).matrix());
    for (const ModelParams& p : {strong_preset(d), weak_preset(d)}) {
      const ExactSolver solver(p);
      for (double t : grid) {
        const BlockPropagator prop = solver.propagator(t);
        for (AtomicLabel prep : {G, E}) {
          const ConditionalPropagators c = column(prop, prep, t, Method::exact, 0, true);
          for (const CMatrix& rho : states) {
            worst = std::max(worst, std::abs(trace_of(c.m_g, rho) + trace_of(c.m_e, rho) - 1.0));
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && elapsed < 5.0,
          fmt("max |P_g + P_e - 1| = %.3g (<= 1e-9), runtime %.2f s (< 5 s)", worst, elapsed)};
}

Outcome weak_zero_order_oracle() {
  double worst = 0.0;
  for (int d = 1; d <= 6; ++d) {
    const ModelParams p = cold(weak_preset(d));
    const ExactSolver exact(p);
    const WeakSolver weak(p);
    for (int i = 1; i <= 20; ++i) {
      const double t = 50.0 * i / 20 / kOmega;
      worst = std::max(worst, max_abs(weak.zero_order(t).dense() - exact.propagator(t).dense()));
    }
  }
  return {worst <= 1e-8, fmt("max-entry deviation %.3g (<= 1e-8)", worst)};
}

Outcome one_photon_closed_form() {
  const ModelParams p = cold(weak_preset(2));
  const double alpha = derived_constants(p).alpha;
  const CMatrix rho = fock_state(p.d, 1).matrix();
  const ExactSolver exact(p);
  const WeakSolver weak(p);
  double worst_exact = 0.0, worst_weak = 0.0;
  for (double t : time_grid(50.0, 501)) {
    const double expected = 0.5 * (1.0 - std::exp(-2.0 * alpha * t));
    worst_exact = std::max(worst_exact, std::abs(trace_of(exact.conditional(G, t).m_e, rho) - expected));
    const ConditionalPropagators w = column(weak.zero_order(t), G, t, Method::weak, 0, true);
    worst_weak = std::max(worst_weak, std::abs(trace_of(w.m_e, rho) - expected));
  }
  return {worst_exact <= 1e-8 && worst_weak <= 1e-8,
          fmt("exact %.3g, weak zero order %.3g (<= 1e-8)", worst_exact, worst_weak)};
}

// Max |P_e(strong order 1) - P_e(exact)| over t in [0, 5/gamma_eg], mixed d = 4, prepared g.
double strong_deviation(const ModelParams& p) {
  const CMatrix rho = mixed_state(p.d).matrix();
  const ExactSolver exact(p);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = 5.0 / p.gamma_eg * i / 200;
    const double a = trace_of(exact.conditional(G, t).m_e, rho);
    const double b = trace_of(strong_perturbative(p, G, t, 1).m_e, rho);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

Outcome strong_scaling() {
  const ModelParams p = strong_preset(4);
  ModelParams half = p;
  half.omega /= std::sqrt(2.0);
  const double dev = strong_deviation(p), dev_half = strong_deviation(half);
  const double ratio = dev / dev_half;
  const double eps = derived_constants(p).alpha / p.gamma_eg;
  // Diagnostic: the same halving with gamma_ge scaled alongside epsilon.
  ModelParams p_cold = p, half_cold = half;
  p_cold.gamma_ge = 0.0;
  half_cold.gamma_ge = 0.0;
  const double ratio_cold = strong_deviation(p_cold) / strong_deviation(half_cold);
  return {ratio >= 2.5 && ratio <= 6.0,
          fmt("eps %.4f -> %.4f: max |dP_e| %.4g -> %.4g, ratio %.3f (in [2.5, 6]); "
              "with gamma_ge = 0 the ratio is %.3f",
              eps, eps / 2, dev, dev_half, ratio, ratio_cold)};
}

// Max |P_g(weak order 1) - P_g(exact)| over Omega tau in [0, tau_max], fock:3, d = 4, prepared g.
double weak_deviation(double gamma_eg, double tau_max) {
  ModelParams p = weak_preset(4);
  p.gamma_eg = gamma_eg;
  const CMatrix rho = fock_state(p.d, 3).matrix();
  const ExactSolver exact(p);
  const WeakSolver weak(p);
  const auto grid = time_grid(tau_max, 501);
  WeakFirstOrderStepper stepper(weak, grid[1], G, 64);
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const double t = grid[i];
    const ConditionalPropagators w = column(stepper.at(i), G, t, Method::weak, 1, true);
    worst = std::max(worst, std::abs(trace_of(w.m_g, rho) - trace_of(exact.conditional(G, t).m_g, rho)));
  }
  return worst;
}

Outcome weak_scaling() {
  const double d1 = weak_deviation(0.01, 50.0), d2 = weak_deviation(0.02, 50.0);
  const double ratio = d2 / d1;
  const double short_ratio = weak_deviation(0.02, 10.0) / weak_deviation(0.01, 10.0);
  return {ratio >= 3.0 && ratio <= 5.0,
          fmt("max |dP_g| %.4g (gamma_eg 0.01) -> %.4g (0.02), ratio %.3f (in [3, 5]); "
              "over Omega tau <= 10 the ratio is %.3f",
              d1, d2, ratio, short_ratio)};
}

// Max |Tr rho_ee(pre-secular) - Tr M_e rho_F(secular exact)| over Omega tau in [0, 20].
double secular_deviation(double gamma_over_omega, double omega_scale) {
  ModelParams p = strong_preset(4);
  p.gamma_phase = gamma_over_omega * kOmega;
  ModelParams secular = p;
  secular.omega *= omega_scale;
  const FieldDensityMatrix field = fock_state(p.d, 1);
  const auto grid = time_grid(20.0, 201);
  const auto traj = integrate_presecular(p, AtomFieldState::product(G, field), grid);
  const ExactSolver exact(secular);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sec = trace_of(exact.conditional(G, grid[i]).m_e, field.matrix());
    worst = std::max(worst, std::abs(traj[i].ee.trace().real() - sec));
  }
  return worst;
}

Outcome secular_convergence() {
  const double at10 = secular_deviation(10.0, 1.0), at40 = secular_deviation(40.0, 1.0);
  const double at10_r2 = secular_deviation(10.0, std::sqrt(2.0)), at40_r2 = secular_deviation(40.0, std::sqrt(2.0));
  return {at40 < at10, fmt("Gamma/|Omega| = 10: %.4g, 40: %.4g (strictly smaller); "
                           "with |Omega| scaled by sqrt(2) in the secular model: %.4g, %.4g",
                           at10, at40, at10_r2, at40_r2)};
}

Outcome complete_positivity() {
  double worst = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= 6; ++d) {
    for (const ModelParams& p : {strong_preset(d), weak_preset(d)}) {
      const ExactSolver solver(p);
      for (int i = 1; i <= 20; ++i) {
        const double t = 50.0 * i / 20 / kOmega;
        const BlockPropagator prop = solver.propagator(t);
        for (AtomicLabel prep : {G, E}) {
          const ConditionalPropagators c = column(prop, prep, t, Method::exact, 0, true);
          worst = std::min(worst, hermitian_eigensystem(choi(c.m_g)).values.minCoeff());
          worst = std::min(worst, hermitian_eigensystem(choi(c.m_e)).values.minCoeff());
        }
      }
    }
  }
  return {worst >= -1e-8, fmt("min Choi eigenvalue %.3g (>= -1e-8)", worst)};
}

Outcome qualitative_curves() {
  ScenarioConfig cfg;
  cfg.params = strong_preset(4);
  cfg.prepared = G;
  cfg.detected = G;
  cfg.method = Method::exact;
  cfg.tau_max = 50.0;
  cfg.steps = 500;
  cfg.out_prefix = "unused";
  const ScenarioTimeseries ts = run_scenario(cfg);
  int gain_drops = 0, fidelity_rises = 0;
  for (std::size_t i = 1; i < ts.rows.size(); ++i) {
    gain_drops += ts.rows[i].info_gain < ts.rows[i - 1].info_gain;
    fidelity_rises += ts.rows[i].fidelity > ts.rows[i - 1].fidelity;
  }
  const ScenarioRow& first = ts.rows.front();
  const bool initial = first.p_g == 1.0 && first.info_gain == 0.0 && first.fidelity == 1.0;
  const double entropy_error = std::abs(von_neumann_entropy(mixed_state(Dimension(4))) - std::log(4.0));
  return {gain_drops == 0 && fidelity_rises == 0 && initial && entropy_error <= 1e-12,
          fmt("info-gain decreases %d, fidelity increases %d (both 0); first row (P_g, I, F) = (%.17g, %.17g, %.17g); "
              "|S(mixed) - ln 4| = %.3g (<= 1e-12)",
              gain_drops, fidelity_rises, first.p_g, first.info_gain, first.fidelity, entropy_error)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Header, six fields per row, 12 significant digits, UNIX newlines.
bool csv_conforms(const std::string& csv, int expected_rows) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) return false;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find('\r') != std::string::npos) return false;
    std::istringstream fields(line);
    std::string f;
    int count = 0;
    while (std::getline(fields, f, ',')) {
      ++count;
      if (count == 6) {
        if (f != "0" && f != "1") return false;
        continue;
      }
      if (f == "nan") continue;
      const auto mantissa_end = f.find_first_of("eE");
      // Significant digits: leading zeros do not count.
      int digits = 0;
      bool leading = true;
      for (std::size_t i = 0; i < std::min(mantissa_end, f.size()); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(f[i]))) continue;
        leading = leading && f[i] == '0';
        digits += !leading;
      }
      if (digits > 12) return false;
      std::size_t used = 0;
      std::stod(f, &used);
      if (used != f.size()) return false;
    }
    if (count != 6) return false;
  }
  return rows == expected_rows && !csv.empty() && csv.back() == '\n';
}

bool json_conforms(const std::string& text, int d) {
  const auto j = nlohmann::json::parse(text);
  if (j.size() != 4 || !j["d"].is_number_integer() || j["d"] != d || !j["tau_omega"].is_number()) return false;
  for (const char* key : {"re", "im"}) {
    if (!j[key].is_array() || j[key].size() != static_cast<std::size_t>(d)) return false;
    for (const auto& row : j[key])
      if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) return false;
  }
  return true;
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / "condevo_acceptance";
  fs::remove_all(work);
  std::string detail;
  bool ok = true;
  for (const char* name : {"strong", "weak", "fock3_snapshots"}) {
    ScenarioConfig cfg = load_config(fs::path(CONDEVO_CONFIG_DIR) / (std::string(name) + ".cfg"));
    double slowest = 0.0;
    std::vector<std::string> csvs, jsons;
    for (int rep = 0; rep < 2; ++rep) {
      cfg.out_prefix = (work / (std::string(name) + "_" + std::to_string(rep))).string();
      const auto start = Clock::now();
      const auto written = write_outputs(run_scenario(cfg));
      slowest = std::max(slowest, seconds_since(start));
      std::string json;
      for (const auto& p : written) {
        if (p.extension() == ".csv") csvs.push_back(slurp(p));
        if (p.extension() == ".json") {
          if (!json_conforms(slurp(p), cfg.params.d.value())) ok = false;
          json += slurp(p);
        }
      }
      jsons.push_back(json);
    }
    const bool identical = csvs.size() == 2 && csvs[0] == csvs[1] && jsons[0] == jsons[1];
    const bool schema = csv_conforms(csvs[0], cfg.steps + 1);
    ok = ok && identical && schema && slowest < 10.0;
    detail += fmt("%s: %s, %s, %.2f s; ", name, identical ? "identical" : "DIFFERENT",
                  schema ? "schema ok" : "SCHEMA VIOLATION", slowest);
  }
  // The slowest preset cell at d = 6.
  ScenarioConfig weak6 = load_config(fs::path(CONDEVO_CONFIG_DIR) / "weak.cfg");
  weak6.params.d = Dimension(6);
  weak6.initial.fock = 5;
  const auto start = Clock::now();
  run_scenario(weak6);
  const double t6 = seconds_since(start);
  ok = ok && t6 < 10.0;
  detail += fmt("weak at d = 6: %.2f s (< 10 s each)", t6);
  fs::remove_all(work);
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"su(1,1) commutation relations", su11_algebra},
      {"Casimir value", casimir_value},
      {"probability conservation", probability_conservation},
      {"weak zero order equals exact without relaxation", weak_zero_order_oracle},
      {"one-photon closed form", one_photon_closed_form},
      {"strong-limit O(eps^2) scaling", strong_scaling},
      {"weak-limit O(gamma^2) scaling", weak_scaling},
      {"secular-approximation convergence", secular_convergence},
      {"complete positivity", complete_positivity},
      {"qualitative curves at the strong preset", qualitative_curves},
      {"reproducibility and schema", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] #%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
