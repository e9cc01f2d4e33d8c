// Command-line front end: exact | verify | scan | simulate.
//
// Exit codes: 0 success / inequality holds, 1 violation or statistical
// failure, 2 usage error.
#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mafia_odds/mafia_odds.hpp"

namespace mafia::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;

inline constexpr const char* kScanHeader = "R,eta,M,r,d,W,lower,upper,within,ratio";

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Emits to --out when given, else to the supplied stream.
inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw error(error_kind::invalid_params, "cannot open output file " + out_path);
  f << text;
}

inline RoundStructure rounds_from(const std::vector<int>& rd) {
  if (rd.empty()) return RoundStructure::classic();
  if (rd.size() != 2) throw error(error_kind::invalid_rounds, "--rounds takes two integers r d");
  return RoundStructure(rd[0], rd[1]);
}

inline Backend backend_from(const std::string& s) {
  if (s == "exact") return Backend::exact;
  if (s == "float") return Backend::floating;
  throw error(error_kind::invalid_params, "backend must be exact or float");
}

// ---------------------------------------------------------------- exact

struct ExactArgs {
  std::int64_t n = 0, m = 0;
  std::vector<int> rounds;
  std::string backend = "exact";
  std::int64_t exact_cap = 200;
};

inline int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const GameState st{a.n, a.m};
  require_user_state(st);
  const Backend backend = backend_from(a.backend);
  if (backend == Backend::exact && st.population() > a.exact_cap)
    throw error(error_kind::resource_limit, "n+m exceeds --exact-cap; use --backend float or raise the cap");
  const ProbValue v = win_prob_general(st, rounds_from(a.rounds), backend);
  if (v.is_exact())
    out << v.exact().get_str() << " ≈ " << fmt6(v.to_double()) << "\n";
  else
    out << fmt12(v.to_double()) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::string out;
  // theorem2
  std::int64_t k = 10;
  std::int64_t R = 100;
  std::string eps = "1/100";
  std::string backend = "exact";
  std::string upper_form = "cap";
  // lemmas
  std::int64_t grid_samples = 100000;
  std::int64_t n_max = 100000;
  std::int64_t s_max = 10000;
  // conjecture-band
  std::vector<int> rounds;
  std::int64_t m_cap = 5;
  std::vector<std::int64_t> caps{300, 1000, 3000};
  double tolerance = 0.25;
  // counterexamples
  std::string witnesses_out;
};

inline ScanReport verify_theorem2_suite(const VerifyArgs& a) {
  BoundParams p;
  p.k = a.k;
  p.r_cap = a.R;
  p.eps = parse_rational(a.eps);
  p.validate();
  const Backend backend = backend_from(a.backend);
  TableOptions topts;
  topts.mafia_cap = std::min(a.k, a.R);
  topts.exact_cap = a.R;
  const WinTable table = build_table(a.R, RoundStructure::classic(), backend, topts);
  Theorem2Options opts;
  opts.form = a.upper_form == "own" ? UpperForm::own_population : UpperForm::population_cap;
  if (a.upper_form != "own" && a.upper_form != "cap")
    throw error(error_kind::invalid_params, "--upper-form must be cap or own");
  return verify_theorem2(p, table, opts);
}

inline ScanReport verify_lemmas_suite(const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  ScanReport all;
  all.suite = "lemmas";
  all.params = {{"s_max", a.s_max}, {"n_max", a.n_max}, {"grid_samples", a.grid_samples}};
  std::vector<ScanReport> parts;
  parts.push_back(grid_verify(Inequality::square, integer_grid(1, a.s_max)));
  parts.push_back(grid_verify(Inequality::root, integer_grid(3, a.n_max)));
  for (const RoundStructure rs : {RoundStructure(2, 1), RoundStructure(3, 1), RoundStructure(5, 2)}) {
    parts.push_back(grid_verify(Inequality::concave, unit_grid(rs, a.grid_samples)));
    parts.push_back(grid_verify(Inequality::exponent, unit_grid(rs, a.grid_samples)));
  }
  for (auto& part : parts) {
    std::string tag = part.suite;
    if (part.params.contains("r"))
      tag += "(" + std::to_string(part.params["r"].get<int>()) + "," + std::to_string(part.params["d"].get<int>()) + ")";
    for (auto& v : part.violations) {
      v.side = tag;
      all.violations.push_back(v);
    }
    for (auto e : part.extremal) {
      e.label = tag + ":" + e.label;
      all.extremal.push_back(e);
    }
  }
  all.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return all;
}

inline ScanReport verify_band_suite(const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const RoundStructure rounds = a.rounds.empty() ? RoundStructure(3, 1) : rounds_from(a.rounds);
  if (a.caps.empty()) throw error(error_kind::invalid_params, "--caps needs at least one cap");
  for (std::size_t i = 1; i < a.caps.size(); ++i)
    if (a.caps[i] <= a.caps[i - 1]) throw error(error_kind::invalid_params, "--caps must be increasing");
  const std::int64_t top = a.caps.back();
  TableOptions topts;
  topts.mafia_cap = a.m_cap;
  const WinTable table = build_table(top, rounds, top <= 200 ? Backend::exact : Backend::floating, topts);

  ScanReport rep;
  rep.suite = "conjecture-band";
  rep.params = {{"r", rounds.rounds()}, {"d", rounds.days()}, {"m_cap", a.m_cap}, {"caps", a.caps},
                {"tolerance", a.tolerance}, {"backend", to_string(table.backend())}};
  std::optional<BandFit> prev;
  for (const auto cap : a.caps) {
    BandFit fit = fit_general_band(rounds, cap, a.m_cap, table);
    rep.extremal.push_back({"f_hat@" + std::to_string(cap), fit.f_hat, fit.argmin, std::nullopt});
    rep.extremal.push_back({"g_hat@" + std::to_string(cap), fit.g_hat, fit.argmax, std::nullopt});
    if (prev) {
      const double df = std::fabs(fit.f_hat - prev->f_hat) / prev->f_hat;
      const double dg = std::fabs(fit.g_hat - prev->g_hat) / prev->g_hat;
      if (!(df < a.tolerance)) rep.violations.push_back({"f_hat_change", std::nullopt, double(cap), df, a.tolerance});
      if (!(dg < a.tolerance)) rep.violations.push_back({"g_hat_change", std::nullopt, double(cap), dg, a.tolerance});
    }
    prev = std::move(fit);
  }
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// The standard witness panel.
inline std::vector<WitnessReport> witness_panel() {
  std::vector<WitnessReport> w;
  w.push_back(example1(100, 1.0));
  w.push_back(example1(10000, 0.37, {.both_integers = true}));
  w.push_back(example1(100, 5.0));
  w.push_back(claim1_witness(10));
  w.push_back(example2(10000, 0.001));
  w.push_back(example3(10000, 0.001, 100, GrowthChoice::d_squared));
  w.push_back(example3(10000, 0.001, 100, GrowthChoice::d_plus_sqrtR));
  return w;
}

inline ScanReport verify_counterexamples_suite(const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto panel = witness_panel();
  ScanReport rep;
  rep.suite = "counterexamples";
  nlohmann::json names = nlohmann::json::array();
  for (const auto& w : panel) {
    names.push_back(w.construction);
    for (const auto& c : w.checks)
      if (!c.holds) rep.violations.push_back({w.construction + ": " + c.name, std::nullopt, std::nullopt, c.lhs, c.rhs});
    for (auto it = w.values.begin(); it != w.values.end(); ++it)
      if (it->is_number()) rep.extremal.push_back({w.construction + ":" + it.key(), it->get<double>(), std::nullopt, std::nullopt});
  }
  rep.params = {{"constructions", names}};
  if (!a.witnesses_out.empty()) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& w : panel) all.push_back(to_json(w));
    emit(all.dump(2) + "\n", a.witnesses_out, std::cout);
  }
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  ScanReport rep;
  if (a.suite == "theorem2")
    rep = verify_theorem2_suite(a);
  else if (a.suite == "lemmas")
    rep = verify_lemmas_suite(a);
  else if (a.suite == "conjecture-band")
    rep = verify_band_suite(a);
  else if (a.suite == "counterexamples")
    rep = verify_counterexamples_suite(a);
  else
    throw error(error_kind::invalid_params, "unknown suite '" + a.suite + "'");
  emit(to_json(rep).dump(2) + "\n", a.out, out);
  return rep.holds() ? kOk : kViolation;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  std::int64_t R = 0;
  std::vector<double> eta_grid;  // start stop steps
  std::vector<int> rounds;
  std::string out;
};

struct ScanRow {
  std::int64_t R = 0;
  double eta = 0.0;
  std::int64_t M = 0;
  RoundStructure rounds{};
  double W = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool within = false;
  double ratio = 0.0;
  bool saturated = false;
};

inline std::string to_csv_line(const ScanRow& r) {
  std::ostringstream s;
  s << r.R << ',' << fmt12(r.eta) << ',' << r.M << ',' << r.rounds.rounds() << ',' << r.rounds.days() << ','
    << fmt12(r.W) << ',' << fmt12(r.lower) << ',' << fmt12(r.upper) << ',' << (r.within ? "true" : "false") << ','
    << fmt12(r.ratio) << '\n';
  return s.str();
}

inline std::vector<ScanRow> scan_rows(std::int64_t R, double start, double stop, std::int64_t steps,
                                      RoundStructure rounds) {
  if (R < 4) throw error(error_kind::invalid_params, "scan needs R >= 4");
  if (steps < 1 || !(start > 0.0) || !(stop >= start) || !std::isfinite(stop))
    throw error(error_kind::invalid_params, "bad eta grid: need 0 < start <= stop and steps >= 1");
  const double alpha = rounds.alpha();
  const double scale = std::pow(static_cast<double>(R), alpha);

  std::vector<ScanRow> rows;
  std::int64_t m_max = 1;
  for (std::int64_t i = 0; i < steps; ++i) {
    ScanRow row;
    row.R = R;
    row.rounds = rounds;
    row.eta = steps == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    row.M = std::max<std::int64_t>(1, bracket_ceil(row.eta * scale));
    if (row.M > R) row.M = R, row.saturated = true;
    m_max = std::max(m_max, row.M);
    rows.push_back(row);
  }

  TableOptions topts;
  topts.mafia_cap = m_max;
  const WinTable table = build_table(R, rounds, R > 200 ? Backend::floating : Backend::exact, topts);
  std::optional<BandFit> band;
  if (!rounds.is_classic()) band = fit_general_band(rounds, R, m_max, table);

  for (auto& row : rows) {
    const GameState st{R - row.M, row.M};
    row.W = table.value_double(st);
    if (rounds.is_classic()) {
      row.lower = lower_bound(st, row.M).clamped;
      BoundParams p;
      p.k = row.M;
      p.r_cap = R;
      row.upper = upper_bound(st, p).clamped;
    } else {
      const double base = static_cast<double>(row.M) / scale;
      row.lower = std::clamp(band->f_hat * base, 0.0, 1.0);
      row.upper = std::clamp(band->g_hat * base, 0.0, 1.0);
    }
    row.within = row.lower <= row.W && row.W <= row.upper;
    row.ratio = row.W * scale / static_cast<double>(row.M);
  }
  return rows;
}

inline int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  if (a.eta_grid.size() != 3) throw error(error_kind::invalid_params, "--eta-grid takes start stop steps");
  const double steps_d = a.eta_grid[2];
  if (!(steps_d >= 1) || steps_d != std::floor(steps_d)) throw error(error_kind::invalid_params, "steps must be a positive integer");
  const auto rows = scan_rows(a.R, a.eta_grid[0], a.eta_grid[1], static_cast<std::int64_t>(steps_d), rounds_from(a.rounds));
  std::string csv = std::string(kScanHeader) + "\n";
  for (const auto& row : rows) {
    if (row.saturated) err << "warning: eta=" << fmt12(row.eta) << " needs M > R; clamped to M=R (W=1)\n";
    csv += to_csv_line(row);
  }
  emit(csv, a.out, out);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::int64_t n = 0, m = 0;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  std::string fidelity = "state";
  std::vector<int> rounds;
  std::string out;
};

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const GameState st{a.n, a.m};
  require_user_state(st);
  SimConfig cfg;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.rounds = rounds_from(a.rounds);
  if (a.fidelity == "state")
    cfg.fidelity = Fidelity::state_level;
  else if (a.fidelity == "vote")
    cfg.fidelity = Fidelity::vote_level;
  else
    throw error(error_kind::invalid_params, "--fidelity must be state or vote");

  const SimResult res = estimate(st, cfg);
  const double dp = win_prob_general(st, cfg.rounds, st.population() <= 200 ? Backend::exact : Backend::floating).to_double();
  double z;
  if (res.std_error > 0.0)
    z = (res.estimate - dp) / res.std_error;
  else
    z = res.estimate == dp ? 0.0 : std::numeric_limits<double>::infinity();

  const nlohmann::json j = {{"state", to_json(st)},
                            {"rounds", {{"r", cfg.rounds.rounds()}, {"d", cfg.rounds.days()}}},
                            {"fidelity", to_string(cfg.fidelity)},
                            {"trials", res.trials},
                            {"seed", a.seed},
                            {"wins", res.wins},
                            {"estimate", res.estimate},
                            {"stderr", res.std_error},
                            {"dp_value", dp},
                            {"z", finite_or_null(z)}};
  emit(j.dump(2) + "\n", a.out, out);
  return std::fabs(z) <= 4.0 ? kOk : kViolation;
}

// ---------------------------------------------------------------- driver

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte Carlo win probabilities for the detective-free mafia game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mafia_odds 1.0");

  ExactArgs ea;
  auto* exact = app.add_subcommand("exact", "Print W(n,m) as a fraction and a decimal");
  exact->add_option("n", ea.n, "civilians")->required();
  exact->add_option("m", ea.m, "mafias")->required();
  exact->add_option("--rounds", ea.rounds, "block structure r d")->expected(2);
  exact->add_option("--backend", ea.backend, "exact|float")->check(CLI::IsMember({"exact", "float"}));
  exact->add_option("--exact-cap", ea.exact_cap, "largest n+m for the exact backend");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  verify->add_option("--suite", va.suite, "theorem2|lemmas|conjecture-band|counterexamples")
      ->required()
      ->check(CLI::IsMember({"theorem2", "lemmas", "conjecture-band", "counterexamples"}));
  verify->add_option("--out", va.out, "write the report here instead of stdout");
  verify->add_option("--k", va.k, "mafia-size cap (theorem2)");
  verify->add_option("--R", va.R, "population cap (theorem2)");
  verify->add_option("--eps", va.eps, "upper-bound exponent, decimal or p/q (theorem2)");
  verify->add_option("--backend", va.backend, "exact|float (theorem2)")->check(CLI::IsMember({"exact", "float"}));
  verify->add_option("--upper-form", va.upper_form, "cap: R^eps, own: (n+m)^eps (theorem2)");
  verify->add_option("--grid-samples", va.grid_samples, "real-grid samples (lemmas)");
  verify->add_option("--n-max", va.n_max, "largest n for the root inequality (lemmas)");
  verify->add_option("--s-max", va.s_max, "largest s for the square inequality (lemmas)");
  verify->add_option("--rounds", va.rounds, "block structure r d (conjecture-band)")->expected(2);
  verify->add_option("--m-cap", va.m_cap, "mafia cap (conjecture-band)");
  verify->add_option("--caps", va.caps, "increasing population caps (conjecture-band)")->delimiter(',');
  verify->add_option("--tolerance", va.tolerance, "max relative band change between caps (conjecture-band)");
  verify->add_option("--witnesses", va.witnesses_out, "write full witness reports here (counterexamples)");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Emit the eta curve as CSV");
  scan->add_option("--R", sa.R, "total population")->required();
  scan->add_option("--eta-grid", sa.eta_grid, "start stop steps")->expected(3)->required();
  scan->add_option("--rounds", sa.rounds, "block structure r d")->expected(2);
  scan->add_option("--out", sa.out, "CSV file (default stdout)");

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate against the exact value");
  sim->add_option("n", ma.n, "civilians")->required();
  sim->add_option("m", ma.m, "mafias")->required();
  sim->add_option("--trials", ma.trials, "number of games")->check(CLI::PositiveNumber);
  sim->add_option("--seed", ma.seed, "64-bit seed");
  sim->add_option("--fidelity", ma.fidelity, "state|vote")->check(CLI::IsMember({"state", "vote"}));
  sim->add_option("--rounds", ma.rounds, "block structure r d")->expected(2);
  sim->add_option("--out", ma.out, "JSON file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "mafia_odds 1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*exact) return cmd_exact(ea, out);
    if (*verify) return cmd_verify(va, out);
    if (*scan) return cmd_scan(sa, out, err);
    if (*sim) return cmd_simulate(ma, out);
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace mafia::cli
