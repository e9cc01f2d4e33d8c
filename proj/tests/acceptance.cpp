// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <sys/wait.h>

#include "mafia_odds/mafia_odds.hpp"

#ifndef MAFIA_ODDS_CLI
#define MAFIA_ODDS_CLI "mafia_odds"
#endif

using namespace mafia;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  Proc p;
  const std::string cmd = std::string("\"") + MAFIA_ODDS_CLI + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), got);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Verdict boundary_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = win_prob({1, 1}, Backend::exact).exact() == mpq_class(1, 2);
  for (std::int64_t n = 1; n <= 100; ++n) ok = ok && win_prob({n, 0}, Backend::exact).exact() == 0;
  for (std::int64_t m = 1; m <= 100; ++m)
    for (std::int64_t n = 0; n < m; ++n) ok = ok && win_prob({n, m}, Backend::exact).exact() == 1;
  const double t = seconds_since(t0);
  return {ok && t < 1.0, "runtime " + fmt("%.3f", t) + " s"};
}

Verdict small_population_upper_check() {
  const auto t0 = std::chrono::steady_clock::now();
  BoundParams p;
  p.k = 50;
  p.r_cap = 100;
  TableOptions opts;
  opts.exact_cap = 100;
  const WinTable t = build_table(100, RoundStructure::classic(), Backend::exact, opts);
  Theorem2Options o;
  o.form = UpperForm::own_population;
  const ScanReport rep = verify_theorem2(p, t, o);
  const std::size_t bad = rep.count_side("upper");
  const double secs = seconds_since(t0);
  std::string detail = std::to_string(bad) + " upper violations";
  if (bad) {
    const auto& v = rep.violations.front();
    detail += ", first at (" + std::to_string(v.state->n) + "," + std::to_string(v.state->m) + ") W=" +
              fmt("%.6f", v.value) + " > " + fmt("%.6f", v.bound);
  }
  detail += ", max W*sqrt(n+m)/m " + fmt("%.6f", rep.find_extremum("max_ratio")->value) + ", runtime " + fmt("%.2f", secs) + " s";
  return {bad == 0 && secs < 5.0, detail};
}

Verdict theorem2_full() {
  const auto t0 = std::chrono::steady_clock::now();
  TableOptions opts;
  opts.mafia_cap = 10;
  opts.exact_cap = 1000;
  const WinTable t = build_table(1000, RoundStructure::classic(), Backend::exact, opts);
  BoundParams p;
  p.k = 10;
  p.r_cap = 1000;
  const ScanReport main_rep = verify_theorem2(p, t);
  p.eps = mpq_class(1, 10000);
  const ScanReport tight = verify_theorem2(p, t);
  const double secs = seconds_since(t0);
  const bool ok = main_rep.holds() && tight.holds() && secs < 120.0;
  return {ok, "eps=1/100: lower " + std::to_string(main_rep.count_side("lower")) + ", upper " +
                  std::to_string(main_rep.count_side("upper")) + " violations; eps=1/10000: lower " +
                  std::to_string(tight.count_side("lower")) + ", upper " + std::to_string(tight.count_side("upper")) +
                  " violations; min ratio " + fmt("%.6f", main_rep.find_extremum("min_ratio")->value) + " vs " +
                  fmt("%.6f", lower_coefficient(10)) + ", runtime " + fmt("%.1f", secs) + " s"};
}

Verdict reduction_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const WinTable classic = build_table(200, RoundStructure::classic(), Backend::exact);
  const WinTable general = build_table(200, RoundStructure(2, 1), Backend::exact);
  std::size_t mismatches = 0, checked = 0;
  for (std::int64_t s = 1; s <= 200; ++s)
    for (std::int64_t m = 0; m <= s; ++m) {
      const GameState st{s - m, m};
      ++checked;
      if (general.exact()->at(st) != classic.exact()->at(st)) ++mismatches;
    }
  // Spot-check the single-state entry point on a diagonal.
  for (std::int64_t s = 2; s <= 200; s += 9) {
    const GameState st{s - s / 3, s / 3};
    if (win_prob_general(st, RoundStructure(2, 1), Backend::exact).exact() != win_prob(st, Backend::exact).exact())
      ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          std::to_string(checked) + " states, " + std::to_string(mismatches) + " mismatches, runtime " + fmt("%.2f", secs) + " s"};
}

Verdict monte_carlo_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const GameState s : {GameState{2, 1}, {3, 1}, {2, 2}, {10, 3}, {20, 4}, {50, 7}}) {
    SimConfig c;
    c.trials = 100000;
    c.seed = 20240501;
    const SimResult r = estimate(s, c);
    const double w = win_prob(s, Backend::exact).to_double();
    const double z = r.std_error > 0 ? (r.estimate - w) / r.std_error : 0.0;
    ok = ok && std::fabs(z) <= 4.0;
    detail += "(" + std::to_string(s.n) + "," + std::to_string(s.m) + ") z=" + fmt("%.2f", z) + " ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, detail + "runtime " + fmt("%.2f", secs) + " s"};
}

Verdict uniform_elimination() {
  // 0.999 quantile of chi-square with 4 degrees of freedom.
  constexpr double critical = 18.4668;
  const EliminationStats st = elimination_distribution(5, 100000, 20240502);
  return {st.degrees_of_freedom == 4 && st.chi_square < critical,
          "chi2 " + fmt("%.3f", st.chi_square) + " < " + fmt("%.4f", critical)};
}

Verdict lemma_suites() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const auto tally = [&](const ScanReport& r, const std::string& tag) {
    const double slack = r.find_extremum("min_slack")->value;
    ok = ok && r.holds() && slack >= -1e-14;
    detail += tag + " " + std::to_string(r.violations.size()) + " viol; ";
  };
  tally(grid_verify(Inequality::square, integer_grid(1, 10000)), "square");
  tally(grid_verify(Inequality::root, integer_grid(3, 100000)), "root");
  for (const RoundStructure rs : {RoundStructure(2, 1), RoundStructure(3, 1), RoundStructure(5, 2)}) {
    const std::string tag = "(" + std::to_string(rs.rounds()) + "," + std::to_string(rs.days()) + ")";
    tally(grid_verify(Inequality::concave, unit_grid(rs, 100000)), "concave" + tag);
    tally(grid_verify(Inequality::exponent, unit_grid(rs, 100000)), "exponent" + tag);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 30.0, detail + "runtime " + fmt("%.2f", secs) + " s"};
}

Verdict scaling_band() {
  const RoundStructure rs(3, 1);
  TableOptions opts;
  opts.mafia_cap = 5;
  const WinTable t = build_table(3000, rs, Backend::floating, opts);
  bool ok = true;
  std::string detail;
  double pf = 0, pg = 0;
  for (std::int64_t cap : {300, 1000, 3000}) {
    const BandFit fit = fit_general_band(rs, cap, 5, t);
    if (pf > 0) {
      const double df = std::fabs(fit.f_hat - pf) / pf, dg = std::fabs(fit.g_hat - pg) / pg;
      ok = ok && df < 0.25 && dg < 0.25;
    }
    detail += "cap " + std::to_string(cap) + " [" + fmt("%.5f", fit.f_hat) + ", " + fmt("%.5f", fit.g_hat) + "] ";
    pf = fit.f_hat, pg = fit.g_hat;
  }
  return {ok, detail};
}

Verdict witnesses() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  const auto close = [](double a, double b, double rel) { return std::fabs(a - b) <= rel * std::fabs(b); };

  const WitnessReport e1 = example1(100, 1.0);
  ok = ok && e1.holds();
  ok = ok && close(e1.values["p"].get<double>(), 1.0 / 11.0, 1e-12) && close(e1.values["w"].get<double>(), 1.0 / 11.0, 1e-12) &&
       close(e1.values["q"].get<double>(), 0.1, 1e-12);
  const double want[] = {0.0909, 0.0099, 0.000999};
  std::string trend;
  for (std::size_t i = 0; i < 3; ++i) {
    ok = ok && close(e1.trend[i].value, want[i], 0.01);
    if (i) ok = ok && e1.trend[i].value < e1.trend[i - 1].value;
    trend += fmt("%.6g", e1.trend[i].value) + " ";
  }

  const WitnessReport e2 = example2(10000, 0.01);
  ok = ok && e2.holds() && e2.values["M"].get<double>() == 100.0 && close(e2.values["w"].get<double>(), 0.5, 1e-12);

  const WitnessReport e3 = example3(10000, 0.001, 100, GrowthChoice::d_squared);
  ok = ok && e3.holds();
  for (std::size_t i = 1; i < e3.trend.size(); ++i) ok = ok && e3.trend[i].value < e3.trend[i - 1].value;

  const double secs = seconds_since(t0);
  return {ok && secs < 1.0, "example1 trend " + trend + "; example2 w=" + fmt("%.3f", e2.values["w"].get<double>()) +
                                ", runtime " + fmt("%.3f", secs) + " s"};
}

Verdict cli_contract() {
  struct Case {
    std::string args;
    int expected;
  };
  const Case cases[] = {{"verify --suite theorem2 --k 10 --R 100", 0},
                        {"verify --suite lemmas --grid-samples 100000", 0},
                        {"verify --suite theorem2 --k 10 --R 100 --eps 1.0", 1}};
  bool ok = true;
  std::string detail = "exit codes";
  for (const auto& c : cases) {
    const Proc p = run_cli(c.args);
    ok = ok && p.code == c.expected;
    detail += " " + std::to_string(p.code) + "(want " + std::to_string(c.expected) + ")";
  }
  const Proc scan = run_cli("scan --R 100 --eta-grid 0.5 1 2");
  const bool header = scan.out.rfind("R,eta,M,r,d,W,lower,upper,within,ratio\n", 0) == 0;
  const Proc a = run_cli("simulate 10 3 --trials 20000 --seed 7");
  const Proc b = run_cli("simulate 10 3 --trials 20000 --seed 7");
  const bool same = !a.out.empty() && a.out == b.out;
  detail += std::string("; csv header ") + (header ? "exact" : "mismatch") + "; simulate " + (same ? "identical" : "differs");
  return {ok && header && same, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"boundary exactness", boundary_exactness},
      {"upper bound with (n+m)^(1/100), n+m <= 100", small_population_upper_check},
      {"two-sided bound, k=10, R=1000", theorem2_full},
      {"(2,1) generalized recursion equals classic", reduction_oracle},
      {"Monte Carlo agreement", monte_carlo_agreement},
      {"uniform day-round elimination", uniform_elimination},
      {"elementary inequality suites", lemma_suites},
      {"(3,1) scaling band stability", scaling_band},
      {"counterexample witnesses", witnesses},
      {"CLI contract", cli_contract},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %d %s: %s (%s)\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
