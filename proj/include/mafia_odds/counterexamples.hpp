// Numeric witnesses for the counterexample constructions around the
// "mafia of order sqrt(R)" statements: toy win functions that satisfy the
// asymptotic conditions yet are only comparable to 1/2 at a different scale,
// plus exact-DP evidence that a zero-limit upper function cannot exist at a
// fixed population.
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "win_table.hpp"

namespace mafia {

struct WitnessCheck {
  std::string name;
  double lhs = 0.0;
  std::string relation;
  double rhs = 0.0;
  bool holds = false;
};

struct TrendPoint {
  double parameter = 0.0;
  double value = 0.0;
};

struct WitnessReport {
  std::string construction;
  nlohmann::json params = nlohmann::json::object();
  std::vector<WitnessCheck> checks;
  std::string trend_parameter;
  std::vector<TrendPoint> trend;
  nlohmann::json values = nlohmann::json::object();
  std::string conclusion;

  bool holds() const {
    return std::all_of(checks.begin(), checks.end(), [](const WitnessCheck& c) { return c.holds; });
  }
  const WitnessCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  // Relative slack 1e-12 so closed-form equalities are not lost to rounding.
  void le(std::string name, double a, double b) {
    checks.push_back({std::move(name), a, "<=", b, a <= b + 1e-12 * std::max(1.0, std::fabs(b))});
  }
  void lt(std::string name, double a, double b) { checks.push_back({std::move(name), a, "<", b, a < b}); }
  void gt(std::string name, double a, double b) { checks.push_back({std::move(name), a, ">", b, a > b}); }
  void eq(std::string name, double a, double b) {
    checks.push_back({std::move(name), a, "==", b, std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b))});
  }
};

inline nlohmann::json to_json(const WitnessReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"relation", c.relation}, {"rhs", c.rhs}, {"holds", c.holds}});
  nlohmann::json trend = nlohmann::json::array();
  for (const auto& t : r.trend) trend.push_back({{r.trend_parameter, t.parameter}, {"value", t.value}});
  return {{"construction", r.construction}, {"params", r.params}, {"checks", std::move(checks)},
          {"trend", std::move(trend)},      {"values", r.values}, {"conclusion", r.conclusion},
          {"holds", r.holds()}};
}

/// x >= y implies x/(c+x) >= y/(c+y) for positive x, y, c.
inline bool monotone_transfer(double x, double y, double c) {
  return !(x >= y) || x / (c + x) >= y / (c + y);
}

/// Smallest integer >= x, tolerant of x landing a few ulps above an integer.
inline std::int64_t bracket_ceil(double x) {
  return static_cast<std::int64_t>(std::ceil(x * (1.0 - 4e-16) - 1e-12));
}

struct Example1Options {
  /// Also evaluate the second integer of [eta sqrt R, eta sqrt R + 1] when
  /// the bracket contains two.
  bool both_integers = false;
};

/// Toy win function w(R,M) = M/(R+M) with p(eta) = eta/(eta+sqrt R) and
/// q(eta) = (eta + 1/sqrt R)/(eta + sqrt R) below sqrt R/2 - 1/sqrt R, else 1.
inline WitnessReport example1(std::int64_t R, double eta, Example1Options opts = {}) {
  if (R < 4 || !(eta > 0.0)) throw error(error_kind::invalid_params, "example1 needs R >= 4 and eta > 0");
  const double rootR = std::sqrt(static_cast<double>(R));
  const double Rd = static_cast<double>(R);
  const auto w = [&](double M, double pop) { return M / (pop + M); };
  const double p = eta / (eta + rootR);
  const double q = eta < rootR / 2.0 - 1.0 / rootR ? (eta + 1.0 / rootR) / (eta + rootR) : 1.0;
  const double lo = eta * rootR;

  WitnessReport rep;
  rep.construction = "example1";
  rep.params = {{"R", R}, {"eta", eta}};

  std::vector<std::int64_t> masses{bracket_ceil(lo)};
  if (opts.both_integers && static_cast<double>(masses[0] + 1) <= lo + 1.0) masses.push_back(masses[0] + 1);
  if (static_cast<double>(masses[0]) > lo + 1.0)
    throw error(error_kind::invalid_params, "empty mafia-size bracket");

  for (std::size_t i = 0; i < masses.size(); ++i) {
    const double M = static_cast<double>(masses[i]);
    const std::string tag = i == 0 ? "" : "[M+1] ";
    const double wv = w(M, Rd);
    const double chain_lo = lo / (Rd + lo);
    const double chain_hi = (lo + 1.0) / (Rd + lo + 1.0);
    rep.le(tag + "eta*sqrt(R) <= M", lo, M);
    rep.le(tag + "M <= eta*sqrt(R)+1", M, lo + 1.0);
    rep.le(tag + "chain: eta*sqrt(R)/(R+eta*sqrt(R)) <= w", chain_lo, wv);
    rep.le(tag + "chain: w <= (eta*sqrt(R)+1)/(R+eta*sqrt(R)+1)", wv, chain_hi);
    rep.eq(tag + "p(eta) == eta*sqrt(R)/(R+eta*sqrt(R))", p, chain_lo);
    rep.lt(tag + "(eta*sqrt(R)+1)/(R+eta*sqrt(R)+1) < q(eta)", chain_hi, q);
    rep.le(tag + "p(eta) <= w(R,M)", p, wv);
    rep.le(tag + "w(R,M) <= q(eta)", wv, q);
    if (i == 0) rep.values["w"] = wv;
  }
  rep.values["M"] = masses[0];
  rep.values["p"] = p;
  rep.values["q"] = q;

  // At M = ceil(sqrt R') the toy win probability vanishes as R' grows.
  rep.trend_parameter = "R";
  for (std::int64_t scale : {1, 100, 10000}) {
    const double Rs = Rd * static_cast<double>(scale);
    const double M = std::ceil(std::sqrt(Rs));
    rep.trend.push_back({Rs, w(M, Rs)});
  }
  for (std::size_t i = 1; i < rep.trend.size(); ++i)
    rep.lt("w(R,ceil(sqrt R)) decreases: R=" + std::to_string(static_cast<long long>(rep.trend[i].parameter)),
           rep.trend[i].value, rep.trend[i - 1].value);
  rep.lt("w(R,ceil(sqrt R)) < 1/2", rep.trend.front().value, 0.5);
  rep.values["w_at_sqrt_R"] = rep.trend.front().value;
  rep.conclusion =
      "w = M/(R+M) meets every condition with these p, q, yet at M ~ sqrt(R) it tends to 0; "
      "it is comparable to 1/2 only when M is of order R.";
  return rep;
}

/// Exact-DP evidence: an all-mafia game is won with certainty, and a single
/// mafia wins with positive probability at every finite R (vanishing as R
/// grows).
inline WitnessReport claim1_witness(std::int64_t R) {
  if (R < 2) throw error(error_kind::invalid_params, "claim1 needs R >= 2");
  WitnessReport rep;
  rep.construction = "claim1";
  rep.params = {{"R", R}};

  const ProbValue all_mafia = win_prob({0, R}, Backend::exact);
  rep.eq("W(0,R) == 1 (eta >= sqrt R forces M >= R)", all_mafia.to_double(), 1.0);
  rep.values["W(0,R)"] = all_mafia.to_string();

  rep.trend_parameter = "R";
  for (std::int64_t scale : {1, 10, 100}) {
    const std::int64_t Rs = R * scale;
    const ProbValue single = win_prob({Rs - 1, 1}, Backend::exact);
    rep.trend.push_back({static_cast<double>(Rs), single.to_double()});
    if (scale == 1) {
      rep.values["W(R-1,1)"] = single.to_string();
      rep.gt("W(R-1,1) > 0, so lim_{eta->0} q(eta) >= W(R-1,1) > 0", single.to_double(), 0.0);
    }
  }
  for (std::size_t i = 1; i < rep.trend.size(); ++i)
    rep.lt("W(R-1,1) decreases: R=" + std::to_string(static_cast<long long>(rep.trend[i].parameter)),
           rep.trend[i].value, rep.trend[i - 1].value);
  rep.conclusion =
      "q < 1 fails at eta >= sqrt(R) and lim_{eta->0} q = 0 fails at any finite R; "
      "only the double limit R -> infinity then eta -> 0 can vanish.";
  return rep;
}

/// Toy w(R,M,1) = M/(sqrt R + M) with p(eta,1) = eta R/(eta R + sqrt R) and
/// q(eta,1) = (eta R + 1)/(eta R + 1 + sqrt R), 0 < eta < 1/49.
inline WitnessReport example2(std::int64_t R, double eta) {
  if (R < 4 || !(eta > 0.0) || !(eta < 1.0 / 49.0))
    throw error(error_kind::invalid_params, "example2 needs R >= 4 and 0 < eta < 1/49");
  const double rootR = std::sqrt(static_cast<double>(R));
  const double etaR = eta * static_cast<double>(R);
  const auto w = [&](double M) { return M / (rootR + M); };
  const auto q_of = [&](double e) {
    const double eR = e * static_cast<double>(R);
    return (eR + 1.0) / (eR + 1.0 + rootR);
  };

  WitnessReport rep;
  rep.construction = "example2";
  rep.params = {{"R", R}, {"eta", eta}};
  const auto M = static_cast<double>(bracket_ceil(etaR));
  const double p = etaR / (etaR + rootR);
  const double q = q_of(eta);
  rep.le("eta*R <= M", etaR, M);
  rep.le("M <= eta*R+1", M, etaR + 1.0);
  rep.le("p(eta,1) <= w(R,M,1)", p, w(M));
  rep.le("w(R,M,1) <= q(eta,1)", w(M), q);
  rep.values["M"] = M;
  rep.values["w"] = w(M);
  rep.values["p"] = p;
  rep.values["q"] = q;

  const double M_sqrt = std::ceil(rootR);
  rep.values["w_at_sqrt_R"] = w(M_sqrt);
  rep.le("1/3 <= w(R,ceil(sqrt R),1)", 1.0 / 3.0, w(M_sqrt));
  rep.le("w(R,ceil(sqrt R),1) <= 2/3", w(M_sqrt), 2.0 / 3.0);

  rep.trend_parameter = "eta";
  for (int i = 0; i <= 6; ++i) {
    const double e = eta / std::pow(10.0, i);
    rep.trend.push_back({e, q_of(e)});
  }
  const double limit = 1.0 / (1.0 + rootR);
  rep.values["q_limit_eta_to_0"] = limit;
  rep.le("q(eta,1) >= 1/(1+sqrt R) along eta -> 0", limit, rep.trend.back().value);
  rep.gt("1/(1+sqrt R) > 0", limit, 0.0);
  rep.conclusion =
      "w(R,M,1) is already near 1/2 at M ~ sqrt(R) although the conditions hold, so they cannot force "
      "a mafia of order R; at fixed R, q(eta,1) tends to 1/(1+sqrt R) > 0.";
  return rep;
}

enum class GrowthChoice { d_plus_sqrtR, d_squared };

inline double growth(GrowthChoice f, std::int64_t R, std::int64_t d) {
  const double dd = static_cast<double>(d);
  return f == GrowthChoice::d_plus_sqrtR ? dd + std::sqrt(static_cast<double>(R)) : dd * dd;
}

/// Toy w(R,M,d) = M/(M + f(R,d)) with q(eta,d) = (eta R + 1)/(eta R + 1 + f(R,d)).
inline WitnessReport example3(std::int64_t R, double eta, std::int64_t d, GrowthChoice f) {
  if (R < 4 || !(eta > 0.0) || !(eta < 0.5) || d < 1)
    throw error(error_kind::invalid_params, "example3 needs R >= 4, 0 < eta < 1/2, d >= 1");
  const double etaR = eta * static_cast<double>(R);
  const auto w = [&](double M, std::int64_t dd) { return M / (M + growth(f, R, dd)); };
  const auto q = [&](std::int64_t dd) { return (etaR + 1.0) / (etaR + 1.0 + growth(f, R, dd)); };

  WitnessReport rep;
  rep.construction = "example3";
  rep.params = {{"R", R}, {"eta", eta}, {"d", d}, {"f", f == GrowthChoice::d_squared ? "d^2" : "d+sqrt(R)"}};
  const auto M = static_cast<double>(bracket_ceil(etaR));
  rep.le("eta*R <= M", etaR, M);
  rep.le("M <= eta*R+1", M, etaR + 1.0);
  rep.le("w(R,M,d) <= q(eta,d)", w(M, d), q(d));
  rep.le("w(R,0,d) = 0 <= q(eta,d)", w(0.0, d), q(d));
  rep.values["M"] = M;
  rep.values["w"] = w(M, d);
  rep.values["q"] = q(d);

  const double M_half = std::round(growth(f, R, d));
  rep.values["M_at_f"] = M_half;
  rep.values["w_at_f"] = w(M_half, d);
  rep.le("|w(R,round f,d) - 1/2| <= 1/4", std::fabs(w(M_half, d) - 0.5), 0.25);

  rep.trend_parameter = "d";
  for (std::int64_t dd : {1, 10, 100, 1000}) rep.trend.push_back({static_cast<double>(dd), q(dd)});
  for (std::size_t i = 1; i < rep.trend.size(); ++i)
    rep.lt("q(eta,d) decreases: d=" + std::to_string(static_cast<long long>(rep.trend[i].parameter)),
           rep.trend[i].value, rep.trend[i - 1].value);
  rep.conclusion =
      "q(eta,d) -> 0 as d grows while M ~ f(R,d) still gives w ~ 1/2; the condition does not pin the "
      "mafia size that makes the game balanced.";
  return rep;
}

}  // namespace mafia
