// Square-root scaling bounds on the mafia win probability and their
// exhaustive verification against a win table.
//
//   sqrt(2k-2)/k * m/sqrt(n+m)  <=  W(n,m)  <=  R^eps * m/sqrt(n+m)
//
// for m <= k, n >= m, n+m <= R. The generalized (r,d) game gets an empirical
// band f_hat * m/(n+m)^(d/r) <= W <= g_hat * m/(n+m)^(d/r).
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "parallel.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "win_table.hpp"

namespace mafia {

struct BoundParams {
  std::int64_t k = 1;       // mafia-size cap
  std::int64_t r_cap = 2;   // population cap R
  mpq_class eps{1, 100};    // exponent of R in the upper bound

  void validate() const {
    if (k < 1) throw error(error_kind::invalid_params, "k must be >= 1");
    if (r_cap < 2) throw error(error_kind::invalid_params, "R cap must be >= 2");
    if (eps <= 0) throw error(error_kind::invalid_params, "eps must be positive");
  }
};

/// A bound formula value before and after clamping to [0,1].
struct BoundValue {
  double raw = 0.0;
  double clamped = 0.0;
};

inline BoundValue make_bound(double raw) { return {raw, std::clamp(raw, 0.0, 1.0)}; }

/// sqrt(2k-2)/k, the lower-bound coefficient (zero at k = 1).
inline double lower_coefficient(std::int64_t k) {
  return std::sqrt(2.0 * static_cast<double>(k) - 2.0) / static_cast<double>(k);
}

inline BoundValue lower_bound(GameState s, std::int64_t k) {
  if (s.population() < 1 || s.m < 0) throw error(error_kind::invalid_params, "lower_bound: need n+m >= 1, m >= 0");
  if (k < 1 || s.m > k) throw error(error_kind::invalid_params, "lower_bound: need 1 <= m <= k");
  return make_bound(lower_coefficient(k) * static_cast<double>(s.m) / std::sqrt(static_cast<double>(s.population())));
}

enum class UpperForm {
  population_cap,   // R_cap^eps * m / sqrt(n+m)
  own_population,   // (n+m)^eps * m / sqrt(n+m), the intermediate induction form
};

inline std::int64_t upper_base(GameState s, const BoundParams& p, UpperForm form) {
  return form == UpperForm::population_cap ? p.r_cap : s.population();
}

inline BoundValue upper_bound(GameState s, const BoundParams& p, UpperForm form = UpperForm::population_cap) {
  if (s.population() < 1 || s.m < 0) throw error(error_kind::invalid_params, "upper_bound: need n+m >= 1, m >= 0");
  if (s.population() > p.r_cap) throw error(error_kind::invalid_params, "upper_bound: n+m exceeds R cap");
  const double base = static_cast<double>(upper_base(s, p, form));
  return make_bound(std::pow(base, p.eps.get_d()) * static_cast<double>(s.m) /
                    std::sqrt(static_cast<double>(s.population())));
}

/// W >= sqrt(2k-2)/k * m/sqrt(s), decided as W^2 s k^2 >= (2k-2) m^2.
inline bool lower_holds_exact(const mpq_class& w, GameState s, std::int64_t k) {
  const mpq_class lhs = w * w * s.population() * k * k;
  const mpz_class rhs = mpz_class(2 * k - 2) * s.m * s.m;
  return lhs >= rhs;
}

/// W <= B^eps * m/sqrt(s), decided as W^2 s / m^2 <= B^(2 eps).
inline bool upper_holds_exact(const mpq_class& w, GameState s, std::int64_t base, const mpq_class& eps) {
  if (s.m == 0) return w == 0;
  mpq_class x = w * w * s.population();
  x /= mpz_class(s.m) * s.m;
  return compare_with_power(x, base, mpq_class(2 * eps)) <= 0;
}

struct Theorem2Options {
  UpperForm form = UpperForm::population_cap;
  /// Require exact comparisons. A float table is then a BackendMismatch.
  bool require_exact = false;
};

/// Sweeps 1 <= m <= k, n >= m, n+m <= R and records every violation of
/// either side. Exact tables are compared without rounding.
inline ScanReport verify_theorem2(const BoundParams& params, const WinTable& table, Theorem2Options opts = {}) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  if (!table.rounds().is_classic())
    throw error(error_kind::invalid_params, "theorem-2 scan needs a classic (2,1) table");
  if (table.cap() < params.r_cap || table.mafia_cap() < std::min(params.k, params.r_cap / 2))
    throw error(error_kind::missing_entry, "table does not cover the scan domain");
  const bool exact = table.backend() == Backend::exact;
  if (!exact && (opts.require_exact || params.r_cap <= 200))
    throw error(error_kind::backend_mismatch, "exact verification requested on a float table");

  const std::int64_t m_max = std::min(params.k, params.r_cap / 2);
  const double coef = lower_coefficient(params.k);
  const double eps = params.eps.get_d();

  struct Partial {
    std::vector<Violation> violations;
    Extremum lo{"min_ratio", std::numeric_limits<double>::infinity(), std::nullopt, std::nullopt};
    Extremum hi{"max_ratio", -std::numeric_limits<double>::infinity(), std::nullopt, std::nullopt};
  };
  const unsigned chunks = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::int64_t>(m_max, 1)));
  std::vector<Partial> parts(chunks);

  parallel_chunks(m_max, chunks, [&](unsigned c, std::int64_t begin, std::int64_t end) {
    Partial& part = parts[c];
    for (std::int64_t m = begin + 1; m <= end; ++m) {
      for (std::int64_t n = m; n + m <= params.r_cap; ++n) {
        const GameState st{n, m};
        const double w = table.value_double(st);
        const double root = std::sqrt(static_cast<double>(n + m));
        const double ratio = w * root / static_cast<double>(m);
        if (ratio < part.lo.value) part.lo = {"min_ratio", ratio, st, std::nullopt};
        if (ratio > part.hi.value) part.hi = {"max_ratio", ratio, st, std::nullopt};

        const double lower = coef * static_cast<double>(m) / root;
        const std::int64_t base = upper_base(st, params, opts.form);
        const double upper = std::pow(static_cast<double>(base), eps) * static_cast<double>(m) / root;
        bool lower_ok, upper_ok;
        if (exact) {
          const mpq_class& wq = table.exact()->at(st);
          lower_ok = lower_holds_exact(wq, st, params.k);
          upper_ok = upper_holds_exact(wq, st, base, params.eps);
        } else {
          lower_ok = w >= lower;
          upper_ok = w <= upper;
        }
        if (!lower_ok) part.violations.push_back({"lower", st, std::nullopt, w, lower});
        if (!upper_ok) part.violations.push_back({"upper", st, std::nullopt, w, upper});
      }
    }
  });

  ScanReport report;
  report.suite = "theorem2";
  report.params = {{"k", params.k},
                   {"R", params.r_cap},
                   {"eps", params.eps.get_str()},
                   {"upper_form", opts.form == UpperForm::population_cap ? "R_cap" : "n+m"},
                   {"backend", to_string(table.backend())},
                   {"lower_coefficient", coef},
                   {"upper_coefficient", std::pow(static_cast<double>(params.r_cap), eps)}};
  Extremum lo = parts.front().lo, hi = parts.front().hi;
  for (auto& part : parts) {
    report.violations.insert(report.violations.end(), part.violations.begin(), part.violations.end());
    if (part.lo.value < lo.value) lo = part.lo;
    if (part.hi.value > hi.value) hi = part.hi;
  }
  std::sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
    const auto key = [](const Violation& v) { return std::tuple(v.state->population(), v.state->m, v.side); };
    return key(a) < key(b);
  });
  if (m_max >= 1) report.extremal = {lo, hi};
  report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

struct BandFit {
  double f_hat = 0.0;
  double g_hat = 0.0;
  GameState argmin{};
  GameState argmax{};
  ScanReport report;
};

/// W(n,m) (n+m)^(d/r) / m.
inline double normalized_ratio(double w, GameState s, RoundStructure rounds) {
  return w * std::pow(static_cast<double>(s.population()), rounds.alpha()) / static_cast<double>(s.m);
}

/// Band constants over an explicit list of interior states (n >= m >= 1).
inline BandFit fit_band_over(const WinTable& table, std::span<const GameState> states) {
  const auto t0 = std::chrono::steady_clock::now();
  BandFit fit;
  fit.f_hat = std::numeric_limits<double>::infinity();
  fit.g_hat = -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (const GameState st : states) {
    if (st.m < 1 || st.n < st.m) continue;
    const double ratio = normalized_ratio(table.value_double(st), st, table.rounds());
    if (ratio < fit.f_hat) fit.f_hat = ratio, fit.argmin = st;
    if (ratio > fit.g_hat) fit.g_hat = ratio, fit.argmax = st;
    ++used;
  }
  if (used == 0) throw error(error_kind::empty_domain, "no state with n >= m >= 1 in the band domain");
  fit.report.suite = "conjecture-band";
  fit.report.params = {{"r", table.rounds().rounds()}, {"d", table.rounds().days()}, {"states", used}};
  fit.report.extremal = {{"f_hat", fit.f_hat, fit.argmin, std::nullopt}, {"g_hat", fit.g_hat, fit.argmax, std::nullopt}};
  fit.report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return fit;
}

/// f_hat, g_hat = min, max of the normalized ratio over
/// {n >= m >= 1, m <= m_cap, n+m <= cap}.
inline BandFit fit_general_band(RoundStructure rounds, std::int64_t cap, std::int64_t m_cap, const WinTable& table) {
  if (table.rounds() != rounds) throw error(error_kind::invalid_params, "table rounds differ from requested rounds");
  if (table.cap() < cap || table.mafia_cap() < std::min(m_cap, cap / 2))
    throw error(error_kind::missing_entry, "table does not cover the band domain");
  std::vector<GameState> states;
  for (std::int64_t m = 1; m <= m_cap; ++m)
    for (std::int64_t n = m; n + m <= cap; ++n) states.push_back({n, m});
  BandFit fit = fit_band_over(table, states);
  fit.report.params["cap"] = cap;
  fit.report.params["m_cap"] = m_cap;
  return fit;
}

}  // namespace mafia
