// Pointwise and grid checks of the elementary inequalities behind the bound
// proofs:
//
//   square:   (1 - 1/s)^2 >= 1 - 2/s                      (exact, slack 1/s^2)
//   root:     1 - 1/n <= (1 - 2/n)^(1/2 - 1/n),           n >= 3
//   concave:  (1 - r x)^(d/r) <= 1 - d x,                 0 <= x < 1/r
//   exponent: 1 - d x <= (1 - r x)^(d/r - d x),           0 <= x < 1/r
//
// Floating checks evaluate the slack through log1p/expm1 and accept it down
// to -kRoundingTolerance.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "report.hpp"

namespace mafia {

inline constexpr double kRoundingTolerance = 1e-14;

struct SquareCheck {
  bool holds = false;
  mpq_class lhs, rhs, slack;
};

inline SquareCheck check_square_ineq(std::int64_t s) {
  if (s < 1) throw error(error_kind::invalid_params, "square inequality needs s >= 1");
  SquareCheck c;
  const mpq_class inv(1, s);
  c.lhs = (1 - inv) * (1 - inv);
  c.rhs = 1 - 2 * inv;
  c.slack = c.lhs - c.rhs;
  c.holds = c.lhs >= c.rhs;
  return c;
}

struct PointCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Signed margin by which the inequality holds (rhs - lhs for "<=").
  double slack = 0.0;
};

inline PointCheck check_root_ineq(std::int64_t n) {
  if (n <= 2) throw error(error_kind::invalid_params, "root inequality needs integer n >= 3");
  const double inv = 1.0 / static_cast<double>(n);
  const double log_rhs = (0.5 - inv) * std::log1p(-2.0 * inv);
  PointCheck c;
  c.lhs = 1.0 - inv;
  c.rhs = std::exp(log_rhs);
  c.slack = std::expm1(log_rhs) + inv;
  c.holds = c.slack >= -kRoundingTolerance;
  return c;
}

inline void require_unit_domain(double x, RoundStructure rounds) {
  if (!(x >= 0.0) || !(x < 1.0 / rounds.rounds()))
    throw error(error_kind::invalid_params, "x must lie in [0, 1/r)");
}

inline PointCheck check_concave_ineq(double x, RoundStructure rounds) {
  require_unit_domain(x, rounds);
  const double r = rounds.rounds(), d = rounds.days();
  const double log_lhs = (d / r) * std::log1p(-r * x);
  PointCheck c;
  c.lhs = std::exp(log_lhs);
  c.rhs = 1.0 - d * x;
  c.slack = -d * x - std::expm1(log_lhs);
  c.holds = c.slack >= -kRoundingTolerance;
  return c;
}

inline PointCheck check_exponent_ineq(double x, RoundStructure rounds) {
  require_unit_domain(x, rounds);
  const double r = rounds.rounds(), d = rounds.days();
  // d/r - d x = d (1/r - x) > 0 on the whole domain.
  const double exponent = d * (1.0 / r - x);
  if (!(exponent > 0.0)) throw error(error_kind::invalid_params, "exponent d/r - d x must be positive");
  const double log_rhs = exponent * std::log1p(-r * x);
  PointCheck c;
  c.lhs = 1.0 - d * x;
  c.rhs = std::exp(log_rhs);
  c.slack = std::expm1(log_rhs) + d * x;
  c.holds = c.slack >= -kRoundingTolerance;
  return c;
}

/// (1-rx)^(d/r) <= 1-dx <= (1-rx)^(d/r-dx) in one go.
inline bool check_sandwich(double x, RoundStructure rounds) {
  return check_concave_ineq(x, rounds).holds && check_exponent_ineq(x, rounds).holds;
}

enum class Inequality { square, root, concave, exponent };

inline const char* to_string(Inequality w) {
  switch (w) {
    case Inequality::square: return "square";
    case Inequality::root: return "root";
    case Inequality::concave: return "concave";
    case Inequality::exponent: return "exponent";
  }
  return "?";
}

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  /// Number of uniformly spaced real samples (endpoints included). Ignored
  /// for integer grids.
  std::int64_t samples = 0;
  bool integers = false;
  RoundStructure rounds{};
  /// Add x = 1e-9 and x = 1/r - 1e-9 to real grids.
  bool boundary_points = true;
};

inline constexpr double kBoundaryGap = 1e-9;

inline GridSpec integer_grid(std::int64_t lo, std::int64_t hi) {
  GridSpec g;
  g.lo = static_cast<double>(lo);
  g.hi = static_cast<double>(hi);
  g.integers = true;
  return g;
}

inline GridSpec unit_grid(RoundStructure rounds, std::int64_t samples, double gap = 1e-6) {
  GridSpec g;
  g.lo = 0.0;
  g.hi = 1.0 / rounds.rounds() - gap;
  g.samples = samples;
  g.rounds = rounds;
  return g;
}

namespace detail {

inline std::vector<double> grid_points(Inequality which, const GridSpec& g) {
  std::vector<double> pts;
  const bool integer_check = which == Inequality::square || which == Inequality::root;
  if (integer_check != g.integers)
    throw error(error_kind::invalid_params, std::string(to_string(which)) + " needs an " +
                                                (integer_check ? "integer" : "real") + " grid");
  if (g.hi < g.lo) throw error(error_kind::invalid_params, "empty grid range");
  if (g.integers) {
    const auto lo = static_cast<std::int64_t>(std::ceil(g.lo));
    const auto hi = static_cast<std::int64_t>(std::floor(g.hi));
    pts.reserve(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo + 1, 0)));
    for (std::int64_t i = lo; i <= hi; ++i) pts.push_back(static_cast<double>(i));
    return pts;
  }
  const double limit = 1.0 / g.rounds.rounds();
  if (g.lo < 0.0 || g.hi > limit - kBoundaryGap)
    throw error(error_kind::invalid_params, "real grid must lie in [0, 1/r - 1e-9]");
  if (g.samples < 1) throw error(error_kind::invalid_params, "real grid needs samples >= 1");
  if (g.samples == 1) {
    pts.push_back(g.lo);
  } else {
    const double step = (g.hi - g.lo) / static_cast<double>(g.samples - 1);
    for (std::int64_t i = 0; i < g.samples; ++i) pts.push_back(g.lo + step * static_cast<double>(i));
    pts.back() = g.hi;
  }
  if (g.boundary_points) {
    pts.push_back(kBoundaryGap);
    pts.push_back(limit - kBoundaryGap);
  }
  return pts;
}

}  // namespace detail

/// Runs one pointwise check over the grid; reports violations and the
/// minimum slack with its argmin.
inline ScanReport grid_verify(Inequality which, const GridSpec& grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> pts = detail::grid_points(which, grid);

  struct Partial {
    std::vector<Violation> violations;
    double min_slack = std::numeric_limits<double>::infinity();
    double argmin = std::numeric_limits<double>::quiet_NaN();
  };
  const auto count = static_cast<std::int64_t>(pts.size());
  const unsigned chunks = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::int64_t>(count / 4096, 1)));
  std::vector<Partial> parts(chunks);

  parallel_chunks(count, chunks, [&](unsigned c, std::int64_t begin, std::int64_t end) {
    Partial& part = parts[c];
    for (std::int64_t i = begin; i < end; ++i) {
      const double p = pts[i];
      bool holds = false;
      double lhs = 0.0, rhs = 0.0, slack = 0.0;
      switch (which) {
        case Inequality::square: {
          const auto s = static_cast<std::int64_t>(p);
          const auto chk = check_square_ineq(s);
          holds = chk.holds && chk.slack == mpq_class(1, s) / s;
          lhs = chk.lhs.get_d(), rhs = chk.rhs.get_d(), slack = chk.slack.get_d();
          break;
        }
        case Inequality::root: {
          const auto chk = check_root_ineq(static_cast<std::int64_t>(p));
          holds = chk.holds, lhs = chk.lhs, rhs = chk.rhs, slack = chk.slack;
          break;
        }
        case Inequality::concave: {
          const auto chk = check_concave_ineq(p, grid.rounds);
          holds = chk.holds, lhs = chk.lhs, rhs = chk.rhs, slack = chk.slack;
          break;
        }
        case Inequality::exponent: {
          const auto chk = check_exponent_ineq(p, grid.rounds);
          holds = chk.holds, lhs = chk.lhs, rhs = chk.rhs, slack = chk.slack;
          break;
        }
      }
      if (!holds) part.violations.push_back({to_string(which), std::nullopt, p, lhs, rhs});
      if (slack < part.min_slack) part.min_slack = slack, part.argmin = p;
    }
  });

  ScanReport report;
  report.suite = std::string("lemma-") + to_string(which);
  report.params = {{"inequality", to_string(which)}, {"lo", grid.lo}, {"hi", grid.hi}, {"points", count}};
  if (!grid.integers) {
    report.params["r"] = grid.rounds.rounds();
    report.params["d"] = grid.rounds.days();
  }
  Extremum lo{"min_slack", std::numeric_limits<double>::infinity(), std::nullopt, std::nullopt};
  for (const auto& part : parts) {
    report.violations.insert(report.violations.end(), part.violations.begin(), part.violations.end());
    if (part.min_slack < lo.value) lo.value = part.min_slack, lo.point = part.argmin;
  }
  if (count > 0) report.extremal.push_back(lo);
  report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace mafia
