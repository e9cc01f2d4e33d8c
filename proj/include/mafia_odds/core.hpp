// Shared domain types for the detective-free mafia game: states, round
// structures, probability values and the boundary classification that every
// other module consults.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>

namespace mafia {

enum class error_kind {
  invalid_state,
  invalid_rounds,
  invalid_params,
  resource_limit,
  missing_entry,
  backend_mismatch,
  empty_domain,
};

inline const char* to_string(error_kind k) {
  switch (k) {
    case error_kind::invalid_state: return "InvalidState";
    case error_kind::invalid_rounds: return "InvalidRounds";
    case error_kind::invalid_params: return "InvalidParams";
    case error_kind::resource_limit: return "ResourceLimit";
    case error_kind::missing_entry: return "MissingEntry";
    case error_kind::backend_mismatch: return "BackendMismatch";
    case error_kind::empty_domain: return "EmptyDomain";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

/// n civilians and m mafias. Recursion may produce transient states with
/// negative counts; those are always resolved by classify().
struct GameState {
  std::int64_t n = 0;
  std::int64_t m = 0;

  std::int64_t population() const { return n + m; }
  friend auto operator<=>(const GameState&, const GameState&) = default;
};

/// Throws InvalidState unless the state is a legal starting point.
inline void require_user_state(GameState s) {
  if (s.n < 0 || s.m < 0)
    throw error(error_kind::invalid_state, "counts must be non-negative");
  if (s.n == 0 && s.m == 0) throw error(error_kind::invalid_state, "empty game (0,0)");
}

/// Every block of r rounds has d day rounds and r-d night rounds.
class RoundStructure {
 public:
  constexpr RoundStructure() = default;
  RoundStructure(int r, int d) : r_(r), d_(d) {
    if (d < 1 || d >= r)
      throw error(error_kind::invalid_rounds,
                  "need r > d >= 1, got r=" + std::to_string(r) + " d=" + std::to_string(d));
  }

  static constexpr RoundStructure classic() { return RoundStructure(); }

  constexpr int rounds() const { return r_; }
  constexpr int days() const { return d_; }
  constexpr bool is_classic() const { return r_ == 2 && d_ == 1; }
  /// Fraction of day rounds, d/r.
  double alpha() const { return static_cast<double>(d_) / r_; }

  friend constexpr bool operator==(RoundStructure, RoundStructure) = default;

 private:
  int r_ = 2;
  int d_ = 1;
};

enum class Backend { exact, floating };

inline const char* to_string(Backend b) { return b == Backend::exact ? "exact" : "float"; }

/// A probability in [0,1], either an exact rational or a binary64 value.
class ProbValue {
 public:
  ProbValue() : v_(0.0) {}
  explicit ProbValue(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
  explicit ProbValue(double d) : v_(d) {}

  Backend backend() const { return std::holds_alternative<mpq_class>(v_) ? Backend::exact : Backend::floating; }
  bool is_exact() const { return backend() == Backend::exact; }

  const mpq_class& exact() const { return std::get<mpq_class>(v_); }

  /// Nearest binary64 (mpq_get_d truncates, which stays within 2^-52 relative).
  double to_double() const {
    if (auto* q = std::get_if<mpq_class>(&v_)) return q->get_d();
    return std::get<double>(v_);
  }

  /// "p/q" for exact values, shortest round-trip decimal otherwise.
  std::string to_string() const;

  friend bool operator==(const ProbValue& a, const ProbValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return a.to_double() == b.to_double();
  }

 private:
  std::variant<mpq_class, double> v_;
};

inline std::string ProbValue::to_string() const {
  if (is_exact()) return exact().get_str();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v_));
  return buf;
}

inline ProbValue make_prob(Backend b, long num, unsigned long den = 1) {
  if (b == Backend::exact) return ProbValue(mpq_class(num, den));
  return ProbValue(static_cast<double>(num) / static_cast<double>(den));
}

enum class Outcome { civilians_win, mafia_wins, tie_base, interior };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::civilians_win: return "CiviliansWin";
    case Outcome::mafia_wins: return "MafiaWins";
    case Outcome::tie_base: return "TieBase";
    case Outcome::interior: return "Interior";
  }
  return "?";
}

struct BoundaryOutcome {
  Outcome kind = Outcome::interior;

  bool is_boundary() const { return kind != Outcome::interior; }
  /// Numerator over 2 of the boundary value: 0, 2 or 1 (for 1/2).
  int halves() const {
    switch (kind) {
      case Outcome::civilians_win: return 0;
      case Outcome::mafia_wins: return 2;
      case Outcome::tie_base: return 1;
      case Outcome::interior: break;
    }
    throw error(error_kind::invalid_state, "interior state has no boundary value");
  }
  ProbValue value(Backend b) const { return make_prob(b, halves(), 2); }
};

/// Rule precedence: extinct mafia, then mafia majority, then the classic
/// (1,1) tie base, else interior.
constexpr BoundaryOutcome classify(GameState s, RoundStructure rounds) {
  if (s.m <= 0) return {Outcome::civilians_win};
  if (s.n < s.m) return {Outcome::mafia_wins};
  if (s.n == 1 && s.m == 1 && rounds.is_classic()) return {Outcome::tie_base};
  return {Outcome::interior};
}

}  // namespace mafia
