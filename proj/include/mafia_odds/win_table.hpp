// Memoized evaluation of the mafia-win recursion
//
//   W(n,m) = n/(n+m) W(n-r, m) + m/(n+m) W(n-r+d, m-d)
//
// filled bottom-up by population so that no recursion depth is involved.
// The classic day/night game is (r,d) = (2,1).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"

namespace mafia {

template <class V>
struct value_traits;

template <>
struct value_traits<mpq_class> {
  static constexpr Backend backend = Backend::exact;
  static mpq_class from_halves(int h) {
    mpq_class q(h, 2);
    q.canonicalize();
    return q;
  }
  static mpq_class combine(std::int64_t n, std::int64_t m, const mpq_class& civ, const mpq_class& maf) {
    mpq_class out = n * civ + m * maf;
    out /= n + m;
    return out;
  }
  static ProbValue wrap(const mpq_class& v) { return ProbValue(v); }
};

template <>
struct value_traits<double> {
  static constexpr Backend backend = Backend::floating;
  static double from_halves(int h) { return 0.5 * h; }
  static double combine(std::int64_t n, std::int64_t m, double civ, double maf) {
    const double s = static_cast<double>(n + m);
    return static_cast<double>(n) / s * civ + static_cast<double>(m) / s * maf;
  }
  static ProbValue wrap(double v) { return ProbValue(v); }
};

struct TableOptions {
  /// Keep only states with m <= mafia_cap. The recursion never increases m,
  /// so a capped table is self-contained.
  std::optional<std::int64_t> mafia_cap;
  /// Largest population allowed for the exact backend.
  std::int64_t exact_cap = 200;
};

/// Values for every state with n,m >= 0 and 1 <= n+m <= cap (and m <= mafia
/// cap when set), stored row by row in fill order.
template <class V>
class basic_win_table {
 public:
  using value_type = V;
  using traits = value_traits<V>;

  basic_win_table(std::int64_t cap, RoundStructure rounds, std::int64_t mafia_cap)
      : rounds_(rounds), cap_(cap), mafia_cap_(mafia_cap) {
    row_offset_.resize(static_cast<std::size_t>(cap) + 2, 0);
    std::size_t total = 0;
    for (std::int64_t s = 1; s <= cap; ++s) {
      row_offset_[s] = total;
      total += static_cast<std::size_t>(row_width(s));
    }
    row_offset_[cap + 1] = total;
    values_.reserve(total);
    fill();
  }

  RoundStructure rounds() const { return rounds_; }
  std::int64_t cap() const { return cap_; }
  std::int64_t mafia_cap() const { return mafia_cap_; }
  std::size_t size() const { return values_.size(); }

  bool contains(GameState s) const {
    return s.n >= 0 && s.m >= 0 && s.m <= mafia_cap_ && s.population() >= 1 && s.population() <= cap_;
  }

  const V* find(GameState s) const { return contains(s) ? &values_[index(s)] : nullptr; }

  /// Boundary states resolve by rule; interior states must be stored.
  V resolve(GameState s) const {
    const auto b = classify(s, rounds_);
    if (b.is_boundary()) return traits::from_halves(b.halves());
    if (const V* v = find(s)) return *v;
    throw error(error_kind::missing_entry,
                "state (" + std::to_string(s.n) + "," + std::to_string(s.m) + ") outside table");
  }

  const V& at(GameState s) const {
    if (const V* v = find(s)) return *v;
    throw error(error_kind::missing_entry,
                "state (" + std::to_string(s.n) + "," + std::to_string(s.m) + ") outside table");
  }

  GameState civilian_child(GameState s) const { return {s.n - rounds_.rounds(), s.m}; }
  GameState mafia_child(GameState s) const {
    return {s.n - rounds_.rounds() + rounds_.days(), s.m - rounds_.days()};
  }

  /// Calls fn(state, value) for every stored entry, in fill order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::int64_t s = 1; s <= cap_; ++s)
      for (std::int64_t m = 0; m < row_width(s); ++m) fn(GameState{s - m, m}, values_[row_offset_[s] + m]);
  }

 private:
  std::int64_t row_width(std::int64_t s) const { return std::min(s, mafia_cap_) + 1; }
  std::size_t index(GameState s) const { return row_offset_[s.population()] + static_cast<std::size_t>(s.m); }

  void fill() {
    for (std::int64_t s = 1; s <= cap_; ++s) {
      for (std::int64_t m = 0; m < row_width(s); ++m) {
        const GameState st{s - m, m};
        const auto b = classify(st, rounds_);
        if (b.is_boundary()) {
          values_.push_back(traits::from_halves(b.halves()));
        } else {
          values_.push_back(traits::combine(st.n, st.m, resolve(civilian_child(st)), resolve(mafia_child(st))));
        }
      }
    }
  }

  RoundStructure rounds_;
  std::int64_t cap_;
  std::int64_t mafia_cap_;
  std::vector<std::size_t> row_offset_;
  std::vector<V> values_;
};

using exact_table = basic_win_table<mpq_class>;
using float_table = basic_win_table<double>;

/// Recursion residual W - [n/(n+m) W_civ + m/(n+m) W_maf].
struct Residual {
  Backend backend = Backend::exact;
  mpq_class exact_value;
  double float_value = 0.0;

  bool is_zero() const { return backend == Backend::exact ? exact_value == 0 : float_value == 0.0; }
  double magnitude() const { return std::fabs(backend == Backend::exact ? exact_value.get_d() : float_value); }
};

/// Backend-tagged table.
class WinTable {
 public:
  explicit WinTable(exact_table t) : t_(std::move(t)) {}
  explicit WinTable(float_table t) : t_(std::move(t)) {}

  Backend backend() const { return std::holds_alternative<exact_table>(t_) ? Backend::exact : Backend::floating; }
  RoundStructure rounds() const {
    return std::visit([](const auto& t) { return t.rounds(); }, t_);
  }
  std::int64_t cap() const {
    return std::visit([](const auto& t) { return t.cap(); }, t_);
  }
  std::int64_t mafia_cap() const {
    return std::visit([](const auto& t) { return t.mafia_cap(); }, t_);
  }
  std::size_t size() const {
    return std::visit([](const auto& t) { return t.size(); }, t_);
  }
  bool contains(GameState s) const {
    return std::visit([&](const auto& t) { return t.contains(s); }, t_);
  }

  /// Stored value for s (MissingEntry if absent).
  ProbValue value(GameState s) const {
    return std::visit([&](const auto& t) { return std::decay_t<decltype(t)>::traits::wrap(t.at(s)); }, t_);
  }
  /// Stored value, or the boundary value for states outside the table.
  ProbValue resolve(GameState s) const {
    return std::visit([&](const auto& t) { return std::decay_t<decltype(t)>::traits::wrap(t.resolve(s)); }, t_);
  }
  double value_double(GameState s) const {
    if (const auto* e = std::get_if<exact_table>(&t_)) return e->at(s).get_d();
    return std::get<float_table>(t_).at(s);
  }

  const exact_table* exact() const { return std::get_if<exact_table>(&t_); }
  const float_table* floating() const { return std::get_if<float_table>(&t_); }

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), t_);
  }

 private:
  std::variant<exact_table, float_table> t_;
};

inline WinTable build_table(std::int64_t cap, RoundStructure rounds, Backend backend, const TableOptions& opts = {}) {
  if (cap < 1) throw error(error_kind::invalid_params, "table cap must be >= 1");
  const std::int64_t mafia_cap = opts.mafia_cap.value_or(cap);
  if (mafia_cap < 0) throw error(error_kind::invalid_params, "mafia cap must be >= 0");
  if (backend == Backend::exact) {
    if (cap > opts.exact_cap)
      throw error(error_kind::resource_limit, "exact table cap " + std::to_string(cap) +
                                                  " exceeds exact limit " + std::to_string(opts.exact_cap));
    return WinTable(exact_table(cap, rounds, mafia_cap));
  }
  return WinTable(float_table(cap, rounds, mafia_cap));
}

/// W(n,m) for an arbitrary (r,d) block structure.
inline ProbValue win_prob_general(GameState s, RoundStructure rounds, Backend backend) {
  require_user_state(s);
  const auto b = classify(s, rounds);
  if (b.is_boundary()) return b.value(backend);
  // Only states with at most s.m mafias are reachable.
  TableOptions opts;
  opts.mafia_cap = s.m;
  opts.exact_cap = std::numeric_limits<std::int64_t>::max();
  return build_table(s.population(), rounds, backend, opts).value(s);
}

/// W(n,m) for the classic day/night game.
inline ProbValue win_prob(GameState s, Backend backend) {
  return win_prob_general(s, RoundStructure::classic(), backend);
}

/// Throws MissingEntry for non-interior states or absent children.
inline Residual residual(const WinTable& table, GameState s) {
  const auto b = classify(s, table.rounds());
  if (b.is_boundary())
    throw error(error_kind::missing_entry, std::string("state is a boundary (") + to_string(b.kind) +
                                               "), no recursion residual");
  return table.visit([&](const auto& t) {
    using T = std::decay_t<decltype(t)>;
    using V = typename T::value_type;
    const V& w = t.at(s);
    const V civ = t.resolve(t.civilian_child(s));
    const V maf = t.resolve(t.mafia_child(s));
    Residual r;
    r.backend = T::traits::backend;
    if constexpr (std::is_same_v<V, mpq_class>) {
      r.exact_value = w - T::traits::combine(s.n, s.m, civ, maf);
      r.float_value = r.exact_value.get_d();
    } else {
      r.float_value = w - T::traits::combine(s.n, s.m, civ, maf);
    }
    return r;
  });
}

}  // namespace mafia
