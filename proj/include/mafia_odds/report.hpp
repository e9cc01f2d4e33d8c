// Result of a grid verification and its JSON form.
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace mafia {

/// One failed check. Exactly one of state / point identifies the location.
struct Violation {
  std::string side;
  std::optional<GameState> state;
  std::optional<double> point;
  double value = 0.0;
  double bound = 0.0;
};

struct Extremum {
  std::string label;
  double value = 0.0;
  std::optional<GameState> state;
  std::optional<double> point;
};

struct ScanReport {
  std::string suite;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Violation> violations;
  std::vector<Extremum> extremal;
  double runtime_ms = 0.0;

  bool holds() const { return violations.empty(); }

  const Extremum* find_extremum(const std::string& label) const {
    auto it = std::find_if(extremal.begin(), extremal.end(), [&](const Extremum& e) { return e.label == label; });
    return it == extremal.end() ? nullptr : &*it;
  }

  std::size_t count_side(const std::string& side) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.side == side; }));
  }
};

/// JSON has no infinities; non-finite numbers become null.
inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(GameState s) { return {{"n", s.n}, {"m", s.m}}; }

inline nlohmann::json to_json(const Violation& v) {
  nlohmann::json j = {{"side", v.side}, {"value", finite_or_null(v.value)}, {"bound", finite_or_null(v.bound)}};
  if (v.state) j["state"] = to_json(*v.state);
  if (v.point) j["point"] = finite_or_null(*v.point);
  return j;
}

inline nlohmann::json to_json(const Extremum& e) {
  nlohmann::json j = {{"label", e.label}, {"value", finite_or_null(e.value)}};
  if (e.state) j["state"] = to_json(*e.state);
  if (e.point) j["point"] = finite_or_null(*e.point);
  return j;
}

inline nlohmann::json to_json(const ScanReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v));
  nlohmann::json extremal = nlohmann::json::array();
  for (const auto& e : r.extremal) extremal.push_back(to_json(e));
  return {{"suite", r.suite},
          {"params", r.params},
          {"violations", std::move(violations)},
          {"extremal", std::move(extremal)},
          {"runtime_ms", r.runtime_ms}};
}

}  // namespace mafia
