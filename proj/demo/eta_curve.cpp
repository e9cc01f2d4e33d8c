// Prints W(R-M, M) for M around eta*sqrt(R), next to the square-root bounds
// and a Monte Carlo estimate.
#include <cmath>
#include <cstdio>

#include "mafia_odds/mafia_odds.hpp"

int main() {
  using namespace mafia;
  constexpr std::int64_t R = 2500;
  TableOptions opts;
  opts.mafia_cap = 200;
  const WinTable table = build_table(R, RoundStructure::classic(), Backend::floating, opts);

  std::printf("%6s %5s %10s %10s %10s %10s\n", "eta", "M", "lower", "W", "upper", "mc");
  for (double eta = 0.25; eta <= 3.0; eta += 0.25) {
    const auto M = static_cast<std::int64_t>(std::ceil(eta * std::sqrt(double(R))));
    const GameState st{R - M, M};
    BoundParams p;
    p.k = M;
    p.r_cap = R;
    SimConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 42;
    const SimResult mc = estimate(st, cfg);
    std::printf("%6.2f %5lld %10.5f %10.5f %10.5f %10.5f\n", eta, static_cast<long long>(M),
                lower_bound(st, M).clamped, table.value_double(st), upper_bound(st, p).clamped, mc.estimate);
  }
}
