#pragma once

// Reproduction of the three-level worked example: CH totals before the first
// refinement and averaged over the two rounds after it.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adhs/config.hpp"
#include "adhs/engine.hpp"
#include "adhs/metrics.hpp"

namespace adhs {

inline const SymbolicEnergy kFig3Before{16, 21, 5};
inline const SymbolicEnergy kFig3After{16, Coefficient(29, 2), 5};
inline constexpr double kFig3Savings = 6.5 / 21.0;
inline constexpr double kFig3SavingsTolerance = 0.005;

struct Fig3Result {
  std::optional<SymbolicEnergy> before;
  std::optional<SymbolicEnergy> after;
  double numeric_before = 0.0;  // J, round 0
  double numeric_after = 0.0;   // J, mean of rounds 1-2
  std::optional<double> savings;
  bool matches = false;
  std::string table;
};

inline Fig3Result reproduce_fig3(const std::vector<std::string>& overrides = {}) {
  json user = {{"preset", "fig3"}};
  SimConfig cfg = load_config_document(user, overrides);
  if (cfg.rounds < 3) cfg.rounds = 3;
  Simulation sim(cfg);
  std::vector<RoundReport> rounds;
  for (int i = 0; i < 3; ++i) rounds.push_back(sim.run_round());

  Fig3Result res;
  res.before = symbolic_ch_total(rounds[0], sim.nodes(), cfg.energy);
  res.after = symbolic_ch_average(std::span<const RoundReport>(rounds).subspan(1, 2), sim.nodes(), cfg.energy);
  res.numeric_before = ch_round_total(rounds[0]);
  res.numeric_after = (ch_round_total(rounds[1]) + ch_round_total(rounds[2])) / 2.0;
  if (res.before && res.after && res.before->coeff_ep > 0) res.savings = ep_savings_ratio(*res.before, *res.after);
  res.matches = res.before == kFig3Before && res.after == kFig3After && res.savings &&
                std::abs(*res.savings - kFig3Savings) <= kFig3SavingsTolerance;

  std::ostringstream os;
  os << "fig3 worked example (T=" << cfg.adhs.t_threshold << ", L=" << cfg.adhs.l_limit
     << (cfg.adhs.literal_mode ? ", literal" : ", capped") << ")\n";
  os << "  before refinement (round 0):  " << (res.before ? to_string(*res.before) : "n/a")
     << "   expected " << to_string(kFig3Before) << '\n';
  os << "  after refinement (rounds 1-2): " << (res.after ? to_string(*res.after) : "n/a")
     << "   expected " << to_string(kFig3After) << '\n';
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "  E_p savings: " << (res.savings ? *res.savings * 100.0 : 0.0) << "%   expected "
     << kFig3Savings * 100.0 << "% +/- " << kFig3SavingsTolerance * 100.0 << '\n';
  os.unsetf(std::ios::fixed);
  os.precision(6);
  os << "  numeric CH energy: before " << res.numeric_before << " J, after " << res.numeric_after << " J\n";
  os << "  result: " << (res.matches ? "MATCH" : "MISMATCH") << '\n';
  res.table = os.str();
  return res;
}

}  // namespace adhs
