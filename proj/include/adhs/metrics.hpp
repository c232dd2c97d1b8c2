#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "adhs/energy.hpp"
#include "adhs/engine.hpp"
#include "adhs/errors.hpp"

namespace adhs {

using Coefficient = boost::rational<std::int64_t>;

/// CH energy written as coeff_er*E_r + coeff_ep*E_p + coeff_alpha_et*(alpha E_t),
/// each term per unit message, E_t at the hierarchy's single uplink distance.
struct SymbolicEnergy {
  Coefficient coeff_er{0};
  Coefficient coeff_ep{0};
  Coefficient coeff_alpha_et{0};

  friend bool operator==(const SymbolicEnergy&, const SymbolicEnergy&) = default;

  double evaluate(const EnergyParams& p, double d_class) const {
    return boost::rational_cast<double>(coeff_er) * unit_receive(p) +
           boost::rational_cast<double>(coeff_ep) * unit_process(p) +
           boost::rational_cast<double>(coeff_alpha_et) * unit_compressed_transmit(p, d_class);
  }
};

/// "14.5", "21", or "7/3" when the value has no short decimal form.
inline std::string format_coefficient(const Coefficient& c) {
  std::int64_t den = c.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  std::ostringstream os;
  if (den != 1) {
    os << c.numerator() << '/' << c.denominator();
    return os.str();
  }
  const int digits = std::max(twos, fives);
  if (digits == 0) {
    os << c.numerator();
    return os.str();
  }
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = c.numerator() * (scale / c.denominator());
  const std::int64_t mag = scaled < 0 ? -scaled : scaled;
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  os << (scaled < 0 ? "-" : "") << mag / scale << '.' << frac;
  return os.str();
}

inline std::string to_string(const SymbolicEnergy& s) {
  return format_coefficient(s.coeff_er) + " E_r + " + format_coefficient(s.coeff_ep) + " E_p + " +
         format_coefficient(s.coeff_alpha_et) + " αE_t";
}

/// The common uplink length of all CHs, if every CH uplink has the same length
/// (1e-9 relative). nullopt when lengths differ; 0 when there is no CH.
inline std::optional<double> uplink_distance_class(std::span<const SensorNode> nodes) {
  std::optional<double> d;
  for (const auto& n : nodes) {
    if (n.role != Role::kClusterHead) continue;
    const double du = euclidean_distance(n.pos, nodes[*n.parent].pos);
    if (!d)
      d = du;
    else if (std::abs(du - *d) > 1e-9 * std::max(1.0, *d))
      return std::nullopt;
  }
  return d.value_or(0.0);
}

namespace detail {

inline std::optional<std::int64_t> snap(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-6 * std::max(1.0, std::abs(r))) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

/// Recovers the integer unit-message coefficients of one round's CH energy by
/// dividing the accumulated components by the unit costs. nullopt when the CH
/// uplinks span several distance classes.
inline std::optional<SymbolicEnergy> symbolic_ch_total(const RoundReport& report,
                                                       std::span<const SensorNode> nodes,
                                                       const EnergyParams& p) {
  const auto d = uplink_distance_class(nodes);
  if (!d) return std::nullopt;
  EnergyBreakdown sum;
  for (const auto& rec : report.per_node)
    if (rec.role == Role::kClusterHead) sum += rec.energy;
  const auto er = detail::snap(sum.receive / unit_receive(p));
  const auto ep = detail::snap(sum.process / unit_process(p));
  const auto et = detail::snap(sum.transmit / unit_compressed_transmit(p, *d));
  if (!er || !ep || !et) return std::nullopt;
  return SymbolicEnergy{*er, *ep, *et};
}

/// Per-round mean of symbolic_ch_total over `rounds`.
inline std::optional<SymbolicEnergy> symbolic_ch_average(std::span<const RoundReport> rounds,
                                                         std::span<const SensorNode> nodes,
                                                         const EnergyParams& p) {
  if (rounds.empty()) return std::nullopt;
  SymbolicEnergy acc;
  for (const auto& r : rounds) {
    const auto s = symbolic_ch_total(r, nodes, p);
    if (!s) return std::nullopt;
    acc.coeff_er += s->coeff_er;
    acc.coeff_ep += s->coeff_ep;
    acc.coeff_alpha_et += s->coeff_alpha_et;
  }
  const auto n = static_cast<std::int64_t>(rounds.size());
  acc.coeff_er /= n;
  acc.coeff_ep /= n;
  acc.coeff_alpha_et /= n;
  return acc;
}

/// Relative reduction of the processing coefficient.
inline double ep_savings_ratio(const SymbolicEnergy& before, const SymbolicEnergy& after) {
  if (before.coeff_ep <= 0) throw PreconditionError("ep_savings_ratio: baseline E_p coefficient is zero");
  return boost::rational_cast<double>((before.coeff_ep - after.coeff_ep) / before.coeff_ep);
}

/// Sum of CH energy in one round.
inline double ch_round_total(const RoundReport& r) {
  double s = 0.0;
  for (const auto& rec : r.per_node)
    if (rec.role == Role::kClusterHead) s += rec.energy.total();
  return s;
}

}  // namespace adhs
