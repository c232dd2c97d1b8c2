#pragma once

#include <cstddef>
#include <string>

#include "adhs/errors.hpp"

namespace adhs {

/// First-order radio model with free-space (d^2) amplifier loss plus a flat
/// per-bit processing cost. Defaults are the published constants.
struct EnergyParams {
  double e_elec = 5e-8;         // J/bit, transmitter or receiver electronics
  double e_p = 5e-9;            // J/bit/signal, processing
  double eps_fs = 1e-10;        // J/bit/m^2, free-space amplifier
  double alpha = 1.0;           // compression ratio, (0, 1]
  double bits_per_message = 1;  // size of one unit message

  void validate() const {
    if (!(e_elec > 0)) throw ConfigError("energy: e_elec must be > 0");
    if (!(e_p > 0)) throw ConfigError("energy: e_p must be > 0");
    if (!(eps_fs > 0)) throw ConfigError("energy: eps_fs must be > 0");
    if (!(alpha > 0 && alpha <= 1)) throw ConfigError("energy: alpha must be in (0, 1]");
    if (!(bits_per_message > 0)) throw ConfigError("energy: bits_per_message must be > 0");
  }
};

struct EnergyBreakdown {
  double receive = 0.0;
  double process = 0.0;
  double transmit = 0.0;

  double total() const { return receive + process + transmit; }

  EnergyBreakdown& operator+=(const EnergyBreakdown& o) {
    receive += o.receive;
    process += o.process;
    transmit += o.transmit;
    return *this;
  }
};

inline double transmit_energy(const EnergyParams& p, double bits, double d) {
  return bits * (p.e_elec + p.eps_fs * d * d);
}

inline double receive_energy(const EnergyParams& p, double bits) { return bits * p.e_elec; }

/// `units` counts unit messages of bits_per_message bits each.
inline double process_energy(const EnergyParams& p, double units) {
  return units * p.bits_per_message * p.e_p;
}

// Per-unit-message shorthands used by the CH formulas.
inline double unit_receive(const EnergyParams& p) { return receive_energy(p, p.bits_per_message); }
inline double unit_process(const EnergyParams& p) { return process_energy(p, 1.0); }
inline double unit_compressed_transmit(const EnergyParams& p, double d) {
  return p.alpha * transmit_energy(p, p.bits_per_message, d);
}

/// Cluster-head round that processes every child message plus its own sample.
inline EnergyBreakdown ch_round_energy_full(const EnergyParams& p, std::size_t n_children,
                                            double d_up) {
  const double n = static_cast<double>(n_children);
  return {n * unit_receive(p), (n + 1.0) * unit_process(p), unit_compressed_transmit(p, d_up)};
}

/// Quiet round: children are still received, only the own sample is processed.
inline EnergyBreakdown ch_round_energy_quiet(const EnergyParams& p, std::size_t n_children,
                                             double d_up) {
  const double n = static_cast<double>(n_children);
  return {n * unit_receive(p), unit_process(p), unit_compressed_transmit(p, d_up)};
}

/// Average per-round CH energy when children are processed at rate r.
inline double ch_avg_energy(const EnergyParams& p, double r, std::size_t n_children,
                            double d_up) {
  if (!(r >= 0.0 && r <= 1.0)) throw PreconditionError("ch_avg_energy: r must be in [0, 1]");
  const double n = static_cast<double>(n_children);
  return n * unit_receive(p) + (r * n + 1.0) * unit_process(p) +
         unit_compressed_transmit(p, d_up);
}

}  // namespace adhs
