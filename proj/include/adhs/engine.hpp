#pragma once

// Synchronous round loop. Within a round nodes act deepest-first along the
// uplink tree, so a value climbs the whole hierarchy in one round.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adhs/adhs.hpp"
#include "adhs/energy.hpp"
#include "adhs/field.hpp"
#include "adhs/hcc.hpp"
#include "adhs/scenario.hpp"
#include "adhs/topology.hpp"

namespace adhs {

struct NodeRoundRecord {
  NodeId node = 0;
  Role role = Role::kNonClusterHead;
  bool alive = true;         // after this round
  bool died = false;         // died during this round (could not pay)
  EnergyBreakdown energy;
  double battery_after = 0.0;
  std::optional<ChAction> action;  // CHs that acted
  std::optional<double> variance;
  std::optional<std::size_t> period_c;  // CH period at the end of the round
  std::size_t rx_units = 0;
  std::size_t proc_units = 0;
  std::size_t tx_units = 0;
  std::size_t backlog_units = 0;  // child units processed by a flush beyond the current round
  std::optional<Reading> sent;    // message sent upward (value, newest contributing round)
};

struct RoundReport {
  Round round = 0;
  std::vector<NodeRoundRecord> per_node;  // every non-BS node, ascending id
  std::vector<Reading> bs_received;
  double e_tot_round = 0.0;  // accumulated as charges are made
  std::size_t lost_readings = 0;
};

struct FidelityStats {
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  double exact_fraction = 1.0;
  std::size_t samples = 0;
};

struct SimReport {
  std::vector<RoundReport> rounds;
  std::optional<Round> lifetime_rounds;  // index of the first round a CH could not pay for
  std::vector<EnergyBreakdown> node_totals;
  EnergyBreakdown network_total;
  double ch_energy_total = 0.0;
  double nch_energy_total = 0.0;
  double backlog_process_energy = 0.0;
  std::size_t lost_readings = 0;
  FidelityStats fidelity;
};

/// Independent decomposition of a round total: NCH transmit energy plus
/// CH receive/process/transmit energy.
inline double formula1_total(const RoundReport& r) {
  double nch = 0.0, ch = 0.0;
  for (const auto& rec : r.per_node) {
    if (rec.role == Role::kNonClusterHead)
      nch += rec.energy.transmit;
    else
      ch += rec.energy.receive + rec.energy.process + rec.energy.transmit;
  }
  return nch + ch;
}

class Simulation {
 public:
  static constexpr NodeId kBaseStation = 0;

  explicit Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    auto nodes = build_nodes(cfg_);
    const auto tree = tree_discovery(nodes, kBaseStation, cfg_.deployment.comm_range);
    hierarchy_ = cluster_formation(tree, cfg_.k, kBaseStation);
    nodes_ = assign_roles(hierarchy_, std::move(nodes));
    for (auto& n : nodes_) n.battery = n.role == Role::kBaseStation ? 0.0 : cfg_.battery_j;
    alive_.assign(nodes_.size(), true);
    states_.assign(nodes_.size(), adhs_init(cfg_.adhs));
    last_fresh_.assign(nodes_.size(), 0);

    std::vector<std::size_t> depth(nodes_.size(), 0);
    std::vector<NodeId> bfs{kBaseStation};
    for (std::size_t i = 0; i < bfs.size(); ++i)
      for (NodeId c : nodes_[bfs[i]].children) {
        depth[c] = depth[bfs[i]] + 1;
        bfs.push_back(c);
      }
    for (const auto& n : nodes_)
      if (n.role != Role::kBaseStation) order_.push_back(n.id);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](NodeId a, NodeId b) { return depth[a] > depth[b]; });
  }

  const SimConfig& config() const { return cfg_; }
  const std::vector<SensorNode>& nodes() const { return nodes_; }
  const ClusterHierarchy& hierarchy() const { return hierarchy_; }
  const ChState& ch_state(NodeId id) const { return states_.at(id); }
  Round next_round() const { return round_; }

  double uplink_distance(NodeId id) const {
    return euclidean_distance(nodes_[id].pos, nodes_[*nodes_[id].parent].pos);
  }

  bool any_ch() const {
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [](const SensorNode& n) { return n.role == Role::kClusterHead; });
  }

  bool all_ch_dead() const {
    bool any = false;
    for (const auto& n : nodes_)
      if (n.role == Role::kClusterHead) {
        any = true;
        if (alive_[n.id]) return false;
      }
    return any;
  }

  RoundReport run_round() {
    const Round t = round_++;
    const EnergyParams& ep = cfg_.energy;
    RoundReport report;
    report.round = t;
    std::vector<std::vector<Reading>> inbox(nodes_.size());
    std::vector<NodeRoundRecord> records(nodes_.size());

    for (NodeId v : order_) {
      SensorNode& node = nodes_[v];
      NodeRoundRecord& rec = records[v];
      rec.node = v;
      rec.role = node.role;
      const std::size_t arrivals = inbox[v].size();

      if (!alive_[v]) {
        rec.alive = false;
        rec.battery_after = node.battery;
        report.lost_readings += arrivals;
        continue;
      }

      const Reading own{v, t, sample_field(cfg_.field, node.pos, t)};
      const double d_up = uplink_distance(v);

      if (node.role == Role::kNonClusterHead) {
        const double cost = transmit_energy(ep, ep.bits_per_message, d_up);
        if (node.battery < cost) {
          kill(v, rec);
          continue;
        }
        rec.energy.transmit = cost;
        rec.tx_units = 1;
        rec.sent = own;
      } else {
        StepOutcome out = adhs_step(states_[v], own, inbox[v], cfg_.adhs);
        EnergyBreakdown e;
        e.receive = static_cast<double>(arrivals) * unit_receive(ep);
        e.process = static_cast<double>(out.processed_units) * unit_process(ep);
        if (out.sent_value) e.transmit = unit_compressed_transmit(ep, d_up);
        if (node.battery < e.total()) {
          kill(v, rec);
          report.lost_readings += arrivals;
          continue;
        }
        rec.energy = e;
        rec.action = out.action;
        rec.variance = out.variance;
        rec.rx_units = arrivals;
        rec.proc_units = out.processed_units;
        if (out.action.kind == ChActionKind::kProcessAndTransmit)
          rec.backlog_units = out.processed_units - arrivals - 1;
        if (out.sent_value) {
          rec.tx_units = 1;
          Round newest = t;
          if (out.action.kind == ChActionKind::kBufferOnly) newest = last_fresh_[v];
          rec.sent = Reading{v, newest, *out.sent_value};
        }
        if (out.action.kind != ChActionKind::kBufferOnly) last_fresh_[v] = t;
        states_[v] = std::move(out.state);
        rec.period_c = states_[v].period_c;
      }

      node.battery -= rec.energy.total();
      rec.battery_after = node.battery;
      report.e_tot_round += rec.energy.transmit;
      report.e_tot_round += rec.energy.receive + rec.energy.process;
      if (rec.sent) {
        if (*node.parent == kBaseStation)
          report.bs_received.push_back(*rec.sent);
        else
          inbox[*node.parent].push_back(*rec.sent);
      }
    }

    for (const auto& n : nodes_)
      if (n.role != Role::kBaseStation) report.per_node.push_back(std::move(records[n.id]));
    return report;
  }

 private:
  void kill(NodeId v, NodeRoundRecord& rec) {
    alive_[v] = false;
    rec.alive = false;
    rec.died = true;
    rec.battery_after = nodes_[v].battery;
  }

  SimConfig cfg_;
  std::vector<SensorNode> nodes_;
  ClusterHierarchy hierarchy_;
  std::vector<bool> alive_;
  std::vector<ChState> states_;
  std::vector<NodeId> order_;
  std::vector<Round> last_fresh_;  // round of each CH's newest fresh aggregate
  Round round_ = 0;
};

/// Ground-truth value a CH would forward if it processed fresh data this
/// round: the mean of its own sample and its children's truths, in the same
/// order the controller aggregates (own first, children ascending).
inline double ground_truth(const Field& field, std::span<const SensorNode> nodes,
                           const std::vector<std::vector<NodeId>>& children, NodeId v, Round t) {
  double sum = sample_field(field, nodes[v].pos, t);
  for (NodeId c : children[v]) {
    sum += children[c].empty() ? sample_field(field, nodes[c].pos, t)
                               : ground_truth(field, nodes, children, c, t);
  }
  return sum / static_cast<double>(children[v].size() + 1);
}

/// Absolute error between the value each CH's parent holds for it (last value
/// sent, stale values persist) and the CH's ground truth, over every round
/// after the CH's first transmission.
inline FidelityStats fidelity(const SimReport& report, const Field& field,
                              const ClusterHierarchy& hierarchy, std::span<const SensorNode> nodes) {
  const auto children = hierarchy.children();
  std::vector<std::optional<double>> held(nodes.size());
  FidelityStats s;
  double sum = 0.0;
  std::size_t exact = 0;
  for (const auto& r : report.rounds) {
    for (const auto& rec : r.per_node) {
      if (rec.role != Role::kClusterHead) continue;
      if (rec.sent) held[rec.node] = rec.sent->value;
      if (!held[rec.node]) continue;
      const double err = std::abs(*held[rec.node] - ground_truth(field, nodes, children, rec.node, r.round));
      sum += err;
      s.max_abs_error = std::max(s.max_abs_error, err);
      if (err <= 1e-9) ++exact;
      ++s.samples;
    }
  }
  if (s.samples > 0) {
    s.mean_abs_error = sum / static_cast<double>(s.samples);
    s.exact_fraction = static_cast<double>(exact) / static_cast<double>(s.samples);
  }
  return s;
}

inline SimReport run(const SimConfig& cfg) {
  Simulation sim(cfg);
  SimReport out;
  out.node_totals.assign(sim.nodes().size(), {});
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    if (sim.any_ch() && sim.all_ch_dead()) break;
    RoundReport r = sim.run_round();
    for (const auto& rec : r.per_node) {
      out.node_totals[rec.node] += rec.energy;
      out.network_total += rec.energy;
      if (rec.role == Role::kClusterHead) {
        out.ch_energy_total += rec.energy.total();
        out.backlog_process_energy +=
            static_cast<double>(rec.backlog_units) * unit_process(cfg.energy);
        if (rec.died && !out.lifetime_rounds) out.lifetime_rounds = r.round;
      } else {
        out.nch_energy_total += rec.energy.total();
      }
    }
    out.lost_readings += r.lost_readings;
    out.rounds.push_back(std::move(r));
  }
  out.fidelity = fidelity(out, cfg.field, sim.hierarchy(), sim.nodes());
  return out;
}

}  // namespace adhs
