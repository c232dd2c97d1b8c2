#pragma once

// trace.csv, summary.json, manifest.json and hierarchy.json writers.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "adhs/config.hpp"
#include "adhs/engine.hpp"
#include "adhs/metrics.hpp"

namespace adhs {

/// Shortest representation that round-trips; "inf"/"-inf"/"nan" otherwise.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kTraceHeader =
    "round,node_id,role,action,e_receive,e_process,e_transmit,battery,variance,period_c";

inline void write_trace_csv(std::ostream& os, const SimReport& report) {
  os << kTraceHeader << '\n';
  for (const auto& r : report.rounds)
    for (const auto& rec : r.per_node) {
      std::string action;
      if (!rec.alive)
        action = rec.died ? "died" : "dead";
      else if (rec.action)
        action = std::string(to_string(rec.action->kind));
      else
        action = "sense";
      os << r.round << ',' << rec.node << ',' << to_string(rec.role) << ',' << action << ','
         << format_double(rec.energy.receive) << ',' << format_double(rec.energy.process) << ','
         << format_double(rec.energy.transmit) << ',' << format_double(rec.battery_after) << ','
         << (rec.variance ? format_double(*rec.variance) : "") << ','
         << (rec.period_c ? std::to_string(*rec.period_c) : "") << '\n';
    }
}

inline json symbolic_json(const std::optional<SymbolicEnergy>& s) {
  if (!s) return nullptr;
  return {{"e_r", boost::rational_cast<double>(s->coeff_er)},
          {"e_p", boost::rational_cast<double>(s->coeff_ep)},
          {"alpha_e_t", boost::rational_cast<double>(s->coeff_alpha_et)},
          {"text", to_string(*s)}};
}

/// Before/after CH totals: round 0 versus the per-round mean of rounds
/// [1, 1 + after_rounds).
struct HeadlineNumbers {
  std::optional<SymbolicEnergy> before;
  std::optional<SymbolicEnergy> after;
  std::optional<double> ch_energy_before;
  std::optional<double> ch_energy_after;
  std::optional<double> ep_savings;
};

inline HeadlineNumbers headline_numbers(const SimReport& report, std::span<const SensorNode> nodes,
                                        const SimConfig& cfg) {
  HeadlineNumbers h;
  if (report.rounds.empty()) return h;
  const auto& r0 = report.rounds.front();
  h.before = symbolic_ch_total(r0, nodes, cfg.energy);
  h.ch_energy_before = ch_round_total(r0);
  if (report.rounds.size() < 1 + cfg.after_rounds) return h;
  const std::span<const RoundReport> window(report.rounds.data() + 1, cfg.after_rounds);
  h.after = symbolic_ch_average(window, nodes, cfg.energy);
  double ch = 0.0, proc_before = 0.0, proc_after = 0.0;
  for (const auto& r : window) ch += ch_round_total(r);
  h.ch_energy_after = ch / static_cast<double>(window.size());
  if (h.before && h.after && h.before->coeff_ep > 0) {
    h.ep_savings = ep_savings_ratio(*h.before, *h.after);
  } else {
    for (const auto& rec : r0.per_node)
      if (rec.role == Role::kClusterHead) proc_before += rec.energy.process;
    for (const auto& r : window)
      for (const auto& rec : r.per_node)
        if (rec.role == Role::kClusterHead) proc_after += rec.energy.process;
    proc_after /= static_cast<double>(window.size());
    if (proc_before > 0) h.ep_savings = (proc_before - proc_after) / proc_before;
  }
  return h;
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json summary_json(const SimReport& report, std::span<const SensorNode> nodes, const SimConfig& cfg) {
  const auto h = headline_numbers(report, nodes, cfg);
  json series = json::array();
  for (const auto& r : report.rounds) series.push_back(r.e_tot_round);
  return {
      {"schema_version", kSchemaVersion},
      {"preset", cfg.preset},
      {"seed", cfg.seed},
      {"rounds_run", report.rounds.size()},
      {"lifetime_rounds", opt_json(report.lifetime_rounds)},
      {"symbolic_before", symbolic_json(h.before)},
      {"symbolic_after", symbolic_json(h.after)},
      {"ep_savings", opt_json(h.ep_savings)},
      {"ch_energy_before", opt_json(h.ch_energy_before)},
      {"ch_energy_after", opt_json(h.ch_energy_after)},
      {"e_tot", report.network_total.total()},
      {"e_ch_total", report.ch_energy_total},
      {"e_nch_total", report.nch_energy_total},
      {"backlog_process_energy", report.backlog_process_energy},
      {"lost_readings", report.lost_readings},
      {"fidelity",
       {{"mean_abs_error", report.fidelity.mean_abs_error},
        {"max_abs_error", report.fidelity.max_abs_error},
        {"exact_fraction", report.fidelity.exact_fraction},
        {"samples", report.fidelity.samples}}},
      {"e_tot_per_round", std::move(series)},
  };
}

inline json hierarchy_json(const ClusterHierarchy& h, std::span<const SensorNode> nodes) {
  json jn = json::array();
  for (const auto& n : nodes)
    jn.push_back({{"id", n.id},
                  {"x", n.pos.x},
                  {"y", n.pos.y},
                  {"role", to_string(n.role)},
                  {"parent", opt_json(n.parent)},
                  {"children", n.children}});
  json jc = json::array();
  for (const auto& c : h.clusters)
    jc.push_back({{"id", c.id}, {"head", c.head}, {"level", c.level}, {"members", c.members}});
  return {{"k", h.k},
          {"bs", opt_json(h.bs)},
          {"levels", h.levels()},
          {"root_cluster", opt_json(h.root_cluster)},
          {"nodes", std::move(jn)},
          {"clusters", std::move(jc)}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

struct RunOutputs {
  SimReport report;
  std::vector<SensorNode> nodes;
  ClusterHierarchy hierarchy;
};

/// Runs `cfg` and writes trace.csv, summary.json, manifest.json (and
/// hierarchy.json when asked) into `out_dir`.
inline RunOutputs run_to_directory(const SimConfig& cfg, const std::filesystem::path& out_dir,
                                   bool dump_hierarchy = false) {
  std::filesystem::create_directories(out_dir);
  Simulation probe(cfg);
  RunOutputs out{run(cfg), probe.nodes(), probe.hierarchy()};
  {
    std::ofstream trace(out_dir / "trace.csv", std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write trace.csv");
    write_trace_csv(trace, out.report);
  }
  write_text(out_dir / "summary.json", summary_json(out.report, out.nodes, cfg).dump(2) + "\n");
  write_text(out_dir / "manifest.json", to_json(cfg).dump(2) + "\n");
  if (dump_hierarchy)
    write_text(out_dir / "hierarchy.json", hierarchy_json(out.hierarchy, out.nodes).dump(2) + "\n");
  return out;
}

}  // namespace adhs
