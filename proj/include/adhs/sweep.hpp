#pragma once

#include <future>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "adhs/config.hpp"
#include "adhs/engine.hpp"
#include "adhs/report_io.hpp"

namespace adhs {

struct SweepRow {
  json value;
  double e_tot = 0.0;
  std::optional<Round> lifetime;
  double fidelity_mean_abs_error = 0.0;
  double e_ch = 0.0;
  double ch_process_per_round = 0.0;  // mean over rounds of total CH processing energy
};

inline std::string sweep_pointer(const std::string& param) {
  static const std::map<std::string, std::string> sweepable{
      {"T", "/adhs/t_threshold"}, {"t_threshold", "/adhs/t_threshold"},
      {"L", "/adhs/l_limit"},     {"l_limit", "/adhs/l_limit"},
      {"k", "/hierarchy/k"},      {"alpha", "/energy/alpha"},
      {"n", "/deployment/n"},
  };
  auto it = sweepable.find(param);
  if (it == sweepable.end()) throw ConfigError("sweep: parameter '" + param + "' is not sweepable (T, L, k, alpha, n)");
  return it->second;
}

/// One independent run per value; runs execute concurrently, rows come back in
/// input order.
inline std::vector<SweepRow> sweep(const std::string& param, const std::vector<json>& values,
                                   const SimConfig& base) {
  const std::string pointer = sweep_pointer(param);
  std::vector<SimConfig> configs;
  for (const auto& v : values) {
    json doc = to_json(base);
    doc[json::json_pointer(pointer)] = v;
    configs.push_back(from_json(doc));
  }
  std::vector<std::future<SweepRow>> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i)
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const SimReport r = run(configs[i]);
      SweepRow row;
      row.value = values[i];
      row.e_tot = r.network_total.total();
      row.lifetime = r.lifetime_rounds;
      row.fidelity_mean_abs_error = r.fidelity.mean_abs_error;
      row.e_ch = r.ch_energy_total;
      double proc = 0.0;
      for (const auto& rr : r.rounds)
        for (const auto& rec : rr.per_node)
          if (rec.role == Role::kClusterHead) proc += rec.energy.process;
      row.ch_process_per_round = r.rounds.empty() ? 0.0 : proc / static_cast<double>(r.rounds.size());
      return row;
    }));
  std::vector<SweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::string& param, const std::vector<SweepRow>& rows) {
  os << param << ",e_tot,lifetime,fidelity\n";
  for (const auto& r : rows) {
    os << (r.value.is_number_float() ? format_double(r.value.get<double>()) : r.value.dump()) << ','
       << format_double(r.e_tot) << ',' << (r.lifetime ? std::to_string(*r.lifetime) : "") << ','
       << format_double(r.fidelity_mean_abs_error) << '\n';
  }
}

}  // namespace adhs
