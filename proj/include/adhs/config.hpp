#pragma once

// JSON configuration: schema, presets, and key=value overrides.
//
// Resolution order: preset defaults, then the config file, then --set
// overrides. Presets whose regions are generated from the seed are expanded
// after the final seed is known. The resolved document is written back as
// manifest.json and loads to the identical SimConfig.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adhs/errors.hpp"
#include "adhs/scenario.hpp"

namespace adhs {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

// Flat override names and the JSON pointer they resolve to.
inline const std::map<std::string, std::string>& key_aliases() {
  static const std::map<std::string, std::string> m{
      {"schema_version", "/schema_version"},
      {"preset", "/preset"},
      {"seed", "/seed"},
      {"rounds", "/rounds"},
      {"battery_j", "/battery_j"},
      {"deployment_kind", "/deployment/kind"},
      {"n", "/deployment/n"},
      {"area_side", "/deployment/area_side"},
      {"bs_at_center", "/deployment/bs_at_center"},
      {"rows", "/deployment/rows"},
      {"cols", "/deployment/cols"},
      {"spacing", "/deployment/spacing"},
      {"comm_range", "/deployment/comm_range"},
      {"k", "/hierarchy/k"},
      {"t_threshold", "/adhs/t_threshold"},
      {"T", "/adhs/t_threshold"},
      {"l_limit", "/adhs/l_limit"},
      {"L", "/adhs/l_limit"},
      {"literal_mode", "/adhs/literal_mode"},
      {"quiet_transmit", "/adhs/quiet_transmit"},
      {"e_elec", "/energy/e_elec"},
      {"e_p", "/energy/e_p"},
      {"eps_fs", "/energy/eps_fs"},
      {"alpha", "/energy/alpha"},
      {"bits_per_message", "/energy/bits_per_message"},
      {"variance_kind", "/field/variance_kind"},
      {"default_value", "/field/default_value"},
      {"regions", "/field/regions"},
      {"after_rounds", "/report/after_rounds"},
  };
  return m;
}

inline const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"schema_version", "preset", "seed", "rounds", "battery_j", "deployment", "hierarchy",
            "adhs", "energy", "field", "report"}},
      {"deployment", {"kind", "n", "area_side", "bs_at_center", "rows", "cols", "spacing", "comm_range"}},
      {"hierarchy", {"k"}},
      {"adhs", {"t_threshold", "l_limit", "literal_mode", "quiet_transmit"}},
      {"energy", {"e_elec", "e_p", "eps_fs", "alpha", "bits_per_message"}},
      {"field", {"variance_kind", "default_value", "regions"}},
      {"report", {"after_rounds"}},
  };
  return s;
}

inline void check_keys(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    const auto& top = schema().at("");
    if (!top.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (auto it = schema().find(key); it != schema().end()) {
      if (!value.is_object()) throw ConfigError("config: '" + key + "' must be an object");
      for (const auto& [sub, _] : value.items())
        if (!it->second.count(sub)) throw ConfigError("config: unknown key '" + key + "." + sub + "'");
    }
  }
}

inline json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

template <typename T>
T get(const json& doc, const std::string& pointer) {
  const json::json_pointer ptr(pointer);
  const std::string key = pointer.substr(1);
  if (!doc.contains(ptr)) throw ConfigError("config: missing key '" + key + "'");
  try {
    return doc.at(ptr).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: wrong type for key '" + key + "'");
  }
}

inline double get_double_or_inf(const json& doc, const std::string& pointer) {
  const json::json_pointer ptr(pointer);
  if (doc.contains(ptr) && doc.at(ptr).is_string()) {
    if (doc.at(ptr).get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("config: key '" + pointer.substr(1) + "' must be a number or \"inf\"");
  }
  return get<double>(doc, pointer);
}

inline json region_to_json(const Region& r) {
  json j;
  if (const auto* rect = std::get_if<RectRegion>(&r.shape))
    j = {{"shape", "rect"}, {"x0", rect->x0}, {"y0", rect->y0}, {"x1", rect->x1}, {"y1", rect->y1}};
  else {
    const auto& c = std::get<CircleRegion>(r.shape);
    j = {{"shape", "circle"}, {"cx", c.cx}, {"cy", c.cy}, {"r", c.r}};
  }
  json tl = json::array();
  for (const auto& s : r.timeline.steps) tl.push_back({s.from, s.value ? json(*s.value) : json(nullptr)});
  j["timeline"] = std::move(tl);
  return j;
}

inline Region region_from_json(const json& j) {
  try {
    Region r;
    const auto shape = j.at("shape").get<std::string>();
    if (shape == "rect")
      r.shape = RectRegion{j.at("x0").get<double>(), j.at("y0").get<double>(), j.at("x1").get<double>(),
                           j.at("y1").get<double>()};
    else if (shape == "circle")
      r.shape = CircleRegion{j.at("cx").get<double>(), j.at("cy").get<double>(), j.at("r").get<double>()};
    else
      throw ConfigError("field.regions: unknown shape '" + shape + "'");
    for (const auto& step : j.at("timeline")) {
      Timeline::Step s;
      s.from = step.at(0).get<Round>();
      if (!step.at(1).is_null()) s.value = step.at(1).get<double>();
      r.timeline.steps.push_back(s);
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field.regions: malformed region: ") + e.what());
  }
}

}  // namespace detail

inline json to_json(const SimConfig& c) {
  json regions = json::array();
  for (const auto& r : c.field.regions) regions.push_back(detail::region_to_json(r));
  return {
      {"schema_version", kSchemaVersion},
      {"preset", c.preset},
      {"seed", c.seed},
      {"rounds", c.rounds},
      {"battery_j", detail::number_or_inf(c.battery_j)},
      {"deployment",
       {{"kind", to_string(c.deployment.kind)},
        {"n", c.deployment.n},
        {"area_side", c.deployment.area_side},
        {"bs_at_center", c.deployment.bs_at_center},
        {"rows", c.deployment.rows},
        {"cols", c.deployment.cols},
        {"spacing", c.deployment.spacing},
        {"comm_range", c.deployment.comm_range}}},
      {"hierarchy", {{"k", c.k}}},
      {"adhs",
       {{"t_threshold", detail::number_or_inf(c.adhs.t_threshold)},
        {"l_limit", c.adhs.l_limit},
        {"literal_mode", c.adhs.literal_mode},
        {"quiet_transmit", to_string(c.adhs.quiet_transmit)}}},
      {"energy",
       {{"e_elec", c.energy.e_elec},
        {"e_p", c.energy.e_p},
        {"eps_fs", c.energy.eps_fs},
        {"alpha", c.energy.alpha},
        {"bits_per_message", c.energy.bits_per_message}}},
      {"field",
       {{"variance_kind", to_string(c.adhs.variance_kind)},
        {"default_value", c.field.default_value},
        {"regions", std::move(regions)}}},
      {"report", {{"after_rounds", c.after_rounds}}},
  };
}

/// Strict conversion of a fully resolved document; validates invariants.
inline SimConfig from_json(const json& doc) {
  using detail::get;
  detail::check_keys(doc);
  if (get<int>(doc, "/schema_version") != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  SimConfig c;
  c.preset = get<std::string>(doc, "/preset");
  c.seed = get<std::uint64_t>(doc, "/seed");
  const auto rounds = get<std::int64_t>(doc, "/rounds");
  if (rounds < 1) throw ConfigError("config: key 'rounds' must be >= 1");
  c.rounds = static_cast<std::size_t>(rounds);
  c.battery_j = detail::get_double_or_inf(doc, "/battery_j");

  const auto kind = get<std::string>(doc, "/deployment/kind");
  if (kind == "fig3")
    c.deployment.kind = DeploymentKind::kFig3;
  else if (kind == "grid")
    c.deployment.kind = DeploymentKind::kGrid;
  else if (kind == "uniform")
    c.deployment.kind = DeploymentKind::kUniform;
  else
    throw ConfigError("config: key 'deployment.kind' must be fig3, grid or uniform");
  const auto count = [&](const char* ptr, const char* name) {
    const auto v = get<std::int64_t>(doc, ptr);
    if (v < 0) throw ConfigError(std::string("config: key '") + name + "' must be >= 0");
    return static_cast<std::size_t>(v);
  };
  c.deployment.n = count("/deployment/n", "deployment.n");
  c.deployment.area_side = get<double>(doc, "/deployment/area_side");
  c.deployment.bs_at_center = get<bool>(doc, "/deployment/bs_at_center");
  c.deployment.rows = count("/deployment/rows", "deployment.rows");
  c.deployment.cols = count("/deployment/cols", "deployment.cols");
  c.deployment.spacing = get<double>(doc, "/deployment/spacing");
  c.deployment.comm_range = get<double>(doc, "/deployment/comm_range");
  c.k = count("/hierarchy/k", "hierarchy.k");

  c.adhs.t_threshold = detail::get_double_or_inf(doc, "/adhs/t_threshold");
  if (!(c.adhs.t_threshold >= 0)) throw ConfigError("config: key 't_threshold' must be >= 0");
  c.adhs.l_limit = count("/adhs/l_limit", "adhs.l_limit");
  if (c.adhs.l_limit < 1) throw ConfigError("config: key 'l_limit' must be >= 1");
  c.adhs.literal_mode = get<bool>(doc, "/adhs/literal_mode");
  const auto qt = get<std::string>(doc, "/adhs/quiet_transmit");
  if (qt == "stale")
    c.adhs.quiet_transmit = QuietTransmit::kStale;
  else if (qt == "suppress")
    c.adhs.quiet_transmit = QuietTransmit::kSuppress;
  else
    throw ConfigError("config: key 'quiet_transmit' must be stale or suppress");

  c.energy.e_elec = get<double>(doc, "/energy/e_elec");
  c.energy.e_p = get<double>(doc, "/energy/e_p");
  c.energy.eps_fs = get<double>(doc, "/energy/eps_fs");
  c.energy.alpha = get<double>(doc, "/energy/alpha");
  c.energy.bits_per_message = get<double>(doc, "/energy/bits_per_message");
  const std::pair<const char*, double> energy_keys[] = {{"e_elec", c.energy.e_elec},
                                                        {"e_p", c.energy.e_p},
                                                        {"eps_fs", c.energy.eps_fs},
                                                        {"bits_per_message", c.energy.bits_per_message}};
  for (const auto& [name, v] : energy_keys)
    if (!(v > 0)) throw ConfigError(std::string("config: key '") + name + "' must be > 0");
  if (!(c.energy.alpha > 0 && c.energy.alpha <= 1)) throw ConfigError("config: key 'alpha' must be in (0, 1]");

  const auto vk = get<std::string>(doc, "/field/variance_kind");
  if (vk == "population")
    c.adhs.variance_kind = VarianceKind::kPopulation;
  else if (vk == "sample")
    c.adhs.variance_kind = VarianceKind::kSample;
  else
    throw ConfigError("config: key 'variance_kind' must be population or sample");
  c.field.default_value = get<double>(doc, "/field/default_value");
  const auto& regions = doc.at(json::json_pointer("/field/regions"));
  if (!regions.is_array()) throw ConfigError("config: key 'field.regions' must be an array");
  for (const auto& r : regions) c.field.regions.push_back(detail::region_from_json(r));
  c.after_rounds = count("/report/after_rounds", "report.after_rounds");

  c.validate();
  return c;
}

inline SimConfig preset_config(const std::string& name, std::uint64_t seed) {
  if (name == "fig3") return preset_fig3();
  if (name == "kruger") return preset_kruger();
  if (name == "uniform_random") return preset_uniform_random(seed);
  if (name == "custom") {
    SimConfig c;
    c.seed = seed;
    return c;
  }
  throw ConfigError("config: unknown preset '" + name + "'");
}

/// Parses "key=value"; value is read as JSON when possible, else as a string.
inline std::pair<std::string, json> parse_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + kv + "' is not key=value");
  std::string key = kv.substr(0, eq);
  const std::string raw = kv.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  return {std::move(key), std::move(value)};
}

inline std::string override_pointer(const std::string& key) {
  const auto& aliases = detail::key_aliases();
  if (auto it = aliases.find(key); it != aliases.end()) return it->second;
  // Dotted form, e.g. adhs.t_threshold.
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    const std::string section = key.substr(0, dot), leaf = key.substr(dot + 1);
    const auto& s = detail::schema();
    if (auto it = s.find(section); it != s.end() && it->second.count(leaf)) return "/" + section + "/" + leaf;
  }
  throw ConfigError("override: unknown key '" + key + "'");
}

/// Resolves a (possibly partial) user document plus overrides into a complete
/// config document.
inline json resolve_document(json user, const std::vector<std::string>& overrides) {
  if (user.is_null()) user = json::object();
  detail::check_keys(user);
  for (const auto& kv : overrides) {
    auto [key, value] = parse_override(kv);
    user[json::json_pointer(override_pointer(key))] = std::move(value);
  }
  detail::check_keys(user);
  const std::string preset = user.value("preset", std::string("custom"));
  std::uint64_t seed = 1;
  if (user.contains("seed")) {
    try {
      seed = user.at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
      throw ConfigError("config: wrong type for key 'seed'");
    }
  } else {
    seed = preset_config(preset, 1).seed;
  }
  json doc = to_json(preset_config(preset, seed));
  doc.merge_patch(user);
  return doc;
}

inline SimConfig load_config_document(const json& user, const std::vector<std::string>& overrides) {
  return from_json(resolve_document(user, overrides));
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path.string() + "': " + e.what());
  }
}

inline SimConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  return load_config_document(read_json_file(path), overrides);
}

}  // namespace adhs
