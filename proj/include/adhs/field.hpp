#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "adhs/errors.hpp"
#include "adhs/topology.hpp"

namespace adhs {

using Round = std::uint64_t;

struct Reading {
  NodeId source = 0;
  Round round = 0;
  double value = 0.0;
};

struct RectRegion {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // closed box [x0,x1] x [y0,y1]

  bool contains(const Position& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

struct CircleRegion {
  double cx = 0, cy = 0, r = 0;  // closed disk

  bool contains(const Position& p) const { return euclidean_distance(p, {cx, cy}) <= r; }
};

using RegionShape = std::variant<RectRegion, CircleRegion>;

/// Step function of the round index. A step with no value switches the region
/// off, so positions fall through to later regions. Before the first step the
/// region is off.
struct Timeline {
  struct Step {
    Round from = 0;
    std::optional<double> value;
  };
  std::vector<Step> steps;  // sorted by `from`, strictly increasing

  static Timeline constant(double v) { return Timeline{{{0, v}}}; }

  std::optional<double> at(Round round) const {
    std::optional<double> current;
    for (const auto& s : steps) {
      if (s.from > round) break;
      current = s.value;
    }
    return current;
  }
};

struct Region {
  RegionShape shape;
  Timeline timeline;

  bool contains(const Position& p) const {
    return std::visit([&](const auto& s) { return s.contains(p); }, shape);
  }
};

struct Field {
  std::vector<Region> regions;  // first active region containing the point wins
  double default_value = 0.0;
};

inline double sample_field(const Field& field, const Position& pos, Round round) {
  for (const auto& region : field.regions) {
    if (!region.contains(pos)) continue;
    if (auto v = region.timeline.at(round)) return *v;
  }
  return field.default_value;
}

enum class VarianceKind { kPopulation, kSample };

inline std::string_view to_string(VarianceKind kind) {
  return kind == VarianceKind::kPopulation ? "population" : "sample";
}

/// Two-pass variance over values shifted by the first element, so identical
/// inputs give exactly 0. Sample variance of a single value is defined as 0 so
/// the controller stays total at window start.
inline double variance(std::span<const double> values,
                       VarianceKind kind = VarianceKind::kPopulation) {
  if (values.empty()) throw PreconditionError("variance: empty input");
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    const double d = (v - shift) - mean;
    ss += d * d;
  }
  if (kind == VarianceKind::kSample) {
    if (values.size() == 1) return 0.0;
    return ss / static_cast<double>(values.size() - 1);
  }
  return ss / static_cast<double>(values.size());
}

}  // namespace adhs
