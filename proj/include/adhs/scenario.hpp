#pragma once

// Simulation configuration and the shipped scenario presets.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "adhs/adhs.hpp"
#include "adhs/energy.hpp"
#include "adhs/errors.hpp"
#include "adhs/field.hpp"
#include "adhs/rng.hpp"
#include "adhs/topology.hpp"

namespace adhs {

enum class DeploymentKind { kFig3, kGrid, kUniform };

inline std::string_view to_string(DeploymentKind k) {
  switch (k) {
    case DeploymentKind::kFig3: return "fig3";
    case DeploymentKind::kGrid: return "grid";
    case DeploymentKind::kUniform: return "uniform";
  }
  return "?";
}

struct DeploymentSpec {
  DeploymentKind kind = DeploymentKind::kUniform;
  // uniform
  std::size_t n = 60;
  double area_side = 100.0;
  bool bs_at_center = true;
  // grid
  std::size_t rows = 12;
  std::size_t cols = 12;
  double spacing = 10.0;

  double comm_range = 30.0;
};

struct SimConfig {
  std::string preset = "custom";
  std::uint64_t seed = 1;
  std::size_t rounds = 100;
  double battery_j = std::numeric_limits<double>::infinity();
  DeploymentSpec deployment;
  std::size_t k = 4;
  AdhsParams adhs;
  EnergyParams energy;
  Field field;
  std::size_t after_rounds = 2;  // averaging window (starting at round 1) for "after" totals

  void validate() const {
    if (rounds < 1) throw ConfigError("rounds: must be >= 1");
    if (!(battery_j > 0)) throw ConfigError("battery_j: must be > 0 or inf");
    if (k < 1) throw ConfigError("k: must be >= 1");
    if (after_rounds < 1) throw ConfigError("after_rounds: must be >= 1");
    if (!(deployment.comm_range > 0)) throw ConfigError("comm_range: must be > 0");
    switch (deployment.kind) {
      case DeploymentKind::kUniform:
        DeploymentConfig{deployment.n, deployment.area_side, seed, deployment.comm_range}.validate();
        break;
      case DeploymentKind::kGrid:
        if (deployment.rows * deployment.cols < 2) throw ConfigError("deployment: grid needs >= 2 nodes");
        if (!(deployment.spacing > 0)) throw ConfigError("spacing: must be > 0");
        break;
      case DeploymentKind::kFig3: break;
    }
    adhs.validate();
    energy.validate();
    for (const auto& r : field.regions)
      for (std::size_t i = 1; i < r.timeline.steps.size(); ++i)
        if (r.timeline.steps[i].from <= r.timeline.steps[i - 1].from)
          throw ConfigError("field.regions: timeline steps must have increasing rounds");
  }
};

// fig3 layout: BS (0) and the four mid CHs (2..5) on a radius-10 pentagon
// around the root CH (1); each mid has three leaves 9 m further out. With
// comm_range 10.5 the BFS tree is BS -> root -> mids -> leaves and every CH
// uplink is 10 m long.
inline std::vector<SensorNode> fig3_nodes() {
  constexpr double kCenter = 50.0, kRadius = 10.0, kLeaf = 9.0;
  const auto deg = [](double d) { return d * std::numbers::pi / 180.0; };
  std::vector<Position> pos{{kCenter, kCenter - kRadius}, {kCenter, kCenter}};
  std::vector<double> mid_angles;
  for (int j = 1; j <= 4; ++j) {
    const double a = deg(270.0 + 72.0 * j);
    mid_angles.push_back(a);
    pos.push_back({kCenter + kRadius * std::cos(a), kCenter + kRadius * std::sin(a)});
  }
  for (int j = 0; j < 4; ++j)
    for (double off : {-50.0, 0.0, 50.0}) {
      const double b = mid_angles[j] + deg(off);
      pos.push_back({pos[2 + j].x + kLeaf * std::cos(b), pos[2 + j].y + kLeaf * std::sin(b)});
    }
  std::vector<SensorNode> nodes(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    nodes[i].id = static_cast<NodeId>(i);
    nodes[i].pos = pos[i];
  }
  return nodes;
}

/// Deployed nodes for a config; node 0 is the base station.
inline std::vector<SensorNode> build_nodes(const SimConfig& cfg) {
  const auto& d = cfg.deployment;
  switch (d.kind) {
    case DeploymentKind::kFig3: return fig3_nodes();
    case DeploymentKind::kGrid: return deploy_grid(d.rows, d.cols, d.spacing);
    case DeploymentKind::kUniform: {
      auto nodes = deploy_uniform({d.n, d.area_side, cfg.seed, d.comm_range});
      if (d.bs_at_center) nodes[0].pos = {d.area_side / 2, d.area_side / 2};
      return nodes;
    }
  }
  return {};
}

inline SimConfig preset_fig3() {
  SimConfig c;
  c.preset = "fig3";
  c.seed = 1;
  c.rounds = 5;
  c.deployment.kind = DeploymentKind::kFig3;
  c.deployment.comm_range = 10.5;
  c.k = 4;
  c.adhs.t_threshold = 15.0;
  c.adhs.l_limit = 2;
  // Region A covers leaf 6, region C covers leaf 8, region B the rest. Leaves
  // 6/7/8 belong to the mid CH 2, the one cluster that straddles regions.
  const auto nodes = fig3_nodes();
  c.field.regions = {
      {CircleRegion{nodes[6].pos.x, nodes[6].pos.y, 2.0}, Timeline::constant(10.0)},
      {CircleRegion{nodes[8].pos.x, nodes[8].pos.y, 2.0}, Timeline::constant(30.0)},
      {RectRegion{0, 0, 100, 100}, Timeline::constant(20.0)},
  };
  c.field.default_value = 0.0;
  return c;
}

/// Large grid with a moving square "herd" region; most clusters see a constant
/// background at any given time.
inline SimConfig preset_kruger() {
  SimConfig c;
  c.preset = "kruger";
  c.seed = 1;
  c.rounds = 1000;
  c.battery_j = 0.25;
  c.deployment.kind = DeploymentKind::kGrid;
  c.deployment.rows = 12;
  c.deployment.cols = 12;
  c.deployment.spacing = 10.0;
  c.deployment.comm_range = 10.0;
  c.k = 4;
  c.adhs.t_threshold = 15.0;
  c.adhs.l_limit = 8;
  c.energy.bits_per_message = 2000;
  constexpr Round kDwell = 40;
  constexpr double kHerd = 30.0, kStep = 10.0, kSpan = 110.0;
  const std::size_t positions = static_cast<std::size_t>((kSpan - kHerd) / kStep) + 1;
  for (Round start = 0, i = 0; start < c.rounds; start += kDwell, ++i) {
    const double x = kStep * static_cast<double>(i % positions);
    const double y = kStep * static_cast<double>((i / positions) % positions);
    Timeline tl{{{start, 10.0}, {start + kDwell, std::nullopt}}};
    c.field.regions.push_back({RectRegion{x, y, x + kHerd, y + kHerd}, tl});
  }
  return c;
}

/// Uniform deployment with a few random static circular regions drawn from `seed`.
inline SimConfig preset_uniform_random(std::uint64_t seed) {
  SimConfig c;
  c.preset = "uniform_random";
  c.seed = seed;
  c.rounds = 200;
  c.deployment.kind = DeploymentKind::kUniform;
  c.deployment.n = 60;
  c.deployment.area_side = 100.0;
  c.deployment.comm_range = 30.0;
  c.k = 4;
  c.adhs.t_threshold = 15.0;
  c.adhs.l_limit = 4;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 3; ++i) {
    const double cx = rng.uniform(0, 100), cy = rng.uniform(0, 100), r = rng.uniform(8, 20);
    const double v = 10.0 * static_cast<double>(1 + rng.below(5));
    c.field.regions.push_back({CircleRegion{cx, cy, r}, Timeline::constant(v)});
  }
  return c;
}

}  // namespace adhs
