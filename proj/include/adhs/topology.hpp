#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adhs/errors.hpp"
#include "adhs/rng.hpp"

namespace adhs {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Position&, const Position&) = default;
};

enum class Role { kBaseStation, kClusterHead, kNonClusterHead };

inline std::string_view to_string(Role role) {
  switch (role) {
    case Role::kBaseStation: return "BS";
    case Role::kClusterHead: return "CH";
    case Role::kNonClusterHead: return "NCH";
  }
  return "?";
}

struct SensorNode {
  NodeId id = 0;
  Position pos;
  Role role = Role::kNonClusterHead;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  double battery = 0.0;  // joules; +inf means unconstrained
};

struct DeploymentConfig {
  std::size_t n = 0;
  double area_side = 0.0;   // side of the square deployment area, meters
  std::uint64_t seed = 0;
  double comm_range = 0.0;  // meters

  void validate() const {
    if (n < 2) throw ConfigError("deployment: n must be >= 2 (got " + std::to_string(n) + ")");
    if (!(area_side > 0.0)) throw ConfigError("deployment: area_side must be > 0");
    if (!(comm_range > 0.0)) throw ConfigError("deployment: comm_range must be > 0");
  }
};

inline double euclidean_distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// n nodes i.i.d. uniform over [0, area_side]^2. Node i draws x then y.
inline std::vector<SensorNode> deploy_uniform(const DeploymentConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<SensorNode> nodes(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    nodes[i].id = static_cast<NodeId>(i);
    nodes[i].pos.x = rng.uniform(0.0, cfg.area_side);
    nodes[i].pos.y = rng.uniform(0.0, cfg.area_side);
  }
  return nodes;
}

/// rows x cols lattice, row-major ids; node (r, c) sits at (c*spacing, r*spacing).
inline std::vector<SensorNode> deploy_grid(std::size_t rows, std::size_t cols, double spacing) {
  if (rows < 1 || cols < 1) throw ConfigError("deploy_grid: rows and cols must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("deploy_grid: spacing must be > 0");
  std::vector<SensorNode> nodes;
  nodes.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      SensorNode node;
      node.id = static_cast<NodeId>(nodes.size());
      node.pos = {static_cast<double>(c) * spacing, static_cast<double>(r) * spacing};
      nodes.push_back(std::move(node));
    }
  }
  return nodes;
}

}  // namespace adhs
