#pragma once

// Hierarchical control clustering: BFS tree discovery from an initiator, then
// bottom-up cluster formation driven by a subtree-size parameter k, repeated
// over the cluster heads until a single root cluster remains.

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adhs/errors.hpp"
#include "adhs/topology.hpp"

namespace adhs {

struct BfsTree {
  NodeId root = 0;
  std::vector<std::optional<NodeId>> parent;  // indexed by node id; root has none
  std::vector<std::size_t> depth;             // hops from root
  std::vector<std::size_t> subtree_size;      // including the node itself

  std::size_t size() const { return parent.size(); }

  /// Children of every node, ascending by id.
  std::vector<std::vector<NodeId>> children() const {
    std::vector<std::vector<NodeId>> out(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
      if (parent[v]) out[*parent[v]].push_back(static_cast<NodeId>(v));
    return out;
  }

  /// Builds depth and subtree sizes from a parent array. Every node must reach
  /// `root` through parent links.
  static BfsTree from_parents(NodeId root, std::vector<std::optional<NodeId>> parents) {
    const std::size_t n = parents.size();
    if (root >= n) throw PreconditionError("BfsTree: root out of range");
    if (parents[root]) throw PreconditionError("BfsTree: root must not have a parent");
    BfsTree t;
    t.root = root;
    t.parent = std::move(parents);
    t.depth.assign(n, 0);
    t.subtree_size.assign(n, 1);
    const auto kids = t.children();
    std::vector<NodeId> order{root};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (NodeId c : kids[order[i]]) {
        t.depth[c] = t.depth[order[i]] + 1;
        order.push_back(c);
      }
    if (order.size() != n) throw PreconditionError("BfsTree: parent links do not form a tree");
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (t.parent[*it]) t.subtree_size[*t.parent[*it]] += t.subtree_size[*it];
    return t;
  }
};

/// BFS over the unit-disk graph (edge iff distance <= comm_range). Each node's
/// parent is its lowest-id neighbour one hop closer to the initiator.
inline BfsTree tree_discovery(const std::vector<SensorNode>& nodes, NodeId initiator,
                              double comm_range) {
  const std::size_t n = nodes.size();
  if (initiator >= n) throw PreconditionError("tree_discovery: initiator does not exist");
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (euclidean_distance(nodes[i].pos, nodes[j].pos) <= comm_range) {
        adj[i].push_back(static_cast<NodeId>(j));
        adj[j].push_back(static_cast<NodeId>(i));
      }

  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(n, kUnseen);
  std::deque<NodeId> queue{initiator};
  depth[initiator] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : adj[v])
      if (depth[w] == kUnseen) {
        depth[w] = depth[v] + 1;
        queue.push_back(w);
      }
  }

  std::vector<std::optional<NodeId>> parent(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (depth[v] == kUnseen)
      throw ConnectivityError(static_cast<NodeId>(v),
                              "tree_discovery: node " + std::to_string(v) +
                                  " is unreachable from initiator " + std::to_string(initiator));
    if (v == initiator) continue;
    for (NodeId w : adj[v])  // adjacency lists are ascending
      if (depth[w] + 1 == depth[v]) {
        parent[v] = w;
        break;
      }
  }
  return BfsTree::from_parents(initiator, std::move(parent));
}

struct Cluster {
  std::size_t id = 0;
  NodeId head = 0;
  std::vector<NodeId> members;  // ascending; includes head
  std::size_t level = 1;        // 1 = root cluster
  std::size_t pass = 0;         // formation pass that produced it (0 = over sensor nodes)
  bool from_split = false;      // produced by splitting a subtree of size >= 2k
};

struct ClusterHierarchy {
  std::size_t k = 1;
  std::vector<Cluster> clusters;
  std::vector<std::optional<NodeId>> parent;  // uplink of every node; none for the BS
  std::optional<NodeId> bs;
  std::optional<std::size_t> root_cluster;

  std::size_t levels() const {
    std::size_t m = 0;
    for (const auto& c : clusters) m = std::max(m, c.level);
    return m;
  }

  std::vector<std::vector<NodeId>> children() const {
    std::vector<std::vector<NodeId>> out(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
      if (parent[v]) out[*parent[v]].push_back(static_cast<NodeId>(v));
    return out;
  }
};

/// Size parameter used by a formation pass. Passes above the sensor level use
/// at least 2 so every pass merges something.
inline std::size_t effective_k(std::size_t k, std::size_t pass) {
  return pass == 0 ? k : std::max<std::size_t>(k, 2);
}

namespace detail {

struct Participant {
  NodeId head;
  std::optional<std::size_t> parent;  // index into the participant list
};

struct Group {
  std::size_t head;                  // participant index
  std::vector<std::size_t> members;  // participant indices
  bool split;
};

struct PassResult {
  std::vector<Group> groups;
  std::vector<std::size_t> leftovers;
};

inline PassResult formation_pass(const std::vector<Participant>& parts, std::size_t k) {
  const std::size_t m = parts.size();
  std::vector<std::vector<std::size_t>> kids(m);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < m; ++i) {
    if (parts[i].parent)
      kids[*parts[i].parent].push_back(i);
    else
      roots.push_back(i);
  }
  const auto by_head = [&](std::size_t a, std::size_t b) { return parts[a].head < parts[b].head; };
  for (auto& ks : kids) std::sort(ks.begin(), ks.end(), by_head);
  std::sort(roots.begin(), roots.end(), by_head);

  // Post-order: children before parents.
  std::vector<std::size_t> order;
  order.reserve(m);
  for (std::size_t r : roots) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{r, 0}};
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < kids[v].size()) {
        const std::size_t c = kids[v][next++];
        stack.push_back({c, 0});
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  PassResult out;
  std::vector<std::vector<std::size_t>> residual(m);
  for (std::size_t v : order) {
    std::size_t size = 1;
    for (std::size_t c : kids[v]) size += residual[c].size();
    if (size < k) {
      residual[v].push_back(v);
      for (std::size_t c : kids[v])
        residual[v].insert(residual[v].end(), residual[c].begin(), residual[c].end());
      continue;
    }
    if (size < 2 * k) {
      Group g{v, {v}, false};
      for (std::size_t c : kids[v]) g.members.insert(g.members.end(), residual[c].begin(), residual[c].end());
      out.groups.push_back(std::move(g));
    } else {
      // Pack child residual subtrees in ascending head order. Each holds < k
      // participants, so a group closes as soon as it reaches k, below 2k.
      Group open{0, {}, true};
      std::optional<std::size_t> open_head;
      for (std::size_t c : kids[v]) {
        if (residual[c].empty()) continue;
        if (!open_head) open_head = c;
        open.members.insert(open.members.end(), residual[c].begin(), residual[c].end());
        if (open.members.size() >= k) {
          open.head = *open_head;
          out.groups.push_back(std::move(open));
          open = Group{0, {}, true};
          open_head.reset();
        }
      }
      open.head = v;
      open.members.push_back(v);
      out.groups.push_back(std::move(open));
    }
    for (std::size_t c : kids[v]) residual[c].clear();
  }

  // The tops of the forest hang off the base station, which sizes them like
  // any other splitting node but never joins a cluster: a remainder below k
  // is carried to the next pass instead.
  std::vector<std::size_t> top;
  std::vector<std::size_t> top_roots;
  for (std::size_t r : roots)
    if (!residual[r].empty()) {
      top.insert(top.end(), residual[r].begin(), residual[r].end());
      top_roots.push_back(r);
    }
  if (top.size() < k) {
    out.leftovers = std::move(top);
  } else if (top.size() < 2 * k) {
    out.groups.push_back({top_roots.front(), std::move(top), false});
  } else {
    Group open{0, {}, true};
    std::optional<std::size_t> open_head;
    for (std::size_t r : top_roots) {
      if (!open_head) open_head = r;
      open.members.insert(open.members.end(), residual[r].begin(), residual[r].end());
      if (open.members.size() >= k) {
        open.head = *open_head;
        out.groups.push_back(std::move(open));
        open = Group{0, {}, true};
        open_head.reset();
      }
    }
    out.leftovers = std::move(open.members);
  }
  return out;
}

}  // namespace detail

/// Builds the full hierarchy over `tree`. When `bs` is given it must be the
/// tree root; it is then excluded from clustering and becomes the uplink of
/// the root cluster head.
inline ClusterHierarchy cluster_formation(const BfsTree& tree, std::size_t k,
                                          std::optional<NodeId> bs = std::nullopt) {
  if (k < 1) throw PreconditionError("cluster_formation: k must be >= 1");
  if (bs && *bs != tree.root) throw PreconditionError("cluster_formation: bs must be the tree root");

  ClusterHierarchy h;
  h.k = k;
  h.bs = bs;
  h.parent.assign(tree.size(), std::nullopt);

  std::vector<detail::Participant> parts;
  {
    std::vector<std::optional<std::size_t>> index(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) {
      if (bs && v == *bs) continue;
      index[v] = parts.size();
      parts.push_back({static_cast<NodeId>(v), std::nullopt});
    }
    for (auto& p : parts) {
      const auto tp = tree.parent[p.head];
      if (tp && index[*tp]) p.parent = index[*tp];
    }
  }
  if (parts.empty()) return h;

  const auto heads_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<NodeId> out;
    for (std::size_t i : idx) out.push_back(parts[i].head);
    std::sort(out.begin(), out.end());
    return out;
  };

  std::size_t pass = 0;
  for (;; ++pass) {
    auto res = detail::formation_pass(parts, effective_k(k, pass));

    if (res.groups.empty()) {
      // Nothing reached the size parameter: the remaining participants form the
      // root cluster, headed by the lowest-id participant nearest the top.
      std::vector<std::size_t> all(parts.size());
      std::optional<std::size_t> head;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        all[i] = i;
        if (!parts[i].parent && (!head || parts[i].head < parts[*head].head)) head = i;
      }
      h.clusters.push_back({h.clusters.size(), parts[*head].head, heads_of(all), 0, pass, false});
      break;
    }

    std::vector<std::size_t> next_index(parts.size());
    std::vector<detail::Participant> next;
    for (const auto& g : res.groups) {
      for (std::size_t i : g.members) next_index[i] = next.size();
      h.clusters.push_back({h.clusters.size(), parts[g.head].head, heads_of(g.members), 0, pass, g.split});
      next.push_back({parts[g.head].head, std::nullopt});
    }
    for (std::size_t i : res.leftovers) {
      next_index[i] = next.size();
      next.push_back({parts[i].head, std::nullopt});
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parts[i].parent) continue;
      const std::size_t from = next_index[i], to = next_index[*parts[i].parent];
      if (from == to) continue;
      assert(!next[from].parent || *next[from].parent == to);
      next[from].parent = to;
    }
    parts = std::move(next);
    if (parts.size() == 1) break;
  }

  const std::size_t passes = pass + 1;
  for (auto& c : h.clusters) {
    c.level = passes - c.pass;
    for (NodeId m : c.members)
      if (m != c.head && !h.parent[m]) h.parent[m] = c.head;
  }
  h.root_cluster = h.clusters.size() - 1;
  h.parent[h.clusters.back().head] = bs;
  return h;
}

/// Installs roles and parent/children links from the hierarchy. A node heading
/// a cluster with other members is a CH; everything else is an NCH.
inline std::vector<SensorNode> assign_roles(const ClusterHierarchy& h, std::vector<SensorNode> nodes) {
  if (nodes.size() != h.parent.size())
    throw PreconditionError("assign_roles: node count does not match the hierarchy");
  const auto kids = h.children();
  for (auto& node : nodes) {
    node.parent = h.parent[node.id];
    node.children = kids[node.id];
    if (h.bs && node.id == *h.bs)
      node.role = Role::kBaseStation;
    else
      node.role = node.children.empty() ? Role::kNonClusterHead : Role::kClusterHead;
  }
  return nodes;
}

}  // namespace adhs
