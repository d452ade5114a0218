#pragma once

// k-shortest loop-free path catalog between all ordered node pairs, plus the
// per-virtual-link feasible-path filter. Paths are ordered by total latency,
// then hop count, then lexicographic edge ids; enumeration is exhaustive with
// admissible lower-bound pruning, so the catalog equals brute-force
// enumeration truncated to k under that order.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "meshvne/core.hpp"

namespace meshvne {

struct DisconnectedNetwork : std::runtime_error {
    explicit DisconnectedNetwork(const std::string& what) : std::runtime_error(what) {}
};

struct SubstratePath {
    NodeId origin = 0;
    NodeId destination = 0;
    std::vector<EdgeIndex> edges;
    std::vector<NodeId> nodes;  // origin..destination, edges.size()+1 entries
    int total_latency_ms = 0;

    int hop_count() const { return static_cast<int>(edges.size()); }
    bool is_self() const { return edges.empty(); }

    AssignedPath to_assigned() const {
        return AssignedPath{origin, destination, edges, total_latency_ms};
    }
};

// Directed bandwidth slot of hop i of a path (see directed_edge_slot).
inline size_t path_edge_slot(const SubstrateNetwork& net, const SubstratePath& p, size_t hop) {
    const EdgeIndex e = p.edges[hop];
    return directed_edge_slot(e, p.nodes[hop] != net.edges[static_cast<size_t>(e)].a);
}

inline bool path_order_less(const SubstratePath& a, const SubstratePath& b) {
    if (a.total_latency_ms != b.total_latency_ms) return a.total_latency_ms < b.total_latency_ms;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return std::lexicographical_compare(a.edges.begin(), a.edges.end(), b.edges.begin(),
                                        b.edges.end());
}

class PathCatalog {
  public:
    PathCatalog() = default;
    PathCatalog(int k, int node_count)
        : k_(k),
          node_count_(node_count),
          table_(static_cast<size_t>(node_count) * static_cast<size_t>(node_count)) {}

    int k() const { return k_; }
    int node_count() const { return node_count_; }

    const std::vector<SubstratePath>& paths(NodeId origin, NodeId destination) const {
        return table_[static_cast<size_t>(origin) * static_cast<size_t>(node_count_) +
                      static_cast<size_t>(destination)];
    }

    std::vector<SubstratePath>& mutable_paths(NodeId origin, NodeId destination) {
        return table_[static_cast<size_t>(origin) * static_cast<size_t>(node_count_) +
                      static_cast<size_t>(destination)];
    }

  private:
    int k_ = 0;
    int node_count_ = 0;
    std::vector<std::vector<SubstratePath>> table_;
};

namespace detail {

struct PairEnumerator {
    const SubstrateNetwork& net;
    const std::vector<std::vector<EdgeIndex>>& adj;
    const std::vector<int>& lb_lat;   // to destination
    const std::vector<int>& lb_hops;  // to destination
    NodeId dest;
    int k;
    std::vector<SubstratePath> best;  // sorted by path order, size <= k
    std::vector<EdgeIndex> edge_stack;
    std::vector<NodeId> node_stack;
    std::uint64_t visited = 0;

    void complete(int lat) {
        SubstratePath p;
        p.origin = node_stack.front();
        p.destination = dest;
        p.edges = edge_stack;
        p.nodes = node_stack;
        p.total_latency_ms = lat;
        auto pos = std::lower_bound(best.begin(), best.end(), p, path_order_less);
        best.insert(pos, std::move(p));
        if (static_cast<int>(best.size()) > k) best.pop_back();
    }

    bool pruned(NodeId at, int lat) const {
        if (lb_lat[static_cast<size_t>(at)] == std::numeric_limits<int>::max()) return true;
        if (static_cast<int>(best.size()) < k) return false;
        const SubstratePath& kth = best.back();
        int lat_bound = lat + lb_lat[static_cast<size_t>(at)];
        if (lat_bound > kth.total_latency_ms) return true;
        if (lat_bound == kth.total_latency_ms) {
            int hop_bound =
                static_cast<int>(edge_stack.size()) + lb_hops[static_cast<size_t>(at)];
            if (hop_bound > kth.hop_count()) return true;
        }
        return false;
    }

    void dfs(NodeId at, int lat) {
        if (at == dest) {
            complete(lat);
            return;
        }
        if (pruned(at, lat)) return;
        // Expand cheapest-completion neighbors first so the k-th bound
        // tightens early.
        struct Cand {
            int est_lat;
            int est_hops;
            EdgeIndex e;
            NodeId to;
        };
        std::vector<Cand> cands;
        for (EdgeIndex e : adj[static_cast<size_t>(at)]) {
            const SubstrateEdge& edge = net.edges[static_cast<size_t>(e)];
            NodeId to = edge.other(at);
            if (visited & (std::uint64_t{1} << to)) continue;
            if (lb_lat[static_cast<size_t>(to)] == std::numeric_limits<int>::max()) continue;
            cands.push_back({edge.latency_ms + lb_lat[static_cast<size_t>(to)],
                             1 + lb_hops[static_cast<size_t>(to)], e, to});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.est_lat != b.est_lat) return a.est_lat < b.est_lat;
            if (a.est_hops != b.est_hops) return a.est_hops < b.est_hops;
            return a.e < b.e;
        });
        for (const Cand& c : cands) {
            int nlat = lat + net.edges[static_cast<size_t>(c.e)].latency_ms;
            if (pruned(c.to, nlat) && c.to != dest) continue;
            visited |= std::uint64_t{1} << c.to;
            edge_stack.push_back(c.e);
            node_stack.push_back(c.to);
            dfs(c.to, nlat);
            node_stack.pop_back();
            edge_stack.pop_back();
            visited &= ~(std::uint64_t{1} << c.to);
        }
    }
};

// Single-source (to `dest`, undirected) shortest latency and hop counts.
inline void lower_bounds(const SubstrateNetwork& net,
                         const std::vector<std::vector<EdgeIndex>>& adj, NodeId dest,
                         std::vector<int>& lat, std::vector<int>& hops) {
    const int inf = std::numeric_limits<int>::max();
    lat.assign(net.nodes.size(), inf);
    hops.assign(net.nodes.size(), inf);
    using Item = std::pair<int, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    lat[static_cast<size_t>(dest)] = 0;
    pq.push({0, dest});
    while (!pq.empty()) {
        auto [d, n] = pq.top();
        pq.pop();
        if (d > lat[static_cast<size_t>(n)]) continue;
        for (EdgeIndex e : adj[static_cast<size_t>(n)]) {
            const SubstrateEdge& edge = net.edges[static_cast<size_t>(e)];
            NodeId m = edge.other(n);
            int nd = d + edge.latency_ms;
            if (nd < lat[static_cast<size_t>(m)]) {
                lat[static_cast<size_t>(m)] = nd;
                pq.push({nd, m});
            }
        }
    }
    std::queue<NodeId> bfs;
    hops[static_cast<size_t>(dest)] = 0;
    bfs.push(dest);
    while (!bfs.empty()) {
        NodeId n = bfs.front();
        bfs.pop();
        for (EdgeIndex e : adj[static_cast<size_t>(n)]) {
            NodeId m = net.edges[static_cast<size_t>(e)].other(n);
            if (hops[static_cast<size_t>(m)] == inf) {
                hops[static_cast<size_t>(m)] = hops[static_cast<size_t>(n)] + 1;
                bfs.push(m);
            }
        }
    }
}

}  // namespace detail

// Builds the ordered k-shortest-path catalog for every ordered node pair.
// Every (n, n) entry is the zero-latency self-path used for colocation.
inline PathCatalog build_catalog(const SubstrateNetwork& net, int k) {
    if (k < 1) throw ConfigInvalid("path catalog requires k >= 1");
    if (net.node_count() > 64) throw ConfigInvalid("path catalog supports up to 64 nodes");
    auto adj = net.adjacency();
    PathCatalog catalog(k, net.node_count());

    std::vector<int> lb_lat, lb_hops;
    for (NodeId dest = 0; dest < net.node_count(); ++dest) {
        detail::lower_bounds(net, adj, dest, lb_lat, lb_hops);
        for (NodeId origin = 0; origin < net.node_count(); ++origin) {
            if (origin == dest) {
                SubstratePath self;
                self.origin = origin;
                self.destination = dest;
                self.nodes = {origin};
                self.total_latency_ms = 0;
                catalog.mutable_paths(origin, dest).push_back(std::move(self));
                continue;
            }
            if (lb_lat[static_cast<size_t>(origin)] == std::numeric_limits<int>::max())
                throw DisconnectedNetwork("no path from node " + std::to_string(origin) +
                                          " to node " + std::to_string(dest));
            detail::PairEnumerator en{net, adj, lb_lat, lb_hops, dest, k, {}, {}, {}, 0};
            en.node_stack.push_back(origin);
            en.visited = std::uint64_t{1} << origin;
            en.dfs(origin, 0);
            catalog.mutable_paths(origin, dest) = std::move(en.best);
        }
    }
    return catalog;
}

// Catalog paths for (origin, destination) whose total latency fits the bound,
// in catalog order. May be empty.
inline std::vector<SubstratePath> feasible_paths(const PathCatalog& catalog, NodeId origin,
                                                 NodeId destination, int latency_bound_ms) {
    std::vector<SubstratePath> out;
    for (const SubstratePath& p : catalog.paths(origin, destination)) {
        if (p.total_latency_ms > latency_bound_ms) break;  // sorted by latency
        out.push_back(p);
    }
    return out;
}

}  // namespace meshvne
