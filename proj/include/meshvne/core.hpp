#pragma once

// Core data model for mesh-edge virtual network embedding: substrate graph,
// virtual resource requests, allocations and residual-capacity bookkeeping.
//
// Resource quantities are stored as integers (CPU in milli-cores, memory in
// MB, storage in GB, bandwidth in tenths of MB/s) so that applying and
// releasing an allocation is an exact inverse, with no floating-point drift.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace meshvne {

using NodeId = int;
using ComponentId = int;
using RequestId = int;
using EdgeIndex = int;
using TimeMs = std::int64_t;

struct InfeasibleAllocation : std::runtime_error {
    explicit InfeasibleAllocation(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownAllocation : std::runtime_error {
    explicit UnknownAllocation(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point scale used for objective arithmetic (rewards and latency
// penalties). Exact integer comparisons between the solver and the
// brute-force oracle depend on both sides using these coefficients.
inline constexpr std::int64_t kFixedOne = std::int64_t{1} << 20;

inline std::int64_t millicores_from_cores(double cores) {
    return static_cast<std::int64_t>(std::llround(cores * 1000.0));
}
inline std::int64_t dmbps_from_mbps(double mbps) {
    return static_cast<std::int64_t>(std::llround(mbps * 10.0));
}

// One point of the attribute set {CPU, memory, storage, GPU}.
struct ResourceVector {
    std::int64_t cpu_millicores = 0;
    std::int64_t memory_mb = 0;
    std::int64_t storage_gb = 0;
    std::int64_t gpu_units = 0;

    static ResourceVector of(double cores, std::int64_t mem_mb, std::int64_t sto_gb,
                             std::int64_t gpu) {
        return ResourceVector{millicores_from_cores(cores), mem_mb, sto_gb, gpu};
    }

    double cpu_cores() const { return static_cast<double>(cpu_millicores) / 1000.0; }

    bool valid() const {
        return cpu_millicores >= 0 && memory_mb >= 0 && storage_gb >= 0 && gpu_units >= 0;
    }

    bool fits_within(const ResourceVector& capacity) const {
        return cpu_millicores <= capacity.cpu_millicores && memory_mb <= capacity.memory_mb &&
               storage_gb <= capacity.storage_gb && gpu_units <= capacity.gpu_units;
    }

    ResourceVector& operator+=(const ResourceVector& o) {
        cpu_millicores += o.cpu_millicores;
        memory_mb += o.memory_mb;
        storage_gb += o.storage_gb;
        gpu_units += o.gpu_units;
        return *this;
    }
    ResourceVector& operator-=(const ResourceVector& o) {
        cpu_millicores -= o.cpu_millicores;
        memory_mb -= o.memory_mb;
        storage_gb -= o.storage_gb;
        gpu_units -= o.gpu_units;
        return *this;
    }
    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
    friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

    std::int64_t attribute(int i) const {
        switch (i) {
            case 0: return cpu_millicores;
            case 1: return memory_mb;
            case 2: return storage_gb;
            default: return gpu_units;
        }
    }
};

inline constexpr int kAttributeCount = 4;
inline const char* attribute_name(int i) {
    static const char* names[kAttributeCount] = {"cpu", "memory", "storage", "gpu"};
    return names[i];
}

// True iff the demand fits the residual component-wise.
inline bool feasible_on_node(const ResourceVector& residual, const ResourceVector& demand) {
    return demand.fits_within(residual);
}

struct Position {
    double x = 0.0, y = 0.0, z = 0.0;
};
inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct SubstrateNode {
    NodeId id = 0;
    Position position;
    ResourceVector capacity;
};

// Undirected physical link. Bandwidth is stored in tenths of MB/s.
struct SubstrateEdge {
    NodeId a = 0, b = 0;
    std::int64_t bandwidth_dmbps = 0;
    int latency_ms = 0;

    NodeId other(NodeId n) const { return n == a ? b : a; }
    bool touches(NodeId n) const { return n == a || n == b; }
};

struct SubstrateNetwork {
    std::vector<SubstrateNode> nodes;
    std::vector<SubstrateEdge> edges;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    // Node ids are expected to equal their index; generation and loading
    // enforce this.
    const SubstrateNode& node(NodeId id) const { return nodes[static_cast<size_t>(id)]; }

    std::vector<std::vector<EdgeIndex>> adjacency() const {
        std::vector<std::vector<EdgeIndex>> adj(nodes.size());
        for (EdgeIndex e = 0; e < edge_count(); ++e) {
            adj[static_cast<size_t>(edges[static_cast<size_t>(e)].a)].push_back(e);
            adj[static_cast<size_t>(edges[static_cast<size_t>(e)].b)].push_back(e);
        }
        return adj;
    }

    bool connected() const {
        if (nodes.empty()) return true;
        auto adj = adjacency();
        std::vector<char> seen(nodes.size(), 0);
        std::vector<NodeId> stack{nodes[0].id};
        seen[static_cast<size_t>(nodes[0].id)] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
            NodeId n = stack.back();
            stack.pop_back();
            for (EdgeIndex e : adj[static_cast<size_t>(n)]) {
                NodeId m = edges[static_cast<size_t>(e)].other(n);
                if (!seen[static_cast<size_t>(m)]) {
                    seen[static_cast<size_t>(m)] = 1;
                    ++reached;
                    stack.push_back(m);
                }
            }
        }
        return reached == nodes.size();
    }

    // Per-attribute maximum capacity over all nodes; used for demand
    // normalization in rankings.
    ResourceVector max_capacity() const {
        ResourceVector m;
        for (const auto& n : nodes) {
            m.cpu_millicores = std::max(m.cpu_millicores, n.capacity.cpu_millicores);
            m.memory_mb = std::max(m.memory_mb, n.capacity.memory_mb);
            m.storage_gb = std::max(m.storage_gb, n.capacity.storage_gb);
            m.gpu_units = std::max(m.gpu_units, n.capacity.gpu_units);
        }
        return m;
    }
};

struct VirtualComponent {
    ComponentId id = 0;
    ResourceVector demand;
};

// Directed communication requirement between two components of one request.
struct VirtualLink {
    ComponentId source = 0;
    ComponentId target = 0;
    std::int64_t bandwidth_dmbps = 0;
    int latency_bound_ms = 0;
};

struct VirtualRequest {
    RequestId id = 0;
    std::vector<VirtualComponent> components;
    std::vector<VirtualLink> links;
    TimeMs arrival_ms = 0;
    TimeMs lifetime_ms = 0;
    int retry_count = 0;

    const VirtualComponent* component(ComponentId cid) const {
        for (const auto& c : components)
            if (c.id == cid) return &c;
        return nullptr;
    }

    bool component_graph_connected() const {
        if (components.empty()) return false;
        std::map<ComponentId, std::vector<ComponentId>> adj;
        for (const auto& c : components) adj[c.id];
        for (const auto& l : links) {
            adj[l.source].push_back(l.target);
            adj[l.target].push_back(l.source);
        }
        std::vector<ComponentId> stack{components[0].id};
        std::map<ComponentId, bool> seen{{components[0].id, true}};
        while (!stack.empty()) {
            ComponentId c = stack.back();
            stack.pop_back();
            for (ComponentId n : adj[c])
                if (!seen[n]) {
                    seen[n] = true;
                    stack.push_back(n);
                }
        }
        return seen.size() == components.size();
    }
};

// A concrete substrate path chosen for one virtual link. A self-path
// (origin == destination, no edges) models colocated components and consumes
// no bandwidth.
struct AssignedPath {
    NodeId origin = 0;
    NodeId destination = 0;
    std::vector<EdgeIndex> edges;
    int total_latency_ms = 0;

    int hop_count() const { return static_cast<int>(edges.size()); }
    bool is_self() const { return edges.empty(); }
};

// Mapping of one request onto the substrate: components to nodes, virtual
// links to paths (indexed in request-link order).
struct Allocation {
    RequestId request_id = 0;
    std::map<ComponentId, NodeId> node_assignment;
    std::vector<AssignedPath> path_assignment;
};

// Bandwidth is tracked per direction: substrate links are full duplex, so a
// link's rated capacity applies independently to each travel direction, and a
// path consumes bandwidth only in the direction it traverses. Slot 2e covers
// a→b travel on edge e (as the endpoints are stored), slot 2e+1 the reverse.
inline size_t directed_edge_slot(EdgeIndex e, bool reversed) {
    return 2 * static_cast<size_t>(e) + (reversed ? 1 : 0);
}

// Remaining capacities plus a ledger of applied allocations keyed by request
// id, so releases restore the exact deltas that were charged.
struct ResidualState {
    std::vector<ResourceVector> node_residual;
    // Indexed by directed_edge_slot: two entries per substrate edge.
    std::vector<std::int64_t> edge_residual_dmbps;
    // Edge endpoints, for mapping a path walk onto directed slots.
    std::vector<std::pair<NodeId, NodeId>> edge_ends;

    struct AppliedRecord {
        Allocation allocation;
        std::map<NodeId, ResourceVector> node_deltas;
        std::map<size_t, std::int64_t> edge_deltas;  // keyed by directed slot
    };
    std::map<RequestId, AppliedRecord> ledger;

    static ResidualState full_of(const SubstrateNetwork& net) {
        ResidualState s;
        s.node_residual.reserve(net.nodes.size());
        for (const auto& n : net.nodes) s.node_residual.push_back(n.capacity);
        s.edge_residual_dmbps.reserve(2 * net.edges.size());
        s.edge_ends.reserve(net.edges.size());
        for (const auto& e : net.edges) {
            s.edge_residual_dmbps.push_back(e.bandwidth_dmbps);  // a→b
            s.edge_residual_dmbps.push_back(e.bandwidth_dmbps);  // b→a
            s.edge_ends.emplace_back(e.a, e.b);
        }
        return s;
    }

    // Snapshot without the ledger, for solver scratch copies.
    ResidualState capacities_only() const {
        ResidualState s;
        s.node_residual = node_residual;
        s.edge_residual_dmbps = edge_residual_dmbps;
        s.edge_ends = edge_ends;
        return s;
    }
};

namespace detail {

struct AllocationDeltas {
    std::map<NodeId, ResourceVector> node;
    std::map<size_t, std::int64_t> edge;  // keyed by directed slot
};

inline AllocationDeltas allocation_deltas(const ResidualState& state, const VirtualRequest& req,
                                          const Allocation& alloc) {
    AllocationDeltas d;
    for (const auto& [cid, nid] : alloc.node_assignment) {
        const VirtualComponent* c = req.component(cid);
        if (!c) throw InfeasibleAllocation("allocation names unknown component");
        d.node[nid] += c->demand;
    }
    if (alloc.path_assignment.size() != req.links.size())
        throw InfeasibleAllocation("allocation path count does not match request links");
    for (size_t i = 0; i < req.links.size(); ++i) {
        const auto& path = alloc.path_assignment[i];
        NodeId at = path.origin;
        for (EdgeIndex e : path.edges) {
            if (e < 0 || static_cast<size_t>(e) >= state.edge_ends.size())
                throw InfeasibleAllocation("allocation names unknown edge");
            const auto& [a, b] = state.edge_ends[static_cast<size_t>(e)];
            if (at != a && at != b)
                throw InfeasibleAllocation("allocation path is not a walk from its origin");
            d.edge[directed_edge_slot(e, at == b)] += req.links[i].bandwidth_dmbps;
            at = (at == a) ? b : a;
        }
    }
    return d;
}

}  // namespace detail

// Charges the allocation's demands against the residual state. Throws
// InfeasibleAllocation (leaving the state untouched) if any residual would go
// negative. Colocated components consume no bandwidth.
inline void apply_allocation(ResidualState& state, const VirtualRequest& req,
                             const Allocation& alloc) {
    if (state.ledger.count(req.id))
        throw InfeasibleAllocation("request already has an applied allocation");
    auto deltas = detail::allocation_deltas(state, req, alloc);
    for (const auto& [nid, demand] : deltas.node) {
        if (nid < 0 || static_cast<size_t>(nid) >= state.node_residual.size())
            throw InfeasibleAllocation("allocation names unknown node");
        if (!demand.fits_within(state.node_residual[static_cast<size_t>(nid)]))
            throw InfeasibleAllocation("node residual would go negative");
    }
    for (const auto& [slot, bw] : deltas.edge) {
        if (slot >= state.edge_residual_dmbps.size())
            throw InfeasibleAllocation("allocation names unknown edge");
        if (bw > state.edge_residual_dmbps[slot])
            throw InfeasibleAllocation("edge residual would go negative");
    }
    for (const auto& [nid, demand] : deltas.node)
        state.node_residual[static_cast<size_t>(nid)] -= demand;
    for (const auto& [slot, bw] : deltas.edge) state.edge_residual_dmbps[slot] -= bw;
    state.ledger[req.id] = ResidualState::AppliedRecord{alloc, deltas.node, deltas.edge};
}

// Exact inverse of apply_allocation, driven by the ledger record. Throws
// UnknownAllocation when the request has no applied allocation.
inline Allocation release_allocation(ResidualState& state, RequestId request_id) {
    auto it = state.ledger.find(request_id);
    if (it == state.ledger.end())
        throw UnknownAllocation("no applied allocation for request " + std::to_string(request_id));
    for (const auto& [nid, demand] : it->second.node_deltas)
        state.node_residual[static_cast<size_t>(nid)] += demand;
    for (const auto& [slot, bw] : it->second.edge_deltas) state.edge_residual_dmbps[slot] += bw;
    Allocation released = std::move(it->second.allocation);
    state.ledger.erase(it);
    return released;
}

inline Allocation release_allocation(ResidualState& state, const VirtualRequest& req,
                                     const Allocation&) {
    return release_allocation(state, req.id);
}

// Reward score 2^((now - arrival) / tau), exponent capped to keep the value
// representable after many retries.
inline double compute_reward(TimeMs now, TimeMs arrival, TimeMs reward_tau_ms,
                             double exponent_cap) {
    double e = static_cast<double>(now - arrival) / static_cast<double>(reward_tau_ms);
    if (e > exponent_cap) e = exponent_cap;
    return std::exp2(e);
}

inline std::int64_t reward_fixed_point(TimeMs now, TimeMs arrival, TimeMs reward_tau_ms,
                                       double exponent_cap) {
    return static_cast<std::int64_t>(
        std::llround(compute_reward(now, arrival, reward_tau_ms, exponent_cap) *
                     static_cast<double>(kFixedOne)));
}

// Latency-penalty coefficient for mapping one virtual link onto one path:
// alpha / |F_s| * path_latency / latency_bound, in fixed point.
inline std::int64_t penalty_fixed_point(double alpha, int link_count, int path_latency_ms,
                                        int latency_bound_ms) {
    if (link_count <= 0) return 0;
    double pen = alpha / static_cast<double>(link_count) *
                 (static_cast<double>(path_latency_ms) / static_cast<double>(latency_bound_ms));
    return static_cast<std::int64_t>(std::llround(pen * static_cast<double>(kFixedOne)));
}

}  // namespace meshvne
