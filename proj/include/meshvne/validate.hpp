#pragma once

// Independent constraint validator. Re-derives the 0/1 decision indicators
// (x_s, x_nv, y_pf) from an Allocation record and checks the deployment
// integrity and capacity constraints directly, without reusing allocator
// bookkeeping. The simulator runs this after every event as an audit.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meshvne/core.hpp"

namespace meshvne {

// Structural checks for one request's allocation: complete single assignment
// of components, one endpoint-consistent path per link, path contiguity and
// latency bounds.
inline std::vector<std::string> validate_allocation(const SubstrateNetwork& net,
                                                    const VirtualRequest& req,
                                                    const Allocation& alloc) {
    std::vector<std::string> violations;
    auto fail = [&](const std::string& msg) {
        violations.push_back("request " + std::to_string(req.id) + ": " + msg);
    };

    // x_nv indicators, one row per component.
    std::map<ComponentId, std::vector<NodeId>> x_nv;
    for (const auto& [cid, nid] : alloc.node_assignment) x_nv[cid].push_back(nid);
    for (const auto& c : req.components) {
        auto it = x_nv.find(c.id);
        if (it == x_nv.end())
            fail("component " + std::to_string(c.id) + " unassigned");
        else if (it->second.size() != 1)
            fail("component " + std::to_string(c.id) + " assigned more than once");
    }
    for (const auto& [cid, nodes] : x_nv) {
        if (!req.component(cid)) fail("assignment for unknown component " + std::to_string(cid));
        for (NodeId n : nodes)
            if (n < 0 || n >= net.node_count())
                fail("component " + std::to_string(cid) + " mapped to unknown node");
    }

    // y_pf indicators: exactly one path per link, endpoints matching x_nv.
    if (alloc.path_assignment.size() != req.links.size()) {
        fail("path assignment count != link count");
        return violations;
    }
    for (size_t i = 0; i < req.links.size(); ++i) {
        const VirtualLink& link = req.links[i];
        const AssignedPath& path = alloc.path_assignment[i];
        auto src = alloc.node_assignment.find(link.source);
        auto dst = alloc.node_assignment.find(link.target);
        if (src == alloc.node_assignment.end() || dst == alloc.node_assignment.end()) {
            fail("link " + std::to_string(i) + " has unassigned endpoint");
            continue;
        }
        if (path.origin != src->second)
            fail("link " + std::to_string(i) + " path origin != source node");
        if (path.destination != dst->second)
            fail("link " + std::to_string(i) + " path destination != target node");

        // Contiguity, loop-freedom and recomputed latency.
        NodeId at = path.origin;
        std::set<NodeId> visited{at};
        int lat = 0;
        bool broken = false;
        for (EdgeIndex e : path.edges) {
            if (e < 0 || e >= net.edge_count()) {
                fail("link " + std::to_string(i) + " path uses unknown edge");
                broken = true;
                break;
            }
            const SubstrateEdge& edge = net.edges[static_cast<size_t>(e)];
            if (!edge.touches(at)) {
                fail("link " + std::to_string(i) + " path not contiguous");
                broken = true;
                break;
            }
            at = edge.other(at);
            if (!visited.insert(at).second) {
                fail("link " + std::to_string(i) + " path revisits a node");
                broken = true;
                break;
            }
            lat += edge.latency_ms;
        }
        if (broken) continue;
        if (at != path.destination) fail("link " + std::to_string(i) + " path ends off target");
        if (lat != path.total_latency_ms)
            fail("link " + std::to_string(i) + " stored latency != recomputed latency");
        if (lat > link.latency_bound_ms)
            fail("link " + std::to_string(i) + " latency exceeds bound");
        if (path.edges.empty() && path.origin != path.destination)
            fail("link " + std::to_string(i) + " empty path between distinct nodes");
    }
    return violations;
}

// Capacity constraints over a set of concurrently deployed allocations, plus
// consistency of the tracked residual state against recomputed usage.
inline std::vector<std::string> validate_state(
    const SubstrateNetwork& net,
    const std::vector<std::pair<const VirtualRequest*, const Allocation*>>& deployed,
    const ResidualState& residual) {
    std::vector<std::string> violations;

    std::vector<ResourceVector> node_used(net.nodes.size());
    std::vector<std::int64_t> edge_used(2 * net.edges.size(), 0);  // per directed slot
    for (const auto& [req, alloc] : deployed) {
        auto structural = validate_allocation(net, *req, *alloc);
        violations.insert(violations.end(), structural.begin(), structural.end());
        for (const auto& [cid, nid] : alloc->node_assignment) {
            const VirtualComponent* c = req->component(cid);
            if (c && nid >= 0 && nid < net.node_count())
                node_used[static_cast<size_t>(nid)] += c->demand;
        }
        for (size_t i = 0; i < alloc->path_assignment.size() && i < req->links.size(); ++i) {
            const AssignedPath& path = alloc->path_assignment[i];
            NodeId at = path.origin;
            for (EdgeIndex e : path.edges) {
                if (e < 0 || e >= net.edge_count()) break;
                const SubstrateEdge& edge = net.edges[static_cast<size_t>(e)];
                if (!edge.touches(at)) break;
                edge_used[directed_edge_slot(e, at == edge.b)] += req->links[i].bandwidth_dmbps;
                at = edge.other(at);
            }
        }
    }

    for (int n = 0; n < net.node_count(); ++n) {
        const ResourceVector& cap = net.nodes[static_cast<size_t>(n)].capacity;
        if (!node_used[static_cast<size_t>(n)].fits_within(cap))
            violations.push_back("node " + std::to_string(n) + " capacity exceeded");
        ResourceVector expect = cap - node_used[static_cast<size_t>(n)];
        if (n < static_cast<int>(residual.node_residual.size())) {
            if (!(residual.node_residual[static_cast<size_t>(n)] == expect))
                violations.push_back("node " + std::to_string(n) +
                                     " residual inconsistent with deployed set");
            if (!residual.node_residual[static_cast<size_t>(n)].valid() ||
                !residual.node_residual[static_cast<size_t>(n)].fits_within(cap))
                violations.push_back("node " + std::to_string(n) + " residual out of [0, capacity]");
        }
    }
    for (int e = 0; e < net.edge_count(); ++e) {
        std::int64_t cap = net.edges[static_cast<size_t>(e)].bandwidth_dmbps;
        for (int rev = 0; rev < 2; ++rev) {
            const size_t slot = directed_edge_slot(e, rev != 0);
            const std::string label =
                "edge " + std::to_string(e) + (rev ? " reverse" : " forward");
            if (edge_used[slot] > cap) violations.push_back(label + " bandwidth exceeded");
            if (slot < residual.edge_residual_dmbps.size()) {
                std::int64_t r = residual.edge_residual_dmbps[slot];
                if (r != cap - edge_used[slot])
                    violations.push_back(label + " residual inconsistent with deployed set");
                if (r < 0 || r > cap)
                    violations.push_back(label + " residual out of [0, capacity]");
            }
        }
    }
    return violations;
}

}  // namespace meshvne
