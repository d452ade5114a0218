#pragma once

// Greedy baseline allocator. Requests are served highest-reward-first; within
// a request, components are placed largest-demand-first onto the node ranked
// best by the configured rule, then each virtual link takes the lowest-latency
// feasible path with enough residual bandwidth. Placement is deliberately
// conservative: the allocator only books each node attribute up to a
// configurable fraction of its capacity, keeping a safety margin free.

#include <cmath>
#include <optional>
#include <vector>

#include "meshvne/allocator.hpp"
#include "meshvne/core.hpp"
#include "meshvne/paths.hpp"

namespace meshvne {

struct GreedyOptions {
    enum class Ranking {
        kAvailability,  // most free resources first (load balancing)
        kProximity,     // closest to the first-placed component first
    };
    Ranking ranking = Ranking::kProximity;
    // Fraction of every node attribute the allocator is willing to book; the
    // rest stays reserved as an admission-control margin.
    double capacity_fraction = 0.65;
};

// Demand (or residual) size as a sum of attribute fractions of the largest
// capacities present in the network. Zero-capacity attributes are skipped.
inline double resource_rank(const ResourceVector& r, const ResourceVector& max_cap) {
    double s = 0.0;
    for (int a = 0; a < kAttributeCount; ++a)
        if (max_cap.attribute(a) > 0)
            s += static_cast<double>(r.attribute(a)) / static_cast<double>(max_cap.attribute(a));
    return s;
}

// Mean occupied fraction across the attributes a node actually provides.
inline double node_load(const ResourceVector& residual, const ResourceVector& capacity) {
    double s = 0.0;
    int provided = 0;
    for (int a = 0; a < kAttributeCount; ++a) {
        const std::int64_t cap = capacity.attribute(a);
        if (cap <= 0) continue;
        s += 1.0 - static_cast<double>(residual.attribute(a)) / static_cast<double>(cap);
        ++provided;
    }
    return provided > 0 ? s / provided : 0.0;
}

// Component placement order: largest normalized demand first, ties by id.
inline std::vector<const VirtualComponent*> greedy_component_order(const VirtualRequest& req,
                                                                   const ResourceVector& max_cap) {
    std::vector<const VirtualComponent*> order;
    order.reserve(req.components.size());
    for (const auto& c : req.components) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(),
                     [&](const VirtualComponent* a, const VirtualComponent* b) {
                         const double ra = resource_rank(a->demand, max_cap);
                         const double rb = resource_rank(b->demand, max_cap);
                         if (ra != rb) return ra > rb;
                         return a->id < b->id;
                     });
    return order;
}

// Places one request against the given residual state without mutating it.
// Returns the allocation, or nullopt when some component or link cannot fit.
inline std::optional<Allocation> greedy_place_request(const SubstrateNetwork& net,
                                                      const PathCatalog& catalog,
                                                      const ResidualState& state,
                                                      const VirtualRequest& req,
                                                      const GreedyOptions& opts = {}) {
    std::vector<ResourceVector> node_res = state.node_residual;
    std::vector<std::int64_t> edge_res = state.edge_residual_dmbps;
    const ResourceVector max_cap = net.max_capacity();

    Allocation alloc;
    alloc.request_id = req.id;
    // Per-attribute reservations: demand must fit inside residual minus the
    // reserved margin for a node to count as suitable.
    const double margin = 1.0 - opts.capacity_fraction;
    const auto scaled = [margin](std::int64_t cap) {
        return std::llround(static_cast<double>(cap) * margin);
    };
    std::vector<ResourceVector> reserve;
    reserve.reserve(static_cast<size_t>(net.node_count()));
    for (NodeId n = 0; n < net.node_count(); ++n) {
        const ResourceVector& cap = net.node(n).capacity;
        reserve.push_back(ResourceVector{scaled(cap.cpu_millicores), scaled(cap.memory_mb),
                                         scaled(cap.storage_gb), scaled(cap.gpu_units)});
    }
    const auto suitable = [&](NodeId n, const ResourceVector& demand) {
        const ResourceVector& res = node_res[static_cast<size_t>(n)];
        const ResourceVector& r = reserve[static_cast<size_t>(n)];
        for (int a = 0; a < kAttributeCount; ++a)
            if (res.attribute(a) - r.attribute(a) < demand.attribute(a)) return false;
        return true;
    };

    // The first placed component fixes the app's origin; later components are
    // ranked by hop distance to it, then by free resources, then by mean load.
    // Hop distance is coarse on purpose: the origin itself ranks first while
    // it has margin left, and every node in the same ring ties, letting
    // availability level load within the ring. In availability mode the
    // distance key is dropped entirely.
    std::vector<NodeId> placed_nodes;
    for (const VirtualComponent* c : greedy_component_order(req, max_cap)) {
        NodeId best = -1;
        double best_dist = 0.0, best_avail = 0.0, best_load = 0.0;
        const bool use_distance =
            opts.ranking == GreedyOptions::Ranking::kProximity && !placed_nodes.empty();
        const NodeId origin = placed_nodes.empty() ? -1 : placed_nodes.front();
        for (NodeId n = 0; n < net.node_count(); ++n) {
            if (!suitable(n, c->demand)) continue;
            double dist = 0.0;
            if (use_distance && n != origin) {
                const auto& shortest = catalog.paths(origin, n);
                dist = static_cast<double>(shortest.front().edges.size());
            }
            const double avail = resource_rank(node_res[static_cast<size_t>(n)], max_cap);
            const double load = node_load(node_res[static_cast<size_t>(n)], net.node(n).capacity);
            const bool better =
                best < 0 || dist < best_dist ||
                (dist == best_dist &&
                 (avail > best_avail || (avail == best_avail && load < best_load)));
            if (better) {
                best = n;
                best_dist = dist;
                best_avail = avail;
                best_load = load;
            }
        }
        if (best < 0) return std::nullopt;
        alloc.node_assignment[c->id] = best;
        placed_nodes.push_back(best);
        node_res[static_cast<size_t>(best)] -= c->demand;
    }

    for (const auto& link : req.links) {
        const NodeId a = alloc.node_assignment.at(link.source);
        const NodeId b = alloc.node_assignment.at(link.target);
        bool routed = false;
        for (const SubstratePath& p : catalog.paths(a, b)) {
            if (p.total_latency_ms > link.latency_bound_ms) break;
            bool fits = true;
            for (size_t i = 0; i < p.edges.size(); ++i)
                if (edge_res[path_edge_slot(net, p, i)] < link.bandwidth_dmbps) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            for (size_t i = 0; i < p.edges.size(); ++i)
                edge_res[path_edge_slot(net, p, i)] -= link.bandwidth_dmbps;
            alloc.path_assignment.push_back(p.to_assigned());
            routed = true;
            break;
        }
        if (!routed) return std::nullopt;
    }
    return alloc;
}

class GreedyAllocator : public Allocator {
  public:
    explicit GreedyAllocator(GreedyOptions opts = {}) : opts_(opts) {}

    std::string name() const override { return "greedy"; }

    BatchOutcome allocate(const BatchContext& ctx, const std::vector<BatchRequest>& batch) override {
        std::vector<size_t> order(batch.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (batch[a].reward_fixed != batch[b].reward_fixed)
                return batch[a].reward_fixed > batch[b].reward_fixed;
            if (batch[a].request->arrival_ms != batch[b].request->arrival_ms)
                return batch[a].request->arrival_ms < batch[b].request->arrival_ms;
            return batch[a].request->id < batch[b].request->id;
        });

        ResidualState work = ctx.residual->capacities_only();
        BatchOutcome out;
        out.status = "heuristic";
        for (size_t i : order) {
            const VirtualRequest& req = *batch[i].request;
            ++out.work;
            auto alloc = greedy_place_request(*ctx.network, *ctx.catalog, work, req, opts_);
            if (!alloc) continue;
            apply_allocation(work, req, *alloc);
            out.objective_fixed +=
                batch[i].reward_fixed - allocation_penalty_fixed(req, *alloc, ctx.alpha);
            out.accepted.emplace(req.id, std::move(*alloc));
        }
        return out;
    }

  private:
    GreedyOptions opts_;
};

}  // namespace meshvne
