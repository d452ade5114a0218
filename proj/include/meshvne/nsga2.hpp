#pragma once

// NSGA-II batch allocator. A chromosome assigns one substrate node per pending
// component; decoding walks requests oldest-first and keeps each request only
// if all of its components and links fit, routing links on the lowest-latency
// feasible path. Two objectives are minimized: negated accepted reward, and
// mean normalized path latency over accepted requests. The returned plan is
// the knee point of the final non-dominated front.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "meshvne/allocator.hpp"
#include "meshvne/core.hpp"
#include "meshvne/greedy.hpp"
#include "meshvne/paths.hpp"
#include "meshvne/rng.hpp"

namespace meshvne {

struct Objective {
    double f1 = 0.0;  // minimized: -(sum of accepted rewards)
    double f2 = 0.0;  // minimized: mean normalized latency of accepted requests
};

// Pareto dominance for two minimized objectives.
inline bool dominates(const Objective& a, const Objective& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

// Deb's fast non-dominated sort; fronts hold indices into objs, best first.
inline std::vector<std::vector<size_t>> fast_non_dominated_sort(
    const std::vector<Objective>& objs) {
    const size_t n = objs.size();
    std::vector<std::vector<size_t>> dominated(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<size_t>> fronts(1);
    for (size_t p = 0; p < n; ++p) {
        for (size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(objs[p], objs[q]))
                dominated[p].push_back(q);
            else if (dominates(objs[q], objs[p]))
                ++count[p];
        }
        if (count[p] == 0) fronts[0].push_back(p);
    }
    size_t i = 0;
    while (!fronts[i].empty()) {
        std::vector<size_t> next;
        for (size_t p : fronts[i])
            for (size_t q : dominated[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
        ++i;
    }
    fronts.pop_back();
    return fronts;
}

// Crowding distance within one front, aligned with `front`. Boundary points
// get infinity; an objective with zero range contributes nothing.
inline std::vector<double> crowding_distance(const std::vector<Objective>& objs,
                                             const std::vector<size_t>& front) {
    const size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    if (n <= 2) {
        for (auto& d : dist) d = std::numeric_limits<double>::infinity();
        return dist;
    }
    for (int m = 0; m < 2; ++m) {
        auto value = [&](size_t fi) { return m == 0 ? objs[front[fi]].f1 : objs[front[fi]].f2; };
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return value(a) < value(b); });
        const double range = value(idx[n - 1]) - value(idx[0]);
        dist[idx[0]] = std::numeric_limits<double>::infinity();
        dist[idx[n - 1]] = std::numeric_limits<double>::infinity();
        if (range <= 0.0) continue;
        for (size_t i = 1; i + 1 < n; ++i)
            if (!std::isinf(dist[idx[i]]))
                dist[idx[i]] += (value(idx[i + 1]) - value(idx[i - 1])) / range;
    }
    return dist;
}

// Knee of a front: the point minimizing the sum of per-objective normalized
// values; ties resolve to the earliest front member.
inline size_t knee_index(const std::vector<Objective>& objs, const std::vector<size_t>& front) {
    double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
    double min2 = min1, max2 = -min1;
    for (size_t i : front) {
        min1 = std::min(min1, objs[i].f1);
        max1 = std::max(max1, objs[i].f1);
        min2 = std::min(min2, objs[i].f2);
        max2 = std::max(max2, objs[i].f2);
    }
    size_t best = front[0];
    double best_score = std::numeric_limits<double>::infinity();
    for (size_t i : front) {
        const double n1 = max1 > min1 ? (objs[i].f1 - min1) / (max1 - min1) : 0.0;
        const double n2 = max2 > min2 ? (objs[i].f2 - min2) / (max2 - min2) : 0.0;
        if (n1 + n2 < best_score) {
            best_score = n1 + n2;
            best = i;
        }
    }
    return best;
}

struct DecodedPlan {
    std::map<RequestId, Allocation> accepted;
    Objective obj;
    std::int64_t objective_fixed = 0;
};

// Batch entries must already be sorted in decode order (oldest arrival first);
// genes hold one node per component, concatenated in that order.
inline DecodedPlan nsga2_decode(const SubstrateNetwork& net, const PathCatalog& catalog,
                                const ResidualState& state,
                                const std::vector<BatchRequest>& sorted_batch,
                                const std::vector<NodeId>& genes, double alpha) {
    DecodedPlan plan;
    std::vector<ResourceVector> node_res = state.node_residual;
    std::vector<std::int64_t> edge_res = state.edge_residual_dmbps;
    double reward_sum = 0.0, latency_sum = 0.0;
    size_t accepted_count = 0;

    size_t offset = 0;
    for (const auto& br : sorted_batch) {
        const VirtualRequest& req = *br.request;
        Allocation alloc;
        alloc.request_id = req.id;
        std::vector<std::pair<NodeId, ResourceVector>> node_undo;
        std::vector<std::pair<size_t, std::int64_t>> edge_undo;  // directed slot, dmbps
        bool ok = true;
        for (size_t v = 0; v < req.components.size() && ok; ++v) {
            const NodeId n = genes[offset + v];
            const ResourceVector& d = req.components[v].demand;
            if (n < 0 || n >= net.node_count() ||
                !feasible_on_node(node_res[static_cast<size_t>(n)], d)) {
                ok = false;
                break;
            }
            node_res[static_cast<size_t>(n)] -= d;
            node_undo.emplace_back(n, d);
            alloc.node_assignment[req.components[v].id] = n;
        }
        double req_latency = 0.0;
        if (ok) {
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
                    for (size_t i = 0; i < p.edges.size(); ++i) {
                        edge_res[path_edge_slot(net, p, i)] -= link.bandwidth_dmbps;
                        edge_undo.emplace_back(path_edge_slot(net, p, i), link.bandwidth_dmbps);
                    }
                    alloc.path_assignment.push_back(p.to_assigned());
                    req_latency += static_cast<double>(p.total_latency_ms) /
                                   static_cast<double>(link.latency_bound_ms);
                    routed = true;
                    break;
                }
                if (!routed) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            reward_sum += static_cast<double>(br.reward_fixed);
            latency_sum += req.links.empty()
                               ? 0.0
                               : req_latency / static_cast<double>(req.links.size());
            ++accepted_count;
            plan.objective_fixed += br.reward_fixed - allocation_penalty_fixed(req, alloc, alpha);
            plan.accepted.emplace(req.id, std::move(alloc));
        } else {
            for (const auto& [n, d] : node_undo) node_res[static_cast<size_t>(n)] += d;
            for (const auto& [slot, bw] : edge_undo) edge_res[slot] += bw;
        }
        offset += req.components.size();
    }
    plan.obj.f1 = -reward_sum;
    plan.obj.f2 = accepted_count == 0 ? 0.0 : latency_sum / static_cast<double>(accepted_count);
    return plan;
}

struct Nsga2Options {
    int population = 50;
    int generations = 100;
    double crossover_rate = 0.8;
    double mutation_rate = 0.1;
    // When set, receives the population objectives after initialization and
    // after every environmental selection (generations + 1 entries per batch).
    std::vector<std::vector<Objective>>* generation_log = nullptr;
};

class Nsga2Allocator : public Allocator {
  public:
    Nsga2Allocator(Nsga2Options opts, Rng rng) : opts_(opts), rng_(rng) {}

    std::string name() const override { return "nsga2"; }

    BatchOutcome allocate(const BatchContext& ctx, const std::vector<BatchRequest>& batch) override {
        BatchOutcome out;
        out.status = "evolved";
        if (batch.empty()) return out;

        std::vector<BatchRequest> sorted = batch;
        std::stable_sort(sorted.begin(), sorted.end(), [](const BatchRequest& a, const BatchRequest& b) {
            if (a.request->arrival_ms != b.request->arrival_ms)
                return a.request->arrival_ms < b.request->arrival_ms;
            return a.request->id < b.request->id;
        });
        size_t gene_count = 0;
        for (const auto& br : sorted) gene_count += br.request->components.size();
        const int node_count = ctx.network->node_count();

        struct Individual {
            std::vector<NodeId> genes;
            DecodedPlan plan;
            int rank = 0;
            double crowding = 0.0;
        };
        auto evaluate = [&](Individual& ind) {
            ind.plan = nsga2_decode(*ctx.network, *ctx.catalog, *ctx.residual, sorted, ind.genes,
                                    ctx.alpha);
            ++out.work;
        };
        auto random_gene = [&]() {
            return static_cast<NodeId>(rng_.uniform_int(0, node_count - 1));
        };

        std::vector<Individual> pop(static_cast<size_t>(opts_.population));
        // One individual seeded from the greedy plan, the rest random.
        {
            GreedyAllocator greedy;
            BatchOutcome warm = greedy.allocate(ctx, batch);
            auto& genes = pop[0].genes;
            genes.resize(gene_count);
            size_t offset = 0;
            for (const auto& br : sorted) {
                auto it = warm.accepted.find(br.request->id);
                for (size_t v = 0; v < br.request->components.size(); ++v) {
                    if (it != warm.accepted.end())
                        genes[offset + v] =
                            it->second.node_assignment.at(br.request->components[v].id);
                    else
                        genes[offset + v] = random_gene();
                }
                offset += br.request->components.size();
            }
        }
        // Half of each random genome's apps start colocated on one node:
        // colocation is the dominant latency saver, and a pool that already
        // contains it lets selection keep it wherever capacity allows.
        for (size_t i = 1; i < pop.size(); ++i) {
            pop[i].genes.resize(gene_count);
            size_t offset = 0;
            for (const auto& br : sorted) {
                const size_t n = br.request->components.size();
                if (rng_.coin(0.5)) {
                    const NodeId shared = random_gene();
                    for (size_t v = 0; v < n; ++v) pop[i].genes[offset + v] = shared;
                } else {
                    for (size_t v = 0; v < n; ++v) pop[i].genes[offset + v] = random_gene();
                }
                offset += n;
            }
        }
        for (auto& ind : pop) evaluate(ind);

        auto rank_population = [&](std::vector<Individual>& p) {
            std::vector<Objective> objs(p.size());
            for (size_t i = 0; i < p.size(); ++i) objs[i] = p[i].plan.obj;
            auto fronts = fast_non_dominated_sort(objs);
            for (size_t f = 0; f < fronts.size(); ++f) {
                auto dist = crowding_distance(objs, fronts[f]);
                for (size_t i = 0; i < fronts[f].size(); ++i) {
                    p[fronts[f][i]].rank = static_cast<int>(f);
                    p[fronts[f][i]].crowding = dist[i];
                }
            }
            return fronts;
        };
        rank_population(pop);
        auto log_generation = [&]() {
            if (opts_.generation_log == nullptr) return;
            std::vector<Objective> snapshot(pop.size());
            for (size_t i = 0; i < pop.size(); ++i) snapshot[i] = pop[i].plan.obj;
            opts_.generation_log->push_back(std::move(snapshot));
        };
        log_generation();

        auto tournament = [&]() -> const Individual& {
            const size_t a = static_cast<size_t>(
                rng_.uniform_int(0, static_cast<std::int64_t>(pop.size()) - 1));
            const size_t b = static_cast<size_t>(
                rng_.uniform_int(0, static_cast<std::int64_t>(pop.size()) - 1));
            if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? pop[a] : pop[b];
            if (pop[a].crowding != pop[b].crowding)
                return pop[a].crowding > pop[b].crowding ? pop[a] : pop[b];
            return pop[std::min(a, b)];
        };

        for (int gen = 0; gen < opts_.generations; ++gen) {
            std::vector<Individual> offspring;
            offspring.reserve(pop.size());
            while (offspring.size() < pop.size()) {
                Individual c1, c2;
                c1.genes = tournament().genes;
                c2.genes = tournament().genes;
                if (rng_.coin(opts_.crossover_rate))
                    for (size_t g = 0; g < gene_count; ++g)
                        if (rng_.coin(0.5)) std::swap(c1.genes[g], c2.genes[g]);
                for (auto* child : {&c1, &c2})
                    for (auto& g : child->genes)
                        if (rng_.coin(opts_.mutation_rate)) g = random_gene();
                evaluate(c1);
                offspring.push_back(std::move(c1));
                if (offspring.size() < pop.size()) {
                    evaluate(c2);
                    offspring.push_back(std::move(c2));
                }
            }
            std::vector<Individual> combined;
            combined.reserve(pop.size() + offspring.size());
            for (auto& i : pop) combined.push_back(std::move(i));
            for (auto& i : offspring) combined.push_back(std::move(i));
            auto fronts = rank_population(combined);
            std::vector<Individual> next;
            next.reserve(pop.size());
            for (const auto& front : fronts) {
                if (next.size() >= pop.size()) break;
                if (next.size() + front.size() <= pop.size()) {
                    for (size_t i : front) next.push_back(std::move(combined[i]));
                } else {
                    std::vector<size_t> by_crowding = front;
                    std::stable_sort(by_crowding.begin(), by_crowding.end(),
                                     [&](size_t a, size_t b) {
                                         return combined[a].crowding > combined[b].crowding;
                                     });
                    for (size_t i : by_crowding) {
                        if (next.size() >= pop.size()) break;
                        next.push_back(std::move(combined[i]));
                    }
                }
            }
            pop = std::move(next);
            log_generation();
        }

        std::vector<Objective> objs(pop.size());
        for (size_t i = 0; i < pop.size(); ++i) objs[i] = pop[i].plan.obj;
        auto fronts = fast_non_dominated_sort(objs);
        const Individual& winner = pop[knee_index(objs, fronts[0])];
        out.accepted = winner.plan.accepted;
        out.objective_fixed = winner.plan.objective_fixed;
        return out;
    }

  private:
    Nsga2Options opts_;
    Rng rng_;
};

}  // namespace meshvne
