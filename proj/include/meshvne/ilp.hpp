#pragma once

// Exact batch allocator. The deployment problem is a 0/1 program: per-request
// accept bits, component-to-node placement bits and link-to-path bits, with
// integrity, capacity and bandwidth rows. build_model() materializes that
// program (for inspection and structural tests); solve_batch() runs a
// depth-first branch-and-bound over the equivalent combinatorial space, and
// brute_force_solve() is a plain exhaustive reference for small instances.
//
// Determinism: the search is budgeted by a node-expansion count derived from
// the nominal time limit, never by wall-clock time, so identical inputs give
// identical outcomes on any machine.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshvne/allocator.hpp"
#include "meshvne/core.hpp"
#include "meshvne/greedy.hpp"
#include "meshvne/paths.hpp"

namespace meshvne {

struct InstanceTooLarge : std::runtime_error {
    explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

enum class SolveStatus { kOptimal, kTimeLimit, kInfeasible };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kTimeLimit: return "time_limit";
        default: return "infeasible";
    }
}

struct SolveOutcome {
    SolveStatus status = SolveStatus::kOptimal;
    std::int64_t objective_fixed = 0;
    std::map<RequestId, Allocation> accepted;
    std::int64_t nodes_explored = 0;
};

struct IlpOptions {
    // Nominal solve budget in seconds, converted to a fixed number of search
    // expansions so runs are reproducible regardless of host speed.
    double time_limit_s = 1.0;
    static constexpr std::int64_t kExpansionsPerSecond = 250000;
    std::int64_t expansion_budget() const {
        return static_cast<std::int64_t>(
            std::llround(time_limit_s * static_cast<double>(kExpansionsPerSecond)));
    }
};

// ---------------------------------------------------------------------------
// Explicit 0/1 model

struct LinearTerm {
    int var = 0;
    std::int64_t coeff = 0;
};

struct ModelRow {
    std::string name;
    std::vector<LinearTerm> terms;
    char sense = 'L';  // 'L': <= rhs, 'E': == rhs
    std::int64_t rhs = 0;
};

struct IlpModel {
    std::vector<std::string> var_names;
    std::vector<std::int64_t> objective_fixed;  // maximize c^T x, fixed-point coefficients
    std::vector<ModelRow> rows;

    int var_count() const { return static_cast<int>(var_names.size()); }
    int row_count() const { return static_cast<int>(rows.size()); }

    std::string dump_lp() const {
        std::ostringstream out;
        out << "Maximize\n obj:";
        bool first = true;
        for (size_t i = 0; i < var_names.size(); ++i) {
            if (objective_fixed[i] == 0) continue;
            const std::int64_t c = objective_fixed[i];
            if (first) {
                out << ' ' << c << ' ' << var_names[i];
                first = false;
            } else {
                out << (c >= 0 ? " + " : " - ") << (c >= 0 ? c : -c) << ' ' << var_names[i];
            }
        }
        if (first) out << " 0";
        out << "\nSubject To\n";
        for (const auto& row : rows) {
            out << ' ' << row.name << ':';
            bool rfirst = true;
            for (const auto& t : row.terms) {
                if (rfirst) {
                    out << ' ' << t.coeff << ' ' << var_names[static_cast<size_t>(t.var)];
                    rfirst = false;
                } else {
                    out << (t.coeff >= 0 ? " + " : " - ") << (t.coeff >= 0 ? t.coeff : -t.coeff)
                        << ' ' << var_names[static_cast<size_t>(t.var)];
                }
            }
            if (rfirst) out << " 0";
            out << (row.sense == 'E' ? " = " : " <= ") << row.rhs << '\n';
        }
        out << "Binaries\n";
        for (const auto& n : var_names) out << ' ' << n << '\n';
        out << "End\n";
        return out.str();
    }
};

// Latency-feasible candidate paths for one virtual link, drawn from the whole
// catalog (any endpoint pair); endpoint consistency is enforced by rows.
struct CandidatePathRef {
    NodeId origin = 0;
    NodeId destination = 0;
    int rank = 0;  // position within the catalog entry for that pair
    const SubstratePath* path = nullptr;
};

inline std::vector<CandidatePathRef> catalog_paths_within(const PathCatalog& catalog,
                                                          int latency_bound_ms) {
    std::vector<CandidatePathRef> out;
    for (NodeId o = 0; o < catalog.node_count(); ++o)
        for (NodeId d = 0; d < catalog.node_count(); ++d) {
            const auto& entry = catalog.paths(o, d);
            for (size_t r = 0; r < entry.size(); ++r) {
                if (entry[r].total_latency_ms > latency_bound_ms) break;  // sorted by latency
                out.push_back(CandidatePathRef{o, d, static_cast<int>(r), &entry[r]});
            }
        }
    return out;
}

inline IlpModel build_model(const SubstrateNetwork& net, const PathCatalog& catalog,
                            const ResidualState& residual, const std::vector<BatchRequest>& batch,
                            double alpha) {
    IlpModel m;
    auto add_var = [&](std::string name, std::int64_t obj) {
        m.var_names.push_back(std::move(name));
        m.objective_fixed.push_back(obj);
        return static_cast<int>(m.var_names.size()) - 1;
    };

    std::vector<int> accept_var(batch.size());
    // placement_var[s][v][n], link_var[s][f][candidate index]
    std::vector<std::vector<std::vector<int>>> placement_var(batch.size());
    std::vector<std::vector<std::vector<int>>> link_var(batch.size());
    std::vector<std::vector<std::vector<CandidatePathRef>>> link_paths(batch.size());

    for (size_t s = 0; s < batch.size(); ++s) {
        const VirtualRequest& req = *batch[s].request;
        accept_var[s] = add_var("x_s" + std::to_string(req.id), batch[s].reward_fixed);
    }
    for (size_t s = 0; s < batch.size(); ++s) {
        const VirtualRequest& req = *batch[s].request;
        placement_var[s].resize(req.components.size());
        for (size_t v = 0; v < req.components.size(); ++v)
            for (NodeId n = 0; n < net.node_count(); ++n)
                placement_var[s][v].push_back(
                    add_var("x_n" + std::to_string(n) + "_s" + std::to_string(req.id) + "v" +
                                std::to_string(req.components[v].id),
                            0));
    }
    for (size_t s = 0; s < batch.size(); ++s) {
        const VirtualRequest& req = *batch[s].request;
        link_var[s].resize(req.links.size());
        link_paths[s].resize(req.links.size());
        const int link_count = static_cast<int>(req.links.size());
        for (size_t f = 0; f < req.links.size(); ++f) {
            link_paths[s][f] = catalog_paths_within(catalog, req.links[f].latency_bound_ms);
            for (const auto& cand : link_paths[s][f]) {
                const std::int64_t pen = penalty_fixed_point(
                    alpha, link_count, cand.path->total_latency_ms, req.links[f].latency_bound_ms);
                link_var[s][f].push_back(
                    add_var("y_s" + std::to_string(req.id) + "f" + std::to_string(f) + "_p" +
                                std::to_string(cand.origin) + "_" + std::to_string(cand.destination) +
                                "_" + std::to_string(cand.rank),
                            -pen));
            }
        }
    }

    // Integrity: every component placed exactly when accepted.
    for (size_t s = 0; s < batch.size(); ++s) {
        const VirtualRequest& req = *batch[s].request;
        for (size_t v = 0; v < req.components.size(); ++v) {
            ModelRow row;
            row.name = "assign_s" + std::to_string(req.id) + "v" +
                       std::to_string(req.components[v].id);
            row.sense = 'E';
            for (NodeId n = 0; n < net.node_count(); ++n)
                row.terms.push_back({placement_var[s][v][static_cast<size_t>(n)], 1});
            row.terms.push_back({accept_var[s], -1});
            m.rows.push_back(std::move(row));
        }
        // Every link routed exactly when accepted.
        for (size_t f = 0; f < req.links.size(); ++f) {
            ModelRow row;
            row.name = "route_s" + std::to_string(req.id) + "f" + std::to_string(f);
            row.sense = 'E';
            for (int var : link_var[s][f]) row.terms.push_back({var, 1});
            row.terms.push_back({accept_var[s], -1});
            m.rows.push_back(std::move(row));
        }
        // Chosen paths start and end where the link endpoints were placed.
        auto component_index = [&](ComponentId cid) {
            for (size_t v = 0; v < req.components.size(); ++v)
                if (req.components[v].id == cid) return v;
            return req.components.size();
        };
        for (size_t f = 0; f < req.links.size(); ++f) {
            const size_t sv = component_index(req.links[f].source);
            const size_t tv = component_index(req.links[f].target);
            for (NodeId n = 0; n < net.node_count(); ++n) {
                ModelRow orow;
                orow.name = "orig_s" + std::to_string(req.id) + "f" + std::to_string(f) + "_n" +
                            std::to_string(n);
                orow.sense = 'E';
                for (size_t c = 0; c < link_paths[s][f].size(); ++c)
                    if (link_paths[s][f][c].origin == n)
                        orow.terms.push_back({link_var[s][f][c], 1});
                orow.terms.push_back({placement_var[s][sv][static_cast<size_t>(n)], -1});
                m.rows.push_back(std::move(orow));

                ModelRow drow;
                drow.name = "dest_s" + std::to_string(req.id) + "f" + std::to_string(f) + "_n" +
                            std::to_string(n);
                drow.sense = 'E';
                for (size_t c = 0; c < link_paths[s][f].size(); ++c)
                    if (link_paths[s][f][c].destination == n)
                        drow.terms.push_back({link_var[s][f][c], 1});
                drow.terms.push_back({placement_var[s][tv][static_cast<size_t>(n)], -1});
                m.rows.push_back(std::move(drow));
            }
        }
    }

    // Node capacity per attribute, against current residuals.
    for (NodeId n = 0; n < net.node_count(); ++n)
        for (int a = 0; a < kAttributeCount; ++a) {
            ModelRow row;
            row.name = "cap_n" + std::to_string(n) + "_" + attribute_name(a);
            row.sense = 'L';
            row.rhs = residual.node_residual[static_cast<size_t>(n)].attribute(a);
            for (size_t s = 0; s < batch.size(); ++s) {
                const VirtualRequest& req = *batch[s].request;
                for (size_t v = 0; v < req.components.size(); ++v) {
                    const std::int64_t d = req.components[v].demand.attribute(a);
                    if (d != 0)
                        row.terms.push_back({placement_var[s][v][static_cast<size_t>(n)], d});
                }
            }
            m.rows.push_back(std::move(row));
        }

    // Bandwidth per physical edge and direction.
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
        for (int rev = 0; rev < 2; ++rev) {
            const size_t slot = directed_edge_slot(e, rev != 0);
            ModelRow row;
            row.name = "bw_e" + std::to_string(e) + (rev ? "_rev" : "_fwd");
            row.sense = 'L';
            row.rhs = residual.edge_residual_dmbps[slot];
            for (size_t s = 0; s < batch.size(); ++s) {
                const VirtualRequest& req = *batch[s].request;
                for (size_t f = 0; f < req.links.size(); ++f)
                    for (size_t c = 0; c < link_paths[s][f].size(); ++c) {
                        const SubstratePath* p = link_paths[s][f][c].path;
                        bool uses = false;
                        for (size_t h = 0; h < p->edges.size(); ++h)
                            if (path_edge_slot(net, *p, h) == slot) {
                                uses = true;
                                break;
                            }
                        if (uses)
                            row.terms.push_back({link_var[s][f][c], req.links[f].bandwidth_dmbps});
                    }
            }
            m.rows.push_back(std::move(row));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Branch-and-bound search

namespace detail {

// Per-request expansion plan: place components largest-first, and route each
// link as soon as both of its endpoints are on substrate nodes.
struct Slot {
    enum Kind { kPlace, kRoute } kind = kPlace;
    const VirtualComponent* component = nullptr;
    size_t link_index = 0;
};

inline std::vector<Slot> request_slots(const VirtualRequest& req, const ResourceVector& max_cap) {
    std::vector<Slot> slots;
    std::vector<char> routed(req.links.size(), 0);
    std::map<ComponentId, bool> placed;
    for (const VirtualComponent* c : greedy_component_order(req, max_cap)) {
        slots.push_back(Slot{Slot::kPlace, c, 0});
        placed[c->id] = true;
        for (size_t f = 0; f < req.links.size(); ++f) {
            if (routed[f]) continue;
            if (placed.count(req.links[f].source) && placed.count(req.links[f].target)) {
                slots.push_back(Slot{Slot::kRoute, nullptr, f});
                routed[f] = 1;
            }
        }
    }
    return slots;
}

struct Search {
    const SubstrateNetwork& net;
    const PathCatalog& catalog;
    double alpha;
    const std::vector<BatchRequest>& batch;
    std::vector<size_t> order;                  // batch indices, best reward first
    std::vector<std::vector<Slot>> slots;       // per order position
    std::vector<std::int64_t> suffix_ub;        // optimistic objective of positions i..end
    std::vector<ResourceVector> node_res;
    std::vector<std::int64_t> edge_res;
    std::vector<Allocation> current;            // per order position, valid when building
    std::vector<char> accepted_flag;
    std::int64_t best_objective = 0;
    std::map<RequestId, Allocation> best_accepted;
    std::int64_t expansions = 0;
    std::int64_t budget = 0;
    bool aborted = false;

    Search(const SubstrateNetwork& n, const PathCatalog& c, double a,
           const std::vector<BatchRequest>& b)
        : net(n), catalog(c), alpha(a), batch(b) {}

    bool spend() {
        if (aborted) return false;
        if (++expansions > budget) {
            aborted = true;
            return false;
        }
        return true;
    }

    void dfs_request(size_t pos, std::int64_t committed) {
        if (aborted) return;
        if (pos == order.size()) {
            if (committed > best_objective) {
                best_objective = committed;
                best_accepted.clear();
                for (size_t i = 0; i < order.size(); ++i)
                    if (accepted_flag[i]) best_accepted.emplace(current[i].request_id, current[i]);
            }
            return;
        }
        if (!spend()) return;
        if (committed + suffix_ub[pos] <= best_objective) return;

        const VirtualRequest& req = *batch[order[pos]].request;
        // Accept branch first: good incumbents appear early.
        current[pos] = Allocation{};
        current[pos].request_id = req.id;
        current[pos].path_assignment.assign(req.links.size(), AssignedPath{});
        accepted_flag[pos] = 1;
        dfs_slot(pos, 0, committed, batch[order[pos]].reward_fixed);
        accepted_flag[pos] = 0;
        // Reject branch.
        dfs_request(pos + 1, committed);
    }

    void dfs_slot(size_t pos, size_t slot_idx, std::int64_t committed, std::int64_t partial) {
        if (aborted) return;
        const std::int64_t tail = pos + 1 < order.size() ? suffix_ub[pos + 1] : 0;
        if (committed + partial + tail <= best_objective) return;
        const VirtualRequest& req = *batch[order[pos]].request;
        if (slot_idx == slots[pos].size()) {
            dfs_request(pos + 1, committed + partial);
            return;
        }
        if (!spend()) return;
        const Slot& slot = slots[pos][slot_idx];
        if (slot.kind == Slot::kPlace) {
            const VirtualComponent& comp = *slot.component;
            // Candidate order: smallest estimated added path penalty first, so
            // colocated (zero-penalty) placements are tried before spread ones.
            struct Cand {
                NodeId n;
                std::int64_t est_penalty;
            };
            std::vector<Cand> cands;
            for (NodeId n = 0; n < net.node_count(); ++n) {
                if (!feasible_on_node(node_res[static_cast<size_t>(n)], comp.demand)) continue;
                std::int64_t est = 0;
                bool viable = true;
                for (size_t f = 0; f < req.links.size(); ++f) {
                    const auto& link = req.links[f];
                    ComponentId other;
                    if (link.source == comp.id)
                        other = link.target;
                    else if (link.target == comp.id)
                        other = link.source;
                    else
                        continue;
                    auto it = current[pos].node_assignment.find(other);
                    if (it == current[pos].node_assignment.end()) continue;
                    // Cheapest latency-feasible path between the two nodes.
                    const NodeId a = link.source == comp.id ? n : it->second;
                    const NodeId b = link.source == comp.id ? it->second : n;
                    const auto& entry = catalog.paths(a, b);
                    int best_lat = -1;
                    for (const auto& p : entry) {
                        if (p.total_latency_ms <= link.latency_bound_ms) {
                            best_lat = p.total_latency_ms;
                            break;
                        }
                    }
                    if (best_lat < 0) {
                        viable = false;
                        break;
                    }
                    est += penalty_fixed_point(alpha, static_cast<int>(req.links.size()), best_lat,
                                               link.latency_bound_ms);
                }
                if (viable) cands.push_back(Cand{n, est});
            }
            std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.est_penalty != b.est_penalty) return a.est_penalty < b.est_penalty;
                return a.n < b.n;
            });
            for (const Cand& cand : cands) {
                if (aborted) return;
                node_res[static_cast<size_t>(cand.n)] -= comp.demand;
                current[pos].node_assignment[comp.id] = cand.n;
                dfs_slot(pos, slot_idx + 1, committed, partial);
                current[pos].node_assignment.erase(comp.id);
                node_res[static_cast<size_t>(cand.n)] += comp.demand;
            }
        } else {
            const auto& link = req.links[slot.link_index];
            const NodeId a = current[pos].node_assignment.at(link.source);
            const NodeId b = current[pos].node_assignment.at(link.target);
            const auto& entry = catalog.paths(a, b);
            for (const auto& p : entry) {
                if (aborted) return;
                if (p.total_latency_ms > link.latency_bound_ms) break;
                bool fits = true;
                for (size_t h = 0; h < p.edges.size(); ++h)
                    if (edge_res[path_edge_slot(net, p, h)] < link.bandwidth_dmbps) {
                        fits = false;
                        break;
                    }
                if (!fits) continue;
                for (size_t h = 0; h < p.edges.size(); ++h)
                    edge_res[path_edge_slot(net, p, h)] -= link.bandwidth_dmbps;
                current[pos].path_assignment[slot.link_index] = p.to_assigned();
                const std::int64_t pen =
                    penalty_fixed_point(alpha, static_cast<int>(req.links.size()),
                                        p.total_latency_ms, link.latency_bound_ms);
                dfs_slot(pos, slot_idx + 1, committed, partial - pen);
                for (size_t h = 0; h < p.edges.size(); ++h)
                    edge_res[path_edge_slot(net, p, h)] += link.bandwidth_dmbps;
            }
        }
    }

    // Exhaustively proves a request impossible alone on the starting residual
    // (within a small budget); used to zero its bound contribution.
    bool singleton_impossible(size_t batch_index, std::int64_t probe_budget) {
        const VirtualRequest& req = *batch[batch_index].request;
        auto plan = request_slots(req, net.max_capacity());
        Allocation scratch;
        scratch.request_id = req.id;
        scratch.path_assignment.assign(req.links.size(), AssignedPath{});
        std::int64_t spent = 0;
        bool found = false, overflow = false;
        std::function<void(size_t)> go = [&](size_t si) {
            if (found || overflow) return;
            if (++spent > probe_budget) {
                overflow = true;
                return;
            }
            if (si == plan.size()) {
                found = true;
                return;
            }
            const Slot& slot = plan[si];
            if (slot.kind == Slot::kPlace) {
                const VirtualComponent& comp = *slot.component;
                for (NodeId n = 0; n < net.node_count() && !found && !overflow; ++n) {
                    if (!feasible_on_node(node_res[static_cast<size_t>(n)], comp.demand)) continue;
                    node_res[static_cast<size_t>(n)] -= comp.demand;
                    scratch.node_assignment[comp.id] = n;
                    go(si + 1);
                    scratch.node_assignment.erase(comp.id);
                    node_res[static_cast<size_t>(n)] += comp.demand;
                }
            } else {
                const auto& link = req.links[slot.link_index];
                const NodeId a = scratch.node_assignment.at(link.source);
                const NodeId b = scratch.node_assignment.at(link.target);
                for (const auto& p : catalog.paths(a, b)) {
                    if (found || overflow) break;
                    if (p.total_latency_ms > link.latency_bound_ms) break;
                    bool fits = true;
                    for (size_t h = 0; h < p.edges.size(); ++h)
                        if (edge_res[path_edge_slot(net, p, h)] < link.bandwidth_dmbps) {
                            fits = false;
                            break;
                        }
                    if (!fits) continue;
                    for (size_t h = 0; h < p.edges.size(); ++h)
                        edge_res[path_edge_slot(net, p, h)] -= link.bandwidth_dmbps;
                    go(si + 1);
                    for (size_t h = 0; h < p.edges.size(); ++h)
                        edge_res[path_edge_slot(net, p, h)] += link.bandwidth_dmbps;
                }
            }
        };
        go(0);
        return !found && !overflow;
    }
};

}  // namespace detail

inline SolveOutcome solve_batch(const SubstrateNetwork& net, const PathCatalog& catalog,
                                const ResidualState& residual,
                                const std::vector<BatchRequest>& batch, double alpha,
                                const IlpOptions& options = {}) {
    SolveOutcome outcome;
    if (batch.empty()) return outcome;

    detail::Search search(net, catalog, alpha, batch);
    search.budget = options.expansion_budget();
    search.node_res = residual.node_residual;
    search.edge_res = residual.edge_residual_dmbps;

    search.order.resize(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) search.order[i] = i;
    std::stable_sort(search.order.begin(), search.order.end(), [&](size_t a, size_t b) {
        if (batch[a].reward_fixed != batch[b].reward_fixed)
            return batch[a].reward_fixed > batch[b].reward_fixed;
        if (batch[a].request->arrival_ms != batch[b].request->arrival_ms)
            return batch[a].request->arrival_ms < batch[b].request->arrival_ms;
        return batch[a].request->id < batch[b].request->id;
    });

    const ResourceVector max_cap = net.max_capacity();
    search.slots.resize(batch.size());
    search.suffix_ub.assign(batch.size() + 1, 0);
    search.current.resize(batch.size());
    search.accepted_flag.assign(batch.size(), 0);
    std::vector<std::int64_t> ub(batch.size(), 0);
    for (size_t i = 0; i < batch.size(); ++i) {
        const size_t bi = search.order[i];
        search.slots[i] = detail::request_slots(*batch[bi].request, max_cap);
        ub[i] = batch[bi].reward_fixed;
        if (search.singleton_impossible(bi, 20000)) ub[i] = 0;
    }
    for (size_t i = batch.size(); i-- > 0;) search.suffix_ub[i] = search.suffix_ub[i + 1] + ub[i];

    // Warm start from the greedy heuristics: any feasible solution tightens
    // the bound from the first expansion on.
    BatchContext ctx{&net, &catalog, &residual, 0, alpha};
    for (auto ranking : {GreedyOptions::Ranking::kProximity, GreedyOptions::Ranking::kAvailability}) {
        GreedyAllocator g(GreedyOptions{ranking});
        BatchOutcome warm = g.allocate(ctx, batch);
        if (warm.objective_fixed > search.best_objective) {
            search.best_objective = warm.objective_fixed;
            search.best_accepted = std::move(warm.accepted);
        }
    }

    search.dfs_request(0, 0);

    outcome.status = search.aborted ? SolveStatus::kTimeLimit : SolveStatus::kOptimal;
    outcome.objective_fixed = search.best_objective;
    outcome.accepted = std::move(search.best_accepted);
    outcome.nodes_explored = search.expansions;
    return outcome;
}

// ---------------------------------------------------------------------------
// Exhaustive reference solver (oracle for tests). Enumerates every subset of
// requests and every catalog-consistent placement; throws InstanceTooLarge
// when the visit count exceeds the cap.

inline SolveOutcome brute_force_solve(const SubstrateNetwork& net, const PathCatalog& catalog,
                                      const ResidualState& residual,
                                      const std::vector<BatchRequest>& batch, double alpha,
                                      std::int64_t visit_cap = 20000000) {
    SolveOutcome out;
    std::vector<ResourceVector> node_res = residual.node_residual;
    std::vector<std::int64_t> edge_res = residual.edge_residual_dmbps;
    std::vector<std::optional<Allocation>> chosen(batch.size());
    std::int64_t visits = 0;

    // All complete allocations of one request, feasibility-checked on the way.
    std::function<void(size_t)> per_request;
    std::function<void(size_t, size_t, Allocation&, std::int64_t)> enumerate_placements;
    std::function<void(size_t, size_t, Allocation&, std::int64_t)> enumerate_paths;

    auto bump = [&]() {
        if (++visits > visit_cap) throw InstanceTooLarge("brute force visit cap exceeded");
    };

    per_request = [&](size_t s) {
        bump();
        if (s == batch.size()) {
            std::int64_t obj = 0;
            for (size_t i = 0; i < batch.size(); ++i)
                if (chosen[i])
                    obj += batch[i].reward_fixed -
                           allocation_penalty_fixed(*batch[i].request, *chosen[i], alpha);
            if (obj > out.objective_fixed) {
                out.objective_fixed = obj;
                out.accepted.clear();
                for (size_t i = 0; i < batch.size(); ++i)
                    if (chosen[i]) out.accepted.emplace(batch[i].request->id, *chosen[i]);
            }
            return;
        }
        // Reject.
        chosen[s] = std::nullopt;
        per_request(s + 1);
        // Accept with every possible embedding.
        Allocation alloc;
        alloc.request_id = batch[s].request->id;
        alloc.path_assignment.assign(batch[s].request->links.size(), AssignedPath{});
        enumerate_placements(s, 0, alloc, 0);
        chosen[s] = std::nullopt;
    };

    enumerate_placements = [&](size_t s, size_t v, Allocation& alloc, std::int64_t) {
        bump();
        const VirtualRequest& req = *batch[s].request;
        if (v == req.components.size()) {
            enumerate_paths(s, 0, alloc, 0);
            return;
        }
        const VirtualComponent& comp = req.components[v];
        for (NodeId n = 0; n < net.node_count(); ++n) {
            if (!feasible_on_node(node_res[static_cast<size_t>(n)], comp.demand)) continue;
            node_res[static_cast<size_t>(n)] -= comp.demand;
            alloc.node_assignment[comp.id] = n;
            enumerate_placements(s, v + 1, alloc, 0);
            alloc.node_assignment.erase(comp.id);
            node_res[static_cast<size_t>(n)] += comp.demand;
        }
    };

    enumerate_paths = [&](size_t s, size_t f, Allocation& alloc, std::int64_t) {
        bump();
        const VirtualRequest& req = *batch[s].request;
        if (f == req.links.size()) {
            chosen[s] = alloc;
            per_request(s + 1);
            chosen[s] = std::nullopt;
            return;
        }
        const auto& link = req.links[f];
        const NodeId a = alloc.node_assignment.at(link.source);
        const NodeId b = alloc.node_assignment.at(link.target);
        for (const auto& p : catalog.paths(a, b)) {
            if (p.total_latency_ms > link.latency_bound_ms) break;
            bool fits = true;
            for (size_t h = 0; h < p.edges.size(); ++h)
                if (edge_res[path_edge_slot(net, p, h)] < link.bandwidth_dmbps) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            for (size_t h = 0; h < p.edges.size(); ++h)
                edge_res[path_edge_slot(net, p, h)] -= link.bandwidth_dmbps;
            alloc.path_assignment[f] = p.to_assigned();
            enumerate_paths(s, f + 1, alloc, 0);
            for (size_t h = 0; h < p.edges.size(); ++h)
                edge_res[path_edge_slot(net, p, h)] += link.bandwidth_dmbps;
        }
    };

    per_request(0);
    out.status = SolveStatus::kOptimal;
    out.nodes_explored = visits;
    return out;
}

class IlpAllocator : public Allocator {
  public:
    explicit IlpAllocator(IlpOptions opts = {}) : opts_(opts) {}

    std::string name() const override { return "ilp"; }

    BatchOutcome allocate(const BatchContext& ctx, const std::vector<BatchRequest>& batch) override {
        SolveOutcome solved =
            solve_batch(*ctx.network, *ctx.catalog, *ctx.residual, batch, ctx.alpha, opts_);
        BatchOutcome out;
        out.status = to_string(solved.status);
        out.objective_fixed = solved.objective_fixed;
        out.accepted = std::move(solved.accepted);
        out.work = solved.nodes_explored;
        return out;
    }

  private:
    IlpOptions opts_;
};

}  // namespace meshvne
