#pragma once

// Discrete-event simulation of the batch deployment protocol: Poisson
// arrivals queue up, every batch interval the allocator decides over all
// pending requests, accepted apps hold resources for their lifetime, failed
// requests back off and retry with exponentially growing reward until the
// retry budget runs out. The full run is captured as a replayable trace.

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshvne/allocator.hpp"
#include "meshvne/core.hpp"
#include "meshvne/greedy.hpp"
#include "meshvne/ilp.hpp"
#include "meshvne/nsga2.hpp"
#include "meshvne/paths.hpp"
#include "meshvne/rng.hpp"
#include "meshvne/scenario.hpp"
#include "meshvne/validate.hpp"

namespace meshvne {

struct AuditFailed : std::runtime_error {
    explicit AuditFailed(const std::string& what) : std::runtime_error(what) {}
};

struct SimulationConfig {
    double arrival_rate_per_hour = 120.0;
    double departure_rate_per_hour = 45.0;
    // Mean app lifetime in minutes. 0 derives the literal 60/mu value; the
    // nonzero default keeps the 20-device substrate saturated in steady state
    // (see README on workload calibration).
    double lifetime_mean_min = 45.0;
    double duration_h = 4.0;
    double retry_timeout_min = 16.0;
    int max_retries = 15;
    double batch_interval_min = 1.0;
    double alpha = 1024.0;
    double reward_tau_min = 0.0;  // 0 = same as retry timeout
    double solver_time_limit_s = 1.0;
    TimeMs deploy_delay_ms = 0;
    int path_k = 4;
    int nsga_population = 50;
    int nsga_generations = 100;
    double nsga_crossover_rate = 0.8;
    double nsga_mutation_rate = 0.1;
    std::string greedy_ranking = "proximity";  // or "availability"
    // Fraction of each node attribute greedy allows itself to book.
    double greedy_capacity_fraction = 0.65;

    void validate() const {
        if (arrival_rate_per_hour <= 0.0) throw ConfigInvalid("arrival rate must be positive");
        if (departure_rate_per_hour <= 0.0) throw ConfigInvalid("departure rate must be positive");
        if (lifetime_mean_min < 0.0) throw ConfigInvalid("lifetime mean must be >= 0");
        if (duration_h <= 0.0) throw ConfigInvalid("duration must be positive");
        if (retry_timeout_min <= 0.0) throw ConfigInvalid("retry timeout must be positive");
        if (max_retries < 0) throw ConfigInvalid("max retries must be >= 0");
        if (batch_interval_min <= 0.0) throw ConfigInvalid("batch interval must be positive");
        if (alpha < 0.0) throw ConfigInvalid("alpha must be >= 0");
        if (reward_tau_min < 0.0) throw ConfigInvalid("reward tau must be >= 0");
        if (solver_time_limit_s <= 0.0) throw ConfigInvalid("solver time limit must be positive");
        if (deploy_delay_ms < 0) throw ConfigInvalid("deploy delay must be >= 0");
        if (path_k < 1) throw ConfigInvalid("path catalog k must be >= 1");
        if (nsga_population < 2) throw ConfigInvalid("population must be >= 2");
        if (nsga_generations < 1) throw ConfigInvalid("generations must be >= 1");
        if (nsga_crossover_rate < 0.0 || nsga_crossover_rate > 1.0 || nsga_mutation_rate < 0.0 ||
            nsga_mutation_rate > 1.0)
            throw ConfigInvalid("genetic rates must be in [0, 1]");
        if (greedy_capacity_fraction <= 0.0 || greedy_capacity_fraction > 1.0)
            throw ConfigInvalid("greedy capacity fraction must be in (0, 1]");
        if (greedy_ranking != "availability" && greedy_ranking != "proximity")
            throw ConfigInvalid("greedy ranking must be availability or proximity");
    }

    double lifetime_mean_min_effective() const {
        // Zero means "use 1/mu", the literal per-app exponential-rate reading
        // of the departure rate.
        return lifetime_mean_min > 0.0 ? lifetime_mean_min : 60.0 / departure_rate_per_hour;
    }
    double reward_tau_min_effective() const {
        return reward_tau_min > 0.0 ? reward_tau_min : retry_timeout_min;
    }
    double reward_exponent_cap() const {
        return static_cast<double>(max_retries) * retry_timeout_min / reward_tau_min_effective();
    }
    TimeMs duration_ms() const { return static_cast<TimeMs>(std::llround(duration_h * 3600e3)); }
    TimeMs batch_interval_ms() const {
        return static_cast<TimeMs>(std::llround(batch_interval_min * 60e3));
    }
    TimeMs retry_timeout_ms() const {
        return static_cast<TimeMs>(std::llround(retry_timeout_min * 60e3));
    }
    TimeMs reward_tau_ms() const {
        return static_cast<TimeMs>(std::llround(reward_tau_min_effective() * 60e3));
    }

    WorkloadSpec workload_spec() const {
        WorkloadSpec w;
        w.arrival_rate_per_hour = arrival_rate_per_hour;
        w.lifetime_mean_min = lifetime_mean_min_effective();
        w.duration_h = duration_h;
        return w;
    }
};

inline std::unique_ptr<Allocator> make_allocator(const std::string& name,
                                                 const SimulationConfig& cfg, std::uint64_t seed) {
    if (name == "greedy") {
        GreedyOptions opts;
        opts.ranking = cfg.greedy_ranking == "proximity" ? GreedyOptions::Ranking::kProximity
                                                         : GreedyOptions::Ranking::kAvailability;
        opts.capacity_fraction = cfg.greedy_capacity_fraction;
        return std::make_unique<GreedyAllocator>(opts);
    }
    if (name == "ilp") {
        IlpOptions opts;
        opts.time_limit_s = cfg.solver_time_limit_s;
        return std::make_unique<IlpAllocator>(opts);
    }
    if (name == "nsga2") {
        Nsga2Options opts;
        opts.population = cfg.nsga_population;
        opts.generations = cfg.nsga_generations;
        opts.crossover_rate = cfg.nsga_crossover_rate;
        opts.mutation_rate = cfg.nsga_mutation_rate;
        return std::make_unique<Nsga2Allocator>(opts, Rng::stream(seed, "allocator"));
    }
    throw ConfigInvalid("unknown allocator: " + name);
}

struct TraceEvent {
    TimeMs t = 0;
    std::string type;  // arrival, deploy, reject, departure, retry_release, batch_tick
    RequestId request_id = -1;
    int retry_count = 0;
    bool final_reject = false;
    Allocation allocation;  // deploy only
    std::string batch_status;
    int batch_pending = 0;
    int batch_accepted = 0;
    std::int64_t batch_objective_fixed = 0;
    std::int64_t batch_work = 0;
};

struct SimulationTrace {
    std::string allocator;
    std::uint64_t seed = 0;
    TimeMs duration_ms = 0;
    TimeMs batch_interval_ms = 0;
    std::vector<TraceEvent> events;
    std::map<RequestId, std::string> final_status;  // deployed | rejected | pending
};

namespace detail {

enum class EventKind : int { kDeparture = 0, kArrival = 1, kRetryRelease = 2, kBatchTick = 3 };

struct SimEvent {
    TimeMs t = 0;
    EventKind kind = EventKind::kBatchTick;
    std::int64_t seq = 0;
    size_t request_index = 0;
    int retry_count = 0;
};

struct SimEventAfter {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        return a.seq > b.seq;
    }
};

}  // namespace detail

// Runs one allocator over one scenario. The audit flag re-validates every
// accepted allocation and the whole residual state after each event; any
// violation raises AuditFailed.
inline SimulationTrace run_simulation(const Scenario& scenario, const SimulationConfig& config,
                                      Allocator& allocator, bool audit = true) {
    config.validate();
    if (!scenario.network.connected()) throw ConfigInvalid("substrate network is not connected");

    const SubstrateNetwork& net = scenario.network;
    PathCatalog catalog = build_catalog(net, config.path_k);
    ResidualState residual = ResidualState::full_of(net);

    std::vector<VirtualRequest> requests = scenario.workload;  // mutable retry counters
    std::map<RequestId, size_t> index_of;
    for (size_t i = 0; i < requests.size(); ++i) index_of[requests[i].id] = i;

    SimulationTrace trace;
    trace.allocator = allocator.name();
    trace.seed = scenario.seed;
    trace.duration_ms = config.duration_ms();
    trace.batch_interval_ms = config.batch_interval_ms();

    std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>, detail::SimEventAfter> heap;
    std::int64_t seq = 0;
    for (size_t i = 0; i < requests.size(); ++i)
        heap.push({requests[i].arrival_ms, detail::EventKind::kArrival, seq++, i, 0});
    for (TimeMs t = 0; t <= trace.duration_ms; t += trace.batch_interval_ms)
        heap.push({t, detail::EventKind::kBatchTick, seq++, 0, 0});

    std::vector<size_t> pending;
    enum class Fate { kUnresolved, kDeployed, kRejected };
    std::vector<Fate> fate(requests.size(), Fate::kUnresolved);

    auto run_audit = [&]() {
        if (!audit) return;
        std::vector<std::pair<const VirtualRequest*, const Allocation*>> deployed;
        for (const auto& [id, rec] : residual.ledger)
            deployed.emplace_back(&requests[index_of.at(id)], &rec.allocation);
        auto violations = validate_state(net, deployed, residual);
        if (!violations.empty()) {
            std::string msg = "state audit failed:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw AuditFailed(msg);
        }
    };

    while (!heap.empty()) {
        const detail::SimEvent ev = heap.top();
        heap.pop();
        if (ev.t > trace.duration_ms) continue;

        switch (ev.kind) {
            case detail::EventKind::kDeparture: {
                release_allocation(residual, requests[ev.request_index].id);
                TraceEvent te;
                te.t = ev.t;
                te.type = "departure";
                te.request_id = requests[ev.request_index].id;
                trace.events.push_back(std::move(te));
                break;
            }
            case detail::EventKind::kArrival: {
                pending.push_back(ev.request_index);
                TraceEvent te;
                te.t = ev.t;
                te.type = "arrival";
                te.request_id = requests[ev.request_index].id;
                trace.events.push_back(std::move(te));
                break;
            }
            case detail::EventKind::kRetryRelease: {
                requests[ev.request_index].retry_count = ev.retry_count;
                pending.push_back(ev.request_index);
                TraceEvent te;
                te.t = ev.t;
                te.type = "retry_release";
                te.request_id = requests[ev.request_index].id;
                te.retry_count = ev.retry_count;
                trace.events.push_back(std::move(te));
                break;
            }
            case detail::EventKind::kBatchTick: {
                TraceEvent tick;
                tick.t = ev.t;
                tick.type = "batch_tick";
                tick.batch_pending = static_cast<int>(pending.size());
                if (pending.empty()) {
                    tick.batch_status = "idle";
                    trace.events.push_back(std::move(tick));
                    break;
                }
                std::vector<const VirtualRequest*> ptrs;
                ptrs.reserve(pending.size());
                for (size_t i : pending) ptrs.push_back(&requests[i]);
                auto batch = make_batch_requests(ptrs, ev.t, config.reward_tau_ms(),
                                                 config.reward_exponent_cap());
                BatchContext ctx{&net, &catalog, &residual, ev.t, config.alpha};
                BatchOutcome outcome = allocator.allocate(ctx, batch);

                tick.batch_status = outcome.status;
                tick.batch_accepted = static_cast<int>(outcome.accepted.size());
                tick.batch_objective_fixed = outcome.objective_fixed;
                tick.batch_work = outcome.work;
                trace.events.push_back(std::move(tick));

                for (size_t i : pending) {
                    VirtualRequest& req = requests[i];
                    auto it = outcome.accepted.find(req.id);
                    if (it != outcome.accepted.end()) {
                        if (audit) {
                            auto errs = validate_allocation(net, req, it->second);
                            if (!errs.empty()) {
                                std::string msg = "allocation audit failed for request " +
                                                  std::to_string(req.id) + ":";
                                for (const auto& e : errs) msg += "\n  " + e;
                                throw AuditFailed(msg);
                            }
                        }
                        try {
                            apply_allocation(residual, req, it->second);
                        } catch (const InfeasibleAllocation& e) {
                            throw AuditFailed("allocator returned a jointly infeasible batch: " +
                                              std::string(e.what()));
                        }
                        fate[i] = Fate::kDeployed;
                        const TimeMs depart_t =
                            ev.t + config.deploy_delay_ms + req.lifetime_ms;
                        heap.push({depart_t, detail::EventKind::kDeparture, seq++, i, 0});
                        TraceEvent te;
                        te.t = ev.t;
                        te.type = "deploy";
                        te.request_id = req.id;
                        te.retry_count = req.retry_count;
                        te.allocation = it->second;
                        trace.events.push_back(std::move(te));
                    } else {
                        TraceEvent te;
                        te.t = ev.t;
                        te.type = "reject";
                        te.request_id = req.id;
                        te.retry_count = req.retry_count;
                        if (req.retry_count >= config.max_retries) {
                            te.final_reject = true;
                            fate[i] = Fate::kRejected;
                        } else {
                            const TimeMs release_t = ev.t + config.retry_timeout_ms();
                            if (release_t <= trace.duration_ms)
                                heap.push({release_t, detail::EventKind::kRetryRelease, seq++, i,
                                           req.retry_count + 1});
                        }
                        trace.events.push_back(std::move(te));
                    }
                }
                pending.clear();
                break;
            }
        }
        run_audit();
    }

    for (size_t i = 0; i < requests.size(); ++i) {
        const char* s = fate[i] == Fate::kDeployed    ? "deployed"
                        : fate[i] == Fate::kRejected ? "rejected"
                                                     : "pending";
        trace.final_status[requests[i].id] = s;
    }
    return trace;
}

// ---------------------------------------------------------------------------
// JSON-lines trace serialization

namespace detail {

inline nlohmann::ordered_json allocation_to_json(const Allocation& a) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::object();
    for (const auto& [cid, nid] : a.node_assignment) nodes[std::to_string(cid)] = nid;
    nlohmann::ordered_json paths = nlohmann::ordered_json::array();
    for (const auto& p : a.path_assignment)
        paths.push_back(nlohmann::ordered_json{{"origin", p.origin},
                                               {"destination", p.destination},
                                               {"edges", p.edges},
                                               {"latency_ms", p.total_latency_ms}});
    return nlohmann::ordered_json{{"nodes", nodes}, {"paths", paths}};
}

inline Allocation allocation_from_json(RequestId id, const nlohmann::ordered_json& j) {
    Allocation a;
    a.request_id = id;
    for (const auto& [k, v] : j.at("nodes").items())
        a.node_assignment[std::stoi(k)] = v.get<NodeId>();
    for (const auto& pj : j.at("paths")) {
        AssignedPath p;
        p.origin = pj.at("origin").get<NodeId>();
        p.destination = pj.at("destination").get<NodeId>();
        p.edges = pj.at("edges").get<std::vector<EdgeIndex>>();
        p.total_latency_ms = pj.at("latency_ms").get<int>();
        a.path_assignment.push_back(std::move(p));
    }
    return a;
}

}  // namespace detail

inline constexpr int kTraceSchemaVersion = 1;

inline std::string trace_to_jsonl(const SimulationTrace& trace) {
    using nlohmann::ordered_json;
    std::ostringstream out;
    out << ordered_json{{"type", "header"},
                        {"schema_version", kTraceSchemaVersion},
                        {"allocator", trace.allocator},
                        {"seed", trace.seed},
                        {"duration_ms", trace.duration_ms},
                        {"batch_interval_ms", trace.batch_interval_ms}}
               .dump()
        << '\n';
    for (const auto& e : trace.events) {
        ordered_json j{{"type", e.type}, {"t", e.t}};
        if (e.type == "batch_tick") {
            j["status"] = e.batch_status;
            j["pending"] = e.batch_pending;
            j["accepted"] = e.batch_accepted;
            j["objective_fixed"] = e.batch_objective_fixed;
            j["work"] = e.batch_work;
        } else {
            j["request_id"] = e.request_id;
            if (e.type == "deploy") {
                j["retry_count"] = e.retry_count;
                j["allocation"] = detail::allocation_to_json(e.allocation);
            } else if (e.type == "reject") {
                j["retry_count"] = e.retry_count;
                j["final"] = e.final_reject;
            } else if (e.type == "retry_release") {
                j["retry_count"] = e.retry_count;
            }
        }
        out << j.dump() << '\n';
    }
    ordered_json fin{{"type", "final"}, {"statuses", nlohmann::ordered_json::object()}};
    for (const auto& [id, s] : trace.final_status) fin["statuses"][std::to_string(id)] = s;
    out << fin.dump() << '\n';
    return out.str();
}

inline SimulationTrace trace_from_jsonl(const std::string& text) {
    using nlohmann::ordered_json;
    SimulationTrace trace;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            if (j.at("schema_version").get<int>() != kTraceSchemaVersion)
                throw ConfigInvalid("unsupported trace schema version");
            trace.allocator = j.at("allocator").get<std::string>();
            trace.seed = j.at("seed").get<std::uint64_t>();
            trace.duration_ms = j.at("duration_ms").get<TimeMs>();
            trace.batch_interval_ms = j.at("batch_interval_ms").get<TimeMs>();
        } else if (type == "final") {
            for (const auto& [k, v] : j.at("statuses").items())
                trace.final_status[std::stoi(k)] = v.get<std::string>();
        } else {
            TraceEvent e;
            e.type = type;
            e.t = j.at("t").get<TimeMs>();
            if (type == "batch_tick") {
                e.batch_status = j.at("status").get<std::string>();
                e.batch_pending = j.at("pending").get<int>();
                e.batch_accepted = j.at("accepted").get<int>();
                e.batch_objective_fixed = j.at("objective_fixed").get<std::int64_t>();
                e.batch_work = j.at("work").get<std::int64_t>();
            } else {
                e.request_id = j.at("request_id").get<RequestId>();
                if (type == "deploy") {
                    e.retry_count = j.at("retry_count").get<int>();
                    e.allocation = detail::allocation_from_json(e.request_id, j.at("allocation"));
                } else if (type == "reject") {
                    e.retry_count = j.at("retry_count").get<int>();
                    e.final_reject = j.at("final").get<bool>();
                } else if (type == "retry_release") {
                    e.retry_count = j.at("retry_count").get<int>();
                }
            }
            trace.events.push_back(std::move(e));
        }
    }
    return trace;
}

inline void save_trace(const SimulationTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigInvalid("cannot open trace file for writing: " + path);
    out << trace_to_jsonl(trace);
}

inline SimulationTrace load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot open trace file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return trace_from_jsonl(buf.str());
}

}  // namespace meshvne
