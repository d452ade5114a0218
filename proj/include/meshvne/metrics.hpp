#pragma once

// Metric computation by trace replay. A run's trace is replayed into
// instantaneous samples (at every event plus a 1-second heartbeat), reduced to
// a per-minute grid, smoothed with a centered 5-minute moving average, and
// aggregated across seeds as mean with linear-interpolated 10/90 percentile
// bands. Steady-state figures drop the first 60 minutes.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshvne/core.hpp"
#include "meshvne/scenario.hpp"
#include "meshvne/sim.hpp"

namespace meshvne {

inline constexpr int kMetricCount = 5;
inline constexpr const char* kMetricKeys[kMetricCount] = {
    "acceptance_pct", "latency_ms", "bandwidth_pct", "max_resource_pct", "concurrent_apps"};
inline constexpr const char* kMetricUnits[kMetricCount] = {"%", "ms", "%", "%", "count"};

inline constexpr int kSteadyStartMin = 60;
inline constexpr int kSmoothHalfWindowMin = 2;  // centered 5-sample window on the minute grid

struct MetricSeries {
    std::string name;
    std::string units;
    std::vector<TimeMs> t_ms;  // strictly increasing
    std::vector<double> values;
};

struct ReplaySample {
    TimeMs t = 0;
    std::array<double, kMetricCount> v{};
};

// Replays a trace against its scenario and samples every metric at each event
// boundary and every whole second.
inline std::vector<ReplaySample> replay_samples(const Scenario& scenario,
                                                const SimulationTrace& trace) {
    const SubstrateNetwork& net = scenario.network;
    std::map<RequestId, const VirtualRequest*> request_of;
    for (const auto& r : scenario.workload) request_of[r.id] = &r;

    std::vector<ResourceVector> node_used(net.nodes.size());
    std::vector<std::int64_t> edge_used(2 * net.edges.size(), 0);  // per directed slot
    std::map<RequestId, double> live_latency;  // per-app mean assigned latency
    std::map<RequestId, const Allocation*> live_alloc;
    std::int64_t deployed_cum = 0, denominator = 0;
    std::set<RequestId> decided;

    // Walks an assigned path and charges/credits each traversed direction.
    auto book_path = [&](const AssignedPath& p, std::int64_t delta) {
        NodeId at = p.origin;
        for (EdgeIndex e : p.edges) {
            const SubstrateEdge& edge = net.edges[static_cast<size_t>(e)];
            edge_used[directed_edge_slot(e, at == edge.b)] += delta;
            at = edge.other(at);
        }
    };

    auto apply_deploy = [&](const TraceEvent& e) {
        const VirtualRequest& req = *request_of.at(e.request_id);
        for (const auto& [cid, nid] : e.allocation.node_assignment)
            node_used[static_cast<size_t>(nid)] += req.component(cid)->demand;
        double lat = 0.0;
        for (size_t i = 0; i < req.links.size(); ++i) {
            const auto& p = e.allocation.path_assignment[i];
            book_path(p, req.links[i].bandwidth_dmbps);
            lat += static_cast<double>(p.total_latency_ms);
        }
        live_latency[e.request_id] =
            req.links.empty() ? 0.0 : lat / static_cast<double>(req.links.size());
        live_alloc[e.request_id] = &e.allocation;
        ++deployed_cum;
        if (decided.insert(e.request_id).second) ++denominator;
    };
    auto apply_departure = [&](const TraceEvent& e) {
        const VirtualRequest& req = *request_of.at(e.request_id);
        const Allocation& alloc = *live_alloc.at(e.request_id);
        for (const auto& [cid, nid] : alloc.node_assignment)
            node_used[static_cast<size_t>(nid)] -= req.component(cid)->demand;
        for (size_t i = 0; i < req.links.size(); ++i)
            book_path(alloc.path_assignment[i], -req.links[i].bandwidth_dmbps);
        live_alloc.erase(e.request_id);
        live_latency.erase(e.request_id);
    };

    auto sample_at = [&](TimeMs t) {
        ReplaySample s;
        s.t = t;
        s.v[0] = denominator == 0 ? 100.0
                                  : 100.0 * static_cast<double>(deployed_cum) /
                                        static_cast<double>(denominator);
        double lat = 0.0;
        for (const auto& [id, l] : live_latency) lat += l;
        s.v[1] = live_latency.empty() ? 0.0 : lat / static_cast<double>(live_latency.size());
        // Mean booked fraction over directed slots: each link direction has
        // the full rated capacity, so an undirected edge counts twice.
        double util = 0.0;
        int counted = 0;
        for (size_t e = 0; e < net.edges.size(); ++e) {
            if (net.edges[e].bandwidth_dmbps <= 0) continue;
            for (int rev = 0; rev < 2; ++rev) {
                util += static_cast<double>(edge_used[directed_edge_slot(
                            static_cast<EdgeIndex>(e), rev != 0)]) /
                        static_cast<double>(net.edges[e].bandwidth_dmbps);
                ++counted;
            }
        }
        s.v[2] = counted == 0 ? 0.0 : 100.0 * util / static_cast<double>(counted);
        // Most-loaded device: a device's utilization is its mean booked
        // fraction across the resources it provides; the max runs over devices.
        double max_use = 0.0;
        for (size_t n = 0; n < net.nodes.size(); ++n) {
            double used = 0.0;
            int provided = 0;
            for (int a = 0; a < kAttributeCount; ++a) {
                const std::int64_t cap = net.nodes[n].capacity.attribute(a);
                if (cap <= 0) continue;
                used += static_cast<double>(node_used[n].attribute(a)) / static_cast<double>(cap);
                ++provided;
            }
            if (provided > 0) max_use = std::max(max_use, used / static_cast<double>(provided));
        }
        s.v[3] = 100.0 * max_use;
        s.v[4] = static_cast<double>(live_latency.size());
        return s;
    };

    std::set<TimeMs> sample_times;
    for (TimeMs t = 0; t <= trace.duration_ms; t += 1000) sample_times.insert(t);
    for (const auto& e : trace.events) sample_times.insert(e.t);

    std::vector<ReplaySample> samples;
    samples.reserve(sample_times.size());
    size_t ei = 0;
    for (TimeMs st : sample_times) {
        while (ei < trace.events.size() && trace.events[ei].t <= st) {
            const TraceEvent& e = trace.events[ei];
            if (e.type == "deploy")
                apply_deploy(e);
            else if (e.type == "departure")
                apply_departure(e);
            else if (e.type == "reject") {
                if (decided.insert(e.request_id).second) ++denominator;
            }
            ++ei;
        }
        samples.push_back(sample_at(st));
    }
    return samples;
}

inline std::vector<MetricSeries> compute_raw_series(const Scenario& scenario,
                                                    const SimulationTrace& trace) {
    auto samples = replay_samples(scenario, trace);
    std::vector<MetricSeries> out(kMetricCount);
    for (int m = 0; m < kMetricCount; ++m) {
        out[static_cast<size_t>(m)].name = kMetricKeys[m];
        out[static_cast<size_t>(m)].units = kMetricUnits[m];
        for (const auto& s : samples) {
            out[static_cast<size_t>(m)].t_ms.push_back(s.t);
            out[static_cast<size_t>(m)].values.push_back(s.v[static_cast<size_t>(m)]);
        }
    }
    return out;
}

// Centered moving average with window truncation at the boundaries.
inline std::vector<double> moving_average(const std::vector<double>& v, int half_window) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half_window);
        const int hi = std::min(n - 1, i + half_window);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Linear interpolation between order statistics; q in [0, 1].
inline double percentile_linear(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

struct RunTotals {
    int arrived = 0;
    int deployed = 0;
    int rejected_final = 0;
    int pending_end = 0;
    int batches = 0;
    int time_limited_batches = 0;
    double mean_batch_size = 0.0;
    int max_batch_size = 0;
};

// Per-minute smoothed series for one run, plus steady-state means and totals.
struct RunSeries {
    std::vector<TimeMs> minute_ms;
    std::array<std::vector<double>, kMetricCount> series;  // smoothed
    std::array<double, kMetricCount> steady{};             // mean over [steady start, end]
    RunTotals totals;
};

inline RunSeries compute_run_series(const Scenario& scenario, const SimulationTrace& trace) {
    RunSeries rs;
    auto samples = replay_samples(scenario, trace);
    std::map<TimeMs, const ReplaySample*> by_time;
    for (const auto& s : samples) by_time[s.t] = &s;

    const int minutes = static_cast<int>(trace.duration_ms / 60000);
    std::array<std::vector<double>, kMetricCount> raw;
    for (int m = 0; m <= minutes; ++m) {
        const TimeMs t = static_cast<TimeMs>(m) * 60000;
        rs.minute_ms.push_back(t);
        const ReplaySample* s = by_time.at(t);  // heartbeat guarantees presence
        for (int k = 0; k < kMetricCount; ++k)
            raw[static_cast<size_t>(k)].push_back(s->v[static_cast<size_t>(k)]);
    }
    for (int k = 0; k < kMetricCount; ++k) {
        rs.series[static_cast<size_t>(k)] =
            moving_average(raw[static_cast<size_t>(k)], kSmoothHalfWindowMin);
        double sum = 0.0;
        int count = 0;
        for (int m = kSteadyStartMin; m <= minutes; ++m) {
            sum += rs.series[static_cast<size_t>(k)][static_cast<size_t>(m)];
            ++count;
        }
        rs.steady[static_cast<size_t>(k)] = count > 0 ? sum / count : 0.0;
    }

    for (const auto& e : trace.events) {
        if (e.type == "arrival") ++rs.totals.arrived;
        else if (e.type == "deploy") ++rs.totals.deployed;
        else if (e.type == "reject" && e.final_reject) ++rs.totals.rejected_final;
        else if (e.type == "batch_tick") {
            ++rs.totals.batches;
            if (e.batch_status == "time_limit") ++rs.totals.time_limited_batches;
            rs.totals.mean_batch_size += e.batch_pending;
            rs.totals.max_batch_size = std::max(rs.totals.max_batch_size, e.batch_pending);
        }
    }
    if (rs.totals.batches > 0) rs.totals.mean_batch_size /= rs.totals.batches;
    for (const auto& [id, status] : trace.final_status)
        if (status == "pending") ++rs.totals.pending_end;
    return rs;
}

struct BandSeries {
    std::vector<double> mean, p10, p90;
};

// Pointwise mean and 10/90 band across per-seed series (already smoothed).
inline BandSeries band_across_runs(const std::vector<const std::vector<double>*>& per_seed) {
    BandSeries out;
    if (per_seed.empty()) return out;
    const size_t n = per_seed.front()->size();
    out.mean.resize(n);
    out.p10.resize(n);
    out.p90.resize(n);
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> vals;
        vals.reserve(per_seed.size());
        double sum = 0.0;
        for (const auto* s : per_seed) {
            vals.push_back((*s)[i]);
            sum += (*s)[i];
        }
        out.mean[i] = sum / static_cast<double>(vals.size());
        out.p10[i] = percentile_linear(vals, 0.10);
        out.p90[i] = percentile_linear(vals, 0.90);
    }
    return out;
}

// Smooths each seed's raw series with a centered moving average, then bands.
inline BandSeries smooth_and_band(const std::vector<std::vector<double>>& raw_per_seed,
                                  int half_window) {
    std::vector<std::vector<double>> smoothed;
    smoothed.reserve(raw_per_seed.size());
    for (const auto& s : raw_per_seed) smoothed.push_back(moving_average(s, half_window));
    std::vector<const std::vector<double>*> ptrs;
    for (const auto& s : smoothed) ptrs.push_back(&s);
    return band_across_runs(ptrs);
}

inline void write_metric_csv(const std::string& path, const std::vector<TimeMs>& t_ms,
                             const BandSeries& band) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigInvalid("cannot open csv for writing: " + path);
    out << "time_ms,mean,p10,p90\n";
    for (size_t i = 0; i < t_ms.size(); ++i) {
        std::ostringstream row;
        row.precision(10);
        row << t_ms[i] << ',' << band.mean[i] << ',' << band.p10[i] << ',' << band.p90[i] << '\n';
        out << row.str();
    }
}

// ---------------------------------------------------------------------------
// Cross-allocator summary and the reference orderings

struct SteadyMeans {
    double acceptance_pct = 0.0;
    double latency_ms = 0.0;
    double bandwidth_pct = 0.0;
    double max_resource_pct = 0.0;
    double concurrent_apps = 0.0;
    bool time_limited = false;  // any solver batch hit its budget
};

struct AllocatorResults {
    std::vector<std::uint64_t> seeds;
    std::vector<RunSeries> runs;  // aligned with seeds
};

inline SteadyMeans steady_means_of(const AllocatorResults& res) {
    SteadyMeans sm;
    if (res.runs.empty()) return sm;
    for (const auto& r : res.runs) {
        sm.acceptance_pct += r.steady[0];
        sm.latency_ms += r.steady[1];
        sm.bandwidth_pct += r.steady[2];
        sm.max_resource_pct += r.steady[3];
        sm.concurrent_apps += r.steady[4];
        if (r.totals.time_limited_batches > 0) sm.time_limited = true;
    }
    const double n = static_cast<double>(res.runs.size());
    sm.acceptance_pct /= n;
    sm.latency_ms /= n;
    sm.bandwidth_pct /= n;
    sm.max_resource_pct /= n;
    sm.concurrent_apps /= n;
    return sm;
}

inline constexpr int kSummarySchemaVersion = 1;

inline nlohmann::ordered_json summary_to_json(
    const std::string& scenario_name, const std::map<std::string, AllocatorResults>& results) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["scenario"] = scenario_name;
    j["steady_start_min"] = kSteadyStartMin;
    ordered_json allocs = ordered_json::object();
    for (const auto& [name, res] : results) {
        SteadyMeans sm = steady_means_of(res);
        ordered_json a;
        a["seeds"] = res.seeds;
        a["steady"] = {{"acceptance_pct", sm.acceptance_pct},
                       {"latency_ms", sm.latency_ms},
                       {"bandwidth_pct", sm.bandwidth_pct},
                       {"max_resource_pct", sm.max_resource_pct},
                       {"concurrent_apps", sm.concurrent_apps}};
        a["time_limited"] = sm.time_limited;
        ordered_json per_seed = ordered_json::array();
        RunTotals agg;
        for (size_t i = 0; i < res.runs.size(); ++i) {
            const RunSeries& r = res.runs[i];
            per_seed.push_back(ordered_json{{"seed", res.seeds[i]},
                                            {"acceptance_pct", r.steady[0]},
                                            {"latency_ms", r.steady[1]},
                                            {"bandwidth_pct", r.steady[2]},
                                            {"max_resource_pct", r.steady[3]},
                                            {"concurrent_apps", r.steady[4]}});
            agg.arrived += r.totals.arrived;
            agg.deployed += r.totals.deployed;
            agg.rejected_final += r.totals.rejected_final;
            agg.pending_end += r.totals.pending_end;
            agg.batches += r.totals.batches;
            agg.time_limited_batches += r.totals.time_limited_batches;
            agg.mean_batch_size += r.totals.mean_batch_size;
            agg.max_batch_size = std::max(agg.max_batch_size, r.totals.max_batch_size);
        }
        if (!res.runs.empty()) agg.mean_batch_size /= static_cast<double>(res.runs.size());
        a["per_seed"] = per_seed;
        a["totals"] = {{"arrived", agg.arrived},
                       {"deployed", agg.deployed},
                       {"rejected_final", agg.rejected_final},
                       {"pending_end", agg.pending_end},
                       {"batches", agg.batches},
                       {"time_limited_batches", agg.time_limited_batches},
                       {"mean_batch_size", agg.mean_batch_size},
                       {"max_batch_size", agg.max_batch_size}};
        allocs[name] = std::move(a);
    }
    j["allocators"] = std::move(allocs);
    return j;
}

inline std::map<std::string, SteadyMeans> steady_means_from_summary(
    const nlohmann::ordered_json& j) {
    std::map<std::string, SteadyMeans> out;
    for (const auto& [name, a] : j.at("allocators").items()) {
        SteadyMeans sm;
        const auto& s = a.at("steady");
        sm.acceptance_pct = s.at("acceptance_pct").get<double>();
        sm.latency_ms = s.at("latency_ms").get<double>();
        sm.bandwidth_pct = s.at("bandwidth_pct").get<double>();
        sm.max_resource_pct = s.at("max_resource_pct").get<double>();
        sm.concurrent_apps = s.at("concurrent_apps").get<double>();
        sm.time_limited = a.value("time_limited", false);
        out[name] = sm;
    }
    return out;
}

struct OrderingCheck {
    std::string name;
    bool pass = false;
    bool informational = false;
    std::string detail;
};

// Reference comparisons between the three allocators on their steady-state
// means. Absolute acceptance bands become informational when the exact solver
// ran out of budget on some batch.
inline std::vector<OrderingCheck> ordering_checks(const std::map<std::string, SteadyMeans>& m) {
    std::vector<OrderingCheck> checks;
    auto get = [&](const char* n) -> const SteadyMeans* {
        auto it = m.find(n);
        return it == m.end() ? nullptr : &it->second;
    };
    const SteadyMeans* ilp = get("ilp");
    const SteadyMeans* nsga = get("nsga2");
    const SteadyMeans* greedy = get("greedy");
    if (!ilp || !nsga || !greedy) {
        checks.push_back({"allocator coverage", false, false,
                          "need ilp, nsga2 and greedy steady means to compare"});
        return checks;
    }
    auto fmt = [](double v) {
        std::ostringstream o;
        o.precision(4);
        o << v;
        return o.str();
    };
    const bool tl = ilp->time_limited;

    checks.push_back({"acceptance ordering (ilp >= nsga2 >= greedy, gaps >= 2)",
                      ilp->acceptance_pct >= nsga->acceptance_pct + 2.0 &&
                          nsga->acceptance_pct >= greedy->acceptance_pct + 2.0,
                      false,
                      "ilp=" + fmt(ilp->acceptance_pct) + " nsga2=" + fmt(nsga->acceptance_pct) +
                          " greedy=" + fmt(greedy->acceptance_pct)});
    checks.push_back({"acceptance absolute (62/58/53 +-10)",
                      std::abs(ilp->acceptance_pct - 62.0) <= 10.0 &&
                          std::abs(nsga->acceptance_pct - 58.0) <= 10.0 &&
                          std::abs(greedy->acceptance_pct - 53.0) <= 10.0,
                      tl,
                      "ilp=" + fmt(ilp->acceptance_pct) + " nsga2=" + fmt(nsga->acceptance_pct) +
                          " greedy=" + fmt(greedy->acceptance_pct) +
                          (tl ? " (informational: solver budget bound)" : "")});
    checks.push_back({"latency ordering (nsga2 < ilp < greedy; bands)",
                      nsga->latency_ms < ilp->latency_ms && ilp->latency_ms < greedy->latency_ms &&
                          greedy->latency_ms >= 6.0 && greedy->latency_ms <= 12.0 &&
                          ilp->latency_ms <= 6.0 && nsga->latency_ms <= 2.5,
                      false,
                      "nsga2=" + fmt(nsga->latency_ms) + " ilp=" + fmt(ilp->latency_ms) +
                          " greedy=" + fmt(greedy->latency_ms)});
    checks.push_back({"bandwidth ordering (greedy > ilp > nsga2; bands)",
                      greedy->bandwidth_pct > ilp->bandwidth_pct &&
                          ilp->bandwidth_pct > nsga->bandwidth_pct &&
                          greedy->bandwidth_pct >= 5.0 && greedy->bandwidth_pct <= 12.0 &&
                          nsga->bandwidth_pct >= 1.0 && nsga->bandwidth_pct <= 4.0,
                      false,
                      "greedy=" + fmt(greedy->bandwidth_pct) + " ilp=" + fmt(ilp->bandwidth_pct) +
                          " nsga2=" + fmt(nsga->bandwidth_pct)});
    checks.push_back({"max resource ordering (ilp > nsga2 > greedy; 80/73/65 +-10)",
                      ilp->max_resource_pct > nsga->max_resource_pct &&
                          nsga->max_resource_pct > greedy->max_resource_pct &&
                          std::abs(ilp->max_resource_pct - 80.0) <= 10.0 &&
                          std::abs(nsga->max_resource_pct - 73.0) <= 10.0 &&
                          std::abs(greedy->max_resource_pct - 65.0) <= 10.0,
                      false,
                      "ilp=" + fmt(ilp->max_resource_pct) + " nsga2=" + fmt(nsga->max_resource_pct) +
                          " greedy=" + fmt(greedy->max_resource_pct)});
    return checks;
}

}  // namespace meshvne
