#pragma once

// Scenario generation: random substrate meshes (devices in a 3D box joined by
// radio-range links) and application workloads drawn from the configured
// distributions, reproducible from a seed. Scenarios serialize to a versioned
// JSON file so a run can be repeated without regeneration.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshvne/core.hpp"
#include "meshvne/rng.hpp"

namespace meshvne {

struct GenerationFailed : std::runtime_error {
    explicit GenerationFailed(const std::string& what) : std::runtime_error(what) {}
};

// Heterogeneous device types: a CPU-heavy device and a GPU device.
inline ResourceVector device_type_a_capacity() { return ResourceVector::of(16.0, 32768, 1000, 0); }
inline ResourceVector device_type_b_capacity() { return ResourceVector::of(8.0, 16384, 1000, 8); }

struct SubstrateSpec {
    int device_count = 20;
    double box_x_m = 1000.0;
    double box_y_m = 1000.0;
    double box_z_m = 100.0;
    double link_bandwidth_mbps = 100.0;
    int link_latency_ms = 10;
    // 0 = auto: smallest pairwise distance that makes the graph connected.
    double fixed_radius_m = 0.0;
    double radius_margin = 1.0;
    int max_generation_attempts = 32;
};

struct AppSpec {
    int components_min = 1;
    int components_max = 5;
    double cpu_cores_min = 0.1;
    double cpu_cores_max = 2.0;
    double memory_mb_min = 100.0;
    double memory_mb_max = 4096.0;
    double storage_gb_min = 1.0;
    double storage_gb_max = 250.0;
    double gpu_zero_probability = 0.5;
    int gpu_units_min = 1;
    int gpu_units_max = 2;
    double link_bandwidth_mbps_min = 5.0;
    double link_bandwidth_mbps_max = 20.0;
    std::vector<int> latency_bounds_ms = {20, 30, 50};
};

struct WorkloadSpec {
    double arrival_rate_per_hour = 120.0;
    double lifetime_mean_min = 45.0;
    double duration_h = 4.0;
};

struct Scenario {
    std::uint64_t seed = 1;
    SubstrateSpec substrate_spec;
    AppSpec app_spec;
    WorkloadSpec workload_spec;
    SubstrateNetwork network;
    std::vector<VirtualRequest> workload;  // ascending arrival time
};

inline SubstrateNetwork generate_substrate(const SubstrateSpec& spec, std::uint64_t seed) {
    if (spec.device_count < 1 || spec.device_count > 64)
        throw GenerationFailed("device_count must be in [1, 64]");
    Rng rng = Rng::stream(seed, "substrate");

    for (int attempt = 0; attempt < spec.max_generation_attempts; ++attempt) {
        SubstrateNetwork net;
        net.nodes.reserve(static_cast<size_t>(spec.device_count));
        for (int i = 0; i < spec.device_count; ++i) {
            SubstrateNode n;
            n.id = i;
            n.position = {rng.uniform(0.0, spec.box_x_m), rng.uniform(0.0, spec.box_y_m),
                          rng.uniform(0.0, spec.box_z_m)};
            n.capacity = (i % 2 == 0) ? device_type_a_capacity() : device_type_b_capacity();
            net.nodes.push_back(n);
        }

        double radius = spec.fixed_radius_m;
        if (radius <= 0.0) {
            // Smallest pairwise distance at which the radio graph connects.
            std::vector<double> dists;
            for (int i = 0; i < spec.device_count; ++i)
                for (int j = i + 1; j < spec.device_count; ++j)
                    dists.push_back(distance(net.nodes[static_cast<size_t>(i)].position,
                                             net.nodes[static_cast<size_t>(j)].position));
            std::sort(dists.begin(), dists.end());
            size_t lo = 0, hi = dists.empty() ? 0 : dists.size() - 1;
            auto connects = [&](double r) {
                SubstrateNetwork probe;
                probe.nodes = net.nodes;
                for (int i = 0; i < spec.device_count; ++i)
                    for (int j = i + 1; j < spec.device_count; ++j)
                        if (distance(net.nodes[static_cast<size_t>(i)].position,
                                     net.nodes[static_cast<size_t>(j)].position) <= r)
                            probe.edges.push_back(SubstrateEdge{i, j, 0, 0});
                return probe.connected();
            };
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (connects(dists[mid]))
                    hi = mid;
                else
                    lo = mid + 1;
            }
            radius = dists.empty() ? 0.0 : dists[lo];
        }
        radius *= spec.radius_margin;

        for (int i = 0; i < spec.device_count; ++i)
            for (int j = i + 1; j < spec.device_count; ++j)
                if (distance(net.nodes[static_cast<size_t>(i)].position,
                             net.nodes[static_cast<size_t>(j)].position) <= radius)
                    net.edges.push_back(SubstrateEdge{
                        i, j, dmbps_from_mbps(spec.link_bandwidth_mbps), spec.link_latency_ms});

        if (net.connected()) return net;
    }
    throw GenerationFailed("could not generate a connected substrate within the retry budget");
}

// Draws one application. Consumes the rng in a fixed order: component count,
// per-component demands, chain links, then extra-link coins.
inline VirtualRequest generate_application(const AppSpec& spec, Rng& rng, RequestId id) {
    VirtualRequest req;
    req.id = id;
    int n = static_cast<int>(rng.uniform_int(spec.components_min, spec.components_max));
    req.components.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        VirtualComponent c;
        c.id = i;
        c.demand.cpu_millicores =
            millicores_from_cores(rng.uniform(spec.cpu_cores_min, spec.cpu_cores_max));
        c.demand.memory_mb = std::llround(rng.uniform(spec.memory_mb_min, spec.memory_mb_max));
        c.demand.storage_gb = std::llround(rng.uniform(spec.storage_gb_min, spec.storage_gb_max));
        c.demand.gpu_units = rng.coin(spec.gpu_zero_probability)
                                 ? 0
                                 : rng.uniform_int(spec.gpu_units_min, spec.gpu_units_max);
        req.components.push_back(c);
    }
    auto draw_link = [&](ComponentId s, ComponentId t) {
        VirtualLink l;
        l.source = s;
        l.target = t;
        l.bandwidth_dmbps = dmbps_from_mbps(
            rng.uniform(spec.link_bandwidth_mbps_min, spec.link_bandwidth_mbps_max));
        l.latency_bound_ms = spec.latency_bounds_ms[static_cast<size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(spec.latency_bounds_ms.size()) - 1))];
        return l;
    };
    // Predecessor chain keeps the component graph connected.
    for (int i = 1; i < n; ++i) req.links.push_back(draw_link(i - 1, i));
    // Each non-adjacent pair may add a link with probability 1/n.
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j)
            if (rng.coin(1.0 / static_cast<double>(n))) req.links.push_back(draw_link(i, j));
    return req;
}

inline Scenario generate_scenario(const SubstrateSpec& substrate_spec, const AppSpec& app_spec,
                                  const WorkloadSpec& workload_spec, std::uint64_t seed) {
    if (workload_spec.arrival_rate_per_hour <= 0.0 || workload_spec.duration_h <= 0.0 ||
        workload_spec.lifetime_mean_min <= 0.0)
        throw ConfigInvalid("workload rates and duration must be positive");
    Scenario sc;
    sc.seed = seed;
    sc.substrate_spec = substrate_spec;
    sc.app_spec = app_spec;
    sc.workload_spec = workload_spec;
    sc.network = generate_substrate(substrate_spec, seed);

    Rng rng = Rng::stream(seed, "workload");
    const double mean_gap_ms = 3600.0 * 1000.0 / workload_spec.arrival_rate_per_hour;
    const double lifetime_mean_ms = workload_spec.lifetime_mean_min * 60.0 * 1000.0;
    const TimeMs duration_ms =
        static_cast<TimeMs>(std::llround(workload_spec.duration_h * 3600.0 * 1000.0));
    TimeMs t = 0;
    RequestId next_id = 0;
    while (true) {
        t += static_cast<TimeMs>(std::llround(rng.exponential(mean_gap_ms)));
        if (t >= duration_ms) break;
        VirtualRequest req = generate_application(app_spec, rng, next_id++);
        req.arrival_ms = t;
        req.lifetime_ms = std::max<TimeMs>(1, std::llround(rng.exponential(lifetime_mean_ms)));
        sc.workload.push_back(std::move(req));
    }
    return sc;
}

// ---------------------------------------------------------------------------
// Serialization (schema version 1)

namespace detail {

using json = nlohmann::ordered_json;

inline json to_json(const ResourceVector& r) {
    return json{{"cpu_millicores", r.cpu_millicores},
                {"memory_mb", r.memory_mb},
                {"storage_gb", r.storage_gb},
                {"gpu_units", r.gpu_units}};
}
inline ResourceVector resource_from_json(const json& j) {
    return ResourceVector{j.at("cpu_millicores").get<std::int64_t>(),
                          j.at("memory_mb").get<std::int64_t>(),
                          j.at("storage_gb").get<std::int64_t>(),
                          j.at("gpu_units").get<std::int64_t>()};
}

}  // namespace detail

inline constexpr int kScenarioSchemaVersion = 1;

inline std::string scenario_to_json(const Scenario& sc) {
    using detail::json;
    json j;
    j["schema_version"] = kScenarioSchemaVersion;
    j["seed"] = sc.seed;
    j["substrate_spec"] = {{"device_count", sc.substrate_spec.device_count},
                           {"box_x_m", sc.substrate_spec.box_x_m},
                           {"box_y_m", sc.substrate_spec.box_y_m},
                           {"box_z_m", sc.substrate_spec.box_z_m},
                           {"link_bandwidth_mbps", sc.substrate_spec.link_bandwidth_mbps},
                           {"link_latency_ms", sc.substrate_spec.link_latency_ms},
                           {"fixed_radius_m", sc.substrate_spec.fixed_radius_m},
                           {"radius_margin", sc.substrate_spec.radius_margin}};
    j["app_spec"] = {{"components_min", sc.app_spec.components_min},
                     {"components_max", sc.app_spec.components_max},
                     {"cpu_cores_min", sc.app_spec.cpu_cores_min},
                     {"cpu_cores_max", sc.app_spec.cpu_cores_max},
                     {"memory_mb_min", sc.app_spec.memory_mb_min},
                     {"memory_mb_max", sc.app_spec.memory_mb_max},
                     {"storage_gb_min", sc.app_spec.storage_gb_min},
                     {"storage_gb_max", sc.app_spec.storage_gb_max},
                     {"gpu_zero_probability", sc.app_spec.gpu_zero_probability},
                     {"gpu_units_min", sc.app_spec.gpu_units_min},
                     {"gpu_units_max", sc.app_spec.gpu_units_max},
                     {"link_bandwidth_mbps_min", sc.app_spec.link_bandwidth_mbps_min},
                     {"link_bandwidth_mbps_max", sc.app_spec.link_bandwidth_mbps_max},
                     {"latency_bounds_ms", sc.app_spec.latency_bounds_ms}};
    j["workload_spec"] = {{"arrival_rate_per_hour", sc.workload_spec.arrival_rate_per_hour},
                          {"lifetime_mean_min", sc.workload_spec.lifetime_mean_min},
                          {"duration_h", sc.workload_spec.duration_h}};
    json nodes = json::array();
    for (const auto& n : sc.network.nodes)
        nodes.push_back(json{{"id", n.id},
                             {"position", {n.position.x, n.position.y, n.position.z}},
                             {"capacity", detail::to_json(n.capacity)}});
    json edges = json::array();
    for (const auto& e : sc.network.edges)
        edges.push_back(json{{"a", e.a},
                             {"b", e.b},
                             {"bandwidth_dmbps", e.bandwidth_dmbps},
                             {"latency_ms", e.latency_ms}});
    j["network"] = {{"nodes", nodes}, {"edges", edges}};
    json apps = json::array();
    for (const auto& r : sc.workload) {
        json comps = json::array();
        for (const auto& c : r.components)
            comps.push_back(json{{"id", c.id}, {"demand", detail::to_json(c.demand)}});
        json links = json::array();
        for (const auto& l : r.links)
            links.push_back(json{{"source", l.source},
                                 {"target", l.target},
                                 {"bandwidth_dmbps", l.bandwidth_dmbps},
                                 {"latency_bound_ms", l.latency_bound_ms}});
        apps.push_back(json{{"id", r.id},
                            {"arrival_ms", r.arrival_ms},
                            {"lifetime_ms", r.lifetime_ms},
                            {"components", comps},
                            {"links", links}});
    }
    j["workload"] = apps;
    return j.dump(2) + "\n";
}

inline Scenario scenario_from_json(const std::string& text) {
    using detail::json;
    json j = json::parse(text);
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != kScenarioSchemaVersion)
        throw ConfigInvalid("unsupported scenario schema version");
    Scenario sc;
    sc.seed = j.at("seed").get<std::uint64_t>();
    const json& ss = j.at("substrate_spec");
    sc.substrate_spec.device_count = ss.at("device_count").get<int>();
    sc.substrate_spec.box_x_m = ss.at("box_x_m").get<double>();
    sc.substrate_spec.box_y_m = ss.at("box_y_m").get<double>();
    sc.substrate_spec.box_z_m = ss.at("box_z_m").get<double>();
    sc.substrate_spec.link_bandwidth_mbps = ss.at("link_bandwidth_mbps").get<double>();
    sc.substrate_spec.link_latency_ms = ss.at("link_latency_ms").get<int>();
    sc.substrate_spec.fixed_radius_m = ss.at("fixed_radius_m").get<double>();
    sc.substrate_spec.radius_margin = ss.at("radius_margin").get<double>();
    const json& as = j.at("app_spec");
    sc.app_spec.components_min = as.at("components_min").get<int>();
    sc.app_spec.components_max = as.at("components_max").get<int>();
    sc.app_spec.cpu_cores_min = as.at("cpu_cores_min").get<double>();
    sc.app_spec.cpu_cores_max = as.at("cpu_cores_max").get<double>();
    sc.app_spec.memory_mb_min = as.at("memory_mb_min").get<double>();
    sc.app_spec.memory_mb_max = as.at("memory_mb_max").get<double>();
    sc.app_spec.storage_gb_min = as.at("storage_gb_min").get<double>();
    sc.app_spec.storage_gb_max = as.at("storage_gb_max").get<double>();
    sc.app_spec.gpu_zero_probability = as.at("gpu_zero_probability").get<double>();
    sc.app_spec.gpu_units_min = as.at("gpu_units_min").get<int>();
    sc.app_spec.gpu_units_max = as.at("gpu_units_max").get<int>();
    sc.app_spec.link_bandwidth_mbps_min = as.at("link_bandwidth_mbps_min").get<double>();
    sc.app_spec.link_bandwidth_mbps_max = as.at("link_bandwidth_mbps_max").get<double>();
    sc.app_spec.latency_bounds_ms = as.at("latency_bounds_ms").get<std::vector<int>>();
    const json& ws = j.at("workload_spec");
    sc.workload_spec.arrival_rate_per_hour = ws.at("arrival_rate_per_hour").get<double>();
    sc.workload_spec.lifetime_mean_min = ws.at("lifetime_mean_min").get<double>();
    sc.workload_spec.duration_h = ws.at("duration_h").get<double>();
    for (const json& nj : j.at("network").at("nodes")) {
        SubstrateNode n;
        n.id = nj.at("id").get<int>();
        n.position = {nj.at("position")[0].get<double>(), nj.at("position")[1].get<double>(),
                      nj.at("position")[2].get<double>()};
        n.capacity = detail::resource_from_json(nj.at("capacity"));
        sc.network.nodes.push_back(n);
    }
    for (const json& ej : j.at("network").at("edges"))
        sc.network.edges.push_back(SubstrateEdge{
            ej.at("a").get<int>(), ej.at("b").get<int>(),
            ej.at("bandwidth_dmbps").get<std::int64_t>(), ej.at("latency_ms").get<int>()});
    for (const json& rj : j.at("workload")) {
        VirtualRequest r;
        r.id = rj.at("id").get<int>();
        r.arrival_ms = rj.at("arrival_ms").get<TimeMs>();
        r.lifetime_ms = rj.at("lifetime_ms").get<TimeMs>();
        for (const json& cj : rj.at("components"))
            r.components.push_back(
                VirtualComponent{cj.at("id").get<int>(), detail::resource_from_json(cj.at("demand"))});
        for (const json& lj : rj.at("links"))
            r.links.push_back(VirtualLink{lj.at("source").get<int>(), lj.at("target").get<int>(),
                                          lj.at("bandwidth_dmbps").get<std::int64_t>(),
                                          lj.at("latency_bound_ms").get<int>()});
        sc.workload.push_back(std::move(r));
    }
    return sc;
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GenerationFailed("cannot open scenario file for writing: " + path);
    out << scenario_to_json(sc);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

// Same specs, different seed: used when one scenario file drives a multi-seed
// experiment.
inline Scenario regenerate_for_seed(const Scenario& base, std::uint64_t seed) {
    if (seed == base.seed) return base;
    return generate_scenario(base.substrate_spec, base.app_spec, base.workload_spec, seed);
}

}  // namespace meshvne
