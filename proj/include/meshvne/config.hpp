#pragma once

// Flat dotted-key configuration: "key = value" lines with '#' comments.
// The same keys are accepted from a config file and from --override flags,
// and they mirror the SimulationConfig / SubstrateSpec / AppSpec fields.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "meshvne/core.hpp"
#include "meshvne/scenario.hpp"
#include "meshvne/sim.hpp"

namespace meshvne {

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double config_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigInvalid("bad numeric value for " + key + ": '" + value + "'");
    }
}

inline int config_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigInvalid("bad integer value for " + key + ": '" + value + "'");
    }
}

}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("config line " + std::to_string(lineno) + " has no '='");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigInvalid("config line " + std::to_string(lineno) + ": empty key");
        map[key] = value;
    }
    return map;
}

inline ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// "key=value" as passed to --override.
inline void set_override(ConfigMap& map, const std::string& kv) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigInvalid("override must look like key=value: '" + kv + "'");
    map[detail::trim(kv.substr(0, eq))] = detail::trim(kv.substr(eq + 1));
}

inline void apply_config(const ConfigMap& map, SimulationConfig& sim, SubstrateSpec& substrate,
                         AppSpec& app) {
    using detail::config_double;
    using detail::config_int;
    for (const auto& [key, value] : map) {
        if (key == "arrival_rate_per_hour") sim.arrival_rate_per_hour = config_double(key, value);
        else if (key == "departure_rate_per_hour")
            sim.departure_rate_per_hour = config_double(key, value);
        else if (key == "lifetime_mean_min") sim.lifetime_mean_min = config_double(key, value);
        else if (key == "duration_h") sim.duration_h = config_double(key, value);
        else if (key == "retry_timeout_min") sim.retry_timeout_min = config_double(key, value);
        else if (key == "max_retries") sim.max_retries = config_int(key, value);
        else if (key == "batch_interval_min") sim.batch_interval_min = config_double(key, value);
        else if (key == "alpha") sim.alpha = config_double(key, value);
        else if (key == "reward_tau_min") sim.reward_tau_min = config_double(key, value);
        else if (key == "solver_time_limit_s") sim.solver_time_limit_s = config_double(key, value);
        else if (key == "deploy_delay_ms") sim.deploy_delay_ms = config_int(key, value);
        else if (key == "path_k") sim.path_k = config_int(key, value);
        else if (key == "nsga2.population") sim.nsga_population = config_int(key, value);
        else if (key == "nsga2.generations") sim.nsga_generations = config_int(key, value);
        else if (key == "nsga2.crossover_rate") sim.nsga_crossover_rate = config_double(key, value);
        else if (key == "nsga2.mutation_rate") sim.nsga_mutation_rate = config_double(key, value);
        else if (key == "greedy.ranking") sim.greedy_ranking = value;
        else if (key == "greedy.capacity_fraction") sim.greedy_capacity_fraction = config_double(key, value);
        else if (key == "substrate.device_count") substrate.device_count = config_int(key, value);
        else if (key == "substrate.box_x_m") substrate.box_x_m = config_double(key, value);
        else if (key == "substrate.box_y_m") substrate.box_y_m = config_double(key, value);
        else if (key == "substrate.box_z_m") substrate.box_z_m = config_double(key, value);
        else if (key == "substrate.link_bandwidth_mbps")
            substrate.link_bandwidth_mbps = config_double(key, value);
        else if (key == "substrate.link_latency_ms")
            substrate.link_latency_ms = config_int(key, value);
        else if (key == "substrate.fixed_radius_m")
            substrate.fixed_radius_m = config_double(key, value);
        else if (key == "substrate.radius_margin")
            substrate.radius_margin = config_double(key, value);
        else if (key == "app.components_min") app.components_min = config_int(key, value);
        else if (key == "app.components_max") app.components_max = config_int(key, value);
        else if (key == "app.cpu_cores_min") app.cpu_cores_min = config_double(key, value);
        else if (key == "app.cpu_cores_max") app.cpu_cores_max = config_double(key, value);
        else if (key == "app.memory_mb_min") app.memory_mb_min = config_double(key, value);
        else if (key == "app.memory_mb_max") app.memory_mb_max = config_double(key, value);
        else if (key == "app.storage_gb_min") app.storage_gb_min = config_double(key, value);
        else if (key == "app.storage_gb_max") app.storage_gb_max = config_double(key, value);
        else if (key == "app.gpu_zero_probability")
            app.gpu_zero_probability = config_double(key, value);
        else if (key == "app.gpu_units_min") app.gpu_units_min = config_int(key, value);
        else if (key == "app.gpu_units_max") app.gpu_units_max = config_int(key, value);
        else if (key == "app.link_bandwidth_mbps_min")
            app.link_bandwidth_mbps_min = config_double(key, value);
        else if (key == "app.link_bandwidth_mbps_max")
            app.link_bandwidth_mbps_max = config_double(key, value);
        else if (key == "app.latency_bounds_ms") {
            std::vector<int> bounds;
            std::istringstream in(value);
            std::string item;
            while (std::getline(in, item, ',')) bounds.push_back(config_int(key, detail::trim(item)));
            if (bounds.empty()) throw ConfigInvalid("app.latency_bounds_ms must be non-empty");
            app.latency_bounds_ms = bounds;
        } else {
            throw ConfigInvalid("unknown config key: " + key);
        }
    }
}

}  // namespace meshvne
