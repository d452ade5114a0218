// Command-line front end: generate scenarios, run allocator experiments over
// seeds (optionally in parallel), and compare summaries against the reference
// orderings. Exit codes: 0 ok, 2 usage, 3 generation failure, 4 audit
// failure, 5 strict-compare failure.

#include <atomic>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "meshvne/config.hpp"
#include "meshvne/log.hpp"
#include "meshvne/metrics.hpp"
#include "meshvne/scenario.hpp"
#include "meshvne/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "1..5" or "1,4,9" or a mix of both.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    for (const auto& token : split_csv(spec)) {
        const size_t dots = token.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(std::stoull(token));
        } else {
            const std::uint64_t lo = std::stoull(token.substr(0, dots));
            const std::uint64_t hi = std::stoull(token.substr(dots + 2));
            if (hi < lo) throw meshvne::ConfigInvalid("seed range is reversed: " + token);
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        }
    }
    if (seeds.empty()) throw meshvne::ConfigInvalid("no seeds given");
    return seeds;
}

ordered_json config_snapshot(const meshvne::SimulationConfig& cfg) {
    return ordered_json{{"arrival_rate_per_hour", cfg.arrival_rate_per_hour},
                        {"departure_rate_per_hour", cfg.departure_rate_per_hour},
                        {"lifetime_mean_min", cfg.lifetime_mean_min},
                        {"duration_h", cfg.duration_h},
                        {"retry_timeout_min", cfg.retry_timeout_min},
                        {"max_retries", cfg.max_retries},
                        {"batch_interval_min", cfg.batch_interval_min},
                        {"alpha", cfg.alpha},
                        {"reward_tau_min", cfg.reward_tau_min},
                        {"solver_time_limit_s", cfg.solver_time_limit_s},
                        {"deploy_delay_ms", cfg.deploy_delay_ms},
                        {"path_k", cfg.path_k},
                        {"nsga2.population", cfg.nsga_population},
                        {"nsga2.generations", cfg.nsga_generations},
                        {"nsga2.crossover_rate", cfg.nsga_crossover_rate},
                        {"nsga2.mutation_rate", cfg.nsga_mutation_rate},
                        {"greedy.ranking", cfg.greedy_ranking},
                        {"greedy.capacity_fraction", cfg.greedy_capacity_fraction}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw meshvne::ConfigInvalid("cannot write " + path.string());
    out << text;
}

int cmd_generate(const std::string& out_path, int devices, double duration_h, std::uint64_t seed,
                 const std::string& config_path, const std::vector<std::string>& overrides,
                 bool devices_set, bool duration_set) {
    meshvne::SimulationConfig cfg;
    meshvne::SubstrateSpec substrate;
    meshvne::AppSpec app;
    meshvne::ConfigMap map;
    if (!config_path.empty()) map = meshvne::load_config_file(config_path);
    for (const auto& kv : overrides) meshvne::set_override(map, kv);
    meshvne::apply_config(map, cfg, substrate, app);
    if (devices_set) substrate.device_count = devices;
    if (duration_set) cfg.duration_h = duration_h;
    cfg.validate();

    meshvne::Scenario sc =
        meshvne::generate_scenario(substrate, app, cfg.workload_spec(), seed);
    meshvne::save_scenario(sc, out_path);
    std::cout << "scenario " << out_path << ": " << sc.network.node_count() << " nodes, "
              << sc.network.edge_count() << " edges, " << sc.workload.size() << " apps over "
              << cfg.duration_h << " h (seed " << seed << ")\n";
    return 0;
}

struct RunJob {
    std::string allocator;
    std::uint64_t seed = 0;
};

int cmd_run(const std::string& scenario_path, const std::string& allocators_csv,
            const std::string& seeds_spec, int jobs, const std::string& out_dir,
            const std::string& config_path, const std::vector<std::string>& overrides) {
    meshvne::SimulationConfig cfg;
    meshvne::SubstrateSpec substrate_unused;
    meshvne::AppSpec app_unused;
    meshvne::ConfigMap map;
    if (!config_path.empty()) map = meshvne::load_config_file(config_path);
    for (const auto& kv : overrides) meshvne::set_override(map, kv);
    meshvne::apply_config(map, cfg, substrate_unused, app_unused);
    cfg.validate();

    const meshvne::Scenario base = meshvne::load_scenario(scenario_path);
    std::vector<std::string> allocators = split_csv(allocators_csv);
    if (allocators.empty()) throw meshvne::ConfigInvalid("no allocators given");
    for (const auto& a : allocators)
        if (a != "greedy" && a != "ilp" && a != "nsga2")
            throw meshvne::ConfigInvalid("unknown allocator: " + a);
    std::vector<std::uint64_t> seeds = parse_seeds(seeds_spec);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    ordered_json manifest{{"schema_version", 1},
                          {"scenario", scenario_path},
                          {"allocators", allocators},
                          {"seeds", seeds},
                          {"overrides", ordered_json::object()},
                          {"config", config_snapshot(cfg)}};
    for (const auto& [k, v] : map) manifest["overrides"][k] = v;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");

    std::vector<RunJob> jobs_list;
    for (const auto& a : allocators)
        for (std::uint64_t s : seeds) jobs_list.push_back(RunJob{a, s});

    int workers = jobs;
    if (workers <= 0)
        workers = static_cast<int>(
            std::min<size_t>(jobs_list.size(),
                             std::max(1u, std::thread::hardware_concurrency())));
    workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs_list.size())));

    std::vector<meshvne::RunSeries> results(jobs_list.size());
    std::vector<std::exception_ptr> errors(jobs_list.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs_list.size()) break;
            const RunJob& job = jobs_list[i];
            try {
                meshvne::Scenario sc = meshvne::regenerate_for_seed(base, job.seed);
                auto allocator = meshvne::make_allocator(job.allocator, cfg, job.seed);
                meshvne::SimulationTrace trace = meshvne::run_simulation(sc, cfg, *allocator);
                const fs::path trace_path =
                    out / ("trace_" + job.allocator + "_seed" + std::to_string(job.seed) +
                           ".jsonl");
                meshvne::save_trace(trace, trace_path.string());
                results[i] = meshvne::compute_run_series(sc, trace);
                meshvne::log_info("run " + job.allocator + " seed " + std::to_string(job.seed) +
                                  ": accepted " + std::to_string(results[i].totals.deployed) +
                                  "/" + std::to_string(results[i].totals.arrived));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::map<std::string, meshvne::AllocatorResults> by_allocator;
    for (size_t i = 0; i < jobs_list.size(); ++i) {
        auto& res = by_allocator[jobs_list[i].allocator];
        res.seeds.push_back(jobs_list[i].seed);
        res.runs.push_back(std::move(results[i]));
    }

    for (const auto& [name, res] : by_allocator) {
        for (int m = 0; m < meshvne::kMetricCount; ++m) {
            std::vector<const std::vector<double>*> per_seed;
            for (const auto& r : res.runs) per_seed.push_back(&r.series[static_cast<size_t>(m)]);
            meshvne::BandSeries band = meshvne::band_across_runs(per_seed);
            const fs::path csv = out / ("metrics_" + name + "_" +
                                        std::string(meshvne::kMetricKeys[m]) + ".csv");
            meshvne::write_metric_csv(csv.string(), res.runs.front().minute_ms, band);
        }
    }

    ordered_json summary = meshvne::summary_to_json(scenario_path, by_allocator);
    write_text(out / "summary.json", summary.dump(2) + "\n");

    std::cout << "allocator  acceptance%  latency_ms  bandwidth%  max_res%  concurrent\n";
    for (const auto& [name, res] : by_allocator) {
        meshvne::SteadyMeans sm = meshvne::steady_means_of(res);
        std::cout << std::left << std::setw(11) << name << std::fixed << std::setprecision(2)
                  << std::setw(13) << sm.acceptance_pct << std::setw(12) << sm.latency_ms
                  << std::setw(12) << sm.bandwidth_pct << std::setw(10) << sm.max_resource_pct
                  << sm.concurrent_apps << "\n";
    }
    std::cout << "wrote " << (out / "summary.json").string() << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& summary_paths, bool strict) {
    std::map<std::string, meshvne::SteadyMeans> merged;
    for (const auto& path : summary_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw meshvne::ConfigInvalid("cannot open summary: " + path);
        ordered_json j = ordered_json::parse(in);
        for (auto& [name, sm] : meshvne::steady_means_from_summary(j)) merged[name] = sm;
    }

    std::cout << std::left << std::setw(18) << "metric";
    for (const auto& [name, sm] : merged) std::cout << std::setw(12) << name;
    std::cout << "\n";
    auto row = [&](const std::string& label, auto getter) {
        std::cout << std::left << std::setw(18) << label << std::fixed << std::setprecision(2);
        for (const auto& [name, sm] : merged) std::cout << std::setw(12) << getter(sm);
        std::cout << "\n";
    };
    row("acceptance_pct", [](const meshvne::SteadyMeans& s) { return s.acceptance_pct; });
    row("latency_ms", [](const meshvne::SteadyMeans& s) { return s.latency_ms; });
    row("bandwidth_pct", [](const meshvne::SteadyMeans& s) { return s.bandwidth_pct; });
    row("max_resource_pct", [](const meshvne::SteadyMeans& s) { return s.max_resource_pct; });
    row("concurrent_apps", [](const meshvne::SteadyMeans& s) { return s.concurrent_apps; });

    bool failed = false;
    for (const auto& check : meshvne::ordering_checks(merged)) {
        const char* tag = check.pass ? "PASS" : (check.informational ? "INFO" : "FAIL");
        if (!check.pass && !check.informational) failed = true;
        std::cout << "[" << tag << "] " << check.name << ": " << check.detail << "\n";
    }
    if (failed && strict) return 5;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mesh-edge virtual network embedding simulator"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "generate a scenario file");
    int devices = 20;
    double duration_h = 4.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_config;
    std::vector<std::string> gen_overrides;
    auto* devices_opt = gen->add_option("--devices", devices, "number of substrate devices");
    auto* duration_opt = gen->add_option("--duration-h", duration_h, "workload horizon in hours");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output scenario file")->required();
    gen->add_option("--config", gen_config, "config file with flat dotted keys");
    gen->add_option("--override", gen_overrides, "config override key=value");

    auto* run = app.add_subcommand("run", "run allocators over a scenario");
    std::string run_scenario, run_allocators = "greedy,ilp,nsga2", run_seeds = "1", run_out,
                run_config;
    int run_jobs = 0;
    std::vector<std::string> run_overrides;
    run->add_option("--scenario", run_scenario, "scenario file")->required();
    run->add_option("--allocators", run_allocators, "comma-separated allocator list");
    run->add_option("--seeds", run_seeds, "seed list, e.g. 1..5 or 1,3,9");
    run->add_option("--jobs", run_jobs, "parallel runs (0 = auto)");
    run->add_option("--out", run_out, "output directory")->required();
    run->add_option("--config", run_config, "config file with flat dotted keys");
    run->add_option("--override", run_overrides, "config override key=value");

    auto* cmp = app.add_subcommand("compare", "compare run summaries");
    std::vector<std::string> cmp_summaries;
    bool cmp_strict = false;
    cmp->add_option("summaries", cmp_summaries, "summary.json files")->required();
    cmp->add_flag("--strict", cmp_strict, "exit 5 when an ordering check fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_out, devices, duration_h, gen_seed, gen_config, gen_overrides,
                                devices_opt->count() > 0, duration_opt->count() > 0);
        if (run->parsed())
            return cmd_run(run_scenario, run_allocators, run_seeds, run_jobs, run_out, run_config,
                           run_overrides);
        if (cmp->parsed()) return cmd_compare(cmp_summaries, cmp_strict);
    } catch (const meshvne::AuditFailed& e) {
        meshvne::log_error(e.what());
        return 4;
    } catch (const meshvne::GenerationFailed& e) {
        meshvne::log_error(e.what());
        return 3;
    } catch (const meshvne::ConfigInvalid& e) {
        meshvne::log_error(e.what());
        return 2;
    } catch (const std::exception& e) {
        meshvne::log_error(e.what());
        return 1;
    }
    return 0;
}
