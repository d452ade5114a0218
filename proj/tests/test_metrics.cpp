#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "meshvne/metrics.hpp"
#include "test_util.hpp"

using namespace meshvne;

namespace {

// A two-node scenario and a fully hand-written trace:
//   R0 (two components, one 10 Mbps link) deploys at 60 s, departs at 120 s.
//   R1 (one component, no links) deploys at 60 s and stays.
//   R2 is finally rejected at 60 s.
struct HandTrace {
    Scenario scenario;
    SimulationTrace trace;

    HandTrace() {
        scenario.seed = 1;
        scenario.network = testutil::line_network(2);

        VirtualRequest r0, r1, r2;
        r0.id = 0;
        r0.components = {testutil::comp(0, 2.0, 1000, 10, 0), testutil::comp(1, 4.0, 2000, 20, 1)};
        r0.links = {testutil::vlink(0, 1, 10, 30)};
        r0.arrival_ms = 10000;
        r1.id = 1;
        r1.components = {testutil::comp(0, 1.0, 8192, 100, 0)};
        r1.arrival_ms = 20000;
        r2.id = 2;
        r2.components = {testutil::comp(0, 100.0, 100, 1, 0)};
        r2.arrival_ms = 30000;
        scenario.workload = {r0, r1, r2};

        trace.allocator = "greedy";
        trace.seed = 1;
        trace.duration_ms = 180000;
        trace.batch_interval_ms = 60000;

        auto arrival = [](TimeMs t, RequestId id) {
            TraceEvent e;
            e.t = t;
            e.type = "arrival";
            e.request_id = id;
            return e;
        };
        TraceEvent idle;
        idle.t = 0;
        idle.type = "batch_tick";
        idle.batch_status = "idle";
        idle.batch_pending = 0;

        TraceEvent tick;
        tick.t = 60000;
        tick.type = "batch_tick";
        tick.batch_status = "heuristic";
        tick.batch_pending = 3;
        tick.batch_accepted = 2;

        TraceEvent d0;
        d0.t = 60000;
        d0.type = "deploy";
        d0.request_id = 0;
        d0.allocation.request_id = 0;
        d0.allocation.node_assignment = {{0, 0}, {1, 1}};
        d0.allocation.path_assignment = {AssignedPath{0, 1, {0}, 10}};

        TraceEvent d1;
        d1.t = 60000;
        d1.type = "deploy";
        d1.request_id = 1;
        d1.allocation.request_id = 1;
        d1.allocation.node_assignment = {{0, 0}};

        TraceEvent rej;
        rej.t = 60000;
        rej.type = "reject";
        rej.request_id = 2;
        rej.final_reject = true;

        TraceEvent late_tick;
        late_tick.t = 120000;
        late_tick.type = "batch_tick";
        late_tick.batch_status = "time_limit";
        late_tick.batch_pending = 0;

        TraceEvent dep;
        dep.t = 120000;
        dep.type = "departure";
        dep.request_id = 0;

        trace.events = {idle,        arrival(10000, 0), arrival(20000, 1), arrival(30000, 2),
                        tick,        d0,                d1,                rej,
                        dep,         late_tick};
        trace.final_status = {{0, "deployed"}, {1, "deployed"}, {2, "rejected"}};
    }
};

const ReplaySample* sample_at(const std::vector<ReplaySample>& samples, TimeMs t) {
    for (const auto& s : samples)
        if (s.t == t) return &s;
    return nullptr;
}

SteadyMeans means(double acc, double lat, double bw, double maxres, bool tl = false) {
    SteadyMeans m;
    m.acceptance_pct = acc;
    m.latency_ms = lat;
    m.bandwidth_pct = bw;
    m.max_resource_pct = maxres;
    m.time_limited = tl;
    return m;
}

std::map<std::string, SteadyMeans> healthy_means() {
    return {{"ilp", means(62, 4.0, 6.0, 80)},
            {"nsga2", means(58, 1.0, 2.0, 73)},
            {"greedy", means(53, 8.5, 8.0, 65)}};
}

const OrderingCheck* check_named(const std::vector<OrderingCheck>& checks,
                                 const std::string& prefix) {
    for (const auto& c : checks)
        if (c.name.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

}  // namespace

TEST(Replay, MetricsFollowHandTrace) {
    HandTrace h;
    auto samples = replay_samples(h.scenario, h.trace);

    const ReplaySample* start = sample_at(samples, 0);
    ASSERT_NE(start, nullptr);
    EXPECT_DOUBLE_EQ(start->v[0], 100.0);  // nothing decided yet
    EXPECT_DOUBLE_EQ(start->v[1], 0.0);
    EXPECT_DOUBLE_EQ(start->v[2], 0.0);
    EXPECT_DOUBLE_EQ(start->v[3], 0.0);
    EXPECT_DOUBLE_EQ(start->v[4], 0.0);

    // Deploys and the final reject all land exactly at 60 s and are applied
    // before that sample is taken.
    const ReplaySample* busy = sample_at(samples, 60000);
    ASSERT_NE(busy, nullptr);
    EXPECT_NEAR(busy->v[0], 200.0 / 3.0, 1e-9);
    EXPECT_DOUBLE_EQ(busy->v[1], 5.0);  // (10 + 0) / 2 live apps
    // 100 of 1000 dmbps on one direction of the only edge; the unused reverse
    // direction counts in the denominator.
    EXPECT_DOUBLE_EQ(busy->v[2], 5.0);
    // Node 0 is the most loaded device: mean of cpu 3/8, memory 9192/16384,
    // storage 110/1000, gpu 0/4.
    EXPECT_NEAR(busy->v[3], 100.0 * (3.0 / 8.0 + 9192.0 / 16384.0 + 110.0 / 1000.0 + 0.0) / 4.0,
                1e-9);
    EXPECT_DOUBLE_EQ(busy->v[4], 2.0);

    const ReplaySample* before = sample_at(samples, 59000);
    ASSERT_NE(before, nullptr);
    EXPECT_DOUBLE_EQ(before->v[0], 100.0);
    EXPECT_DOUBLE_EQ(before->v[4], 0.0);

    // R0's departure rolls its usage back exactly.
    const ReplaySample* after = sample_at(samples, 120000);
    ASSERT_NE(after, nullptr);
    EXPECT_NEAR(after->v[0], 200.0 / 3.0, 1e-9);
    EXPECT_DOUBLE_EQ(after->v[1], 0.0);   // only the link-free app remains
    EXPECT_DOUBLE_EQ(after->v[2], 0.0);
    EXPECT_DOUBLE_EQ(after->v[3], 50.0);  // node 0 memory: 8192 of 16384
    EXPECT_DOUBLE_EQ(after->v[4], 1.0);

    // One sample per second plus event boundaries, all strictly increasing.
    for (size_t i = 1; i < samples.size(); ++i) EXPECT_LT(samples[i - 1].t, samples[i].t);
    EXPECT_GE(samples.size(), 181u);
}

TEST(Replay, RunTotalsCountEventKinds) {
    HandTrace h;
    RunSeries rs = compute_run_series(h.scenario, h.trace);
    EXPECT_EQ(rs.totals.arrived, 3);
    EXPECT_EQ(rs.totals.deployed, 2);
    EXPECT_EQ(rs.totals.rejected_final, 1);
    EXPECT_EQ(rs.totals.pending_end, 0);
    EXPECT_EQ(rs.totals.batches, 3);
    EXPECT_EQ(rs.totals.time_limited_batches, 1);
    EXPECT_DOUBLE_EQ(rs.totals.mean_batch_size, 1.0);  // (0 + 3 + 0) / 3
    EXPECT_EQ(rs.totals.max_batch_size, 3);

    // 3-minute run: minute grid 0..3, no steady window before minute 60.
    ASSERT_EQ(rs.minute_ms.size(), 4u);
    EXPECT_EQ(rs.minute_ms.back(), 180000);
    for (int k = 0; k < kMetricCount; ++k) EXPECT_DOUBLE_EQ(rs.steady[static_cast<size_t>(k)], 0.0);
}

TEST(Replay, EmptyWorkloadHasFullAcceptanceSteadyState) {
    Scenario sc;
    sc.seed = 1;
    sc.network = testutil::line_network(2);
    SimulationTrace trace;
    trace.allocator = "greedy";
    trace.seed = 1;
    trace.duration_ms = 62 * 60000;
    trace.batch_interval_ms = 60000;
    RunSeries rs = compute_run_series(sc, trace);
    EXPECT_DOUBLE_EQ(rs.steady[0], 100.0);
    EXPECT_DOUBLE_EQ(rs.steady[1], 0.0);
    EXPECT_DOUBLE_EQ(rs.steady[4], 0.0);
}

TEST(Smoothing, TruncatedCenteredWindow) {
    std::vector<double> v = {0, 0, 0, 6, 0, 0, 0};
    auto out = moving_average(v, 2);
    ASSERT_EQ(out.size(), v.size());
    EXPECT_DOUBLE_EQ(out[0], 0.0);
    EXPECT_DOUBLE_EQ(out[1], 1.5);
    EXPECT_DOUBLE_EQ(out[2], 1.2);
    EXPECT_DOUBLE_EQ(out[3], 1.2);
    EXPECT_DOUBLE_EQ(out[4], 1.2);
    EXPECT_DOUBLE_EQ(out[5], 1.5);
    EXPECT_DOUBLE_EQ(out[6], 0.0);

    EXPECT_EQ(moving_average({}, 2).size(), 0u);
    auto identity = moving_average({7.0}, 0);
    EXPECT_DOUBLE_EQ(identity[0], 7.0);
}

TEST(Percentile, LinearInterpolation) {
    EXPECT_DOUBLE_EQ(percentile_linear({0, 10}, 0.10), 1.0);
    EXPECT_DOUBLE_EQ(percentile_linear({0, 10}, 0.90), 9.0);
    EXPECT_DOUBLE_EQ(percentile_linear({10, 0}, 0.50), 5.0);  // sorts internally
    EXPECT_DOUBLE_EQ(percentile_linear({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(percentile_linear({5}, 0.99), 5.0);
    EXPECT_DOUBLE_EQ(percentile_linear({}, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(percentile_linear({1, 2, 3}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(percentile_linear({1, 2, 3}, 1.0), 3.0);
}

TEST(Bands, MeanAndDecileEnvelope) {
    std::vector<double> a = {0, 10}, b = {10, 20};
    BandSeries band = band_across_runs({&a, &b});
    ASSERT_EQ(band.mean.size(), 2u);
    EXPECT_DOUBLE_EQ(band.mean[0], 5.0);
    EXPECT_DOUBLE_EQ(band.mean[1], 15.0);
    EXPECT_DOUBLE_EQ(band.p10[0], 1.0);
    EXPECT_DOUBLE_EQ(band.p90[0], 9.0);
    EXPECT_DOUBLE_EQ(band.p10[1], 11.0);
    EXPECT_DOUBLE_EQ(band.p90[1], 19.0);

    EXPECT_TRUE(band_across_runs({}).mean.empty());
}

TEST(Bands, SmoothThenBand) {
    std::vector<std::vector<double>> raw = {{0, 6, 0}, {6, 0, 6}};
    BandSeries band = smooth_and_band(raw, 1);
    // smoothed: {3, 2, 3} and {3, 4, 3}
    EXPECT_DOUBLE_EQ(band.mean[0], 3.0);
    EXPECT_DOUBLE_EQ(band.mean[1], 3.0);
    EXPECT_DOUBLE_EQ(band.mean[2], 3.0);
    EXPECT_DOUBLE_EQ(band.p10[1], 2.2);
    EXPECT_DOUBLE_EQ(band.p90[1], 3.8);
}

TEST(Csv, ExactFormat) {
    const std::string path = ::testing::TempDir() + "meshvne_metric_test.csv";
    BandSeries band;
    band.mean = {1.0, 4.5};
    band.p10 = {2.0, 4.0};
    band.p90 = {3.0, 5.0};
    write_metric_csv(path, {0, 60000}, band);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), "time_ms,mean,p10,p90\n0,1,2,3\n60000,4.5,4,5\n");
    std::remove(path.c_str());
}

TEST(Summary, RoundTripsSteadyMeans) {
    HandTrace h;
    AllocatorResults res;
    res.seeds = {1, 2};
    res.runs.push_back(compute_run_series(h.scenario, h.trace));
    res.runs.push_back(compute_run_series(h.scenario, h.trace));
    res.runs[1].steady[0] = 40.0;  // make the two seeds differ
    res.runs[1].totals.time_limited_batches = 0;

    std::map<std::string, AllocatorResults> results;
    results["greedy"] = res;
    nlohmann::ordered_json j = summary_to_json("default", results);
    EXPECT_EQ(j.at("schema_version").get<int>(), 1);
    EXPECT_EQ(j.at("scenario").get<std::string>(), "default");
    EXPECT_EQ(j.at("steady_start_min").get<int>(), kSteadyStartMin);
    EXPECT_EQ(j.at("allocators").at("greedy").at("per_seed").size(), 2u);
    EXPECT_EQ(j.at("allocators").at("greedy").at("totals").at("arrived").get<int>(), 6);

    auto parsed = steady_means_from_summary(j);
    SteadyMeans direct = steady_means_of(res);
    ASSERT_TRUE(parsed.count("greedy"));
    EXPECT_DOUBLE_EQ(parsed["greedy"].acceptance_pct, direct.acceptance_pct);
    EXPECT_DOUBLE_EQ(parsed["greedy"].acceptance_pct, 20.0);  // (0 + 40) / 2
    EXPECT_EQ(parsed["greedy"].time_limited, true);           // any run suffices
}

TEST(OrderingChecks, AllPassOnReferenceShape) {
    auto checks = ordering_checks(healthy_means());
    ASSERT_EQ(checks.size(), 5u);
    for (const auto& c : checks) {
        EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
        EXPECT_FALSE(c.informational) << c.name;
    }
}

TEST(OrderingChecks, DetectsCollapsedAcceptanceGap) {
    auto m = healthy_means();
    m["ilp"].acceptance_pct = 59.0;  // less than nsga2 + 2
    auto checks = ordering_checks(m);
    const OrderingCheck* c = check_named(checks, "acceptance ordering");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->pass);
}

TEST(OrderingChecks, DetectsLatencyInversionAndBandMiss) {
    auto m = healthy_means();
    m["nsga2"].latency_ms = 4.5;  // above ilp: inversion
    auto checks = ordering_checks(m);
    const OrderingCheck* c = check_named(checks, "latency ordering");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->pass);

    m = healthy_means();
    m["greedy"].latency_ms = 14.0;  // ordering holds but band missed
    c = check_named(ordering_checks(m), "latency ordering");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->pass);
}

TEST(OrderingChecks, DetectsBandwidthAndMaxResourceFailures) {
    auto m = healthy_means();
    m["nsga2"].bandwidth_pct = 7.0;  // above ilp
    const OrderingCheck* c = check_named(ordering_checks(m), "bandwidth ordering");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->pass);

    m = healthy_means();
    m["greedy"].max_resource_pct = 90.0;  // breaks ilp > nsga2 > greedy
    c = check_named(ordering_checks(m), "max resource ordering");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->pass);
}

TEST(OrderingChecks, SolverBudgetMakesAbsoluteAcceptanceInformational) {
    auto m = healthy_means();
    m["ilp"].time_limited = true;
    m["ilp"].acceptance_pct = 90.0;  // far outside 62 +- 10
    m["nsga2"].acceptance_pct = 80.0;
    m["greedy"].acceptance_pct = 70.0;
    auto checks = ordering_checks(m);
    const OrderingCheck* absolute = check_named(checks, "acceptance absolute");
    ASSERT_NE(absolute, nullptr);
    EXPECT_FALSE(absolute->pass);
    EXPECT_TRUE(absolute->informational);
    const OrderingCheck* ordering = check_named(checks, "acceptance ordering");
    ASSERT_NE(ordering, nullptr);
    EXPECT_TRUE(ordering->pass);  // relative ordering still enforced
}

TEST(OrderingChecks, MissingAllocatorFailsCoverage) {
    auto m = healthy_means();
    m.erase("nsga2");
    auto checks = ordering_checks(m);
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_EQ(checks[0].name, "allocator coverage");
    EXPECT_FALSE(checks[0].pass);
    EXPECT_FALSE(checks[0].informational);
}
