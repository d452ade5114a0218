#include <gtest/gtest.h>

#include "meshvne/paths.hpp"
#include "test_util.hpp"

using namespace meshvne;

namespace {

void expect_equal_paths(const SubstratePath& a, const SubstratePath& b) {
    EXPECT_EQ(a.origin, b.origin);
    EXPECT_EQ(a.destination, b.destination);
    EXPECT_EQ(a.edges, b.edges);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.total_latency_ms, b.total_latency_ms);
}

}  // namespace

TEST(PathOrder, LatencyThenHopsThenLexEdges) {
    SubstratePath a, b;
    a.total_latency_ms = 10;
    b.total_latency_ms = 20;
    EXPECT_TRUE(path_order_less(a, b));
    b.total_latency_ms = 10;
    a.edges = {0};
    b.edges = {1, 2};
    EXPECT_TRUE(path_order_less(a, b));  // fewer hops first
    b.edges = {1};
    EXPECT_TRUE(path_order_less(a, b));  // lexicographic edge ids
    EXPECT_FALSE(path_order_less(b, a));
}

TEST(Catalog, LineGraphHasSinglePathPerPair) {
    SubstrateNetwork net = testutil::line_network(3, 10);
    PathCatalog catalog = build_catalog(net, 3);
    const auto& p02 = catalog.paths(0, 2);
    ASSERT_EQ(p02.size(), 1u);
    EXPECT_EQ(p02[0].edges, (std::vector<EdgeIndex>{0, 1}));
    EXPECT_EQ(p02[0].nodes, (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(p02[0].total_latency_ms, 20);
    EXPECT_EQ(p02[0].hop_count(), 2);
}

TEST(Catalog, SelfPathsForEveryNode) {
    SubstrateNetwork net = testutil::line_network(4);
    PathCatalog catalog = build_catalog(net, 3);
    for (NodeId n = 0; n < net.node_count(); ++n) {
        const auto& self = catalog.paths(n, n);
        ASSERT_EQ(self.size(), 1u);
        EXPECT_TRUE(self[0].is_self());
        EXPECT_EQ(self[0].total_latency_ms, 0);
        EXPECT_EQ(self[0].nodes, std::vector<NodeId>{n});
    }
}

TEST(Catalog, CycleGraphOrdersAlternatives) {
    // Triangle: 0-1 (5 ms), 1-2 (5 ms), 0-2 (12 ms).
    SubstrateNetwork net;
    for (NodeId i = 0; i < 3; ++i) net.nodes.push_back({i, {}, ResourceVector::of(1, 1, 1, 0)});
    net.edges.push_back({0, 1, 100, 5});
    net.edges.push_back({1, 2, 100, 5});
    net.edges.push_back({0, 2, 100, 12});
    PathCatalog catalog = build_catalog(net, 3);
    const auto& p = catalog.paths(0, 2);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0].total_latency_ms, 10);  // via node 1
    EXPECT_EQ(p[0].edges, (std::vector<EdgeIndex>{0, 1}));
    EXPECT_EQ(p[1].total_latency_ms, 12);  // direct
    EXPECT_EQ(p[1].edges, (std::vector<EdgeIndex>{2}));
}

TEST(Catalog, KOneKeepsOnlyBestPath) {
    SubstrateNetwork net;
    for (NodeId i = 0; i < 3; ++i) net.nodes.push_back({i, {}, ResourceVector::of(1, 1, 1, 0)});
    net.edges.push_back({0, 1, 100, 5});
    net.edges.push_back({1, 2, 100, 5});
    net.edges.push_back({0, 2, 100, 12});
    PathCatalog catalog = build_catalog(net, 1);
    ASSERT_EQ(catalog.paths(0, 2).size(), 1u);
    EXPECT_EQ(catalog.paths(0, 2)[0].total_latency_ms, 10);
}

TEST(Catalog, ThrowsOnDisconnectedNetwork) {
    SubstrateNetwork net = testutil::line_network(4);
    net.edges.pop_back();
    EXPECT_THROW(build_catalog(net, 3), DisconnectedNetwork);
}

TEST(Catalog, RejectsBadParameters) {
    SubstrateNetwork net = testutil::line_network(2);
    EXPECT_THROW(build_catalog(net, 0), ConfigInvalid);
    SubstrateNetwork big;
    for (NodeId i = 0; i < 65; ++i) big.nodes.push_back({i, {}, {}});
    EXPECT_THROW(build_catalog(big, 3), ConfigInvalid);
}

TEST(Catalog, MatchesBruteForceOracleOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng = Rng::stream(seed, "path-oracle");
        SubstrateNetwork net = testutil::random_network(rng, 6);
        if (!net.connected()) continue;
        for (int k : {3, 4, 5}) {
            PathCatalog catalog = build_catalog(net, k);
            for (NodeId o = 0; o < net.node_count(); ++o)
                for (NodeId d = 0; d < net.node_count(); ++d) {
                    auto oracle = testutil::all_simple_paths(net, o, d);
                    if (static_cast<int>(oracle.size()) > k)
                        oracle.resize(static_cast<size_t>(k));
                    const auto& got = catalog.paths(o, d);
                    ASSERT_EQ(got.size(), oracle.size())
                        << "seed " << seed << " k " << k << " pair " << o << "->" << d;
                    for (size_t i = 0; i < got.size(); ++i) expect_equal_paths(got[i], oracle[i]);
                }
        }
    }
}

TEST(Catalog, SmallerKIsPrefixOfLargerK) {
    Rng rng = Rng::stream(77, "path-prefix");
    SubstrateNetwork net = testutil::random_network(rng, 6);
    PathCatalog c3 = build_catalog(net, 3);
    PathCatalog c5 = build_catalog(net, 5);
    for (NodeId o = 0; o < net.node_count(); ++o)
        for (NodeId d = 0; d < net.node_count(); ++d) {
            const auto& small = c3.paths(o, d);
            const auto& large = c5.paths(o, d);
            ASSERT_LE(small.size(), large.size());
            for (size_t i = 0; i < small.size(); ++i) expect_equal_paths(small[i], large[i]);
        }
}

TEST(FeasiblePaths, FiltersByLatencyBound) {
    SubstrateNetwork net;
    for (NodeId i = 0; i < 3; ++i) net.nodes.push_back({i, {}, ResourceVector::of(1, 1, 1, 0)});
    net.edges.push_back({0, 1, 100, 5});
    net.edges.push_back({1, 2, 100, 5});
    net.edges.push_back({0, 2, 100, 12});
    PathCatalog catalog = build_catalog(net, 3);
    EXPECT_EQ(feasible_paths(catalog, 0, 2, 50).size(), 2u);
    EXPECT_EQ(feasible_paths(catalog, 0, 2, 11).size(), 1u);
    EXPECT_EQ(feasible_paths(catalog, 0, 2, 9).size(), 0u);
    EXPECT_EQ(feasible_paths(catalog, 1, 1, 0).size(), 1u);  // self-path always fits
}
