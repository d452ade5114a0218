// Minimal end-to-end example: build a four-node substrate by hand, submit two
// small applications as one batch, solve the embedding exactly, and print the
// resulting placement and routes.

#include <iostream>

#include "meshvne/ilp.hpp"
#include "meshvne/paths.hpp"

using namespace meshvne;

int main() {
    SubstrateNetwork net;
    for (NodeId n = 0; n < 4; ++n) {
        ResourceVector cap = (n % 2 == 0) ? ResourceVector::of(16.0, 32768, 1000, 0)
                                          : ResourceVector::of(8.0, 16384, 1000, 8);
        net.nodes.push_back({n, Position{250.0 * n, 0.0, 0.0}, cap});
    }
    net.edges.push_back({0, 1, dmbps_from_mbps(100.0), 10});
    net.edges.push_back({1, 2, dmbps_from_mbps(100.0), 10});
    net.edges.push_back({2, 3, dmbps_from_mbps(100.0), 10});
    net.edges.push_back({0, 2, dmbps_from_mbps(100.0), 25});

    PathCatalog catalog = build_catalog(net, 4);

    VirtualRequest app0;
    app0.id = 0;
    app0.components = {{0, ResourceVector::of(1.0, 2048, 20, 0)},
                       {1, ResourceVector::of(0.5, 1024, 10, 1)}};
    app0.links = {{0, 1, dmbps_from_mbps(10.0), 30}};

    VirtualRequest app1;
    app1.id = 1;
    app1.components = {{0, ResourceVector::of(2.0, 4096, 50, 0)}};

    ResidualState state = ResidualState::full_of(net);
    std::vector<BatchRequest> batch = {{&app0, kFixedOne}, {&app1, kFixedOne}};

    SolveOutcome outcome = solve_batch(net, catalog, state, batch, 1024.0, IlpOptions{});
    std::cout << "status: " << to_string(outcome.status) << "\n";
    std::cout << "objective (fixed-point): " << outcome.objective_fixed << "\n";
    for (const auto& [rid, alloc] : outcome.accepted) {
        std::cout << "app " << rid << " deployed\n";
        for (const auto& [cid, nid] : alloc.node_assignment)
            std::cout << "  component " << cid << " -> node " << nid << "\n";
        for (const auto& path : alloc.path_assignment)
            std::cout << "  route " << path.origin << "->" << path.destination << " via "
                      << path.edges.size() << " hop(s), " << path.total_latency_ms << " ms\n";
    }
    return 0;
}
