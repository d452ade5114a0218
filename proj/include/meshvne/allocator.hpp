#pragma once

// Common allocator interface. Every batch, the simulator hands the pending
// requests plus the current residual state to an allocator, which returns the
// subset it accepts together with full placements. Accepted allocations must
// be jointly feasible against the residual state it was given.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "meshvne/core.hpp"
#include "meshvne/paths.hpp"

namespace meshvne {

struct BatchRequest {
    const VirtualRequest* request = nullptr;
    std::int64_t reward_fixed = 0;
};

struct BatchContext {
    const SubstrateNetwork* network = nullptr;
    const PathCatalog* catalog = nullptr;
    const ResidualState* residual = nullptr;
    TimeMs now = 0;
    double alpha = 1024.0;
};

struct BatchOutcome {
    std::map<RequestId, Allocation> accepted;
    std::int64_t objective_fixed = 0;  // sum of accepted rewards minus path penalties
    std::string status;                // "optimal", "time_limit", "heuristic", or "evolved"
    std::int64_t work = 0;             // allocator-specific effort counter
};

class Allocator {
  public:
    virtual ~Allocator() = default;
    virtual std::string name() const = 0;
    virtual BatchOutcome allocate(const BatchContext& ctx,
                                  const std::vector<BatchRequest>& batch) = 0;
};

// Path-cost penalty of a full allocation under weight alpha.
inline std::int64_t allocation_penalty_fixed(const VirtualRequest& req, const Allocation& alloc,
                                             double alpha) {
    std::int64_t total = 0;
    const int link_count = static_cast<int>(req.links.size());
    for (size_t i = 0; i < req.links.size(); ++i)
        total += penalty_fixed_point(alpha, link_count, alloc.path_assignment[i].total_latency_ms,
                                     req.links[i].latency_bound_ms);
    return total;
}

inline std::vector<BatchRequest> make_batch_requests(const std::vector<const VirtualRequest*>& pending,
                                                     TimeMs now, TimeMs reward_tau_ms,
                                                     double reward_exponent_cap) {
    std::vector<BatchRequest> out;
    out.reserve(pending.size());
    for (const VirtualRequest* r : pending)
        out.push_back(BatchRequest{r, reward_fixed_point(now, r->arrival_ms, reward_tau_ms,
                                                         reward_exponent_cap)});
    return out;
}

}  // namespace meshvne
