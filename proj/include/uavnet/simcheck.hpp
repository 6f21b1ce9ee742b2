#pragma once

// Slot-level Monte Carlo oracle. Interference is summed from the sampled
// co-channel transmitters every slot; no Gamma approximation is involved.

#include "uavnet/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uavnet {

/// Integer event counts of one node over the measured slots.
struct NodeCounts {
    std::uint64_t slots = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t carried_in = 0;  ///< packets already queued when measurement started
    std::uint64_t delivered = 0;
    std::uint64_t outages = 0;
    std::uint64_t overflow = 0;
    std::uint64_t expired = 0;
    std::uint64_t queued = 0;      ///< packets left in the queue at the end
    std::uint64_t eligible_slots = 0;    ///< slots whose best channel cleared the threshold
    std::uint64_t backlogged_slots = 0;  ///< slots that started with a queued packet

    std::uint64_t departures() const { return delivered + outages; }
    /// arrivals + carried_in == departures + overflow + expired + queued.
    bool conserved() const { return arrivals + carried_in == departures() + overflow + expired + queued; }
    NodeCounts& operator+=(const NodeCounts& o);
};

struct Estimate {
    double value = 0.0;
    double half_width = 0.0;  ///< 95% confidence half-width
};

struct NodeEstimates {
    Estimate mu;
    Estimate p_dly;
    Estimate p_ov;
    Estimate p_out;
    Estimate r_n;
};

struct SimReport {
    std::vector<std::string> ids;
    std::vector<NodeCounts> counts;
    std::vector<NodeEstimates> estimates;
    std::uint64_t slots_simulated = 0;  ///< measured slots summed over replications
    int replications = 1;
    OutageConvention convention = OutageConvention::per_slot;
};

/// Wilson 95% interval half-width for k successes out of n; positive for n > 0.
double wilson_half_width(std::uint64_t k, std::uint64_t n);

/// Runs cfg.replications independent replications (concurrently) and pools the counts.
SimReport simulate(const NetworkModel& model, const PolicyVector& policy, const SimConfig& cfg);

/// Single queue served with probability mu per slot and no outage, for checking
/// the queue-loss formulas in isolation.
NodeCounts simulate_queue(const TrafficParams& traffic, double mu, std::uint64_t slots, std::uint64_t warmup,
                          std::uint64_t seed);

NodeEstimates estimate(const NodeCounts& c, double slot, OutageConvention convention);

} // namespace uavnet
