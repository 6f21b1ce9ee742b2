#pragma once

#include <cstddef>

namespace uavnet {

/// Per-node traffic and queue parameters. `buffer_eta` is the product of the buffer
/// capacity and the packet-length rate parameter; only the product matters.
/// `deadline` and `buffer_eta` may be +infinity.
struct TrafficParams {
    double lambda_n = 80.0;
    double slot = 0.005;
    double deadline = 0.08;
    double buffer_eta = 100.0;

    void validate() const;
    double offered_load(double mu) const { return lambda_n * slot / mu; }
};

/// A queue-side loss probability. `unstable` is set when the offered load is >= 1;
/// the probability is then reported as 1.
struct QueueLoss {
    double probability = 0.0;
    bool unstable = false;
};

/// Probability that an M/M/1 sojourn with service rate mu / T_slt exceeds the deadline.
QueueLoss p_delay(double mu, const TrafficParams& tp);

/// Buffer-overflow probability with offered load rho = lambda T_slt / mu and
/// exponential packet lengths. Continuous through rho = 1, where it equals 1 / (1 + B eta).
QueueLoss p_overflow(double mu, const TrafficParams& tp);

/// Same expression as p_overflow, parameterized directly by the offered load.
double overflow_probability(double rho, double buffer_eta);

/// Unnormalized stationary weight of state i of the admission-controlled chain
/// (pi_0 = 1): rho^i * P(Poisson(B eta) >= i).
double markov_chain_pi(std::size_t i, double mu, const TrafficParams& tp);

} // namespace uavnet
