#pragma once

namespace uavnet {

struct LossFlags {
    bool unstable = false;  ///< offered load >= 1 for the node's threshold
    bool clamped = false;   ///< first-order loss exceeded 1; throughput clamped to 0

    bool operator==(const LossFlags&) const = default;
};

/// Loss components and expected throughput of one source node under one policy.
struct LossBreakdown {
    double p_dly = 0.0;
    double p_ov = 0.0;
    double p_out = 0.0;
    double p_loss_exact = 0.0;
    double p_loss_first_order = 0.0;
    double r_n = 0.0;        ///< first-order throughput, packets/s (the optimization objective)
    double r_n_exact = 0.0;  ///< lambda_n (1 - p_loss_exact)
    double r_n_unclamped = 0.0;  ///< lambda_n (1 - p_dly - p_ov - p_out), may be negative
    double mu = 0.0;         ///< per-slot transmission probability
    LossFlags flags;
};

/// Overall loss 1 - (1 - p_ov)(1 - p_dly)(1 - p_out), in the sequential form.
double loss_exact(double p_dly, double p_ov, double p_out);

/// Builds a breakdown from the three component probabilities.
LossBreakdown compose_losses(double lambda_n, double mu, double p_dly, double p_ov, double p_out,
                             bool unstable);

} // namespace uavnet
