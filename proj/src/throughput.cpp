#include "uavnet/throughput.hpp"

#include "uavnet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uavnet {

double loss_exact(double p_dly, double p_ov, double p_out) {
    for (double p : {p_dly, p_ov, p_out}) {
        if (std::isnan(p) || p < 0.0 || p > 1.0) throw DomainError("loss_exact: probabilities must lie in [0, 1]");
    }
    return p_ov + (1.0 - p_ov) * p_dly + (1.0 - p_ov) * (1.0 - p_dly) * p_out;
}

LossBreakdown compose_losses(double lambda_n, double mu, double p_dly, double p_ov, double p_out,
                             bool unstable) {
    LossBreakdown b;
    b.mu = mu;
    b.p_dly = p_dly;
    b.p_ov = p_ov;
    b.p_out = p_out;
    b.p_loss_exact = std::clamp(loss_exact(p_dly, p_ov, p_out), 0.0, 1.0);
    const double first_order = p_dly + p_ov + p_out;
    b.p_loss_first_order = std::min(1.0, first_order);
    b.flags.unstable = unstable;
    b.flags.clamped = first_order > 1.0;
    b.r_n = lambda_n * (1.0 - b.p_loss_first_order);
    b.r_n_exact = lambda_n * (1.0 - b.p_loss_exact);
    b.r_n_unclamped = lambda_n * (1.0 - first_order);
    return b;
}

} // namespace uavnet
