#include "uavnet/queueing.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/numerics.hpp"

#include <cmath>

namespace uavnet {

namespace {

void require_mu(double mu, const char* what) {
    if (std::isnan(mu) || mu < 0.0 || mu > 1.0) {
        throw DomainError(std::string(what) + ": transmission probability must lie in [0, 1]");
    }
}

// expm1(z) / z with the removable singularity filled in.
double expm1_ratio(double z) {
    if (std::abs(z) < 1e-6) return 1.0 + z / 2.0 + z * z / 6.0;
    return std::expm1(z) / z;
}

} // namespace

void TrafficParams::validate() const {
    if (!(lambda_n > 0.0) || !(slot > 0.0) || !(deadline > 0.0) || !(buffer_eta > 0.0)) {
        throw ValidationError("traffic: lambda, slot, deadline and buffer_eta must be strictly positive");
    }
    if (!std::isfinite(lambda_n) || !std::isfinite(slot)) {
        throw ValidationError("traffic: lambda and slot must be finite");
    }
    if (!(lambda_n * slot < 1.0)) {
        throw ValidationError("traffic: lambda * slot must be below 1 for any threshold to be stable");
    }
}

QueueLoss p_delay(double mu, const TrafficParams& tp) {
    require_mu(mu, "p_delay");
    const double service_rate = mu / tp.slot;
    if (service_rate <= tp.lambda_n) return {1.0, mu == 0.0 || service_rate < tp.lambda_n};
    if (std::isinf(tp.deadline)) return {0.0, false};
    return {std::exp(-(service_rate - tp.lambda_n) * tp.deadline), false};
}

double overflow_probability(double rho, double buffer_eta) {
    if (std::isinf(buffer_eta)) return rho < 1.0 ? 0.0 : 1.0 / (1.0 + buffer_eta);
    const double u = 1.0 - rho;
    const double z = buffer_eta * u;
    if (z > 50.0) {
        const double e = std::exp(-z);
        return u * e / (1.0 - rho * e);
    }
    // u e^{-cu} / (1 - rho e^{-cu}) == 1 / (1 + (e^{cu} - 1) / u)
    return 1.0 / (1.0 + buffer_eta * expm1_ratio(z));
}

QueueLoss p_overflow(double mu, const TrafficParams& tp) {
    require_mu(mu, "p_overflow");
    if (mu == 0.0) return {1.0, true};
    const double rho = tp.offered_load(mu);
    if (rho > 1.0) return {1.0, true};
    return {overflow_probability(rho, tp.buffer_eta), false};
}

double markov_chain_pi(std::size_t i, double mu, const TrafficParams& tp) {
    require_mu(mu, "markov_chain_pi");
    if (i == 0) return 1.0;
    const double rho = tp.offered_load(mu);
    return std::pow(rho, static_cast<double>(i)) *
           numerics::reg_lower_gamma(static_cast<double>(i), tp.buffer_eta);
}

} // namespace uavnet
