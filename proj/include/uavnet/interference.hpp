#pragma once

#include "uavnet/channel.hpp"
#include "uavnet/kernels.hpp"
#include "uavnet/numerics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uavnet {

enum class OutageConvention {
    per_slot,          ///< P(transmit and SINR < threshold), the value used in the throughput sum
    per_transmission,  ///< the same probability conditioned on a transmission
};

struct InterferenceModel {
    double gamma_th = 10.0;
    double noise_power = 0.0;  ///< sigma^2 = k T W, watts
    std::uint64_t moment_samples = 200000;
    std::uint64_t moment_seed = 1;
    OutageConvention convention = OutageConvention::per_slot;

    void validate() const;
};

struct GammaFit {
    double shape = 1.0;
    double scale = 1.0;
};

/// Thermal noise power k T W.
double thermal_noise(double temperature_kelvin, double bandwidth_hz);

/// Monte Carlo estimate of E[I] and E[I^2] on a tagged channel. Deterministic in
/// (interferers, channels, samples, seed). Requires samples >= 1e5.
InterferenceMoments interference_moments(std::span<const Interferer> interferers, int channels,
                                         std::uint64_t samples, std::uint64_t seed);

/// Two-moment Gamma match: k = m1^2 / var, theta = var / m1.
/// Throws DomainError when m1 <= 0 or the variance is not positive.
GammaFit gamma_fit(double m1, double m2);

/// Gamma fit of the interference, or nullopt when no interferer ever lands (zero mean).
std::optional<GammaFit> fit_interference(const InterferenceMoments& moments);

/// P(I > x) under the fitted Gamma law; 1 for x <= 0.
double interference_ccdf(double x, double shape, double scale);

/// Outage probability of the source link for threshold beta: the integral over the
/// transmit region of the best-channel amplitude density times P(I > P h^2 x^2 / gamma_th - sigma^2).
/// With no fit (no active interferers) only thermal noise can cause an outage.
double p_outage(const LinkChannel& source, double tx_power, double beta, int channels,
                const InterferenceModel& model, const std::optional<GammaFit>& fit,
                const numerics::QuadratureSpec& quad = {});

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and a Gamma law.
double ks_distance(std::vector<double> samples, const GammaFit& fit);

} // namespace uavnet
