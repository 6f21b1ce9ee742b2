#include "uavnet/interference.hpp"

#include "uavnet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uavnet {

namespace {
constexpr double kBoltzmann = 1.380649e-23;
constexpr std::uint64_t kMinMomentSamples = 100000;
} // namespace

void InterferenceModel::validate() const {
    if (!(gamma_th > 0.0)) throw ValidationError("interference: gamma_th must be positive");
    if (!(noise_power > 0.0)) throw ValidationError("interference: noise power must be positive");
    if (moment_samples < kMinMomentSamples) {
        throw ValidationError("interference: moment_samples must be at least 100000");
    }
}

double thermal_noise(double temperature_kelvin, double bandwidth_hz) {
    return kBoltzmann * temperature_kelvin * bandwidth_hz;
}

InterferenceMoments interference_moments(std::span<const Interferer> interferers, int channels,
                                         std::uint64_t samples, std::uint64_t seed) {
    if (samples < kMinMomentSamples) throw DomainError("interference_moments: need at least 1e5 samples");
    if (channels < 1) throw DomainError("interference_moments: need at least one channel");
    return kernels::moments_parallel(interferers, channels, samples, seed);
}

GammaFit gamma_fit(double m1, double m2) {
    if (!(m1 > 0.0)) throw DomainError("gamma_fit: mean must be positive");
    const double variance = m2 - m1 * m1;
    if (!(variance > 0.0)) throw DomainError("gamma_fit: degenerate variance");
    return {m1 * m1 / variance, variance / m1};
}

std::optional<GammaFit> fit_interference(const InterferenceMoments& moments) {
    if (moments.m1 == 0.0) return std::nullopt;
    return gamma_fit(moments.m1, moments.m2);
}

double interference_ccdf(double x, double shape, double scale) {
    if (!(x > 0.0)) return 1.0;
    return 1.0 - numerics::reg_lower_gamma(shape, x / scale);
}

double p_outage(const LinkChannel& source, double tx_power, double beta, int channels,
                const InterferenceModel& model, const std::optional<GammaFit>& fit,
                const numerics::QuadratureSpec& quad) {
    if (std::isnan(beta) || beta < 0.0) throw DomainError("p_outage: threshold must be >= 0");
    const Fading& fading = source.fading;
    const double cutoff = fading_tail_cutoff(fading, channels);
    const double signal_gain = tx_power * source.path_gain * source.path_gain;

    double value = 0.0;
    if (!fit) {
        // Noise-only SINR fails below x0.
        const double x0 = std::sqrt(model.gamma_th * model.noise_power / signal_gain);
        const double hi = std::min(x0, cutoff);
        if (hi > beta) {
            value = numerics::integrate([&](double x) { return best_channel_pdf(fading, x, channels); },
                                        beta, hi, quad);
        }
    } else if (cutoff > beta) {
        const GammaFit g = *fit;
        auto integrand = [&](double x) {
            const double density = best_channel_pdf(fading, x, channels);
            if (density == 0.0) return 0.0;
            const double margin = signal_gain * x * x / model.gamma_th - model.noise_power;
            return density * interference_ccdf(margin, g.shape, g.scale);
        };
        value = numerics::integrate(integrand, beta, cutoff, quad);
    }

    const double mu = transmit_prob(fading, beta, channels);
    value = std::clamp(value, 0.0, mu);
    if (model.convention == OutageConvention::per_transmission) return mu > 0.0 ? value / mu : 0.0;
    return value;
}

double ks_distance(std::vector<double> samples, const GammaFit& fit) {
    if (samples.empty()) throw DomainError("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double model_cdf = 1.0 - interference_ccdf(samples[i], fit.shape, fit.scale);
        d = std::max({d, (i + 1) / n - model_cdf, model_cdf - i / n});
    }
    return d;
}

} // namespace uavnet
