#include "uavnet/channel.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavnet {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

void require_threshold(double x, const char* what) {
    if (std::isnan(x) || x < 0.0) throw DomainError(std::string(what) + ": amplitude must be >= 0");
}

} // namespace

void RadioParams::validate() const {
    if (!(carrier_freq > 0.0)) throw ValidationError("radio: carrier_freq must be positive");
    if (!(d0 > 0.0)) throw ValidationError("radio: d0 must be positive");
    if (!(alpha_los > 0.0) || !(alpha_nlos >= alpha_los)) {
        throw ValidationError("radio: require alpha_nlos >= alpha_los > 0");
    }
    if (!(k_nlos > 0.0) || !(k_los >= k_nlos)) throw ValidationError("radio: require k_los >= k_nlos > 0");
    if (!(omega > 0.0)) throw ValidationError("radio: omega must be positive");
    if (num_channels < 1) throw ValidationError("radio: num_channels must be at least 1");
    if (!(tx_power > 0.0)) throw ValidationError("radio: tx_power must be positive");
}

std::string_view to_string(FadingKind kind) {
    return kind == FadingKind::rician ? "rician" : "rayleigh";
}

double carrier_wavelength(const RadioParams& rp) {
    return kSpeedOfLight / rp.carrier_freq;
}

double path_loss_exponent(double p_los, const RadioParams& rp) {
    return rp.alpha_los * p_los + rp.alpha_nlos * (1.0 - p_los);
}

double path_gain(double d, double alpha, const RadioParams& rp) {
    if (!(d >= rp.d0)) {
        throw DomainError("path_gain: distance below the reference distance d0; clamp or reject the scenario");
    }
    const double wavelength = carrier_wavelength(rp);
    const double c = wavelength * wavelength / (16.0 * std::numbers::pi * std::numbers::pi * rp.d0 * rp.d0);
    return std::sqrt(c * std::pow(rp.d0 / d, alpha));
}

double rician_k(double p_los, const RadioParams& rp) {
    return rp.k_nlos * std::exp(std::log(rp.k_los / rp.k_nlos) * p_los * p_los);
}

double fading_pdf(const Fading& fading, double x) {
    require_threshold(x, "fading_pdf");
    if (std::isinf(x)) return 0.0;
    if (fading.kind == FadingKind::rayleigh) {
        return 2.0 * x / fading.param * std::exp(-x * x / fading.param);
    }
    const double b = fading.param;
    return x * std::exp(-0.5 * (x - b) * (x - b)) * numerics::bessel_i0_scaled(b * x);
}

double fading_cdf(const Fading& fading, double x) {
    require_threshold(x, "fading_cdf");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (fading.kind == FadingKind::rayleigh) return -std::expm1(-x * x / fading.param);
    return 1.0 - numerics::marcum_q1(fading.param, x);
}

double fading_tail(const Fading& fading, double x) {
    require_threshold(x, "fading_tail");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (fading.kind == FadingKind::rayleigh) return std::exp(-x * x / fading.param);
    return numerics::marcum_q1(fading.param, x);
}

double best_channel_pdf(const Fading& fading, double x, int channels) {
    const double pdf = fading_pdf(fading, x);
    if (channels == 1 || pdf == 0.0) return pdf;
    return channels * pdf * std::pow(fading_cdf(fading, x), channels - 1);
}

double fading_tail_cutoff(const Fading& fading, int channels) {
    // Envelope: Rician pdf <= x exp(-(x-b)^2/2), Rayleigh pdf = 2x/Omega exp(-x^2/Omega).
    auto envelope = [&](double x) {
        if (fading.kind == FadingKind::rayleigh) {
            return channels * 2.0 * x / fading.param * std::exp(-x * x / fading.param);
        }
        const double b = fading.param;
        return channels * x * std::exp(-0.5 * (x - b) * (x - b));
    };
    double x = fading.kind == FadingKind::rayleigh ? std::sqrt(fading.param) : fading.param + 1.0;
    while (envelope(x) >= 1e-12) x += 0.25;
    return x;
}

double transmit_prob(const Fading& fading, double beta, int channels) {
    if (channels < 1) throw DomainError("transmit_prob: need at least one channel");
    if (beta == 0.0) return 1.0;
    const double tail = fading_tail(fading, beta);
    if (tail >= 1.0) return 1.0;
    // 1 - (1 - tail)^F, accurate for small tails
    return -std::expm1(channels * std::log1p(-tail));
}

double beta_upper_bound(const Fading& fading, double lambda_n, double slot, int channels) {
    const double load = lambda_n * slot;
    if (!(load < 1.0)) {
        throw InfeasibleTrafficError("beta_upper_bound: lambda * T_slt >= 1, no threshold keeps the queue stable");
    }
    if (!(load > 0.0)) throw DomainError("beta_upper_bound: lambda * T_slt must be positive");
    if (channels < 1) throw DomainError("beta_upper_bound: need at least one channel");

    // Per-channel tail probability at which transmit_prob equals the offered load.
    const double tail = -std::expm1(std::log1p(-load) / channels);
    if (fading.kind == FadingKind::rayleigh) {
        return std::sqrt(-fading.param * std::log(tail));
    }
    const double b = fading.param;
    double lo = 0.0;
    double hi = b + 1.0;
    while (numerics::marcum_q1(b, hi) > tail) hi *= 2.0;
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (numerics::marcum_q1(b, mid) > tail) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LinkChannel make_link(const NodePosition& tx, const NodePosition& rx, const Environment& env,
                      const RadioParams& rp, std::optional<FadingKind> configured) {
    LinkChannel link;
    link.distance = distances(tx, rx).total;
    link.p_los = p_los(tx, rx, env);
    link.path_gain = path_gain(link.distance, path_loss_exponent(link.p_los, rp), rp);
    link.k_factor = rician_k(link.p_los, rp);
    const FadingKind kind =
        configured.value_or(link.p_los >= 0.5 ? FadingKind::rician : FadingKind::rayleigh);
    link.link_type_source = configured ? LinkTypeSource::configured : LinkTypeSource::threshold_rule;
    link.fading = kind == FadingKind::rician ? Fading::rician(std::sqrt(2.0 * link.k_factor))
                                             : Fading::rayleigh(rp.omega);
    return link;
}

} // namespace uavnet
