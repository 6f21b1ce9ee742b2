#pragma once

#include "uavnet/geometry.hpp"

#include <optional>
#include <string_view>

namespace uavnet {

/// Radio and channel-model constants shared by every link.
struct RadioParams {
    double carrier_freq = 2.4e9;
    double d0 = 10.0;
    double alpha_los = 2.0;
    double alpha_nlos = 3.5;
    double k_los = 15.0;
    double k_nlos = 1.0;
    double omega = 2.0;
    int num_channels = 14;
    double tx_power = 0.5;

    void validate() const;
};

enum class FadingKind { rician, rayleigh };

std::string_view to_string(FadingKind kind);

/// Small-scale fading amplitude distribution of one channel. For Rician fading
/// `param` is the LoS amplitude b = sqrt(2K) with unit scatter; for Rayleigh it is
/// the mean power Omega.
struct Fading {
    FadingKind kind = FadingKind::rayleigh;
    double param = 2.0;

    static Fading rician(double b) { return {FadingKind::rician, b}; }
    static Fading rayleigh(double omega) { return {FadingKind::rayleigh, omega}; }

    bool operator==(const Fading&) const = default;
};

enum class LinkTypeSource { configured, threshold_rule };

struct LinkChannel {
    double distance = 0.0;
    double p_los = 0.0;
    double path_gain = 0.0;  ///< square root of the path loss
    double k_factor = 1.0;
    Fading fading;
    LinkTypeSource link_type_source = LinkTypeSource::configured;
};

double carrier_wavelength(const RadioParams& rp);
double path_loss_exponent(double p_los, const RadioParams& rp);

/// Single-slope path-loss amplitude sqrt(c (d0/d)^alpha). Throws DomainError when d < d0.
double path_gain(double d, double alpha, const RadioParams& rp);

double rician_k(double p_los, const RadioParams& rp);

double fading_pdf(const Fading& fading, double x);
double fading_cdf(const Fading& fading, double x);
/// 1 - fading_cdf, evaluated directly.
double fading_tail(const Fading& fading, double x);

/// Density of the largest of `channels` i.i.d. fading amplitudes.
double best_channel_pdf(const Fading& fading, double x, int channels);

/// Amplitude beyond which the best-channel density is below 1e-12 (and falls monotonically).
double fading_tail_cutoff(const Fading& fading, int channels);

/// Probability that the best of `channels` amplitudes reaches `beta`: 1 - CDF(beta)^F.
double transmit_prob(const Fading& fading, double beta, int channels);

/// Largest threshold that keeps the queue stable, i.e. transmit_prob(beta) = lambda * T_slt.
/// Throws InfeasibleTrafficError when lambda * T_slt >= 1.
double beta_upper_bound(const Fading& fading, double lambda_n, double slot, int channels);

/// Derives the channel of the link tx -> rx. With no configured family the link is
/// Rician when P_LoS >= 0.5 and Rayleigh otherwise.
LinkChannel make_link(const NodePosition& tx, const NodePosition& rx, const Environment& env,
                      const RadioParams& rp, std::optional<FadingKind> configured = std::nullopt);

} // namespace uavnet
