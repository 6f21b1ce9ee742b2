#pragma once

// Monte Carlo kernels. Every kernel splits its work into a fixed number of
// independent sub-streams; the OpenMP version runs sub-streams concurrently and
// combines partial results in sub-stream order, so it is bit-identical to the
// serial reference regardless of thread count.

#include "uavnet/channel.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace uavnet {

/// One interfering transmitter as seen by a victim receiver.
struct Interferer {
    Fading fading;             ///< fading of the interferer's own link (drives its decision)
    double rx_power_gain = 0;  ///< P_m * path_gain^2 towards the victim
    double beta = 0;           ///< interferer's channel-fading threshold
};

struct InterferenceMoments {
    double m1 = 0.0;
    double m2 = 0.0;
};

namespace kernels {

inline constexpr std::size_t kSubStreams = 64;

using Rng = std::mt19937_64;

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws one fading amplitude.
inline double sample_fading(const Fading& f, Rng& rng, std::normal_distribution<double>& normal) {
    const double g1 = normal(rng);
    const double g2 = normal(rng);
    if (f.kind == FadingKind::rician) return std::hypot(f.param + g1, g2);
    return std::sqrt(0.5 * f.param) * std::hypot(g1, g2);
}

/// Largest of `channels` fading amplitudes and its channel index.
struct BestChannel {
    double amplitude;
    int channel;
};

inline BestChannel sample_best_channel(const Fading& f, int channels, Rng& rng,
                                       std::normal_distribution<double>& normal) {
    BestChannel best{-1.0, 0};
    for (int c = 0; c < channels; ++c) {
        const double x = sample_fading(f, rng, normal);
        if (x > best.amplitude) best = {x, c};
    }
    return best;
}

/// Samples of the aggregate interference on one tagged channel. Per sample each
/// interferer lands on the tagged channel with probability 1/F (its best channel is
/// uniform by symmetry); if it does, it draws F amplitudes and contributes
/// rx_power_gain * max^2 when the max reaches its threshold.
InterferenceMoments moments_serial(std::span<const Interferer> interferers, int channels,
                                   std::uint64_t samples, std::uint64_t seed);
InterferenceMoments moments_parallel(std::span<const Interferer> interferers, int channels,
                                     std::uint64_t samples, std::uint64_t seed);

std::vector<double> samples_serial(std::span<const Interferer> interferers, int channels,
                                   std::uint64_t samples, std::uint64_t seed);
std::vector<double> samples_parallel(std::span<const Interferer> interferers, int channels,
                                     std::uint64_t samples, std::uint64_t seed);

/// Number of trials (out of `trials`) in which the best of F amplitudes reaches beta.
std::uint64_t count_transmit_serial(const Fading& fading, double beta, int channels,
                                    std::uint64_t trials, std::uint64_t seed);
std::uint64_t count_transmit_parallel(const Fading& fading, double beta, int channels,
                                      std::uint64_t trials, std::uint64_t seed);

} // namespace kernels
} // namespace uavnet
