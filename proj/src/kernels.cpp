#include "uavnet/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace uavnet::kernels {

namespace {

struct Range {
    std::uint64_t begin;
    std::uint64_t end;
};

Range substream_range(std::uint64_t total, std::size_t stream) {
    const std::uint64_t base = total / kSubStreams;
    const std::uint64_t extra = total % kSubStreams;
    const std::uint64_t begin = stream * base + std::min<std::uint64_t>(stream, extra);
    return {begin, begin + base + (stream < extra ? 1 : 0)};
}

double one_sample(std::span<const Interferer> interferers, int channels, Rng& rng,
                  std::normal_distribution<double>& normal) {
    const double landing = 1.0 / channels;
    double total = 0.0;
    for (const Interferer& m : interferers) {
        if (uniform01(rng) >= landing) continue;
        const double x = sample_best_channel(m.fading, channels, rng, normal).amplitude;
        if (x >= m.beta) total += m.rx_power_gain * x * x;
    }
    return total;
}

struct Sums {
    double s1 = 0.0;
    double s2 = 0.0;
};

Sums moment_stream(std::span<const Interferer> interferers, int channels, std::uint64_t samples,
                   std::uint64_t seed, std::size_t stream) {
    const Range r = substream_range(samples, stream);
    Rng rng(substream_seed(seed, stream));
    std::normal_distribution<double> normal;
    Sums sums;
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
        const double v = one_sample(interferers, channels, rng, normal);
        sums.s1 += v;
        sums.s2 += v * v;
    }
    return sums;
}

void sample_stream(std::span<const Interferer> interferers, int channels, std::uint64_t samples,
                   std::uint64_t seed, std::size_t stream, std::vector<double>& out) {
    const Range r = substream_range(samples, stream);
    Rng rng(substream_seed(seed, stream));
    std::normal_distribution<double> normal;
    for (std::uint64_t i = r.begin; i < r.end; ++i) out[i] = one_sample(interferers, channels, rng, normal);
}

std::uint64_t transmit_stream(const Fading& fading, double beta, int channels, std::uint64_t trials,
                              std::uint64_t seed, std::size_t stream) {
    const Range r = substream_range(trials, stream);
    Rng rng(substream_seed(seed, stream));
    std::normal_distribution<double> normal;
    std::uint64_t hits = 0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
        if (sample_best_channel(fading, channels, rng, normal).amplitude >= beta) ++hits;
    }
    return hits;
}

InterferenceMoments combine(const std::array<Sums, kSubStreams>& partial, std::uint64_t samples) {
    Sums total;
    for (const Sums& s : partial) {
        total.s1 += s.s1;
        total.s2 += s.s2;
    }
    const double n = static_cast<double>(samples);
    return {total.s1 / n, total.s2 / n};
}

} // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

InterferenceMoments moments_serial(std::span<const Interferer> interferers, int channels,
                                   std::uint64_t samples, std::uint64_t seed) {
    if (interferers.empty() || samples == 0) return {};
    std::array<Sums, kSubStreams> partial{};
    for (std::size_t s = 0; s < kSubStreams; ++s) {
        partial[s] = moment_stream(interferers, channels, samples, seed, s);
    }
    return combine(partial, samples);
}

InterferenceMoments moments_parallel(std::span<const Interferer> interferers, int channels,
                                     std::uint64_t samples, std::uint64_t seed) {
    if (interferers.empty() || samples == 0) return {};
    std::array<Sums, kSubStreams> partial{};
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < kSubStreams; ++s) {
        partial[s] = moment_stream(interferers, channels, samples, seed, s);
    }
    return combine(partial, samples);
}

std::vector<double> samples_serial(std::span<const Interferer> interferers, int channels,
                                   std::uint64_t samples, std::uint64_t seed) {
    std::vector<double> out(samples, 0.0);
    if (interferers.empty()) return out;
    for (std::size_t s = 0; s < kSubStreams; ++s) sample_stream(interferers, channels, samples, seed, s, out);
    return out;
}

std::vector<double> samples_parallel(std::span<const Interferer> interferers, int channels,
                                     std::uint64_t samples, std::uint64_t seed) {
    std::vector<double> out(samples, 0.0);
    if (interferers.empty()) return out;
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < kSubStreams; ++s) sample_stream(interferers, channels, samples, seed, s, out);
    return out;
}

std::uint64_t count_transmit_serial(const Fading& fading, double beta, int channels,
                                    std::uint64_t trials, std::uint64_t seed) {
    std::uint64_t hits = 0;
    for (std::size_t s = 0; s < kSubStreams; ++s) hits += transmit_stream(fading, beta, channels, trials, seed, s);
    return hits;
}

std::uint64_t count_transmit_parallel(const Fading& fading, double beta, int channels,
                                      std::uint64_t trials, std::uint64_t seed) {
    std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::size_t s = 0; s < kSubStreams; ++s) hits += transmit_stream(fading, beta, channels, trials, seed, s);
    return hits;
}

} // namespace uavnet::kernels
