#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnet/errors.hpp"
#include "uavnet/interference.hpp"
#include "uavnet/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace uavnet;

namespace {

LinkChannel source_link(double path_gain, Fading f) {
    LinkChannel l;
    l.distance = 40.0;
    l.p_los = 0.8;
    l.path_gain = path_gain;
    l.fading = f;
    return l;
}

InterferenceModel model(double gamma_th) {
    InterferenceModel m;
    m.gamma_th = gamma_th;
    m.noise_power = thermal_noise(290.0, 20e6);
    return m;
}

} // namespace

TEST_CASE("thermal noise") {
    CHECK(thermal_noise(290.0, 20e6) == doctest::Approx(1.380649e-23 * 290.0 * 20e6).epsilon(1e-12));
}

TEST_CASE("moments of an empty or silent interferer set are zero") {
    const auto none = interference_moments({}, 14, 100000, 1);
    CHECK(none.m1 == 0.0);
    CHECK(none.m2 == 0.0);
    const std::vector<Interferer> silent = {{Fading::rayleigh(2.0), 1e-6, 1e3}, {Fading::rician(3.0), 2e-6, 1e3}};
    const auto m = interference_moments(silent, 14, 100000, 1);
    CHECK(m.m1 == 0.0);
    CHECK(m.m2 == 0.0);
    CHECK_THROWS_AS(interference_moments(silent, 14, 1000, 1), DomainError);
}

TEST_CASE("single Rayleigh interferer, beta = 0, F = 1 has mean P h^2 Omega") {
    const double gain = 3e-7;
    const std::vector<Interferer> one = {{Fading::rayleigh(2.0), gain, 0.0}};
    const std::uint64_t n = 400000;
    const auto m = interference_moments(one, 1, n, 99);
    const double se = std::sqrt((m.m2 - m.m1 * m.m1) / n);
    CHECK(std::abs(m.m1 - gain * 2.0) <= 3.0 * se);
}

TEST_CASE("moment kernels: parallel is bit-identical to serial and deterministic") {
    const std::vector<Interferer> set = {
        {Fading::rayleigh(2.0), 1e-7, 1.5}, {Fading::rician(3.2), 4e-7, 3.0}, {Fading::rician(4.5), 2e-7, 4.0}};
    for (std::uint64_t seed : {1ull, 7ull, 123456789ull}) {
        const auto a = kernels::moments_serial(set, 14, 100000, seed);
        const auto b = kernels::moments_parallel(set, 14, 100000, seed);
        CHECK(a.m1 == b.m1);
        CHECK(a.m2 == b.m2);
        const auto c = kernels::moments_parallel(set, 14, 100000, seed);
        CHECK(b.m1 == c.m1);
        const auto s1 = kernels::samples_serial(set, 14, 5000, seed);
        const auto s2 = kernels::samples_parallel(set, 14, 5000, seed);
        CHECK(s1 == s2);
    }
    CHECK(kernels::count_transmit_serial(Fading::rician(3.0), 3.5, 14, 300000, 5) ==
          kernels::count_transmit_parallel(Fading::rician(3.0), 3.5, 14, 300000, 5));
}

TEST_CASE("gamma fit") {
    auto f = gamma_fit(2.0, 6.0);
    CHECK(f.shape == doctest::Approx(2.0));
    CHECK(f.scale == doctest::Approx(1.0));
    f = gamma_fit(3.0, 18.0);
    CHECK(f.shape == doctest::Approx(1.0));
    CHECK_THROWS_AS(gamma_fit(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_fit(2.0, 4.0), DomainError);
    CHECK_FALSE(fit_interference({0.0, 0.0}).has_value());
}

TEST_CASE("gamma fit of sampled moments recovers an exponential law") {
    // F = 1, beta = 0: the interferer always transmits on the tagged channel and
    // its power is exponential with mean gain * Omega, i.e. Gamma(1, gain * Omega).
    const double gain = 5e-7;
    const std::vector<Interferer> one = {{Fading::rayleigh(2.0), gain, 0.0}};
    const auto fit = fit_interference(interference_moments(one, 1, 1000000, 3));
    REQUIRE(fit.has_value());
    CHECK(fit->shape == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fit->scale == doctest::Approx(gain * 2.0).epsilon(0.02));
}

TEST_CASE("interference ccdf") {
    CHECK(interference_ccdf(0.0, 2.0, 1.0) == 1.0);
    CHECK(interference_ccdf(-3.0, 2.0, 1.0) == 1.0);
    CHECK(interference_ccdf(1e6, 2.0, 1.0) == doctest::Approx(0.0));
    CHECK(interference_ccdf(2.0, 1.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(interference_ccdf(2.0, 1.0, 2.0) == doctest::Approx(0.3679).epsilon(1e-4));
}

TEST_CASE("outage without interferers is the noise-limited mass") {
    const Fading f = Fading::rician(2.0);
    const double pg = 5e-6;
    const double tx_power = 0.5;
    const int F = 3;
    InterferenceModel im = model(1e3);
    const double x0 = std::sqrt(im.gamma_th * im.noise_power / (tx_power * pg * pg));
    REQUIRE(x0 > 0.5);
    for (double beta : {0.0, 0.5 * x0, 0.9 * x0}) {
        const double expect = std::pow(fading_cdf(f, x0), F) - std::pow(fading_cdf(f, beta), F);
        CHECK(p_outage(source_link(pg, f), tx_power, beta, F, im, std::nullopt) == doctest::Approx(expect).epsilon(1e-8));
    }
    CHECK(p_outage(source_link(pg, f), tx_power, x0, F, im, std::nullopt) == 0.0);
    CHECK(p_outage(source_link(pg, f), tx_power, 1.2 * x0, F, im, std::nullopt) == 0.0);
}

TEST_CASE("outage integral matches an independent quadrature") {
    const Fading f = Fading::rician(3.0);
    const double pg = 2e-4;
    const double tx_power = 0.5;
    const int F = 14;
    const GammaFit fit{0.4, 2e-8};
    const InterferenceModel im = model(10.0);
    auto integrand = [&](double x) {
        const double t = tx_power * pg * pg * x * x / im.gamma_th - im.noise_power;
        const double v = t <= 0.0 ? 1.0 : boost::math::gamma_q(fit.shape, t / fit.scale);
        return best_channel_pdf(f, x, F) * v;
    };
    for (double beta : {0.0, 2.0, 3.5, 4.5}) {
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, beta, 15.0, 20, 1e-13);
        CAPTURE(beta);
        CHECK(p_outage(source_link(pg, f), tx_power, beta, F, im, fit) == doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("outage bounds, conventions and monotonicity") {
    const Fading f = Fading::rician(3.0);
    const double pg = 2e-4;
    const LinkChannel link = source_link(pg, f);
    const GammaFit fit{0.4, 2e-8};
    const InterferenceModel im = model(10.0);
    for (double beta : {0.0, 1.0, 3.0, 4.0, 5.0}) {
        const double mu = transmit_prob(f, beta, 14);
        const double p = p_outage(link, 0.5, beta, 14, im, fit);
        CHECK(p >= 0.0);
        CHECK(p <= mu);
        InterferenceModel pt = im;
        pt.convention = OutageConvention::per_transmission;
        CHECK(p_outage(link, 0.5, beta, 14, pt, fit) == doctest::Approx(p / mu).epsilon(1e-12));
    }
    CHECK(p_outage(link, 0.5, 0.0, 14, model(1e-12), fit) < 1e-9);

    double prev = 0.0;
    for (double g : {0.1, 1.0, 5.0, 10.0, 20.0, 100.0}) {
        const double p = p_outage(link, 0.5, 2.0, 14, model(g), fit);
        CHECK(p >= prev);
        prev = p;
    }

    // Raising an interferer's threshold lowers its activity and the outage.
    std::vector<Interferer> set = {{Fading::rayleigh(2.0), 4e-8, 0.0}, {Fading::rician(3.0), 3e-8, 0.0}};
    prev = 2.0;
    for (double b : {0.0, 1.0, 2.0, 2.5, 2.57}) {
        set[0].beta = b;
        const auto fitb = fit_interference(interference_moments(set, 14, 200000, 11));
        const double p = p_outage(link, 0.5, 3.0, 14, im, fitb);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("ks distance") {
    const GammaFit fit{2.0, 1.5};
    std::mt19937_64 rng(5);
    std::gamma_distribution<double> g(fit.shape, fit.scale);
    std::vector<double> s(100000);
    for (double& x : s) x = g(rng);
    CHECK(ks_distance(s, fit) < 0.01);
    // One sample at the median: the empirical CDF jumps from 0 to 1 there.
    const double median = boost::math::gamma_p_inv(2.0, 0.5) * 1.5;
    CHECK(ks_distance({median}, fit) == doctest::Approx(0.5).epsilon(1e-9));
    // An atom at zero contributes its full mass.
    std::vector<double> atom(1000, 0.0);
    CHECK(ks_distance(atom, fit) == doctest::Approx(1.0));
}
