#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnet/errors.hpp"
#include "uavnet/numerics.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace uavnet;
using numerics::bessel_i0;
using numerics::integrate;
using numerics::marcum_q1;
using numerics::reg_lower_gamma;

namespace {

// Power series sum (x/2)^{2k} / (k!)^2, summed until terms vanish.
double i0_series(double x) {
    double term = 1.0;
    double sum = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// Tail of the Rician density (unit scatter) by Gauss-Kronrod quadrature.
double rician_tail_quadrature(double a, double b) {
    auto pdf = [a](double x) {
        if (x <= 0.0) return 0.0;
        return x * std::exp(-0.5 * (x - a) * (x - a) - a * x + std::log(boost::math::cyl_bessel_i(0, a * x)));
    };
    const double hi = a + 40.0;
    if (b >= hi) return 0.0;
    // Split at the mode to help the integrator.
    const double mid = std::clamp(a, b, hi);
    double total = 0.0;
    if (mid > b) total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, b, mid, 15, 1e-14);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, mid, hi, 15, 1e-14);
    return total;
}

} // namespace

TEST_CASE("bessel_i0 matches the power series") {
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK(bessel_i0(1.0) == doctest::Approx(1.266065877752008).epsilon(1e-14));
    CHECK(bessel_i0(10.0) == doctest::Approx(2815.716628466254).epsilon(1e-13));
    for (double x : {0.1, 0.5, 2.0, 5.0, 15.0, 29.9, 30.1, 45.0, 80.0}) {
        CAPTURE(x);
        CHECK(std::abs(bessel_i0(x) / i0_series(x) - 1.0) < 1e-12);
    }
}

TEST_CASE("bessel_i0 is increasing and the scaled form agrees") {
    double prev = bessel_i0(0.0);
    for (double x = 0.25; x < 200.0; x += 0.25) {
        const double v = bessel_i0(x);
        CHECK(v > prev);
        prev = v;
        if (x < 600.0) CHECK(numerics::bessel_i0_scaled(x) == doctest::Approx(v * std::exp(-x)).epsilon(1e-12));
    }
    CHECK(numerics::bessel_i0_scaled(1e4) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * 1e4)).epsilon(1e-4));
}

TEST_CASE("bessel_i0 rejects bad input") {
    CHECK_THROWS_AS(bessel_i0(-1.0), DomainError);
    CHECK_THROWS_AS(bessel_i0(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(bessel_i0(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("marcum_q1 edge cases") {
    for (double a : {0.0, 0.3, 5.477, 12.0}) CHECK(marcum_q1(a, 0.0) == 1.0);
    for (double b : {0.1, 1.0, 3.0, 7.0}) CHECK(marcum_q1(0.0, b) == doctest::Approx(std::exp(-b * b / 2)).epsilon(1e-15));
    CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(marcum_q1(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(marcum_q1(std::nan(""), 1.0), DomainError);
}

TEST_CASE("marcum_q1 matches quadrature of the Rician density") {
    const double a = std::sqrt(30.0);
    CHECK(std::abs(marcum_q1(a, 4.08) - rician_tail_quadrature(a, 4.08)) < 1e-10);
    for (double aa = 0.0; aa <= 8.0; aa += 0.8) {
        for (double b = 0.0; b <= 10.0; b += 1.25) {
            CAPTURE(aa);
            CAPTURE(b);
            CHECK(std::abs(marcum_q1(aa, b) - rician_tail_quadrature(aa, b)) < 1e-9);
        }
    }
}

TEST_CASE("marcum_q1 agrees with the noncentral chi-square law") {
    // Q1(a, b) = P(X > b^2) for X ~ noncentral chi-square(2, a^2).
    for (double a : {0.5, 2.0, 4.0, 7.5}) {
        for (double b : {0.5, 2.0, 4.0, 6.0, 9.0}) {
            const boost::math::non_central_chi_squared dist(2.0, a * a);
            const double ref = boost::math::cdf(boost::math::complement(dist, b * b));
            CAPTURE(a);
            CAPTURE(b);
            CHECK(std::abs(marcum_q1(a, b) - ref) < 1e-10);
        }
    }
}

TEST_CASE("marcum_q1 is non-increasing in b and stays in [0, 1]") {
    for (double a : {0.0, 1.0, 5.477, 20.0, 40.0}) {
        double prev = 1.0;
        for (double b = 0.0; b < a + 15.0; b += 0.05) {
            const double q = marcum_q1(a, b);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            CHECK(q <= prev + 4 * std::numeric_limits<double>::epsilon());
            prev = q;
        }
    }
}

TEST_CASE("marcum_q1 large-argument fallback") {
    // a^2 / 2 > 600 exercises the quadrature branch.
    const double a = 36.0;
    CHECK(marcum_q1(a, a) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(marcum_q1(a, a - 8.0) > 0.999999);
    CHECK(marcum_q1(a, a + 8.0) < 1e-6);
}

TEST_CASE("reg_lower_gamma closed forms") {
    for (double x : {0.0, 0.3, 1.0, 4.0, 25.0}) CHECK(reg_lower_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
    for (double k : {0.2, 1.0, 7.5}) CHECK(reg_lower_gamma(k, 0.0) == 0.0);
    CHECK(reg_lower_gamma(2.0, 2.0) == doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(reg_lower_gamma(2.0, 2.0) == doctest::Approx(0.59399).epsilon(1e-5));
    CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(reg_lower_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("reg_lower_gamma matches boost and is a CDF") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ku(0.01, 60.0);
    std::uniform_real_distribution<double> xu(0.0, 120.0);
    for (int i = 0; i < 500; ++i) {
        const double k = ku(rng);
        const double x = xu(rng);
        CAPTURE(k);
        CAPTURE(x);
        CHECK(std::abs(reg_lower_gamma(k, x) - boost::math::gamma_p(k, x)) < 1e-12);
    }
    for (double k : {0.05, 0.5, 3.0, 40.0}) {
        double prev = 0.0;
        for (double x = 0.0; x < 200.0; x += 0.5) {
            const double p = reg_lower_gamma(k, x);
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("normal_q") {
    CHECK(numerics::normal_q(0.0) == 0.5);
    CHECK(numerics::normal_q(1.96) == doctest::Approx(0.024997895).epsilon(1e-8));
    CHECK(numerics::normal_q(-1.0) == doctest::Approx(1.0 - 0.158655253931457).epsilon(1e-12));
}

TEST_CASE("integrate on reference integrals") {
    CHECK(std::abs(integrate([](double x) { return x; }, 0.0, 1.0) - 0.5) < 1e-10);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(std::abs(integrate([](double x) { return x * std::exp(-x * x / 2); }, 0.0, inf) - 1.0) < 1e-10);
    const double a = std::sqrt(30.0);
    auto rician = [a](double x) { return x * std::exp(-0.5 * (x - a) * (x - a)) * numerics::bessel_i0_scaled(a * x); };
    for (double beta : {0.0, 2.0, 4.08, 5.5, 8.0}) {
        CAPTURE(beta);
        CHECK(std::abs(integrate(rician, beta, inf) - marcum_q1(a, beta)) < 1e-8);
    }
}

TEST_CASE("integrate reports failure with its best estimate") {
    numerics::QuadratureSpec spec;
    spec.max_subdivisions = 2;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, spec);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::isfinite(e.best_estimate()));
    }
}

TEST_CASE("QuadratureSpec validation") {
    numerics::QuadratureSpec s;
    CHECK_NOTHROW(s.validate());
    s.abs_tol = 0.0;
    CHECK_THROWS(s.validate());
    s = {};
    s.max_subdivisions = 0;
    CHECK_THROWS(s.validate());
}
