#pragma once

#include <functional>

namespace uavnet::numerics {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;

    void validate() const;
};

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double x);

/// exp(-x) * I0(x), finite for all x >= 0.
double bessel_i0_scaled(double x);

/// First-order Marcum Q-function Q1(a, b), i.e. the Rician tail with unit scatter.
///
/// Evaluated as a Poisson mixture of Erlang tails (all terms positive). Arguments
/// whose squares exceed the exponent range fall back to adaptive quadrature of the
/// Rician density.
double marcum_q1(double a, double b);

/// Regularized lower incomplete gamma function P(k, x) = gamma(k, x) / Gamma(k).
double reg_lower_gamma(double k, double x);

/// Standard normal tail probability.
double normal_q(double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi]. `hi` may be
/// +infinity, in which case the range is mapped onto [0, 1).
///
/// Throws NumericalError carrying the best estimate when the error target is not
/// met within spec.max_subdivisions intervals.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

} // namespace uavnet::numerics
