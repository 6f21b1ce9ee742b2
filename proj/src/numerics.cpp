#include "uavnet/numerics.hpp"

#include "uavnet/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace uavnet::numerics {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": non-finite argument");
    }
}

// Power series sum (x/2)^{2k} / (k!)^2; all terms positive.
double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// exp(-x) I0(x) for large x from the Hankel asymptotic expansion.
double i0_scaled_asymptotic(double x) {
    double c = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double next = c * (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * x);
        if (std::abs(next) > std::abs(prev)) break;
        c = next;
        sum += c;
        prev = c;
        if (std::abs(c) < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

constexpr double kAsymptoticSwitch = 30.0;

// 15-point Kronrod abscissae and weights, with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

double integrate_finite(const std::function<double(double)>& f, double lo, double hi,
                        const QuadratureSpec& spec) {
    std::priority_queue<Segment> work;
    Segment first = gauss_kronrod(f, lo, hi);
    double total = first.value;
    double error = first.error;
    work.push(first);
    int subdivisions = 1;
    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            throw NumericalError("integrate: tolerance not reached within subdivision limit", total);
        }
        const Segment worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
        ++subdivisions;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0;
    while (!work.empty()) {
        sum += work.top().value;
        work.pop();
    }
    return sum;
}

double marcum_q1_quadrature(double a, double b) {
    auto rician = [a](double x) {
        if (x <= 0.0) return 0.0;
        return x * std::exp(-0.5 * (x - a) * (x - a)) * bessel_i0_scaled(a * x);
    };
    QuadratureSpec spec{1e-14, 1e-12, 2000};
    if (b >= a) {
        return std::clamp(integrate(rician, b, std::numeric_limits<double>::infinity(), spec), 0.0, 1.0);
    }
    return std::clamp(1.0 - integrate(rician, 0.0, b, spec), 0.0, 1.0);
}

// Q1(a,b) = sum_n Pois(n; a^2/2) * P(Pois(b^2/2) <= n), all terms positive.
double marcum_q1_series(double a, double b) {
    const double mu = 0.5 * a * a;
    const double y = 0.5 * b * b;
    double weight = std::exp(-mu);
    double poisson_term = std::exp(-y);
    double erlang_tail = poisson_term;
    double q = weight * erlang_tail;
    for (int n = 1; n < 100000; ++n) {
        weight *= mu / n;
        poisson_term *= y / n;
        erlang_tail += poisson_term;
        q += weight * std::min(erlang_tail, 1.0);
        if (n > mu) {
            const double ratio = mu / (n + 1.0);
            if (weight * ratio / (1.0 - ratio) < 1e-18) break;
        }
    }
    return q;
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("QuadratureSpec: tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) {
        throw DomainError("QuadratureSpec: max_subdivisions must be at least 1");
    }
}

double bessel_i0(double x) {
    require_finite(x, "bessel_i0");
    if (x < 0.0) throw DomainError("bessel_i0: negative argument");
    if (x <= kAsymptoticSwitch) return i0_series(x);
    return std::exp(x) * i0_scaled_asymptotic(x);
}

double bessel_i0_scaled(double x) {
    require_finite(x, "bessel_i0_scaled");
    if (x < 0.0) throw DomainError("bessel_i0_scaled: negative argument");
    if (x <= kAsymptoticSwitch) return std::exp(-x) * i0_series(x);
    return i0_scaled_asymptotic(x);
}

double marcum_q1(double a, double b) {
    require_finite(a, "marcum_q1");
    require_finite(b, "marcum_q1");
    if (a < 0.0 || b < 0.0) throw DomainError("marcum_q1: negative argument");
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    if (0.5 * a * a > 600.0 || 0.5 * b * b > 600.0) return marcum_q1_quadrature(a, b);
    if (b >= a) return std::clamp(marcum_q1_series(a, b), 0.0, 1.0);
    // Near 1 the series loses the last digits; go through the CDF instead using
    // Q1(a,b) + Q1(b,a) = 1 + exp(-(a^2+b^2)/2) I0(ab).
    const double cdf = marcum_q1_series(b, a) - std::exp(-0.5 * (a - b) * (a - b)) * bessel_i0_scaled(a * b);
    return std::clamp(1.0 - std::max(cdf, 0.0), 0.0, 1.0);
}

double reg_lower_gamma(double k, double x) {
    require_finite(k, "reg_lower_gamma");
    if (std::isnan(x)) throw DomainError("reg_lower_gamma: NaN argument");
    if (!(k > 0.0)) throw DomainError("reg_lower_gamma: shape must be positive");
    if (x < 0.0) throw DomainError("reg_lower_gamma: negative argument");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    const double log_prefactor = -x + k * std::log(x) - std::lgamma(k);
    if (x < k + 1.0) {
        double ap = k;
        double term = 1.0 / k;
        double sum = term;
        for (int n = 0; n < 10000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return std::clamp(sum * std::exp(log_prefactor), 0.0, 1.0);
    }

    // Continued fraction for the upper tail (modified Lentz).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - k;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - k);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::clamp(1.0 - std::exp(log_prefactor) * h, 0.0, 1.0);
}

double normal_q(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
        throw DomainError("integrate: lower limit must be finite");
    }
    if (!(lo < hi)) throw DomainError("integrate: empty or reversed range");
    if (std::isfinite(hi)) return integrate_finite(f, lo, hi, spec);

    // x = lo + t / (1 - t), t in [0, 1)
    auto mapped = [&f, lo](double t) {
        const double s = 1.0 - t;
        return f(lo + t / s) / (s * s);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
}

} // namespace uavnet::numerics
