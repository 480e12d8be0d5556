#include "sigrep/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sigrep {

namespace {

constexpr int kMaxFractionIterations = 500;
constexpr double kFractionTolerance = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for I(x; a, b) * x^-a (1-x)^-b * a * B(a, b).
// Converges quickly for x < (a + 1) / (a + b + 2).
double beta_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxFractionIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kFractionTolerance) return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge (a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace

void validate(const ShapePair& shapes) {
    if (!std::isfinite(shapes.a) || !std::isfinite(shapes.b) || shapes.a <= 0.0 ||
        shapes.b <= 0.0) {
        throw std::domain_error("Beta shapes must be finite and positive");
    }
}

double log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("log_gamma: argument must be finite and positive");
    }
    // glibc's lgamma is accurate to a few ulp; the sign output is irrelevant for x > 0.
    return std::lgamma(x);
}

double log_beta(const ShapePair& shapes) {
    validate(shapes);
    return log_gamma(shapes.a) + log_gamma(shapes.b) - log_gamma(shapes.a + shapes.b);
}

double reg_inc_beta(double r, const ShapePair& shapes) {
    validate(shapes);
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::domain_error("reg_inc_beta: r must lie in [0, 1]");
    }
    if (r == 0.0) return 0.0;
    if (r == 1.0) return 1.0;
    const double a = shapes.a;
    const double b = shapes.b;
    const double log_front =
        a * std::log(r) + b * std::log1p(-r) - log_beta(shapes);
    if (r <= a / (a + b)) {
        return std::exp(log_front) * beta_fraction(r, a, b) / a;
    }
    return 1.0 - std::exp(log_front) * beta_fraction(1.0 - r, b, a) / b;
}

double inv_reg_inc_beta(double q, const ShapePair& shapes) {
    validate(shapes);
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("inv_reg_inc_beta: q must lie in (0, 1)");
    }
    // Illinois-modified regula falsi on the bracket [0, 1], falling back to
    // bisection whenever the secant step stalls.
    double lo = 0.0;
    double hi = 1.0;
    double f_lo = -q;
    double f_hi = 1.0 - q;
    int stale_side = 0;
    double best = 0.5;
    for (int iter = 0; iter < 400; ++iter) {
        double z = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        const double width = hi - lo;
        if (!(z > lo && z < hi) || iter % 4 == 3) z = 0.5 * (lo + hi);
        const double f = reg_inc_beta(z, shapes) - q;
        best = z;
        if (f == 0.0) return z;
        if (f < 0.0) {
            lo = z;
            f_lo = f;
            if (stale_side == -1) f_hi *= 0.5;
            stale_side = -1;
        } else {
            hi = z;
            f_hi = f;
            if (stale_side == 1) f_lo *= 0.5;
            stale_side = 1;
        }
        if (std::fabs(f) <= 1e-14 || width <= 4.0 * std::numeric_limits<double>::epsilon() * z) {
            break;
        }
    }
    return best;
}

}  // namespace sigrep
