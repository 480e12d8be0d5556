// Gamma/Beta special functions used by every distribution in sigrep.
//
// All functions are pure and throw std::domain_error on arguments outside
// their domain.

#ifndef SIGREP_SPECIAL_FUNCTIONS_HPP
#define SIGREP_SPECIAL_FUNCTIONS_HPP

namespace sigrep {

/// Pair of positive Beta shape parameters.
struct ShapePair {
    double a;
    double b;
};

/// Throws std::domain_error unless both shapes are finite and positive.
void validate(const ShapePair& shapes);

/// ln Gamma(x) for finite x > 0.
double log_gamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(const ShapePair& shapes);

/// Regularized incomplete Beta function I(r; a, b), the Beta(a, b) cdf at r.
///
/// Evaluated by Lentz's continued fraction, switching to 1 - I(1 - r; b, a)
/// when r > a / (a + b). Throws std::runtime_error if the fraction has not
/// converged to 1e-15 after 500 iterations (shapes beyond roughly 1e5).
double reg_inc_beta(double r, const ShapePair& shapes);

/// Inverse of reg_inc_beta in r: returns z in (0, 1) with I(z; a, b) = q.
/// Requires 0 < q < 1.
double inv_reg_inc_beta(double q, const ShapePair& shapes);

}  // namespace sigrep

#endif  // SIGREP_SPECIAL_FUNCTIONS_HPP
