// Beta-Binomial and Binomial models for counting experiments.

#ifndef SIGREP_BETA_BINOMIAL_HPP
#define SIGREP_BETA_BINOMIAL_HPP

#include <cstdint>
#include <vector>

#include "sigrep/special_functions.hpp"

namespace sigrep {

using Count = std::int64_t;

/// Observed data of a counting experiment: k occurrences in a sample of n.
struct Experiment {
    Count n;
    Count k;
};

/// Throws std::domain_error unless n >= 1 and 0 <= k <= n.
void validate(const Experiment& obs);

/// Symmetric null hypothesis p ~ Beta(a, a) with a >= 1, or the point null
/// p = 0.5 (the a -> infinity limit).
class NullSpec {
public:
    /// Point-form null, p fixed at 0.5.
    static NullSpec point() noexcept { return NullSpec{}; }
    /// Distributional null Beta(a, a); throws std::domain_error unless a >= 1.
    static NullSpec beta(double a);

    bool is_point() const noexcept { return point_; }
    /// Shape a; throws std::logic_error for the point null.
    double shape() const;
    /// (a, a); throws std::logic_error for the point null.
    ShapePair shapes() const;

    friend bool operator==(const NullSpec&, const NullSpec&) = default;

private:
    NullSpec() = default;
    double a_ = 0.0;
    bool point_ = true;
};

/// Precomputed tails of a distribution over {0, ..., n}.
///
/// Terms are generated in log space from both ends by the pmf ratio
/// recurrence. cdf(K) sums lower terms when K lies at or below the mean and
/// otherwise returns one minus the upper tail, so every value is an
/// accurate small sum. Construction is O(n).
class CountTail {
public:
    static CountTail beta_binomial(Count n, const ShapePair& shapes);
    static CountTail binomial(Count n, double p);
    /// Beta-Binomial with (a, a), or Binomial(n, 0.5) for the point null.
    static CountTail under_null(Count n, const NullSpec& null);

    Count n() const noexcept { return n_; }
    /// P(k <= K); throws std::domain_error unless 0 <= K <= n.
    double cdf(Count K) const;
    /// P(k = K); throws std::domain_error unless 0 <= K <= n.
    double pmf(Count K) const;

private:
    CountTail() = default;
    void check(Count K) const;

    Count n_ = 0;
    Count split_ = 0;                // last index served by the lower sums
    std::vector<double> lower_pmf_;  // pmf(0..split)
    std::vector<double> lower_cdf_;  // P(k <= K), K in 0..split
    std::vector<double> upper_pmf_;  // pmf(split+1..n)
    std::vector<double> upper_sf_;   // P(k >= K), K in split+1..n
};

/// C(n,k) B(k+a, n-k+b) / B(a,b).
double bb_pmf(Count k, Count n, const ShapePair& shapes);
/// Sum of bb_pmf(j) for j = 0..K.
double bb_cdf(Count K, Count n, const ShapePair& shapes);
/// Cumulative Binomial(n, p) probability of k <= K.
double binom_cdf(Count K, Count n, double p);
/// Cumulative probability under a symmetric null (Binomial(n, 0.5) for the point null).
double null_cdf(Count K, Count n, const NullSpec& null);

/// Conjugate update of a Beta prior: (a + k, b + n - k).
ShapePair posterior(const ShapePair& prior, const Experiment& obs);

/// Variance of Beta(a, a): 1 / (4 (2a + 1)); zero for the point null.
double beta_variance(const NullSpec& null);
/// Variance of the proportion k/n under the Beta-Binomial null:
/// 1 / (4 (2a + 1)) + a / (2 n (2a + 1)); 1 / (4n) for the point null.
double proportion_variance(const NullSpec& null, Count n);

}  // namespace sigrep

#endif  // SIGREP_BETA_BINOMIAL_HPP
