// Independent reference computations: exact rational enumeration of the
// Beta-Binomial cdf and seeded Monte Carlo simulation of the generative
// process (p drawn from a Beta, then k from a Binomial).

#ifndef SIGREP_ORACLE_HPP
#define SIGREP_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sigrep/beta_binomial.hpp"

namespace sigrep::oracle {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr Count kExactMaxN = 2000;

/// Exact P(k <= K) under Beta-Binomial(n, a, b) for integer shapes, from the
/// factorial form of the Beta function. Throws std::length_error for n > 2000.
Rational exact_bb_cdf(Count K, Count n, Count a, Count b);
/// exact_bb_cdf for every K in [0, n].
std::vector<Rational> exact_bb_cdf_table(Count n, Count a, Count b);

/// SplitMix64 (Steele, Lea and Flood 2014), identified as "splitmix64/1".
///
/// The stream is fully determined by the seed: state advances by the golden
/// gamma 0x9E3779B97F4A7C15 and each output is the standard 30/27/31 mix.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64/1";

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Variate generators built only on SplitMix64::uniform, so streams are
/// reproducible independently of the standard library.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) noexcept : rng_(seed) {}

    /// Standard normal by the Box-Muller transform (one value per
    /// pair of uniforms; the sine branch is discarded).
    double normal();
    /// Gamma(shape, 1) for shape >= 1 by Marsaglia and Tsang's squeeze method.
    double gamma(double shape);
    /// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
    double beta(double a, double b);
    /// Binomial(n, p) by counting n Bernoulli trials.
    Count binomial(Count n, double p);

private:
    SplitMix64 rng_;
};

/// Trials are split into fixed-size shards; shard i is seeded with the i-th
/// output of SplitMix64(seed), so results do not depend on the worker count.
inline constexpr std::uint64_t kShardSize = 1u << 16;

struct SimulationResult {
    double estimate = 0.0;
    std::uint64_t trials = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Empirical distribution of k over n + 1 outcomes.
struct EmpiricalPmf {
    std::vector<std::uint64_t> counts;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    double frequency(Count k) const;
    /// Frequency of outcomes <= K, with its binomial standard error.
    SimulationResult cumulative(Count K) const;
};

/// Draws p ~ Beta(a, a) (p = 0.5 for the point null) then k ~ Binomial(n, p).
EmpiricalPmf mc_experiment(Count n, const NullSpec& null, std::uint64_t trials,
                           std::uint64_t seed);

/// Draws p ~ Beta(k1 + a, n - k1 + a) then k2 ~ Binomial(n, p); estimates
/// P(k2 <= k_crit).
SimulationResult mc_replication(Count k1, Count n, const NullSpec& null, Count k_crit,
                                std::uint64_t trials, std::uint64_t seed);

/// Gap between the Beta-Binomial cdf at K = floor(z n) and I(K/n; a, a), for
/// each n in the grid. Requires 0 < z < 0.5 and a finite null.
std::vector<std::pair<Count, double>> epsilon_scan(double z, const NullSpec& null,
                                                   const std::vector<Count>& n_grid);

}  // namespace sigrep::oracle

#endif  // SIGREP_ORACLE_HPP
