// Significance testing against symmetric Beta-Binomial nulls: p-values,
// critical values, the minimal significant null shape and the effect-size
// bound.

#ifndef SIGREP_NHST_HPP
#define SIGREP_NHST_HPP

#include <optional>

#include "sigrep/beta_binomial.hpp"

namespace sigrep {

enum class Sidedness { one_sided, two_sided };

struct TestConfig {
    double alpha = 0.05;
    Sidedness sided = Sidedness::one_sided;

    /// Per-tail budget: alpha, or alpha / 2 for a two-sided test.
    double tail_budget() const noexcept {
        return sided == Sidedness::two_sided ? alpha / 2.0 : alpha;
    }
};

/// Throws std::domain_error unless 0 < alpha < 1.
void validate(const TestConfig& config);

/// Greatest K with P(k <= K) <= tail budget; empty if even K = 0 exceeds it.
using CriticalValue = std::optional<Count>;

/// Lower-tail p-value P(k <= obs.k); two-sided doubles the smaller tail,
/// capped at 1.
double p_value(const Experiment& obs, const NullSpec& null, const TestConfig& config);

CriticalValue critical_value(Count n, const NullSpec& null, const TestConfig& config);
/// Same as above using an already built tail for the null.
CriticalValue critical_value(const CountTail& tail, const TestConfig& config);

/// Outcome of the search for the smallest integer a making a result significant.
struct ShapeSearch {
    enum class Status { found, never_significant, cap_reached };
    Status status = Status::never_significant;
    std::optional<Count> shape;  // set iff status == found
};

inline constexpr Count kDefaultShapeCap = 1'000'000;

/// Smallest integer a in [1, cap] with P(k <= K | n, Beta(a, a)) <= budget.
///
/// Significance is monotone non-decreasing in a, so the search probes
/// a = 1, 2, 4, ... and then bisects. If the result is not significant even
/// under the point null (the supremum over a) the status is
/// never_significant; otherwise, if no a <= cap qualifies, cap_reached.
ShapeSearch min_significant_shape(Count K, Count n, double budget, Count cap = kDefaultShapeCap);

ShapeSearch min_significant_shape(const Experiment& obs, const TestConfig& config,
                                  Count cap = kDefaultShapeCap);

/// z with I(z; a, a) equal to the tail budget. No significant result under
/// Beta(a, a) has K > z n. Throws std::domain_error for the point null.
double effect_size_bound(const NullSpec& null, const TestConfig& config);

}  // namespace sigrep

#endif  // SIGREP_NHST_HPP
