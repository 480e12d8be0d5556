// Replication probability and the combined significance-and-replication rule.
//
// A one-sided result k1 out of n counts as a real effect for criteria
// (alpha, beta) when some null Beta(a, a), a >= 1 integer, gives both
//
//     P(k <= k1 | n, Beta(a, a)) <= alpha
//     P(k <= K_a | n, Beta(k1 + a, n - k1 + a)) >= beta
//
// where K_a is the critical value under Beta(a, a). K_bound is the largest
// such k1 for a given n.

#ifndef SIGREP_REPLICATION_HPP
#define SIGREP_REPLICATION_HPP

#include <optional>
#include <stdexcept>

#include "sigrep/nhst.hpp"

namespace sigrep {

struct DecisionCriteria {
    double alpha = 0.05;
    double beta_rep = 0.5;
};

/// Throws std::domain_error unless both criteria lie in (0, 1).
void validate(const DecisionCriteria& criteria);

/// Bounds on the integer search over null shapes.
struct SearchLimits {
    Count shape_cap = 10'000'000;
};

/// Raised when a search cannot be decided within SearchLimits.
class UndecidedAtCap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability that an exact replication (same n) of result k1 is again
/// <= k_crit, with p updated to Beta(k1 + a, n - k1 + a).
double p_rep(Count k1, Count n, const NullSpec& null, Count k_crit);

/// Statistical-power estimate: Binomial(n, k1/n) probability of k <= k_crit.
double p_rep_point_form(Count k1, Count n, Count k_crit);

/// Smallest null shape a at which k1 satisfies both criteria.
struct Witness {
    enum class Status { found, none, never_significant };
    Status status = Status::none;
    std::optional<Count> shape;     // set iff found
    std::optional<Count> k_crit;    // K_a at the witness shape
    std::optional<double> p_rep;    // replication probability at the witness
};

/// Searches integer a upward from the minimal significant shape of k1.
///
/// K_a only changes at finitely many shapes and, with K fixed, p_rep falls as
/// a rises, so only the first shape of each K_a plateau is evaluated. The
/// search stops once K_a reaches the point-null critical value with p_rep
/// below beta. Throws UndecidedAtCap if the outcome depends on shapes above
/// the cap.
Witness find_witness(Count k1, Count n, const DecisionCriteria& criteria,
                     const SearchLimits& limits = {});

/// Largest k1 with a witness, searching k1 downward from the point-null
/// critical value; empty if no k1 qualifies. Throws UndecidedAtCap.
std::optional<Count> k_bound(Count n, const DecisionCriteria& criteria,
                             const SearchLimits& limits = {});

enum class Decision { real_effect, not_real_effect, never_significant };

const char* to_string(Decision decision) noexcept;

struct TestReport {
    Experiment obs{};
    DecisionCriteria criteria{};
    /// Null the reported p_sig, k_crit and p_rep refer to: the witness for a
    /// real effect, the minimal significant shape otherwise, and the point
    /// null for results that are never significant.
    NullSpec null = NullSpec::point();
    double p_sig = 1.0;
    CriticalValue k_crit;
    std::optional<Count> min_a;
    std::optional<double> p_rep;
    std::optional<Count> k_bound;
    Decision decision = Decision::never_significant;
    std::optional<Count> witness_a;
    /// Point-null comparison: p-value, critical value and power-model p_rep.
    double p_sig_point = 1.0;
    CriticalValue k_bin;
    std::optional<double> p_rep_point;
};

/// Full one-sided report for an observed result. Throws UndecidedAtCap.
TestReport real_effect(const Experiment& obs, const DecisionCriteria& criteria,
                       const SearchLimits& limits = {});

}  // namespace sigrep

#endif  // SIGREP_REPLICATION_HPP
