#include "sigrep/replication.hpp"

#include <string>

namespace sigrep {

namespace {

NullSpec integer_null(Count a) { return NullSpec::beta(static_cast<double>(a)); }

TestConfig one_sided(double alpha) { return TestConfig{alpha, Sidedness::one_sided}; }

}  // namespace

void validate(const DecisionCriteria& criteria) {
    if (!(criteria.alpha > 0.0 && criteria.alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1)");
    }
    if (!(criteria.beta_rep > 0.0 && criteria.beta_rep < 1.0)) {
        throw std::domain_error("beta must lie in (0, 1)");
    }
}

double p_rep(Count k1, Count n, const NullSpec& null, Count k_crit) {
    if (null.is_point()) throw std::domain_error("p_rep requires a finite null shape");
    validate(Experiment{n, k1});
    if (k_crit < 0 || k_crit > n) throw std::domain_error("k_crit must lie in [0, n]");
    return bb_cdf(k_crit, n, posterior(null.shapes(), Experiment{n, k1}));
}

double p_rep_point_form(Count k1, Count n, Count k_crit) {
    validate(Experiment{n, k1});
    if (k_crit < 0 || k_crit > n) throw std::domain_error("k_crit must lie in [0, n]");
    return binom_cdf(k_crit, n, static_cast<double>(k1) / static_cast<double>(n));
}

Witness find_witness(Count k1, Count n, const DecisionCriteria& criteria,
                     const SearchLimits& limits) {
    validate(Experiment{n, k1});
    validate(criteria);
    const Count cap = limits.shape_cap;
    const double alpha = criteria.alpha;
    const double beta = criteria.beta_rep;

    Witness witness;
    const CriticalValue k_bin = critical_value(n, NullSpec::point(), one_sided(alpha));
    if (!k_bin || k1 > *k_bin) {
        witness.status = Witness::Status::never_significant;
        return witness;
    }

    // For a >= a0 every admissible pair has K_a <= K_bin and p_rep falls with
    // a, so p_rep(a0, K_bin) bounds everything from a0 upward.
    auto beyond_cap = [&]() {
        if (p_rep(k1, n, integer_null(cap), *k_bin) < beta) {
            witness.status = Witness::Status::none;
            return witness;
        }
        throw UndecidedAtCap("replication search for k1=" + std::to_string(k1) + ", n=" +
                             std::to_string(n) + " undecided at shape cap " +
                             std::to_string(cap));
    };

    ShapeSearch start = min_significant_shape(k1, n, alpha, cap);
    if (start.status == ShapeSearch::Status::cap_reached) return beyond_cap();
    Count a = *start.shape;
    if (p_rep(k1, n, integer_null(a), *k_bin) < beta) {
        witness.status = Witness::Status::none;
        return witness;
    }

    for (;;) {
        const Count k_a = *critical_value(n, integer_null(a), one_sided(alpha));
        const double prob = p_rep(k1, n, integer_null(a), k_a);
        if (prob >= beta) {
            witness.status = Witness::Status::found;
            witness.shape = a;
            witness.k_crit = k_a;
            witness.p_rep = prob;
            return witness;
        }
        if (k_a == *k_bin) {
            // a*: K can grow no further, and p_rep only falls from here.
            witness.status = Witness::Status::none;
            return witness;
        }
        // First shape of the next critical-value plateau.
        const ShapeSearch next = min_significant_shape(k_a + 1, n, alpha, cap);
        if (next.status != ShapeSearch::Status::found) return beyond_cap();
        a = *next.shape;
    }
}

std::optional<Count> k_bound(Count n, const DecisionCriteria& criteria,
                             const SearchLimits& limits) {
    validate(criteria);
    if (n < 1) throw std::domain_error("sample size n must be at least 1");
    const CriticalValue k_bin = critical_value(n, NullSpec::point(), one_sided(criteria.alpha));
    if (!k_bin) return std::nullopt;
    for (Count k1 = *k_bin; k1 >= 0; --k1) {
        if (find_witness(k1, n, criteria, limits).status == Witness::Status::found) return k1;
    }
    return std::nullopt;
}

const char* to_string(Decision decision) noexcept {
    switch (decision) {
        case Decision::real_effect:
            return "real-effect";
        case Decision::not_real_effect:
            return "not-real-effect";
        case Decision::never_significant:
            return "never-significant";
    }
    return "unknown";
}

TestReport real_effect(const Experiment& obs, const DecisionCriteria& criteria,
                       const SearchLimits& limits) {
    validate(obs);
    validate(criteria);
    const TestConfig config = one_sided(criteria.alpha);

    TestReport report;
    report.obs = obs;
    report.criteria = criteria;
    report.p_sig_point = p_value(obs, NullSpec::point(), config);
    report.k_bin = critical_value(obs.n, NullSpec::point(), config);
    if (report.k_bin) report.p_rep_point = p_rep_point_form(obs.k, obs.n, *report.k_bin);
    report.k_bound = k_bound(obs.n, criteria, limits);

    const Witness witness = find_witness(obs.k, obs.n, criteria, limits);
    if (witness.status == Witness::Status::never_significant) {
        report.decision = Decision::never_significant;
        report.null = NullSpec::point();
        report.p_sig = report.p_sig_point;
        report.k_crit = report.k_bin;
        return report;
    }

    const ShapeSearch min_shape = min_significant_shape(obs.k, obs.n, criteria.alpha,
                                                        limits.shape_cap);
    if (min_shape.status == ShapeSearch::Status::found) report.min_a = min_shape.shape;

    Count shown;
    if (witness.status == Witness::Status::found) {
        report.decision = Decision::real_effect;
        report.witness_a = witness.shape;
        shown = *witness.shape;
    } else if (report.min_a) {
        report.decision = Decision::not_real_effect;
        shown = *report.min_a;
    } else {
        // Significant only beyond the cap, but excluded by the replication bound.
        report.decision = Decision::not_real_effect;
        shown = limits.shape_cap;
    }
    report.null = integer_null(shown);
    report.p_sig = p_value(obs, report.null, config);
    report.k_crit = critical_value(obs.n, report.null, config);
    if (report.k_crit) report.p_rep = p_rep(obs.k, obs.n, report.null, *report.k_crit);
    return report;
}

}  // namespace sigrep
