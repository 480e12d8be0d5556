#include "sigrep/nhst.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigrep {

void validate(const TestConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1)");
    }
}

double p_value(const Experiment& obs, const NullSpec& null, const TestConfig& config) {
    validate(obs);
    validate(config);
    const CountTail tail = CountTail::under_null(obs.n, null);
    if (config.sided == Sidedness::one_sided) return tail.cdf(obs.k);
    // Symmetric null: P(k >= n - K) == P(k <= K).
    const Count smaller = std::min(obs.k, obs.n - obs.k);
    return std::min(1.0, 2.0 * tail.cdf(smaller));
}

CriticalValue critical_value(const CountTail& tail, const TestConfig& config) {
    validate(config);
    const double budget = config.tail_budget();
    if (tail.cdf(0) > budget) return std::nullopt;
    // cdf is non-decreasing: bisect for the last K with cdf(K) <= budget.
    Count lo = 0;
    Count hi = tail.n();
    while (lo < hi) {
        const Count mid = lo + (hi - lo + 1) / 2;
        if (tail.cdf(mid) <= budget) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

CriticalValue critical_value(Count n, const NullSpec& null, const TestConfig& config) {
    if (n < 1) throw std::domain_error("sample size n must be at least 1");
    return critical_value(CountTail::under_null(n, null), config);
}

ShapeSearch min_significant_shape(Count K, Count n, double budget, Count cap) {
    if (cap < 1) throw std::domain_error("shape cap must be at least 1");
    validate(Experiment{n, K});
    ShapeSearch result;
    if (binom_cdf(K, n, 0.5) > budget) {
        result.status = ShapeSearch::Status::never_significant;
        return result;
    }
    auto significant = [&](Count a) {
        const double shape = static_cast<double>(a);
        return bb_cdf(K, n, {shape, shape}) <= budget;
    };
    Count lo = 0;  // largest shape known not significant (0: none probed)
    Count hi = 1;
    while (!significant(hi)) {
        lo = hi;
        if (hi == cap) {
            result.status = ShapeSearch::Status::cap_reached;
            return result;
        }
        hi = std::min(cap, hi * 2);
    }
    while (hi - lo > 1) {
        const Count mid = lo + (hi - lo) / 2;
        if (significant(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    result.status = ShapeSearch::Status::found;
    result.shape = hi;
    return result;
}

ShapeSearch min_significant_shape(const Experiment& obs, const TestConfig& config, Count cap) {
    validate(obs);
    validate(config);
    if (config.sided == Sidedness::one_sided) {
        return min_significant_shape(obs.k, obs.n, config.alpha, cap);
    }
    // Two-sided: the doubled smaller tail must meet alpha, i.e. that tail meets alpha/2.
    return min_significant_shape(std::min(obs.k, obs.n - obs.k), obs.n, config.alpha / 2.0, cap);
}

double effect_size_bound(const NullSpec& null, const TestConfig& config) {
    if (null.is_point()) {
        throw std::domain_error("effect_size_bound requires a finite null shape");
    }
    validate(config);
    return inv_reg_inc_beta(config.tail_budget(), null.shapes());
}

}  // namespace sigrep
