#include "sigrep/beta_binomial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sigrep {

namespace {

// Fills pmf values for both tails by the ratio recurrence
// pmf(k+1) = pmf(k) * ratio(k), anchored at pmf(0) (upward) and pmf(n)
// (downward). Both walks move toward the mode, so a representable anchor
// keeps every term representable; otherwise the walk runs in log space.
template <typename Ratio>
void fill_tails(Count n, Count split, double log_first, double log_last, double first,
                double last, Ratio ratio, std::vector<double>& lower_pmf,
                std::vector<double>& upper_pmf) {
    constexpr double kLinearFloor = -690.0;
    lower_pmf.resize(static_cast<std::size_t>(split + 1));
    if (log_first > kLinearFloor) {
        double v = first;
        for (Count k = 0; k <= split; ++k) {
            lower_pmf[static_cast<std::size_t>(k)] = v;
            if (k < split) v *= ratio(k);
        }
    } else {
        double l = log_first;
        for (Count k = 0; k <= split; ++k) {
            lower_pmf[static_cast<std::size_t>(k)] = std::exp(l);
            if (k < split) l += std::log(ratio(k));
        }
    }
    upper_pmf.resize(static_cast<std::size_t>(n - split));
    if (log_last > kLinearFloor) {
        double v = last;
        for (Count k = n; k > split; --k) {
            upper_pmf[static_cast<std::size_t>(k - split - 1)] = v;
            if (k - 1 > split) v /= ratio(k - 1);
        }
    } else {
        double l = log_last;
        for (Count k = n; k > split; --k) {
            upper_pmf[static_cast<std::size_t>(k - split - 1)] = std::exp(l);
            if (k - 1 > split) l -= std::log(ratio(k - 1));
        }
    }
}

}  // namespace

void validate(const Experiment& obs) {
    if (obs.n < 1) throw std::domain_error("sample size n must be at least 1");
    if (obs.k < 0 || obs.k > obs.n) {
        throw std::domain_error("count k must lie in [0, n]");
    }
}

NullSpec NullSpec::beta(double a) {
    if (std::isinf(a) && a > 0) return point();
    if (!std::isfinite(a) || a < 1.0) {
        throw std::domain_error("null shape a must be >= 1");
    }
    NullSpec spec;
    spec.a_ = a;
    spec.point_ = false;
    return spec;
}

double NullSpec::shape() const {
    if (point_) throw std::logic_error("point null has no finite shape");
    return a_;
}

ShapePair NullSpec::shapes() const { return {shape(), shape()}; }

CountTail CountTail::beta_binomial(Count n, const ShapePair& shapes) {
    validate(shapes);
    if (n < 0) throw std::domain_error("sample size n must be non-negative");
    const double a = shapes.a;
    const double b = shapes.b;
    CountTail tail;
    tail.n_ = n;
    tail.split_ = static_cast<Count>(std::floor(static_cast<double>(n) * a / (a + b)));
    if (tail.split_ >= n) tail.split_ = n;

    // pmf(0) = prod_t (b+t)/(a+b+t), pmf(n) = prod_t (a+t)/(a+b+t)
    double log_first = 0.0;
    double log_last = 0.0;
    double first = 1.0;
    double last = 1.0;
    for (Count t = 0; t < n; ++t) {
        const double denom = a + b + static_cast<double>(t);
        log_first += std::log1p(-a / denom);
        log_last += std::log1p(-b / denom);
        first *= (b + static_cast<double>(t)) / denom;
        last *= (a + static_cast<double>(t)) / denom;
    }
    const double nd = static_cast<double>(n);
    auto ratio = [=](Count k) {
        const double kd = static_cast<double>(k);
        return ((nd - kd) / (kd + 1.0)) * ((kd + a) / (nd - kd - 1.0 + b));
    };
    fill_tails(n, tail.split_, log_first, log_last, first, last, ratio, tail.lower_pmf_,
               tail.upper_pmf_);

    tail.lower_cdf_.resize(tail.lower_pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < tail.lower_pmf_.size(); ++i) {
        acc += tail.lower_pmf_[i];
        tail.lower_cdf_[i] = acc;
    }
    tail.upper_sf_.resize(tail.upper_pmf_.size());
    acc = 0.0;
    for (std::size_t i = tail.upper_pmf_.size(); i-- > 0;) {
        acc += tail.upper_pmf_[i];
        tail.upper_sf_[i] = acc;
    }
    return tail;
}

CountTail CountTail::binomial(Count n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial p must lie in [0, 1]");
    if (n < 0) throw std::domain_error("sample size n must be non-negative");
    CountTail tail;
    tail.n_ = n;
    tail.split_ = static_cast<Count>(std::floor(static_cast<double>(n) * p));
    if (tail.split_ >= n) tail.split_ = n;

    if (p == 0.0 || p == 1.0) {
        // Degenerate: all mass on 0 or on n.
        const Count atom = p == 0.0 ? 0 : n;
        tail.lower_pmf_.assign(static_cast<std::size_t>(tail.split_ + 1), 0.0);
        tail.upper_pmf_.assign(static_cast<std::size_t>(n - tail.split_), 0.0);
        if (atom <= tail.split_) {
            tail.lower_pmf_[static_cast<std::size_t>(atom)] = 1.0;
        } else {
            tail.upper_pmf_[static_cast<std::size_t>(atom - tail.split_ - 1)] = 1.0;
        }
    } else {
        const double nd = static_cast<double>(n);
        const double q = 1.0 - p;
        auto ratio = [=](Count k) {
            const double kd = static_cast<double>(k);
            return ((nd - kd) * p) / ((kd + 1.0) * q);
        };
        fill_tails(n, tail.split_, nd * std::log1p(-p), nd * std::log(p), std::pow(q, nd),
                   std::pow(p, nd), ratio, tail.lower_pmf_, tail.upper_pmf_);
    }

    tail.lower_cdf_.resize(tail.lower_pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < tail.lower_pmf_.size(); ++i) {
        acc += tail.lower_pmf_[i];
        tail.lower_cdf_[i] = acc;
    }
    tail.upper_sf_.resize(tail.upper_pmf_.size());
    acc = 0.0;
    for (std::size_t i = tail.upper_pmf_.size(); i-- > 0;) {
        acc += tail.upper_pmf_[i];
        tail.upper_sf_[i] = acc;
    }
    return tail;
}

CountTail CountTail::under_null(Count n, const NullSpec& null) {
    return null.is_point() ? binomial(n, 0.5) : beta_binomial(n, null.shapes());
}

void CountTail::check(Count K) const {
    if (K < 0 || K > n_) {
        throw std::domain_error("count " + std::to_string(K) + " outside [0, " +
                                std::to_string(n_) + "]");
    }
}

double CountTail::cdf(Count K) const {
    check(K);
    if (K <= split_) return lower_cdf_[static_cast<std::size_t>(K)];
    if (K == n_) return 1.0;
    return 1.0 - upper_sf_[static_cast<std::size_t>(K + 1 - split_ - 1)];
}

double CountTail::pmf(Count K) const {
    check(K);
    if (K <= split_) return lower_pmf_[static_cast<std::size_t>(K)];
    return upper_pmf_[static_cast<std::size_t>(K - split_ - 1)];
}

double bb_pmf(Count k, Count n, const ShapePair& shapes) {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("bb_pmf: k must lie in [0, n]");
    return CountTail::beta_binomial(n, shapes).pmf(k);
}

double bb_cdf(Count K, Count n, const ShapePair& shapes) {
    if (n < 0 || K < 0 || K > n) throw std::domain_error("bb_cdf: K must lie in [0, n]");
    return CountTail::beta_binomial(n, shapes).cdf(K);
}

double binom_cdf(Count K, Count n, double p) {
    if (n < 0 || K < 0 || K > n) throw std::domain_error("binom_cdf: K must lie in [0, n]");
    return CountTail::binomial(n, p).cdf(K);
}

double null_cdf(Count K, Count n, const NullSpec& null) {
    return null.is_point() ? binom_cdf(K, n, 0.5) : bb_cdf(K, n, null.shapes());
}

ShapePair posterior(const ShapePair& prior, const Experiment& obs) {
    validate(prior);
    validate(obs);
    return {prior.a + static_cast<double>(obs.k), prior.b + static_cast<double>(obs.n - obs.k)};
}

double beta_variance(const NullSpec& null) {
    if (null.is_point()) return 0.0;
    return 1.0 / (4.0 * (2.0 * null.shape() + 1.0));
}

double proportion_variance(const NullSpec& null, Count n) {
    if (n < 1) throw std::domain_error("sample size n must be at least 1");
    const double nd = static_cast<double>(n);
    if (null.is_point()) return 1.0 / (4.0 * nd);
    const double a = null.shape();
    return 1.0 / (4.0 * (2.0 * a + 1.0)) + a / (2.0 * nd * (2.0 * a + 1.0));
}

}  // namespace sigrep
