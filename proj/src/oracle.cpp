#include "sigrep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sigrep::oracle {

using boost::multiprecision::cpp_int;

namespace {

std::vector<cpp_int> factorials(Count upto) {
    std::vector<cpp_int> table(static_cast<std::size_t>(upto + 1));
    table[0] = 1;
    for (Count i = 1; i <= upto; ++i) {
        table[static_cast<std::size_t>(i)] = table[static_cast<std::size_t>(i - 1)] * i;
    }
    return table;
}

// Runs `shard(sampler, count)` over all shards and sums the returned vectors.
template <typename ShardFn>
std::vector<std::uint64_t> run_sharded(std::uint64_t trials, std::uint64_t seed, std::size_t width,
                                       ShardFn shard) {
    const std::uint64_t shard_count = (trials + kShardSize - 1) / kShardSize;
    std::vector<std::uint64_t> shard_seeds(shard_count);
    SplitMix64 seeder(seed);
    for (auto& s : shard_seeds) s = seeder.next();

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 16));
    std::vector<std::future<std::vector<std::uint64_t>>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            std::vector<std::uint64_t> counts(width, 0);
            for (std::uint64_t i = w; i < shard_count; i += workers) {
                const std::uint64_t begin = i * kShardSize;
                const std::uint64_t count = std::min(kShardSize, trials - begin);
                Sampler sampler(shard_seeds[i]);
                shard(sampler, count, counts);
            }
            return counts;
        }));
    }
    std::vector<std::uint64_t> total(width, 0);
    for (auto& job : jobs) {
        const auto part = job.get();
        for (std::size_t i = 0; i < width; ++i) total[i] += part[i];
    }
    return total;
}

SimulationResult make_result(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
    SimulationResult result;
    result.trials = trials;
    result.seed = seed;
    result.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    result.std_error =
        std::sqrt(result.estimate * (1.0 - result.estimate) / static_cast<double>(trials));
    return result;
}

}  // namespace

std::vector<Rational> exact_bb_cdf_table(Count n, Count a, Count b) {
    if (n > kExactMaxN) throw std::length_error("exact_bb_cdf: n above 2000");
    if (n < 0) throw std::domain_error("exact_bb_cdf: n must be non-negative");
    if (a < 1 || b < 1) throw std::domain_error("exact_bb_cdf: shapes must be positive integers");
    // pmf(k) = C(n,k) B(k+a, n-k+b) / B(a,b) with B(x,y) = (x-1)!(y-1)!/(x+y-1)!
    const auto fact = factorials(n + a + b);
    auto f = [&](Count i) -> const cpp_int& { return fact[static_cast<std::size_t>(i)]; };
    const cpp_int scale = f(a + b - 1);
    const cpp_int denominator = f(n + a + b - 1) * f(a - 1) * f(b - 1);
    std::vector<Rational> table;
    table.reserve(static_cast<std::size_t>(n + 1));
    cpp_int numerator = 0;
    for (Count k = 0; k <= n; ++k) {
        const cpp_int choose = f(n) / (f(k) * f(n - k));
        numerator += choose * f(k + a - 1) * f(n - k + b - 1);
        table.emplace_back(numerator * scale, denominator);
    }
    return table;
}

Rational exact_bb_cdf(Count K, Count n, Count a, Count b) {
    if (n > kExactMaxN) throw std::length_error("exact_bb_cdf: n above 2000");
    if (n < 0 || K < 0 || K > n) throw std::domain_error("exact_bb_cdf: K must lie in [0, n]");
    return exact_bb_cdf_table(n, a, b)[static_cast<std::size_t>(K)];
}

double Sampler::normal() {
    const double u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Sampler::gamma(double shape) {
    if (!(shape >= 1.0)) throw std::domain_error("gamma sampler requires shape >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng_.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Sampler::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

Count Sampler::binomial(Count n, double p) {
    Count hits = 0;
    for (Count i = 0; i < n; ++i) {
        if (rng_.uniform() < p) ++hits;
    }
    return hits;
}

double EmpiricalPmf::frequency(Count k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= counts.size()) {
        throw std::domain_error("frequency: k out of range");
    }
    return static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(trials);
}

SimulationResult EmpiricalPmf::cumulative(Count K) const {
    if (K < 0 || static_cast<std::size_t>(K) >= counts.size()) {
        throw std::domain_error("cumulative: K out of range");
    }
    std::uint64_t hits = 0;
    for (Count k = 0; k <= K; ++k) hits += counts[static_cast<std::size_t>(k)];
    return make_result(hits, trials, seed);
}

EmpiricalPmf mc_experiment(Count n, const NullSpec& null, std::uint64_t trials,
                           std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample size n must be at least 1");
    if (trials < 1) throw std::domain_error("trials must be at least 1");
    const bool point = null.is_point();
    const double a = point ? 0.0 : null.shape();
    EmpiricalPmf pmf;
    pmf.trials = trials;
    pmf.seed = seed;
    pmf.counts = run_sharded(trials, seed, static_cast<std::size_t>(n + 1),
                             [&](Sampler& sampler, std::uint64_t count,
                                 std::vector<std::uint64_t>& counts) {
                                 for (std::uint64_t t = 0; t < count; ++t) {
                                     const double p = point ? 0.5 : sampler.beta(a, a);
                                     ++counts[static_cast<std::size_t>(sampler.binomial(n, p))];
                                 }
                             });
    return pmf;
}

SimulationResult mc_replication(Count k1, Count n, const NullSpec& null, Count k_crit,
                                std::uint64_t trials, std::uint64_t seed) {
    if (null.is_point()) throw std::domain_error("mc_replication requires a finite null shape");
    validate(Experiment{n, k1});
    if (k_crit < 0 || k_crit > n) throw std::domain_error("k_crit must lie in [0, n]");
    if (trials < 1) throw std::domain_error("trials must be at least 1");
    const ShapePair updated = posterior(null.shapes(), Experiment{n, k1});
    const auto hits = run_sharded(trials, seed, 1,
                                  [&](Sampler& sampler, std::uint64_t count,
                                      std::vector<std::uint64_t>& counts) {
                                      for (std::uint64_t t = 0; t < count; ++t) {
                                          const double p = sampler.beta(updated.a, updated.b);
                                          if (sampler.binomial(n, p) <= k_crit) ++counts[0];
                                      }
                                  });
    return make_result(hits[0], trials, seed);
}

std::vector<std::pair<Count, double>> epsilon_scan(double z, const NullSpec& null,
                                                   const std::vector<Count>& n_grid) {
    if (!(z > 0.0 && z < 0.5)) throw std::domain_error("epsilon_scan: z must lie in (0, 0.5)");
    if (null.is_point()) throw std::domain_error("epsilon_scan requires a finite null shape");
    std::vector<std::pair<Count, double>> out;
    out.reserve(n_grid.size());
    for (const Count n : n_grid) {
        if (n < 1) throw std::domain_error("epsilon_scan: n must be at least 1");
        const auto K = static_cast<Count>(std::floor(z * static_cast<double>(n)));
        const double gap = bb_cdf(K, n, null.shapes()) -
                           reg_inc_beta(static_cast<double>(K) / static_cast<double>(n),
                                        null.shapes());
        out.emplace_back(n, gap);
    }
    return out;
}

}  // namespace sigrep::oracle
