#pragma once

#include <cstdint>
#include <random>

namespace abcpred {

/// Seeded random stream. Independent streams are derived from a master seed
/// and a stream id, so each worker or chain owns its own sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Stream `stream_id` of the family rooted at `master`.
    static Rng stream(std::uint64_t master, std::uint64_t stream_id);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return exponential_(engine_) / rate; }
    std::int64_t binomial(std::int64_t trials, double p);
    /// Failures before `successes` successes with success probability p.
    std::int64_t negative_binomial(std::int64_t successes, double p);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    std::exponential_distribution<double> exponential_;
};

}  // namespace abcpred
