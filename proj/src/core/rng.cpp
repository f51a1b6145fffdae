#include "abcpred/core/rng.hpp"

namespace abcpred {

namespace {
std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded_engine(seed, 0)) {}

Rng Rng::stream(std::uint64_t master, std::uint64_t stream_id) {
    Rng rng(master);
    rng.engine_ = seeded_engine(master, stream_id + 1);
    return rng;
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::binomial_distribution<std::int64_t> dist(trials, p);
    return dist(engine_);
}

std::int64_t Rng::negative_binomial(std::int64_t successes, double p) {
    if (successes <= 0 || p >= 1.0) return 0;
    std::negative_binomial_distribution<std::int64_t> dist(successes, p);
    return dist(engine_);
}

}  // namespace abcpred
