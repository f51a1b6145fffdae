#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

namespace {

struct Slot {
    ChainState state;
    double weight = 0.0;
    bool truncated = false;
};

std::vector<double> uniform_in_box(const Prior& box, Rng& rng) {
    std::vector<double> u(box.dimension());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(box.bounds()[k].lo, box.bounds()[k].hi);
    return u;
}

// Evaluate m proposals drawn from `box` over `workers` independent streams.
// Output order is (worker, index) regardless of scheduling.
std::vector<Slot> run_proposals(const AbcProblem& problem, const Prior& box, std::size_t m, SimMode sim_mode,
                                std::uint64_t seed, std::size_t workers, bool accept_by_kernel) {
    workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(m, 1)));
    std::vector<std::vector<Slot>> parts(workers);
    auto work = [&](std::size_t w) {
        Rng rng = Rng::stream(seed, w);
        const std::size_t lo = m * w / workers;
        const std::size_t hi = m * (w + 1) / workers;
        auto& out = parts[w];
        out.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            Slot s;
            s.state = evaluate_proposal(problem, uniform_in_box(box, rng), sim_mode, rng);
            s.truncated = s.state.simulated && s.state.summary.empty();
            s.weight = s.state.kernel;
            if (accept_by_kernel && s.weight > 0.0 && s.weight < 1.0) s.weight = rng.uniform() < s.weight ? 1.0 : 0.0;
            if (s.weight == 0.0) {
                // keep raw discrepancies for diagnostics, drop the heavy parts
                s.state.prediction.reset();
                s.state.latent.clear();
                s.state.summary.clear();
            }
            out.push_back(std::move(s));
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    std::vector<Slot> all;
    all.reserve(m);
    for (auto& p : parts) {
        for (auto& s : p) all.push_back(std::move(s));
    }
    return all;
}

std::vector<double> min_raw(const std::vector<Slot>& slots, std::size_t k) {
    std::vector<double> best(k, std::numeric_limits<double>::infinity());
    for (const auto& s : slots) {
        for (std::size_t j = 0; j < k && j < s.state.raw.size(); ++j) best[j] = std::min(best[j], s.state.raw[j]);
    }
    return best;
}

WeightedDraw to_draw(Slot&& s) {
    WeightedDraw d;
    d.theta = std::move(s.state.theta);
    d.prediction = std::move(s.state.prediction);
    d.latent = std::move(s.state.latent);
    d.weight = s.weight;
    d.raw_discrepancy = std::move(s.state.raw);
    d.prediction_truncated = s.state.prediction_truncated;
    return d;
}

std::string format_min(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + ")";
}

void finish_predictions(SamplerReport& report, const AbcProblem& problem, PredictionMode mode, bool defer,
                        std::uint64_t seed) {
    if (mode == PredictionMode::P && defer) {
        Rng rng = Rng::stream(seed, 1u << 20);
        report = defer_predictions(std::move(report), *problem.model, rng);
    }
}

}  // namespace

SamplerReport abc_rejection(const AbcProblem& problem, std::size_t m, PredictionMode mode, std::uint64_t seed,
                            std::size_t workers, bool defer) {
    if (m == 0) throw UsageError("abc_rejection: m must be positive");
    check_capabilities(*problem.model, mode, defer);
    auto slots = run_proposals(problem, *problem.prior, m, simulation_mode(mode, defer), seed, workers, true);
    SamplerReport report;
    report.mode = mode;
    report.deferred = mode == PredictionMode::P && defer;
    report.seed = seed;
    report.iterations = m;
    report.thresholds = problem.region.thresholds();
    report.min_discrepancy = min_raw(slots, problem.region.components().size());
    std::size_t accepted = 0;
    for (auto& s : slots) {
        if (s.state.simulated) ++report.n_simulations;
        if (s.truncated) ++report.n_truncated;
        if (s.weight > 0.0) {
            ++accepted;
            report.draws.push_back(to_draw(std::move(s)));
        }
    }
    report.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(m);
    if (accepted == 0) {
        report.warnings.push_back("no proposal accepted; minimum discrepancy " + format_min(report.min_discrepancy));
    }
    finish_predictions(report, problem, mode, defer, seed);
    return report;
}

SamplerReport abc_importance(const AbcProblem& problem, const Prior& proposal, std::size_t m, PredictionMode mode,
                             std::uint64_t seed, std::size_t workers, bool defer) {
    if (m == 0) throw UsageError("abc_importance: m must be positive");
    check_capabilities(*problem.model, mode, defer);
    const Prior& prior = *problem.prior;
    if (proposal.dimension() != prior.dimension()) throw UsageError("abc_importance: proposal dimension mismatch");
    for (std::size_t k = 0; k < prior.dimension(); ++k) {
        const auto& a = prior.transforms()[k];
        const auto& b = proposal.transforms()[k];
        if (a.kind != b.kind || a.reference != b.reference) {
            throw UsageError("abc_importance: proposal must use the prior's parameter transforms");
        }
        if (proposal.bounds()[k].lo > prior.bounds()[k].lo || proposal.bounds()[k].hi < prior.bounds()[k].hi) {
            throw UsageError("abc_importance: proposal support must cover the prior support");
        }
    }
    auto slots = run_proposals(problem, proposal, m, simulation_mode(mode, defer), seed, workers, false);
    SamplerReport report;
    report.mode = mode;
    report.deferred = mode == PredictionMode::P && defer;
    report.seed = seed;
    report.iterations = m;
    report.thresholds = problem.region.thresholds();
    report.min_discrepancy = min_raw(slots, problem.region.components().size());
    std::vector<double> weights;
    weights.reserve(slots.size());
    double total = 0.0;
    std::size_t positive = 0;
    for (auto& s : slots) {
        if (s.state.simulated) ++report.n_simulations;
        if (s.truncated) ++report.n_truncated;
        if (s.weight > 0.0) {
            s.weight *= prior.transformed_density(s.state.u) / proposal.transformed_density(s.state.u);
            ++positive;
        }
        total += s.weight;
        weights.push_back(s.weight);
    }
    if (!(total > 0.0)) {
        throw DegenerateSampleError("abc_importance: all weights are zero; minimum discrepancy " +
                                        format_min(report.min_discrepancy),
                                    report.min_discrepancy.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                                   : report.min_discrepancy.front());
    }
    report.ess = ess(weights);
    report.acceptance_rate = static_cast<double>(positive) / static_cast<double>(m);
    for (auto& s : slots) {
        s.weight /= total;
        report.draws.push_back(to_draw(std::move(s)));
    }
    finish_predictions(report, problem, mode, defer, seed);
    return report;
}

AcceptanceRegion tune_rejection(const AbcProblem& problem, double target_acceptance, std::size_t n_pilot,
                                std::size_t component, std::uint64_t seed) {
    const auto& comps = problem.region.components();
    if (component >= comps.size()) throw UsageError("tune_rejection: no such region component");
    AbcProblem open = problem;
    open.region.set_threshold(component, std::numeric_limits<double>::infinity());
    auto slots = run_proposals(open, *problem.prior, n_pilot, SimMode::observed, seed, 1, false);
    std::vector<double> d;
    d.reserve(slots.size());
    for (const auto& s : slots) d.push_back(s.weight > 0.0 ? s.state.raw[component] : std::numeric_limits<double>::infinity());
    AcceptanceRegion region = problem.region;
    double h = tune_threshold(d, target_acceptance);
    if (std::isinf(h)) {
        h = 0.0;
        for (double v : d) {
            if (std::isfinite(v)) h = std::max(h, v);
        }
    }
    region.set_threshold(component, h);
    return region;
}

}  // namespace abcpred
