#include <algorithm>
#include <cmath>
#include <limits>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Chain {
public:
    Chain(const AbcProblem& problem, const McmcOptions& options, ChainState state, Rng& rng)
        : problem_(problem), options_(options), state_(std::move(state)), rng_(rng),
          sim_mode_(simulation_mode(options.mode, options.defer)) {
        if (options_.step_scales.size() != problem_.prior->dimension()) {
            throw UsageError("abc_mcmc: need one step scale per parameter");
        }
    }

    struct Step {
        bool accepted = false;
        bool simulated = false;
        bool truncated = false;
        ChainState proposal;
    };

    Step step() {
        Step out;
        std::vector<double> u = state_.u;
        for (std::size_t k = 0; k < u.size(); ++k) u[k] += options_.step_scales[k] * rng_.normal();
        out.proposal = evaluate_proposal(problem_, u, sim_mode_, rng_);
        out.simulated = out.proposal.simulated;
        out.truncated = out.proposal.simulated && out.proposal.summary.empty();
        if (out.proposal.kernel > 0.0) {
            // symmetric proposal and flat prior inside the support: only the kernel ratio remains
            const double ratio = out.proposal.kernel / state_.kernel;
            out.accepted = ratio >= 1.0 || rng_.uniform() < ratio;
        }
        if (out.accepted) state_ = out.proposal;
        return out;
    }

    const ChainState& state() const noexcept { return state_; }
    void reset(ChainState s) { state_ = std::move(s); }

private:
    const AbcProblem& problem_;
    const McmcOptions& options_;
    ChainState state_;
    Rng& rng_;
    SimMode sim_mode_;
};

WeightedDraw draw_from(const ChainState& s) {
    WeightedDraw d;
    d.theta = s.theta;
    d.prediction = s.prediction;
    d.latent = s.latent;
    d.raw_discrepancy = s.raw;
    d.prediction_truncated = s.prediction_truncated;
    return d;
}

// The tuned component's discrepancy, or inf when another component rejects.
double tuning_discrepancy(const AcceptanceRegion& region, const ChainState& s, std::size_t component) {
    if (!s.simulated || s.summary.empty()) return kInf;
    for (std::size_t k = 0; k < region.components().size(); ++k) {
        if (k != component && region.components()[k].kernel(s.raw[k]) <= 0.0) return kInf;
    }
    return s.raw[component];
}

double finite_quantile(std::vector<double> d, double target) {
    double h = tune_threshold(d, target);
    if (std::isinf(h)) {
        h = 0.0;
        for (double v : d) {
            if (std::isfinite(v)) h = std::max(h, v);
        }
    }
    return h;
}

}  // namespace

ChainState find_init(const AbcProblem& problem, std::size_t budget, SimMode sim_mode, Rng& rng) {
    if (budget == 0) throw UsageError("find_init: budget must be at least 1");
    const auto& prior = *problem.prior;
    std::vector<double> best(problem.region.components().size(), kInf);
    for (std::size_t i = 0; i < budget; ++i) {
        std::vector<double> u(prior.dimension());
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(prior.bounds()[k].lo, prior.bounds()[k].hi);
        auto s = evaluate_proposal(problem, u, sim_mode, rng);
        if (s.kernel > 0.0) return s;
        for (std::size_t k = 0; k < best.size(); ++k) best[k] = std::min(best[k], s.raw[k]);
    }
    std::string msg = "find_init: no admissible starting state in " + std::to_string(budget) +
                      " prior draws; minimum discrepancy (";
    for (std::size_t k = 0; k < best.size(); ++k) msg += (k ? ", " : "") + std::to_string(best[k]);
    throw InitError(msg + ")", best);
}

SamplerReport abc_mcmc(const AbcProblem& problem, const McmcOptions& options, const ChainState& init,
                       std::uint64_t seed) {
    check_capabilities(*problem.model, options.mode, options.defer);
    if (options.iterations == 0 || options.burn_in > options.iterations) {
        throw UsageError("abc_mcmc: need iterations >= 1 and burn_in <= iterations");
    }
    if (!(init.kernel > 0.0) || !problem.prior->contains_transformed(init.u)) {
        throw UsageError("abc_mcmc: initial state must have positive kernel weight and prior density");
    }
    Rng rng = Rng::stream(seed, 0);
    Chain chain(problem, options, init, rng);
    SamplerReport report;
    report.mode = options.mode;
    report.deferred = options.mode == PredictionMode::P && options.defer;
    report.seed = seed;
    report.iterations = options.iterations;
    report.burn_in = options.burn_in;
    report.thresholds = problem.region.thresholds();
    report.min_discrepancy.assign(problem.region.components().size(), kInf);
    std::size_t accepted = 0;
    bool fresh = true;
    for (std::size_t it = 0; it < options.iterations; ++it) {
        auto st = chain.step();
        if (st.simulated) ++report.n_simulations;
        if (st.truncated) ++report.n_truncated;
        for (std::size_t k = 0; k < report.min_discrepancy.size(); ++k) {
            report.min_discrepancy[k] = std::min(report.min_discrepancy[k], st.proposal.raw[k]);
        }
        if (st.accepted) fresh = true;
        if (it < options.burn_in) continue;
        if (st.accepted) ++accepted;
        if (fresh || report.draws.empty()) {
            report.draws.push_back(draw_from(chain.state()));
            fresh = false;
        } else {
            ++report.draws.back().repeats;
        }
    }
    const std::size_t kept = options.iterations - options.burn_in;
    report.acceptance_rate = kept > 0 ? static_cast<double>(accepted) / static_cast<double>(kept) : 0.0;
    if (report.deferred) {
        Rng prng = Rng::stream(seed, 1);
        report = defer_predictions(std::move(report), *problem.model, prng);
    }
    return report;
}

TuningResult tune_mcmc(const AbcProblem& problem, const McmcOptions& options, const TuningOptions& tuning,
                       std::uint64_t seed) {
    check_capabilities(*problem.model, options.mode, options.defer);
    const std::size_t comp = tuning.component;
    if (comp >= problem.region.components().size()) throw UsageError("tune_mcmc: no such region component");
    if (!(tuning.target_acceptance > 0.0 && tuning.target_acceptance < 1.0)) {
        throw UsageError("tune_mcmc: target acceptance must lie in (0, 1)");
    }
    if (tuning.prior_draws == 0 || tuning.pilot_iterations == 0) throw UsageError("tune_mcmc: empty pilot");
    const SimMode sim_mode = simulation_mode(options.mode, options.defer);
    Rng rng = Rng::stream(seed, 2);
    TuningResult result;
    AbcProblem work = problem;
    work.region.set_threshold(comp, kInf);

    // prior pilot
    std::vector<double> d;
    d.reserve(tuning.prior_draws);
    ChainState best;
    double best_d = kInf;
    const auto& prior = *problem.prior;
    for (std::size_t i = 0; i < tuning.prior_draws; ++i) {
        std::vector<double> u(prior.dimension());
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(prior.bounds()[k].lo, prior.bounds()[k].hi);
        auto s = evaluate_proposal(work, u, sim_mode, rng);
        if (s.simulated) ++result.n_simulations;
        const double di = tuning_discrepancy(work.region, s, comp);
        d.push_back(di);
        if (di < best_d) {
            best_d = di;
            best = std::move(s);
        }
    }
    if (std::isinf(best_d)) {
        throw InitError("tune_mcmc: no prior pilot draw satisfied the fixed region components",
                        std::vector<double>(problem.region.components().size(), kInf));
    }
    double h = finite_quantile(d, tuning.target_acceptance);
    result.threshold_history.push_back(h);
    work.region.set_threshold(comp, h);
    best.kernel = work.region.weight_from_raw(best.raw);

    Chain chain(work, options, best, rng);
    for (std::size_t round = 0; round < tuning.max_rounds; ++round) {
        d.clear();
        std::size_t accepted = 0;
        ChainState round_best;
        double round_best_d = kInf;
        for (std::size_t it = 0; it < tuning.pilot_iterations; ++it) {
            auto st = chain.step();
            if (st.simulated) ++result.n_simulations;
            if (st.accepted) ++accepted;
            // uniform-kernel acceptance is P(d* <= h); record d* against an open threshold
            const double di = tuning_discrepancy(work.region, st.proposal, comp);
            d.push_back(di);
            if (di < round_best_d) {
                round_best_d = di;
                round_best = std::move(st.proposal);
            }
        }
        const double rate = static_cast<double>(accepted) / static_cast<double>(tuning.pilot_iterations);
        result.rate_history.push_back(rate);
        const double h_new = finite_quantile(d, tuning.target_acceptance);
        const bool rate_ok = std::abs(rate - tuning.target_acceptance) <= 0.25 * tuning.target_acceptance;
        const bool h_ok = std::abs(h_new - h) <= 0.1 * h;
        if (rate_ok && h_ok) {
            result.converged = true;
            break;
        }
        h = h_new;
        result.threshold_history.push_back(h);
        work.region.set_threshold(comp, h);
        ChainState current = chain.state();
        current.kernel = work.region.weight_from_raw(current.raw);
        if (current.kernel <= 0.0 && std::isfinite(round_best_d)) {
            current = round_best;
            current.kernel = work.region.weight_from_raw(current.raw);
        }
        chain.reset(std::move(current));
    }
    result.region = work.region;
    result.start = chain.state();
    result.start.kernel = result.region.weight_from_raw(result.start.raw);
    if (!(result.start.kernel > 0.0)) throw UsageError("tune_mcmc: lost a valid chain state");
    return result;
}

}  // namespace abcpred
