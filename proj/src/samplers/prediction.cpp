#include "abcpred/core/errors.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

std::vector<WeightedDraw> abc_f_predict(const std::vector<WeightedDraw>& theta_draws, const Model& model,
                                        const TimeSeriesData& observed, Rng& rng) {
    if (!model.capabilities().conditional) {
        throw UsageError(std::string(model.kind()) + ": ABC-F needs conditional sampling from pi(y~ | y, theta)");
    }
    if (theta_draws.empty()) throw UsageError("abc_f_predict: no parameter draws");
    const auto state = model.observed_state(observed);
    std::vector<WeightedDraw> out;
    out.reserve(theta_draws.size());
    for (const auto& d : theta_draws) {
        WeightedDraw p = d;
        auto f = model.continue_from(state, d.theta, rng);
        p.prediction = std::move(f.path);
        p.prediction_truncated = f.truncated;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<WeightedDraw> abc_l_predict(const std::vector<WeightedDraw>& draws, const Model& model,
                                        const TimeSeriesData& observed, Rng& rng, std::size_t* n_simulations) {
    if (!model.capabilities().latent_conditional) {
        throw UsageError(std::string(model.kind()) + ": ABC-L needs latent-conditional sampling");
    }
    std::size_t count = 0;
    std::vector<WeightedDraw> out;
    out.reserve(draws.size());
    for (const auto& d : draws) {
        WeightedDraw p = d;
        if (d.weight > 0.0) {
            if (d.latent.empty()) throw std::logic_error("abc_l_predict: positive-weight draw without a latent state");
            auto f = model.continue_from(model.merge_latent(observed, d.latent), d.theta, rng);
            p.prediction = std::move(f.path);
            p.prediction_truncated = f.truncated;
            ++count;
        }
        out.push_back(std::move(p));
    }
    if (n_simulations != nullptr) *n_simulations = count;
    return out;
}

SamplerReport defer_predictions(SamplerReport report, const Model& model, Rng& rng) {
    if (!model.capabilities().latent_conditional) {
        throw UsageError(std::string(model.kind()) + ": deferred prediction needs latent-conditional sampling");
    }
    for (auto& d : report.draws) {
        if (!(d.weight > 0.0) || d.prediction) continue;
        if (d.latent.empty()) throw std::logic_error("defer_predictions: retained draw without a continuation state");
        auto f = model.continue_from(d.latent, d.theta, rng);
        d.prediction = std::move(f.path);
        d.prediction_truncated = f.truncated;
        ++report.n_conditional_simulations;
    }
    report.deferred = true;
    return report;
}

}  // namespace abcpred
