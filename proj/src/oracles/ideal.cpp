#include <cmath>

#include "abcpred/core/errors.hpp"
#include "abcpred/oracles/oracles.hpp"

namespace abcpred {

std::vector<TimeSeriesData> ideal_predictive(const Model& model, std::span<const double> state,
                                             const ParamVector& theta, std::size_t n_draws, Rng& rng) {
    std::vector<TimeSeriesData> out;
    out.reserve(n_draws);
    for (std::size_t i = 0; i < n_draws; ++i) out.push_back(model.continue_from(state, theta, rng).path);
    return out;
}

GapPredictive ideal_gap_predictive(const LotkaVolterraModel& model, std::span<const double> state_t1,
                                   std::span<const double> state_t2, const ParamVector& theta, std::size_t n_draws,
                                   double radius, Rng& rng) {
    const auto& task = model.task();
    if (task.kind != LvTask::Kind::missing) throw UsageError("ideal_gap_predictive: needs the missing-data task");
    if (state_t1.size() != 2 || state_t2.size() != 2 || !(radius >= 0.0)) {
        throw UsageError("ideal_gap_predictive: need two-population states and radius >= 0");
    }
    const auto gap = model.future_times();
    std::vector<double> times = gap;
    times.push_back(task.t2);
    const LvState start = {static_cast<std::int64_t>(std::llround(state_t1[0])),
                           static_cast<std::int64_t>(std::llround(state_t1[1]))};
    GapPredictive out;
    for (std::size_t i = 0; i < n_draws; ++i) {
        auto sim = gillespie(start, task.t1, times, theta.values(), rng, task.event_cap);
        ++out.n_tried;
        if (sim.truncated) continue;
        const auto& end = sim.records.back();
        const double dist = std::max(std::abs(static_cast<double>(end[0]) - state_t2[0]),
                                     std::abs(static_cast<double>(end[1]) - state_t2[1]));
        if (dist > radius) continue;
        std::vector<double> v;
        v.reserve(2 * gap.size());
        for (std::size_t k = 0; k < gap.size(); ++k) {
            v.push_back(static_cast<double>(sim.records[k][0]));
            v.push_back(static_cast<double>(sim.records[k][1]));
        }
        out.paths.emplace_back(gap, 2, std::move(v));
        ++out.n_accepted;
    }
    if (out.n_accepted == 0) {
        out.diagnostic = "no gap path ended within radius " + std::to_string(radius) + " of the t2 state in " +
                         std::to_string(out.n_tried) + " tries; increase the radius";
    }
    return out;
}

}  // namespace abcpred
