#include "abcpred/models/lotka_volterra.hpp"

#include <cmath>

#include "abcpred/core/errors.hpp"

namespace abcpred {

namespace {
constexpr double kPopulationGuard = 1e15;

void fill_rest(GillespieResult& out, const LvState& z, std::size_t total) {
    while (out.records.size() < total) out.records.push_back(z);
}
}  // namespace

GillespieResult gillespie(const LvState& start, double t0, std::span<const double> record_times,
                          std::span<const double> theta, Rng& rng, std::uint64_t event_cap) {
    if (theta.size() != 3) throw UsageError("gillespie: theta must have 3 components");
    if (start[0] < 0 || start[1] < 0) throw UsageError("gillespie: populations must be nonnegative");
    GillespieResult out;
    out.records.reserve(record_times.size());
    const std::size_t total = record_times.size();
    LvState z = start;
    double t = t0;
    std::uint64_t events = 0;
    while (out.records.size() < total) {
        const double next_record = record_times[out.records.size()];
        if (next_record < t) throw UsageError("gillespie: record times must be increasing and >= t0");
        if (z[0] == 0 && z[1] == 0) {
            fill_rest(out, z, total);
            break;
        }
        if (z[1] == 0) {
            // pure birth of prey: Yule process, z + NegBin(z, e^{-theta1 dt})
            const double dt = next_record - t;
            const double growth = theta[0] * dt;
            if (std::log(static_cast<double>(z[0])) + growth > std::log(kPopulationGuard)) {
                out.truncated = true;
                out.truncated_from = out.records.size();
                fill_rest(out, z, total);
                break;
            }
            z[0] += rng.negative_binomial(z[0], std::exp(-growth));
            t = next_record;
            out.records.push_back(z);
            continue;
        }
        if (z[0] == 0) {
            const double dt = next_record - t;
            z[1] = rng.binomial(z[1], std::exp(-theta[2] * dt));
            t = next_record;
            out.records.push_back(z);
            continue;
        }
        const double r1 = theta[0] * static_cast<double>(z[0]);
        const double r2 = theta[1] * static_cast<double>(z[0]) * static_cast<double>(z[1]);
        const double r3 = theta[2] * static_cast<double>(z[1]);
        const double rate = r1 + r2 + r3;
        const double t_next = t + rng.exponential(rate);
        while (out.records.size() < total && record_times[out.records.size()] < t_next) out.records.push_back(z);
        if (out.records.size() == total) break;
        t = t_next;
        const double pick = rng.uniform() * rate;
        if (pick < r1) {
            ++z[0];
        } else if (pick < r1 + r2) {
            --z[0];
            ++z[1];
        } else {
            --z[1];
        }
        if (++events > event_cap || static_cast<double>(z[0]) > kPopulationGuard ||
            static_cast<double>(z[1]) > kPopulationGuard) {
            out.truncated = true;
            out.truncated_from = out.records.size();
            fill_rest(out, z, total);
            break;
        }
    }
    return out;
}

std::vector<double> equidistant(double lo, double hi, std::size_t count) {
    if (count < 2) throw UsageError("equidistant: need at least two points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    g.back() = hi;
    return g;
}

LotkaVolterraModel::LotkaVolterraModel(LvTask task) : task_(task) {
    if (!(task_.t1 > 0.0 && task_.t2 > task_.t1) || task_.n_obs < 2 || task_.y0[0] < 0 || task_.y0[1] < 0) {
        throw UsageError("lotka_volterra: need 0 < t1 < t2, n_obs >= 2 and nonnegative y0");
    }
    const double spacing = task_.t1 / static_cast<double>(task_.n_obs - 1);
    obs_times_ = equidistant(0.0, task_.t1, task_.n_obs);
    if (task_.kind == LvTask::Kind::missing) {
        if (task_.prey_only || !(task_.t3 > task_.t2)) throw UsageError("lotka_volterra: missing task needs t3 > t2");
        auto block2 = equidistant(task_.t2, task_.t3, task_.n_obs);
        obs_times_.insert(obs_times_.end(), block2.begin(), block2.end());
        const auto gap_steps = static_cast<std::size_t>(std::llround((task_.t2 - task_.t1) / spacing));
        auto gap = equidistant(task_.t1, task_.t2, gap_steps + 1);
        future_times_.assign(gap.begin() + 1, gap.end() - 1);
    } else {
        if (!(task_.future_step > 0.0)) throw UsageError("lotka_volterra: future_step must be positive");
        const auto steps = static_cast<std::size_t>(std::llround((task_.t2 - task_.t1) / task_.future_step));
        auto grid = equidistant(task_.t1, task_.t2, steps + 1);
        future_times_.assign(grid.begin() + 1, grid.end());
    }
}

SimulatorCapabilities LotkaVolterraModel::capabilities() const {
    if (task_.kind == LvTask::Kind::missing) return {true, false, false, false};
    if (task_.prey_only) return {true, false, true, true};
    return {true, true, false, true};
}

SimOutput LotkaVolterraModel::simulate(const ParamVector& theta, SimMode mode, Rng& rng) const {
    const bool missing = task_.kind == LvTask::Kind::missing;
    const bool want_future = mode == SimMode::joint;
    const std::size_t n1 = task_.n_obs;

    // record times in chronological order
    std::vector<double> times(obs_times_.begin(), obs_times_.begin() + static_cast<std::ptrdiff_t>(n1));
    if (missing || want_future) times.insert(times.end(), future_times_.begin(), future_times_.end());
    if (missing) times.insert(times.end(), obs_times_.begin() + static_cast<std::ptrdiff_t>(n1), obs_times_.end());

    const auto sim = gillespie(task_.y0, 0.0, times, theta.values(), rng, task_.event_cap);

    std::vector<std::size_t> obs_idx;
    std::vector<std::size_t> fut_idx;
    for (std::size_t i = 0; i < n1; ++i) obs_idx.push_back(i);
    if (missing) {
        const std::size_t gap = future_times_.size();
        for (std::size_t i = 0; i < gap; ++i) fut_idx.push_back(n1 + i);
        for (std::size_t i = 0; i < n1; ++i) obs_idx.push_back(n1 + gap + i);
    } else if (want_future) {
        for (std::size_t i = 0; i < future_times_.size(); ++i) fut_idx.push_back(n1 + i);
    }

    SimOutput out;
    std::vector<double> values;
    std::vector<double> predators;
    for (std::size_t i : obs_idx) {
        values.push_back(static_cast<double>(sim.records[i][0]));
        if (task_.prey_only) {
            predators.push_back(static_cast<double>(sim.records[i][1]));
        } else {
            values.push_back(static_cast<double>(sim.records[i][1]));
        }
    }
    out.observed = TimeSeriesData(obs_times_, observation_width(), std::move(values));
    if (task_.prey_only) out.observed.set_latents(1, std::move(predators));
    const auto& at_t1 = sim.records[n1 - 1];
    out.latent_state = {static_cast<double>(at_t1[0]), static_cast<double>(at_t1[1])};
    if (sim.truncated) {
        const std::size_t last_obs = obs_idx.back();
        out.truncated = sim.truncated_from <= last_obs;
        out.future_truncated = !out.truncated;
    }
    if (!fut_idx.empty()) {
        std::vector<double> f;
        for (std::size_t i : fut_idx) {
            f.push_back(static_cast<double>(sim.records[i][0]));
            f.push_back(static_cast<double>(sim.records[i][1]));
        }
        out.future = TimeSeriesData(future_times_, 2, std::move(f));
    }
    return out;
}

Forecast LotkaVolterraModel::continue_from(std::span<const double> state, const ParamVector& theta,
                                           Rng& rng) const {
    if (task_.kind == LvTask::Kind::missing) {
        throw UsageError("lotka_volterra: the missing-data task has no conditional sampler");
    }
    if (state.size() != 2) throw UsageError("lotka_volterra: continuation state is (prey, predator) at t1");
    const LvState start = {static_cast<std::int64_t>(std::llround(state[0])),
                           static_cast<std::int64_t>(std::llround(state[1]))};
    const auto sim = gillespie(start, task_.t1, future_times_, theta.values(), rng, task_.event_cap);
    std::vector<double> f;
    f.reserve(2 * sim.records.size());
    for (const auto& z : sim.records) {
        f.push_back(static_cast<double>(z[0]));
        f.push_back(static_cast<double>(z[1]));
    }
    return {TimeSeriesData(future_times_, 2, std::move(f)), sim.truncated};
}

std::vector<double> LotkaVolterraModel::observed_state(const TimeSeriesData& observed) const {
    if (task_.kind == LvTask::Kind::missing || task_.prey_only) {
        throw UsageError("lotka_volterra: conditional sampling needs both populations observed at t1");
    }
    if (observed.size() != task_.n_obs || observed.width() != 2) throw UsageError("lotka_volterra: observed data shape");
    const auto last = observed.record(task_.n_obs - 1);
    return {last[0], last[1]};
}

std::vector<double> LotkaVolterraModel::merge_latent(const TimeSeriesData& observed,
                                                     std::span<const double> latent_state) const {
    if (task_.kind == LvTask::Kind::missing) {
        throw UsageError("lotka_volterra: the missing-data task has no latent-conditional sampler");
    }
    if (!task_.prey_only) return observed_state(observed);
    if (latent_state.size() != 2) throw UsageError("lotka_volterra: latent state is (prey, predator) at t1");
    if (observed.size() != task_.n_obs || observed.width() != 1) throw UsageError("lotka_volterra: observed data shape");
    return {observed.value(task_.n_obs - 1, 0), latent_state[1]};
}

}  // namespace abcpred
