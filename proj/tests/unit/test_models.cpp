#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/rng.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/models/gaussian_markov.hpp"
#include "abcpred/models/linear_gaussian_ssm.hpp"
#include "abcpred/models/lotka_volterra.hpp"
#include "abcpred/models/mg1_queue.hpp"
#include "abcpred/models/ssm_moments.hpp"
#include "abcpred/oracles/oracles.hpp"

using namespace abcpred;

namespace {

ParamVector param(const Model& m, std::vector<double> v) { return ParamVector(std::move(v), m.parameter_names()); }

struct Moments {
    double mean;
    double var;
};

Moments moments(const std::vector<double>& x) { return {stats::mean(x), stats::variance(x)}; }

// 4 Monte Carlo standard errors of a sample mean and a Gaussian sample variance
void expect_gaussian_moments(const std::vector<double>& x, double mean, double var) {
    const auto m = moments(x);
    const double n = static_cast<double>(x.size());
    EXPECT_NEAR(m.mean, mean, 4.0 * std::sqrt(var / n));
    EXPECT_NEAR(m.var, var, 4.0 * var * std::sqrt(2.0 / n));
}

// two-sample KS critical value at level 0.001
double ks_crit(std::size_t n, std::size_t m) {
    return 1.95 * std::sqrt(static_cast<double>(n + m) / static_cast<double>(n * m));
}

const std::vector<double> lv_theta = {1.0, 0.005, 0.6};

}  // namespace

TEST(GaussianMarkov, NoiselessPathIsConstant) {
    const GaussianMarkovModel m(0.0, 0.0, 20, {21, 25});
    auto rng = Rng::stream(1, 0);
    const auto out = m.simulate(param(m, {1.0}), SimMode::joint, rng);
    for (double v : out.observed.values()) EXPECT_EQ(v, 1.0);
    ASSERT_TRUE(out.future.has_value());
    for (double v : out.future->values()) EXPECT_EQ(v, 1.0);
}

TEST(GaussianMarkov, MomentsMatchRecursion) {
    const double c = 1.0;
    const double phi = 0.5;
    const std::size_t n = 10;
    const GaussianMarkovModel m(phi, 1.0, n);
    auto rng = Rng::stream(2, 0);
    const int sims = 100000;
    std::vector<std::vector<double>> by_t(n, std::vector<double>(sims));
    std::vector<double> cross(sims);
    for (int s = 0; s < sims; ++s) {
        const auto out = m.simulate(param(m, {c}), SimMode::observed, rng);
        for (std::size_t t = 0; t < n; ++t) by_t[t][static_cast<std::size_t>(s)] = out.observed.value(t, 0);
    }
    for (std::size_t t : {1u, 2u, 5u, 10u}) {
        const double mean = c * (1.0 - std::pow(phi, t)) / (1.0 - phi);
        const double var = (1.0 - std::pow(phi, 2.0 * static_cast<double>(t))) / (1.0 - phi * phi);
        EXPECT_NEAR(mean, markov_mean(c, phi, t), 1e-14);
        EXPECT_NEAR(var, markov_variance(1.0, phi, t), 1e-14);
        expect_gaussian_moments(by_t[t - 1], mean, var);
    }
    // cov(y_3, y_7) = phi^4 var(y_3)
    for (int s = 0; s < sims; ++s) {
        const auto k = static_cast<std::size_t>(s);
        cross[k] = (by_t[2][k] - markov_mean(c, phi, 3)) * (by_t[6][k] - markov_mean(c, phi, 7));
    }
    const double cov = markov_covariance(1.0, phi, 3, 7);
    EXPECT_NEAR(cov, std::pow(phi, 4) * markov_variance(1.0, phi, 3), 1e-14);
    EXPECT_NEAR(stats::mean(cross), cov, 4.0 * stats::sd(cross) / std::sqrt(static_cast<double>(sims)));
}

TEST(GaussianMarkov, ConditionalIsMarkovInLastValue) {
    const GaussianMarkovModel m(0.5, 1.0, 3, {4, 6});
    const TimeSeriesData y({1, 2, 3}, 1, {0.2, 5.0, 2.0});
    const auto state = m.observed_state(y);
    ASSERT_EQ(state.size(), 1u);
    EXPECT_EQ(state[0], 2.0);
    auto rng = Rng::stream(3, 0);
    std::vector<double> y4;
    std::vector<double> y6;
    for (int s = 0; s < 50000; ++s) {
        const auto f = m.continue_from(state, param(m, {1.0}), rng);
        y4.push_back(f.path.value(0, 0));
        y6.push_back(f.path.value(1, 0));
    }
    expect_gaussian_moments(y4, 1.0 + 0.5 * 2.0, 1.0);
    // two steps ahead: c (1 + phi) + phi^3 y_n, variance 1 + phi^2
    expect_gaussian_moments(y6, 1.5 + 0.125 * 2.0 + 0.25 * 1.0, 1.0 + 0.25 + 0.0625);
}

TEST(GaussianMarkov, Capabilities) {
    const auto caps = GaussianMarkovModel(0.5, 1.0, 3).capabilities();
    EXPECT_TRUE(caps.joint && caps.conditional && caps.latent_joint && caps.latent_conditional);
}

TEST(Ssm, SmallObservationNoiseRecoversMarkov) {
    const std::size_t n = 6;
    const LinearGaussianSSM ssm(0.5, 1.0, 1e-12, n);
    auto rng = Rng::stream(4, 0);
    std::vector<double> y6;
    std::vector<double> y2;
    for (int s = 0; s < 100000; ++s) {
        const auto out = ssm.simulate(param(ssm, {1.0}), SimMode::observed, rng);
        y2.push_back(out.observed.value(1, 0));
        y6.push_back(out.observed.value(5, 0));
    }
    expect_gaussian_moments(y2, markov_mean(1.0, 0.5, 2), markov_variance(1.0, 0.5, 2));
    expect_gaussian_moments(y6, markov_mean(1.0, 0.5, 6), markov_variance(1.0, 0.5, 6));
}

TEST(Ssm, ConditionalOnLatent) {
    const LinearGaussianSSM m(0.5, 1.0, 0.5, 4, {5});
    auto rng = Rng::stream(5, 0);
    std::vector<double> next;
    const std::vector<double> state = {2.0};
    for (int s = 0; s < 100000; ++s) next.push_back(m.continue_from(state, param(m, {1.0}), rng).path.value(0, 0));
    expect_gaussian_moments(next, 2.0, 1.5);
}

TEST(Ssm, JointMomentsMatchClosedForm) {
    const LinearGaussianSSM m(0.5, 1.0, 0.5, 4);
    const auto mom = ssm_moments(0.5, 1.0, 0.5, 4);
    auto rng = Rng::stream(6, 0);
    std::vector<double> y4;
    std::vector<double> v4;
    for (int s = 0; s < 100000; ++s) {
        const auto out = m.simulate(param(m, {2.0}), SimMode::latent_joint, rng);
        y4.push_back(out.observed.value(3, 0));
        v4.push_back(out.latent_state[0]);
        ASSERT_TRUE(out.observed.has_latents());
        ASSERT_EQ(out.observed.latent(3, 0), out.latent_state[0]);
    }
    expect_gaussian_moments(y4, 2.0 * mom.mu(3), mom.w(3, 3));
    expect_gaussian_moments(v4, 2.0 * mom.mu(3), mom.sigma(3, 3));
}

TEST(Ssm, Capabilities) {
    const auto caps = LinearGaussianSSM(0.5, 1.0, 0.5, 4).capabilities();
    EXPECT_TRUE(caps.joint && caps.latent_joint && caps.latent_conditional);
    EXPECT_FALSE(caps.conditional);
    EXPECT_THROW(LinearGaussianSSM(0.5, 1.0, 0.5, 4).observed_state(TimeSeriesData()), UsageError);
}

TEST(Mg1, InstantArrivalsGiveServiceTimes) {
    const MG1Model m(100, 5);
    auto rng = Rng::stream(7, 0);
    std::vector<double> y;
    for (int s = 0; s < 1000; ++s) {
        const auto out = m.simulate(param(m, {4.0, 7.0, 1e6}), SimMode::observed, rng);
        for (double v : out.observed.values()) y.push_back(v);
    }
    // one-sample KS against Unif[4, 7]
    std::sort(y.begin(), y.end());
    double d = 0.0;
    const double n = static_cast<double>(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double f = (y[i] - 4.0) / 3.0;
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LT(d, 1.63 / std::sqrt(n));
}

TEST(Mg1, RecursionIdentities) {
    const MG1Model m(100, 20);
    auto rng = Rng::stream(8, 0);
    const std::vector<double> theta = {4.0, 7.0, 0.15};
    for (int s = 0; s < 200; ++s) {
        const auto out = m.simulate(param(m, theta), SimMode::joint, rng);
        const auto& y = out.observed.values();
        double x = 0.0;
        double prev_v = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double x_next = x + y[i];
            EXPECT_GE(x_next, x);
            x = x_next;
            const double v = out.observed.latent(i, 0);
            EXPECT_GT(v, prev_v);
            prev_v = v;
            // waiting time at least the service time, at least theta1
            EXPECT_GE(x - v, theta[0] - 1e-9);
        }
        // the first customer finds the queue empty: waiting time = service time = y_1 - v_1
        EXPECT_LE(y[0] - out.observed.latent(0, 0), theta[1] + 1e-9);
        EXPECT_GE(y[0] - out.observed.latent(0, 0), theta[0] - 1e-9);
        EXPECT_NEAR(out.latent_state[0], x, 1e-9);
        for (double w : out.future->values()) EXPECT_GE(w, theta[0] - 1e-9);
    }
}

TEST(Mg1, IdleServerFirstWaitIsServiceTime) {
    const MG1Model m(100, 1);
    auto rng = Rng::stream(9, 0);
    std::vector<double> w;
    const std::vector<double> state = {50.0, 50.0};
    for (int s = 0; s < 100000; ++s) w.push_back(m.continue_from(state, param(m, {4, 7, 0.15}), rng).path.value(0, 0));
    const auto mo = moments(w);
    EXPECT_NEAR(mo.mean, 5.5, 4.0 * std::sqrt(0.75 / 1e5));
    EXPECT_NEAR(mo.var, 0.75, 0.02);
    EXPECT_GE(*std::min_element(w.begin(), w.end()), 4.0);
    EXPECT_LE(*std::max_element(w.begin(), w.end()), 7.0);
}

TEST(Mg1, BusyServerFirstWait) {
    // x_n - v_n = 3: customer n+1 waits for the residual work; reference values from
    // tools/oracles/reference_values.py (exact mean, 1e6-draw variance)
    const MG1Model m(100, 1);
    auto rng = Rng::stream(10, 0);
    std::vector<double> w;
    const std::vector<double> state = {3.0, 0.0};
    for (int s = 0; s < 100000; ++s) w.push_back(m.continue_from(state, param(m, {4, 7, 0.15}), rng).path.value(0, 0));
    const auto mo = moments(w);
    EXPECT_NEAR(mo.mean, 6.0841876774784893, 4.0 * std::sqrt(1.615058 / 1e5));
    EXPECT_NEAR(mo.var, 1.615058, 0.05);
}

TEST(Mg1, ConstraintOnTheta1) {
    const MG1Model m(3, 1);
    const TimeSeriesData y({1, 2, 3}, 1, {5.0, 4.5, 6.0});
    EXPECT_TRUE(m.admissible(param(m, {4.5, 7, 0.1}), y));
    EXPECT_FALSE(m.admissible(param(m, {4.6, 7, 0.1}), y));
}

TEST(Mg1, Capabilities) {
    const auto caps = MG1Model(10, 2).capabilities();
    EXPECT_TRUE(caps.joint && caps.latent_joint && caps.latent_conditional);
    EXPECT_FALSE(caps.conditional);
}

TEST(Gillespie, PreyExtinctGivesPureDeath) {
    auto rng = Rng::stream(11, 0);
    const std::vector<double> times = {1.0, 2.0, 5.0};
    std::vector<double> at5;
    for (int s = 0; s < 10000; ++s) {
        const auto r = gillespie({0, 50}, 0.0, times, lv_theta, rng);
        std::int64_t prev = 50;
        for (const auto& z : r.records) {
            EXPECT_EQ(z[0], 0);
            EXPECT_LE(z[1], prev);
            prev = z[1];
        }
        at5.push_back(static_cast<double>(r.records[2][1]));
    }
    // binomial thinning: each predator survives to t with probability exp(-theta3 t)
    const double p = std::exp(-0.6 * 5.0);
    EXPECT_NEAR(stats::mean(at5), 50.0 * p, 4.0 * std::sqrt(50.0 * p * (1 - p) / 1e4));
}

TEST(Gillespie, PredatorExtinctGivesPureBirth) {
    auto rng = Rng::stream(12, 0);
    const std::vector<double> times = {2.0};
    std::vector<double> at2;
    for (int s = 0; s < 10000; ++s) {
        const auto r = gillespie({10, 0}, 0.0, times, lv_theta, rng);
        EXPECT_EQ(r.records[0][1], 0);
        at2.push_back(static_cast<double>(r.records[0][0]));
    }
    // Yule process: mean k e^{t}, variance k e^{t} (e^{t} - 1)
    const double g = std::exp(2.0);
    EXPECT_NEAR(stats::mean(at2), 10.0 * g, 4.0 * std::sqrt(10.0 * g * (g - 1.0) / 1e4));
}

TEST(Gillespie, AbsorbingAtZero) {
    auto rng = Rng::stream(13, 0);
    const std::vector<double> times = {1.0, 100.0};
    const auto r = gillespie({0, 0}, 0.0, times, lv_theta, rng);
    EXPECT_EQ(r.records[1], (LvState{0, 0}));
    EXPECT_FALSE(r.truncated);
}

TEST(Gillespie, ShortIntervalEventFrequencies) {
    // exactly one event in dt of each type; reference from tools/oracles/reference_values.py
    const double p_ref[3] = {0.0098455797059659421, 0.0024615678439808405, 0.0029540209884309247};
    auto rng = Rng::stream(14, 0);
    const std::vector<double> times = {1e-4};
    const int trials = 200000;
    int count[3] = {0, 0, 0};
    for (int s = 0; s < trials; ++s) {
        const auto z = gillespie({100, 50}, 0.0, times, lv_theta, rng).records[0];
        if (z == LvState{101, 50}) ++count[0];
        if (z == LvState{99, 51}) ++count[1];
        if (z == LvState{100, 49}) ++count[2];
    }
    for (int k = 0; k < 3; ++k) {
        const double f = static_cast<double>(count[k]) / trials;
        EXPECT_NEAR(f, p_ref[k], 4.0 * std::sqrt(p_ref[k] * (1 - p_ref[k]) / trials)) << "event " << k;
    }
}

TEST(Gillespie, HoldingTimeIsExponential) {
    // P(no event before t) = exp(-gamma t) with gamma = 100 + 25 + 30
    auto rng = Rng::stream(15, 0);
    const std::vector<double> times = {0.001, 0.002, 0.003};
    const int trials = 50000;
    std::vector<int> still(times.size(), 0);
    for (int s = 0; s < trials; ++s) {
        const auto r = gillespie({100, 50}, 0.0, times, lv_theta, rng);
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (r.records[k] == LvState{100, 50}) ++still[k];
        }
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double p = std::exp(-155.0 * times[k]);
        // getting back to (100, 50) takes three events, rare this early
        EXPECT_NEAR(static_cast<double>(still[k]) / trials, p, 4.0 * std::sqrt(p * (1 - p) / trials) + 2e-3);
    }
}

TEST(Gillespie, EventCapTruncates) {
    auto rng = Rng::stream(16, 0);
    const std::vector<double> times = {1.0, 50.0};
    const auto r = gillespie({100, 50}, 0.0, times, lv_theta, rng, 100);
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(r.records[1], r.records[r.truncated_from]);
}

TEST(LotkaVolterra, GridGeometry) {
    LvTask task;
    const LotkaVolterraModel m(task);
    const auto t = m.observation_times();
    ASSERT_EQ(t.size(), 81u);
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_EQ(t.back(), 24.0);
    EXPECT_NEAR(t[1], 0.3, 1e-12);
    const auto f = m.future_times();
    EXPECT_NEAR(f.front(), 24.3, 1e-12);
    EXPECT_EQ(f.back(), 45.0);
    EXPECT_EQ(f.size(), 70u);

    LvTask miss;
    miss.kind = LvTask::Kind::missing;
    miss.t1 = 15;
    miss.t2 = 36;
    miss.t3 = 51;
    miss.n_obs = 51;
    const LotkaVolterraModel mm(miss);
    EXPECT_EQ(mm.observation_times().size(), 102u);
    EXPECT_GT(mm.future_times().front(), 15.0);
    EXPECT_LT(mm.future_times().back(), 36.0);
}

TEST(LotkaVolterra, ContinuationAgreesWithJointPath) {
    LvTask task;
    task.t1 = 3.0;
    task.t2 = 6.0;
    task.n_obs = 11;
    task.future_step = 0.5;
    const LotkaVolterraModel m(task);
    const auto theta = param(m, lv_theta);
    auto rng = Rng::stream(17, 0);
    std::vector<double> joint_prey;
    std::vector<double> cont_prey;
    std::vector<double> joint_pred;
    std::vector<double> cont_pred;
    for (int s = 0; s < 3000; ++s) {
        const auto out = m.simulate(theta, SimMode::joint, rng);
        const auto& fut = *out.future;
        joint_prey.push_back(fut.value(fut.size() - 1, 0));
        joint_pred.push_back(fut.value(fut.size() - 1, 1));
        const auto f = m.continue_from(m.observed_state(out.observed), theta, rng).path;
        cont_prey.push_back(f.value(f.size() - 1, 0));
        cont_pred.push_back(f.value(f.size() - 1, 1));
    }
    EXPECT_LT(stats::ks_two_sample(joint_prey, cont_prey), ks_crit(3000, 3000));
    EXPECT_LT(stats::ks_two_sample(joint_pred, cont_pred), ks_crit(3000, 3000));
}

TEST(LotkaVolterra, PreyOnlyCarriesPredatorAsLatent) {
    LvTask task;
    task.prey_only = true;
    const LotkaVolterraModel m(task);
    auto rng = Rng::stream(18, 0);
    const auto out = m.simulate(param(m, lv_theta), SimMode::latent_joint, rng);
    EXPECT_EQ(out.observed.width(), 1u);
    ASSERT_TRUE(out.observed.has_latents());
    EXPECT_EQ(out.observed.latent(80, 0), out.latent_state[1]);
    EXPECT_EQ(out.observed.value(80, 0), out.latent_state[0]);
    const auto state = m.merge_latent(out.observed, out.latent_state);
    EXPECT_EQ(state, out.latent_state);
}

TEST(LotkaVolterra, Capabilities) {
    LvTask t1;
    const auto c1 = LotkaVolterraModel(t1).capabilities();
    EXPECT_TRUE(c1.joint && c1.conditional);
    LvTask t2;
    t2.prey_only = true;
    const auto c2 = LotkaVolterraModel(t2).capabilities();
    EXPECT_TRUE(c2.joint && c2.latent_joint && c2.latent_conditional);
    EXPECT_FALSE(c2.conditional);
    EXPECT_NO_THROW(c1.validate());
    EXPECT_NO_THROW(c2.validate());
}
