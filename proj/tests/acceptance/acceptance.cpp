// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status 1
// when any criterion fails. Pass criterion numbers as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcpred/core/rng.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/harness/config.hpp"
#include "abcpred/harness/experiment.hpp"
#include "abcpred/models/gaussian_markov.hpp"
#include "abcpred/models/linear_gaussian_ssm.hpp"
#include "abcpred/models/lotka_volterra.hpp"
#include "abcpred/oracles/oracles.hpp"
#include "abcpred/samplers/samplers.hpp"

using namespace abcpred;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("abcpred-acceptance-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentResult run(const std::string& id, std::optional<std::size_t> cap, const std::string& tag) {
    RunOptions opts;
    opts.iterations = cap;
    opts.out_dir = scratch(id + "-" + tag);
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_experiment(parse_config(json::parse(canonical_config(id))), opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  [%s%s%s done in %.1f s]\n", id.c_str(), cap ? " capped at " : "",
                cap ? std::to_string(*cap).c_str() : "", secs);
    std::fflush(stdout);
    return r;
}

const RunResult& find_run(const ExperimentResult& r, const std::string& label) {
    for (const auto& x : r.runs) {
        if (x.label == label) return x;
    }
    throw std::runtime_error("no run " + label);
}

std::vector<double> chain_of(const RunResult& r, const std::function<double(const WeightedDraw&)>& f) {
    return expand_chain(r.report.draws, f);
}

double theta0(const WeightedDraw& d) { return d.theta[0]; }

std::function<double(const WeightedDraw&)> pred_at(std::size_t k, std::size_t j = 0) {
    return [k, j](const WeightedDraw& d) { return d.prediction->value(k, j); };
}

// mass-weighted quantile of f over a run's draws
double run_quantile(const RunResult& r, const std::function<double(const WeightedDraw&)>& f, double p) {
    std::vector<double> x;
    std::vector<double> w;
    for (const auto& d : r.report.draws) {
        if (d.mass() <= 0.0) continue;
        x.push_back(f(d));
        w.push_back(d.mass());
    }
    return stats::repeated_quantile(x, w, p);
}

// ---------------------------------------------------------------- Markov
struct MarkovChecks {
    Verdict c1;
    Verdict c2;
    double h_s1 = 0.0;
    double ybar = 0.0;
    double yn = 0.0;
};

// criterion 1 tolerance on the c-marginal
Verdict c_marginal(const RunResult& r, const Gaussian1D& target) {
    const auto c = chain_of(r, theta0);
    const double m = stats::mean(c);
    const double ratio = stats::variance(c) / target.variance;
    const bool ok = std::abs(m - target.mean) < 0.05 && ratio >= 1.0 && ratio <= 1.6;
    return {ok, fmt("mean error %.4f, variance ratio %.3f, acceptance %.3f", m - target.mean, ratio,
                    r.report.acceptance_rate)};
}

MarkovChecks markov_checks(const ExperimentResult& res) {
    const double phi = res.config.model.at("phi").get<double>();
    const auto n = res.config.model.at("n").get<std::size_t>();
    const GaussianMarkovModel m(phi, 1.0, n, {n + 1});
    const auto y = res.fixture.observed.column(0);
    MarkovChecks out;
    out.ybar = markov_weighted_average(y, phi);
    out.yn = y.back();
    const MarkovSummaries s{out.ybar, out.yn};
    const auto post = markov_c_posterior(m, out.ybar, 0.0);

    const auto& s1 = find_run(res, "s1");
    const auto& s3 = find_run(res, "s3");
    out.h_s1 = s1.report.thresholds.at(0);
    out.c1 = c_marginal(s1, post);

    // s3 predictive against the exact predictive
    const auto exact = markov_predictive(m, s, MarkovVariant::exact);
    const auto y3 = stats::thin(chain_of(s3, pred_at(0)), 10000);
    const double ks3 = stats::ks_normal(y3, exact.mean, exact.sd());
    // s3 c-marginal is expected to miss the criterion 1 tolerance
    const auto c3 = c_marginal(s3, post);
    // s1 predictive carries the a_{phi,n} inflation
    const auto y1 = chain_of(s1, pred_at(0));
    const double v1 = stats::variance(y1);
    const double floor = ab_coefficients(phi, n).a + 1.0 / static_cast<double>(n);
    const double ess1 = stats::batch_means_ess(y1);
    const double tol = 3.0 * floor * std::sqrt(2.0 / ess1);
    const bool ok = ks3 < 0.05 && !c3.pass && v1 >= floor - tol;
    out.c2 = {ok, fmt("s3 y@%zu KS %.4f; s3 c %s (%s); s1 y@%zu variance %.4f vs floor %.4f - %.4f", n + 1, ks3,
                      c3.pass ? "passes" : "fails", c3.detail.c_str(), n + 1, v1, floor, tol)};
    return out;
}

// ------------------------------------------------------------ criteria
std::optional<ExperimentResult> fig1;

const ExperimentResult& markov_fig1() {
    if (!fig1) fig1 = run("markov-fig1", std::nullopt, "full");
    return *fig1;
}

Verdict criterion1() { return markov_checks(markov_fig1()).c1; }

Verdict criterion2() { return markov_checks(markov_fig1()).c2; }

Verdict criterion3() {
    const auto& res = markov_fig1();
    const GaussianMarkovModel m(0.5, 1.0, 100, {101});
    const auto mc = markov_checks(res);
    const MarkovSummaries s{mc.ybar, mc.yn};
    double worst = 0.0;
    for (double h : {0.0, 0.1, 1.0}) {
        const auto f = markov_predictive(m, s, MarkovVariant::F_sbar, h);
        const auto p = markov_predictive(m, s, MarkovVariant::P_ring, h);
        worst = std::max({worst, std::abs(f.mean - p.mean), std::abs(f.variance - p.variance)});
    }
    // uniform kernel of half-width h inflates like a Gaussian of sd h / sqrt(3)
    const double h_match = mc.h_s1 / std::sqrt(3.0);
    const auto target = markov_predictive(m, s, MarkovVariant::F_sbar, h_match);
    const auto yf = stats::thin(chain_of(find_run(res, "s1-F"), pred_at(0)), 10000);
    const double ks = stats::ks_normal(yf, target.mean, target.sd());
    return {worst <= 1e-12 && ks < 0.05,
            fmt("max |F_sbar - P_ring| %.2e; s1-F KS %.4f at h %.4f (matched %.4f)", worst, ks, mc.h_s1, h_match)};
}

Verdict criterion4() {
    const auto res = run("markov-appendix", std::nullopt, "full");
    const auto mc = markov_checks(res);
    return {mc.c1.pass && mc.c2.pass, "phi 0.99. c1: " + std::string(mc.c1.pass ? "PASS " : "FAIL ") + mc.c1.detail +
                                          ". c2: " + (mc.c2.pass ? "PASS " : "FAIL ") + mc.c2.detail};
}

Verdict criterion5() {
    double worst = 0.0;
    auto rel = [&](double a, double b, double scale) { worst = std::max(worst, std::abs(a - b) / scale); };
    const LinearGaussianSSM m(0.5, 1.0, 0.5, 5);
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        auto rng = Rng::stream(505, rep);
        const auto y = m.simulate(ParamVector({1.0}, m.parameter_names()), SimMode::observed, rng).observed.column(0);
        const auto a = ssm_posteriors(m, y);
        const auto b = ssm_posteriors_bruteforce(m, y);
        rel(a.c_posterior.mean, b.c_posterior.mean, std::abs(b.c_posterior.mean));
        rel(a.c_posterior.variance, b.c_posterior.variance, b.c_posterior.variance);
        rel(a.vn_posterior.mean, b.vn_posterior.mean, std::abs(b.vn_posterior.mean));
        rel(a.vn_posterior.variance, b.vn_posterior.variance, b.vn_posterior.variance);
        rel(a.predictive_yn1.mean, b.predictive_yn1.mean, std::abs(b.predictive_yn1.mean));
        rel(a.predictive_yn1.variance, b.predictive_yn1.variance, b.predictive_yn1.variance);
        // joint moments relative to the size of the vector / matrix
        rel((a.joint_mean - b.joint_mean).cwiseAbs().maxCoeff(), 0.0, b.joint_mean.cwiseAbs().maxCoeff());
        rel((a.joint_cov - b.joint_cov).cwiseAbs().maxCoeff(), 0.0, b.joint_cov.cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-6, fmt("max relative difference %.2e over 5 data sets", worst)};
}

Verdict criterion6() {
    const std::size_t sims = 100000;
    const double h = 0.1;
    const double yn = 2.0;
    bool ok = true;
    std::ostringstream detail;
    for (double phi : {0.0, 0.5, 0.9, 1.0, 1.5}) {
        for (std::size_t n : {10u, 100u}) {
            const auto bound = acceptance_bound(phi, 1.0, n, h);
            // grid centred on the c that puts E[z_n] at y_n
            const double slope = markov_mean(1.0, phi, n);
            const double c_star = yn / slope;
            const double step = 0.05 * std::sqrt(markov_variance(1.0, phi, n)) / std::abs(slope);
            auto rng = Rng::stream(606, static_cast<std::uint64_t>(phi * 10) * 1000 + n);
            auto rate = [&](double c) {
                std::size_t hit = 0;
                for (std::size_t s = 0; s < sims; ++s) {
                    double z = 0.0;
                    for (std::size_t t = 0; t < n; ++t) z = c + phi * z + rng.normal();
                    hit += std::abs(z - yn) <= h;
                }
                return static_cast<double>(hit) / static_cast<double>(sims);
            };
            double grid_max = -1.0;
            double c_best = c_star;
            for (int g = -20; g <= 20; ++g) {
                const double c = c_star + g * step;
                const double r = rate(c);
                if (r > grid_max) {
                    grid_max = r;
                    c_best = c;
                }
            }
            // fresh estimate at the grid argmax; the grid maximum itself is biased upward
            const double best = rate(c_best);
            const double se = std::sqrt(std::max(best, bound.value) * (1 - std::max(best, bound.value)) / sims);
            const bool upper = bound.kind == AcceptanceBound::Kind::upper;
            const bool here = upper ? best <= bound.value + 3 * se : best >= bound.value - 3 * se;
            ok = ok && here;
            detail << fmt("phi %.1f n %zu: MC %.5f (grid max %.5f) %s %s %.5f; ", phi, n, best, grid_max,
                          here ? "ok" : "VIOLATES", upper ? "upper" : "lower", bound.value);
        }
    }
    return {ok, detail.str()};
}

Verdict criterion7() {
    const auto cfg = parse_config(json::parse(canonical_config("markov-fig1")));
    const auto model = make_model(cfg.model);
    const auto prior = make_prior(cfg, *model);
    const auto spec = make_summary("markov.s1", *model);
    const auto fixture = generate_fixture(cfg, *model, *cfg.fixture_seed);
    const AbcProblem problem(*model, prior, spec,
                             AcceptanceRegion::single(1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, inf}),
                             fixture.observed);
    const auto r = abc_rejection(problem, 10000, PredictionMode::P, 707);
    std::vector<double> abc;
    for (const auto& d : r.draws) abc.push_back(d.prediction->value(0, 0));
    std::vector<double> direct;
    auto rng = Rng::stream(707, 1u << 30);
    for (int i = 0; i < 10000; ++i) {
        const auto theta = prior.sample(rng);
        direct.push_back(model->simulate(theta, SimMode::joint, rng).future->value(0, 0));
    }
    const double ks = stats::ks_two_sample(abc, direct);
    return {ks < 0.03 && abc.size() == 10000, fmt("accepted %zu of 10000, two-sample KS %.4f", abc.size(), ks)};
}

std::optional<ExperimentResult> mg1_full;

Verdict criterion8() {
    if (!mg1_full) mg1_full = run("mg1-varying", std::nullopt, "full");
    const auto& p = find_run(*mg1_full, "s1-P");
    const auto& l = find_run(*mg1_full, "s1-L");
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t j = 0; j < 3; ++j) {
        auto f = [j](const WeightedDraw& d) { return d.theta[j]; };
        const auto a = stats::thin(chain_of(p, f), 5000);
        const auto b = stats::thin(chain_of(l, f), 5000);
        const double ks = stats::ks_two_sample(a, b);
        ok = ok && ks < 0.07;
        detail << fmt("theta%zu KS %.4f; ", j + 1, ks);
    }
    detail << fmt("ESS P %.0f L %.0f", p.metadata.at("ess").get<double>(), l.metadata.at("ess").get<double>());
    return {ok, detail.str()};
}

Verdict criterion9() {
    // (a) growing queue
    const auto grow = run("mg1-growing", 200000, "2e5");
    const std::size_t nf = grow.ideal.front().size();
    std::vector<double> lo(nf);
    std::vector<double> hi(nf);
    for (std::size_t k = 0; k < nf; ++k) {
        std::vector<double> col;
        for (const auto& path : grow.ideal) col.push_back(path.value(k, 0));
        lo[k] = stats::quantile(col, 0.05);
        hi[k] = stats::quantile(col, 0.95);
    }
    bool ok_a = true;
    std::ostringstream detail;
    detail << "(a) ";
    for (const auto& r : grow.runs) {
        std::vector<double> med(nf);
        std::size_t inside = 0;
        for (std::size_t k = 0; k < nf; ++k) {
            med[k] = run_quantile(r, pred_at(k), 0.5);
            inside += med[k] >= lo[k] && med[k] <= hi[k];
        }
        bool mono = true;
        for (std::size_t k = 1; k < nf; ++k) mono = mono && med[k] >= med[k - 1];
        const bool here = mono && inside * 5 >= nf * 4;
        ok_a = ok_a && here;
        detail << fmt("%s %s, %zu/%zu inside; ", r.label.c_str(), mono ? "monotone" : "not monotone", inside, nf);
    }
    // (b) varying queue, heavy right tail under s0
    const auto vary = run("mg1-varying", 200000, "2e5");
    const double q0 = run_quantile(find_run(vary, "s0-P"), pred_at(0), 0.95);
    const double q1 = run_quantile(find_run(vary, "s1-P"), pred_at(0), 0.95);
    const bool ok_b = q0 > q1;
    detail << fmt("(b) q95 of w101: s0-P %.2f vs s1-P %.2f", q0, q1);
    return {ok_a && ok_b, std::string(ok_a ? "(a) PASS " : "(a) FAIL ") + (ok_b ? "(b) PASS. " : "(b) FAIL. ") +
                              detail.str()};
}

Verdict criterion10() {
    std::ostringstream detail;
    // event frequencies over a short interval
    const double p_ref[3] = {0.0098455797059659421, 0.0024615678439808405, 0.0029540209884309247};
    const std::vector<double> theta = {1.0, 0.005, 0.6};
    const std::vector<double> times = {1e-4};
    const std::size_t trials = 1000000;
    std::size_t count[3] = {0, 0, 0};
    auto rng = Rng::stream(1010, 0);
    for (std::size_t s = 0; s < trials; ++s) {
        const auto z = gillespie({100, 50}, 0.0, times, theta, rng).records[0];
        if (z == LvState{101, 50}) ++count[0];
        if (z == LvState{99, 51}) ++count[1];
        if (z == LvState{100, 49}) ++count[2];
    }
    bool ok_g = true;
    const char* names[3] = {"birth", "predation", "death"};
    for (int k = 0; k < 3; ++k) {
        const double f = static_cast<double>(count[k]) / trials;
        const double se = std::sqrt(p_ref[k] * (1 - p_ref[k]) / trials);
        ok_g = ok_g && std::abs(f - p_ref[k]) <= 3 * se;
        detail << fmt("%s %.3f SE; ", names[k], (f - p_ref[k]) / se);
    }

    const auto lv = run("lv-pred-case1", 200000, "2e5");
    const auto& s1 = find_run(lv, "s1-P");
    double worst = 0.0;
    for (const auto& d : s1.report.draws) worst = std::max(worst, d.raw_discrepancy.at(1));
    const double h_tilde = s1.report.thresholds.at(1);
    const bool ok_d = worst <= h_tilde;
    detail << fmt("s1-P max L-inf error at T1 %.1f (h~ %.0f); ", worst, h_tilde);

    const auto& f = find_run(lv, "s0-F");
    const auto& p = find_run(lv, "s0-P");
    bool ok_b = true;
    const char* comp[2] = {"prey", "predator"};
    const double t_first = lv.runs.front().report.draws.front().prediction->time(0);
    for (std::size_t j = 0; j < 2; ++j) {
        const double wf = run_quantile(f, pred_at(0, j), 0.95) - run_quantile(f, pred_at(0, j), 0.05);
        const double wp = run_quantile(p, pred_at(0, j), 0.95) - run_quantile(p, pred_at(0, j), 0.05);
        ok_b = ok_b && wf <= wp;
        detail << fmt("%s 90%% width at t=%.1f: F %.1f vs s0-P %.1f; ", comp[j], t_first, wf, wp);
    }
    return {ok_g && ok_d && ok_b, detail.str()};
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        out[fs::relative(e.path(), root).string()] = ss.str();
    }
    out.erase("timing.json");
    return out;
}

Verdict criterion11() {
    const std::size_t cap = 2000;
    bool ok = true;
    std::ostringstream detail;
    for (const auto& e : registered_experiments()) {
        RunOptions opts;
        opts.iterations = cap;
        opts.out_dir = scratch(e.id + "-det-a");
        const auto cfg = parse_config(json::parse(canonical_config(e.id)));
        run_experiment(cfg, opts);
        const auto a = tree(opts.out_dir);
        opts.out_dir = scratch(e.id + "-det-b");
        run_experiment(cfg, opts);
        const auto b = tree(opts.out_dir);
        const bool same = a == b;
        ok = ok && same;
        detail << e.id << (same ? " identical" : " DIFFERS") << fmt(" (%zu files); ", a.size());
    }
    detail << fmt("iteration cap %zu, timing.json excluded", cap);
    return {ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8,
                                                            criterion9, criterion10, criterion11};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
