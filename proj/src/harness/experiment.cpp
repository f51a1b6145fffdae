#include "abcpred/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/harness/csv.hpp"
#include "abcpred/models/lotka_volterra.hpp"
#include "abcpred/oracles/oracles.hpp"

namespace abcpred {

using nlohmann::json;
namespace fs = std::filesystem;

ColumnNames column_names(const Model& model) {
    const auto kind = model.kind();
    if (kind == "mg1_queue") return {{"y"}, {"arrival"}, {"waiting"}};
    if (kind == "linear_gaussian_ssm") return {{"y"}, {"v"}, {"y"}};
    if (kind == "lotka_volterra") {
        if (model.observation_width() == 1) return {{"prey"}, {"predator"}, {"prey", "predator"}};
        return {{"prey", "predator"}, {}, {"prey", "predator"}};
    }
    return {{"y"}, {}, {"y"}};
}

std::vector<std::string> prediction_columns(const Model& model) {
    const auto names = column_names(model).future;
    std::vector<std::string> out;
    for (double t : model.future_times()) {
        for (const auto& c : names) out.push_back(c + "@" + csv::format(t));
    }
    return out;
}

const std::vector<double>& band_levels() {
    static const std::vector<double> levels = {0.05, 0.125, 0.25, 0.5, 0.75, 0.875, 0.95};
    return levels;
}

namespace {

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json numbers(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path.string());
    return json::parse(in);
}

csv::Table series_table(const TimeSeriesData& d, const std::vector<std::string>& names, bool latent) {
    csv::Table t;
    t.header = {"time"};
    for (const auto& n : names) t.header.push_back(latent ? n + "_latent" : n);
    const std::size_t w = latent ? d.latent_width() : d.width();
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> row = {d.time(i)};
        for (std::size_t j = 0; j < w; ++j) row.push_back(latent ? d.latent(i, j) : d.value(i, j));
        t.rows.push_back(std::move(row));
    }
    return t;
}

TimeSeriesData table_series(const csv::Table& t) {
    if (t.header.empty() || t.header[0] != "time") throw UsageError("fixture csv must start with a time column");
    std::vector<double> times;
    std::vector<double> values;
    for (const auto& row : t.rows) {
        times.push_back(row[0]);
        values.insert(values.end(), row.begin() + 1, row.end());
    }
    return TimeSeriesData(std::move(times), t.header.size() - 1, std::move(values));
}

TimeSeriesData strip_latents(const TimeSeriesData& d) { return TimeSeriesData(d.times(), d.width(), d.values()); }

void apply_iteration_cap(ExperimentConfig& cfg, std::size_t cap) {
    const std::size_t tenth = std::max<std::size_t>(1, cap / 10);
    for (auto& run : cfg.runs) {
        auto& s = run.sampler;
        s.iterations = std::min(s.iterations, cap);
        s.burn_in = std::min(s.burn_in, tenth);
        s.pilot_iterations = std::min(s.pilot_iterations, tenth);
        s.prior_draws = std::min(s.prior_draws, std::max(tenth, s.prior_draws / 10));
    }
    cfg.ideal_draws = std::min(cfg.ideal_draws, cap);
}

AcceptanceRegion build_region(const RunSpec& run, const SummarySpec& spec, const Model& model,
                              const ParamVector& theta_ref, std::size_t n_pilot, std::uint64_t seed,
                              json& calibration_meta) {
    const auto& r = run.region;
    const std::size_t length = r.dual ? spec.parametric_dim() : spec.dimension();
    Norm norm;
    if (r.norm != "l_infinity") {
        const auto method = r.norm == "weighted_quadratic" ? WeightCalibration::Method::covariance
                                                           : WeightCalibration::Method::mad;
        Rng rng = Rng::stream(seed, 3);
        const auto cal = calibrate_weights(model, theta_ref, spec, method, n_pilot, rng, 0, length);
        norm = Norm::from_calibration(cal);
        json values = json::array();
        for (Eigen::Index i = 0; i < cal.values.rows(); ++i) {
            std::vector<double> row(cal.values.cols());
            for (Eigen::Index j = 0; j < cal.values.cols(); ++j) row[j] = cal.values(i, j);
            values.push_back(numbers(row));
        }
        calibration_meta = {{"method", method == WeightCalibration::Method::covariance ? "covariance" : "mad"},
                            {"n_pilot", cal.n_pilot},
                            {"theta_ref", theta_ref.values()},
                            {"values", values}};
    }
    Kernel kernel;
    kernel.kind = r.kernel == "gaussian" ? Kernel::Kind::gaussian : Kernel::Kind::uniform;
    kernel.h = r.threshold.value_or(std::numeric_limits<double>::infinity());
    if (r.dual) {
        return AcceptanceRegion::dual(spec, norm, kernel, Norm::l_infinity(),
                                      Kernel{Kernel::Kind::uniform, r.predictive_threshold});
    }
    return AcceptanceRegion::single(spec.dimension(), norm, kernel);
}

Prior widened(const Prior& prior, double factor) {
    std::vector<Bounds> b;
    for (const auto& x : prior.bounds()) {
        const double c = 0.5 * (x.lo + x.hi);
        const double half = 0.5 * (x.hi - x.lo) * factor;
        b.push_back({c - half, c + half});
    }
    return Prior(b, prior.transforms(), prior.names());
}

double chain_ess(const std::vector<WeightedDraw>& draws, std::size_t k) {
    const auto chain = expand_chain(draws, [k](const WeightedDraw& d) { return d.theta[k]; });
    return stats::batch_means_ess(chain);
}

void write_draws(const fs::path& dir, const std::vector<WeightedDraw>& draws, const Model& model,
                 std::size_t n_disc) {
    csv::Table t;
    t.header = model.parameter_names();
    const auto pred_cols = prediction_columns(model);
    bool any_prediction = false;
    for (const auto& d : draws) any_prediction = any_prediction || d.prediction.has_value();
    if (any_prediction) t.header.insert(t.header.end(), pred_cols.begin(), pred_cols.end());
    for (std::size_t k = 0; k < n_disc; ++k) t.header.push_back("disc_" + std::to_string(k));
    t.header.insert(t.header.end(), {"weight", "repeats", "prediction_truncated"});
    for (const auto& d : draws) {
        std::vector<double> row = d.theta.values();
        if (any_prediction) {
            if (d.prediction) {
                row.insert(row.end(), d.prediction->values().begin(), d.prediction->values().end());
            } else {
                row.insert(row.end(), pred_cols.size(), std::numeric_limits<double>::quiet_NaN());
            }
        }
        for (std::size_t k = 0; k < n_disc; ++k) {
            row.push_back(k < d.raw_discrepancy.size() ? d.raw_discrepancy[k] : std::numeric_limits<double>::quiet_NaN());
        }
        row.push_back(d.weight);
        row.push_back(static_cast<double>(d.repeats));
        row.push_back(d.prediction_truncated ? 1.0 : 0.0);
        t.rows.push_back(std::move(row));
    }
    csv::write(dir / "draws.csv", t);
}

/// Marginal values with their masses; draws lacking a prediction are skipped.
struct Marginal {
    std::vector<double> x;
    std::vector<double> mass;
    std::vector<double> repeats;
    bool unit_weights = true;
};

Marginal theta_marginal(const std::vector<WeightedDraw>& draws, std::size_t k) {
    Marginal m;
    for (const auto& d : draws) {
        if (!(d.mass() > 0.0)) continue;
        m.x.push_back(d.theta[k]);
        m.mass.push_back(d.mass());
        m.repeats.push_back(static_cast<double>(d.repeats));
        m.unit_weights = m.unit_weights && d.weight == 1.0;
    }
    return m;
}

Marginal prediction_marginal(const std::vector<WeightedDraw>& draws, std::size_t column) {
    Marginal m;
    for (const auto& d : draws) {
        if (!d.prediction || !(d.mass() > 0.0)) continue;
        m.x.push_back(d.prediction->values()[column]);
        m.mass.push_back(d.mass());
        m.repeats.push_back(static_cast<double>(d.repeats));
        m.unit_weights = m.unit_weights && d.weight == 1.0;
    }
    return m;
}

double marginal_quantile(const Marginal& m, double p) {
    if (m.unit_weights) return stats::repeated_quantile(m.x, m.repeats, p);
    return stats::weighted_quantile(m.x, m.mass, p);
}

void write_density(const fs::path& dir, const std::string& name, const Marginal& m, std::size_t bins) {
    if (m.x.empty()) return;
    const auto h = stats::histogram(m.x, m.mass, bins);
    csv::Table t;
    t.header = {"bin_lo", "bin_hi", "density"};
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double lo = h.lo + static_cast<double>(b) * width;
        const double hi = b + 1 == bins ? h.hi : lo + width;
        t.rows.push_back({lo, hi, h.density[b]});
    }
    fs::create_directories(dir / "density");
    csv::write(dir / "density" / (name + ".csv"), t);
}

void write_bands(const fs::path& dir, const std::vector<WeightedDraw>& draws, const Model& model) {
    const auto names = column_names(model).future;
    const auto times = model.future_times();
    const std::size_t w = names.size();
    for (std::size_t j = 0; j < w; ++j) {
        csv::Table t;
        t.header = {"time"};
        for (double p : band_levels()) t.header.push_back("q" + csv::format(p));
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto m = prediction_marginal(draws, i * w + j);
            if (m.x.empty()) return;
            std::vector<double> row = {times[i]};
            for (double p : band_levels()) row.push_back(marginal_quantile(m, p));
            t.rows.push_back(std::move(row));
        }
        csv::write(dir / ("bands_" + names[j] + ".csv"), t);
    }
}

void write_run_outputs(const fs::path& dir, const std::vector<WeightedDraw>& draws, const Model& model,
                       std::size_t n_disc, std::size_t bins) {
    fs::create_directories(dir);
    write_draws(dir, draws, model, n_disc);
    const auto names = model.parameter_names();
    for (std::size_t k = 0; k < names.size(); ++k) write_density(dir, names[k], theta_marginal(draws, k), bins);
    const auto cols = prediction_columns(model);
    for (std::size_t c = 0; c < cols.size(); ++c) write_density(dir, cols[c], prediction_marginal(draws, c), bins);
    write_bands(dir, draws, model);
}

void write_ideal(const fs::path& dir, const std::vector<TimeSeriesData>& paths, const Model& model,
                 std::size_t bins, const json& meta) {
    fs::create_directories(dir);
    write_json(dir / "metadata.json", meta);
    if (paths.empty()) return;
    std::vector<WeightedDraw> draws;
    draws.reserve(paths.size());
    for (const auto& p : paths) {
        WeightedDraw d;
        d.prediction = p;
        draws.push_back(std::move(d));
    }
    csv::Table t;
    t.header = prediction_columns(model);
    for (const auto& p : paths) t.rows.push_back(p.values());
    csv::write(dir / "draws.csv", t);
    const auto cols = prediction_columns(model);
    for (std::size_t c = 0; c < cols.size(); ++c) write_density(dir, cols[c], prediction_marginal(draws, c), bins);
    write_bands(dir, draws, model);
}

}  // namespace

Fixture generate_fixture(const ExperimentConfig& cfg, const Model& model, std::uint64_t seed) {
    const Prior prior = make_prior(cfg, model);
    const ParamVector theta = prior.make_param(cfg.theta_true);
    Rng rng = Rng::stream(seed, 0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SimOutput sim = model.simulate(theta, SimMode::joint, rng);
        if (sim.truncated || sim.future_truncated) continue;
        return {std::move(sim.observed), std::move(sim.latent_state), std::move(sim.future)};
    }
    throw UsageError("fixture generation: every simulation at theta_true hit the safety cap");
}

void write_fixture(const fs::path& dir, const Fixture& fixture, const ExperimentConfig& cfg) {
    auto model = make_model(cfg.model);
    const auto names = column_names(*model);
    fs::create_directories(dir);
    csv::write(dir / "observed.csv", series_table(fixture.observed, names.observed, false));
    if (fixture.observed.has_latents()) {
        csv::write(dir / "latent.csv", series_table(fixture.observed, names.latent, true));
    }
    if (fixture.true_future) csv::write(dir / "future.csv", series_table(*fixture.true_future, names.future, false));
    json truth = {{"experiment_id", cfg.experiment_id},
                  {"theta_true", cfg.theta_true},
                  {"latent_state", numbers(fixture.latent_state)}};
    if (cfg.fixture_seed) truth["fixture_seed"] = *cfg.fixture_seed;
    write_json(dir / "truth.json", truth);
}

Fixture read_fixture(const fs::path& dir, const Model& model) {
    Fixture f;
    f.observed = table_series(csv::read(dir / "observed.csv"));
    if (f.observed.width() != model.observation_width() || f.observed.times() != model.observation_times()) {
        throw UsageError("fixture " + dir.string() + " does not match the model's observation grid");
    }
    if (fs::exists(dir / "latent.csv")) {
        const auto lat = table_series(csv::read(dir / "latent.csv"));
        if (lat.size() != f.observed.size()) throw UsageError("latent.csv length differs from observed.csv");
        f.observed.set_latents(lat.width(), lat.values());
    }
    if (fs::exists(dir / "future.csv")) f.true_future = table_series(csv::read(dir / "future.csv"));
    if (fs::exists(dir / "truth.json")) {
        for (const auto& v : read_json(dir / "truth.json").at("latent_state")) f.latent_state.push_back(v.get<double>());
    }
    return f;
}

ExperimentResult run_experiment(ExperimentConfig config, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();
    if (options.seed) config.master_seed = *options.seed;
    if (options.iterations) apply_iteration_cap(config, *options.iterations);
    if (options.workers == 0) throw UsageError("workers must be at least 1");

    auto model = make_model(config.model);
    const Prior prior = make_prior(config, *model);
    const ParamVector theta_true = prior.make_param(config.theta_true);

    ExperimentResult result;
    result.config = config;
    if (config.fixture_seed) {
        result.fixture = generate_fixture(config, *model, *config.fixture_seed);
    } else {
        result.fixture = read_fixture(*config.fixture_path, *model);
    }
    const TimeSeriesData observed = strip_latents(result.fixture.observed);

    const fs::path out = options.out_dir;
    fs::create_directories(out);
    json experiment = to_json(config);
    experiment["workers"] = options.workers;
    if (options.iterations) experiment["iteration_cap"] = *options.iterations;
    write_json(out / "experiment.json", experiment);
    write_fixture(out / "fixture", result.fixture, config);

    json timing = {{"runs", json::object()}};
    for (std::size_t i = 0; i < config.runs.size(); ++i) {
        const auto t_run = clock::now();
        const RunSpec& run = config.runs[i];
        const std::uint64_t run_seed = Rng::stream(config.master_seed, i + 1).engine()();
        json meta = {{"label", run.label}, {"seed", run_seed}, {"master_seed", config.master_seed},
                     {"workers", options.workers}};
        RunResult rr;
        rr.label = run.label;
        std::size_t n_disc = 0;

        if (run.abc_f_from) {
            const auto src = std::find_if(result.runs.begin(), result.runs.end(),
                                          [&](const RunResult& r) { return r.label == *run.abc_f_from; });
            Rng rng = Rng::stream(run_seed, 0);
            rr.report = src->report;
            rr.report.draws = abc_f_predict(src->report.draws, *model, observed, rng);
            rr.report.n_conditional_simulations = rr.report.draws.size();
            rr.report.seed = run_seed;
            n_disc = src->report.thresholds.size();
            meta["scheme"] = "ABC-F";
            meta["abc_f_from"] = *run.abc_f_from;
            meta["source_seed"] = src->report.seed;
        } else {
            const SummarySpec spec = make_summary(run.summary, *model, &observed);
            json calibration = nullptr;
            AcceptanceRegion region = build_region(run, spec, *model, theta_true, config.calibration_pilot, run_seed,
                                                   calibration);
            AbcProblem problem(*model, prior, spec, region, observed);
            const auto& s = run.sampler;
            json tuning_meta = nullptr;
            if (s.kind == "mcmc") {
                McmcOptions opts;
                opts.iterations = s.iterations;
                opts.burn_in = s.burn_in;
                opts.step_scales = s.step_scales.empty() ? default_step_scales(prior) : s.step_scales;
                opts.mode = run.mode;
                opts.defer = run.defer;
                ChainState init;
                if (run.region.target_acceptance) {
                    TuningOptions tuning;
                    tuning.target_acceptance = *run.region.target_acceptance;
                    tuning.prior_draws = s.prior_draws;
                    tuning.pilot_iterations = s.pilot_iterations;
                    tuning.max_rounds = s.max_rounds;
                    auto tr = tune_mcmc(problem, opts, tuning, run_seed);
                    problem.region = tr.region;
                    init = std::move(tr.start);
                    tuning_meta = {{"threshold_history", numbers(tr.threshold_history)},
                                   {"rate_history", numbers(tr.rate_history)},
                                   {"n_simulations", tr.n_simulations},
                                   {"converged", tr.converged}};
                } else {
                    Rng rng = Rng::stream(run_seed, 2);
                    init = find_init(problem, s.init_budget, simulation_mode(run.mode, run.defer), rng);
                }
                meta["step_scales"] = opts.step_scales;
                rr.report = abc_mcmc(problem, opts, init, run_seed);
            } else {
                const std::uint64_t tune_seed = Rng::stream(run_seed, 2).engine()();
                if (run.region.target_acceptance) {
                    problem.region = tune_rejection(problem, *run.region.target_acceptance, s.prior_draws, 0, tune_seed);
                }
                if (s.kind == "rejection") {
                    rr.report = abc_rejection(problem, s.iterations, run.mode, run_seed, options.workers, run.defer);
                } else {
                    rr.report = abc_importance(problem, widened(prior, s.proposal_widening), s.iterations, run.mode,
                                               run_seed, options.workers, run.defer);
                }
            }
            if (run.mode == PredictionMode::L) {
                Rng rng = Rng::stream(run_seed, 4);
                std::size_t n_sims = 0;
                rr.report.draws = abc_l_predict(rr.report.draws, *model, observed, rng, &n_sims);
                rr.report.n_conditional_simulations += n_sims;
            }
            n_disc = problem.region.components().size();
            meta["scheme"] = run.mode == PredictionMode::standard ? "standard" : "ABC-" + to_string(run.mode);
            meta["summary"] = run.summary;
            meta["sampler"] = s.kind;
            meta["iterations"] = rr.report.iterations;
            meta["burn_in"] = rr.report.burn_in;
            meta["target_acceptance"] = run.region.target_acceptance ? json(*run.region.target_acceptance) : json();
            meta["calibration"] = calibration;
            meta["tuning"] = tuning_meta;
        }

        const auto& rep = rr.report;
        double ess = rep.ess;
        if (ess == 0.0 && !rep.draws.empty()) {
            if (run.sampler.kind == "mcmc" || run.abc_f_from) {
                ess = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < model->dimension(); ++k) ess = std::min(ess, chain_ess(rep.draws, k));
            } else {
                ess = static_cast<double>(rep.draws.size());
            }
        }
        meta["mode"] = to_string(rep.mode);
        meta["deferred"] = rep.deferred;
        meta["acceptance_rate"] = number(rep.acceptance_rate);
        meta["ess"] = number(ess);
        meta["n_draws"] = rep.draws.size();
        meta["n_simulations"] = rep.n_simulations;
        meta["n_conditional_simulations"] = rep.n_conditional_simulations;
        meta["n_truncated"] = rep.n_truncated;
        meta["thresholds"] = numbers(rep.thresholds);
        meta["min_discrepancy"] = numbers(rep.min_discrepancy);
        meta["warnings"] = rep.warnings;
        rr.metadata = meta;

        const fs::path dir = out / "runs" / run.label;
        write_run_outputs(dir, rep.draws, *model, n_disc, config.histogram_bins);
        write_json(dir / "metadata.json", meta);
        timing["runs"][run.label] = std::chrono::duration<double>(clock::now() - t_run).count();
        result.runs.push_back(std::move(rr));
    }

    if (config.ideal_draws > 0) {
        const auto t_ideal = clock::now();
        Rng rng = Rng::stream(config.master_seed, 1u << 20);
        json meta = {{"theta", config.theta_true}, {"draws_requested", config.ideal_draws}};
        const auto* lv = dynamic_cast<const LotkaVolterraModel*>(model.get());
        if (lv != nullptr && lv->task().kind == LvTask::Kind::missing) {
            const std::size_t n1 = lv->task().n_obs;
            const auto t1 = observed.record(n1 - 1);
            const auto t2 = observed.record(n1);
            auto gap = ideal_gap_predictive(*lv, t1, t2, theta_true, config.ideal_draws, config.ideal_radius, rng);
            meta["kind"] = "gap-rejection";
            meta["radius"] = config.ideal_radius;
            meta["n_tried"] = gap.n_tried;
            meta["n_accepted"] = gap.n_accepted;
            if (!gap.diagnostic.empty()) meta["diagnostic"] = gap.diagnostic;
            result.ideal = std::move(gap.paths);
        } else if (model->capabilities().latent_conditional && !result.fixture.latent_state.empty()) {
            const auto state = model->merge_latent(observed, result.fixture.latent_state);
            meta["kind"] = "true-state";
            meta["state"] = numbers(state);
            result.ideal = ideal_predictive(*model, state, theta_true, config.ideal_draws, rng);
        }
        if (meta.contains("kind")) write_ideal(out / "ideal", result.ideal, *model, config.histogram_bins, meta);
        timing["ideal"] = std::chrono::duration<double>(clock::now() - t_ideal).count();
    }
    timing["total"] = std::chrono::duration<double>(clock::now() - t_start).count();
    write_json(out / "timing.json", timing);
    return result;
}

}  // namespace abcpred
