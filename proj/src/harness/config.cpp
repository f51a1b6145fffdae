#include "abcpred/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "abcpred/core/errors.hpp"
#include "abcpred/models/gaussian_markov.hpp"
#include "abcpred/models/linear_gaussian_ssm.hpp"
#include "abcpred/models/lotka_volterra.hpp"
#include "abcpred/models/mg1_queue.hpp"
#include "abcpred/summaries/summary.hpp"

namespace abcpred {

using nlohmann::json;

namespace {

class Checker {
public:
    std::vector<std::string> problems;

    void fail(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

    const json* find(const json& j, const std::string& key, const std::string& where, bool required) {
        if (!j.is_object()) {
            fail(where, "expected an object");
            return nullptr;
        }
        auto it = j.find(key);
        if (it == j.end()) {
            if (required) fail(where + "." + key, "missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& where, bool required) {
        const json* v = find(j, key, where, required);
        if (v == nullptr) return std::nullopt;
        if (v->is_string() && v->get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        if (!v->is_number()) {
            fail(where + "." + key, "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<std::uint64_t> count(const json& j, const std::string& key, const std::string& where, bool required) {
        const json* v = find(j, key, where, required);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            fail(where + "." + key, "expected a nonnegative integer");
            return std::nullopt;
        }
        return v->get<std::uint64_t>();
    }

    std::optional<std::string> string(const json& j, const std::string& key, const std::string& where, bool required) {
        const json* v = find(j, key, where, required);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) {
            fail(where + "." + key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<bool> boolean(const json& j, const std::string& key, const std::string& where) {
        const json* v = find(j, key, where, false);
        if (v == nullptr) return std::nullopt;
        if (!v->is_boolean()) {
            fail(where + "." + key, "expected true or false");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    std::vector<double> numbers(const json& j, const std::string& key, const std::string& where, bool required) {
        const json* v = find(j, key, where, required);
        std::vector<double> out;
        if (v == nullptr) return out;
        if (!v->is_array()) {
            fail(where + "." + key, "expected an array of numbers");
            return out;
        }
        for (const auto& e : *v) {
            if (!e.is_number()) {
                fail(where + "." + key, "expected an array of numbers");
                return {};
            }
            out.push_back(e.get<double>());
        }
        return out;
    }
};

const std::set<std::string> kNorms = {"weighted_quadratic", "weighted_euclidean", "l_infinity"};

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

bool summary_has_predictive_part(const std::string& id) {
    return id == "mg1.s1" || id == "lv.s1.case1" || id == "lv.s1.case2" || id == "lv.missing";
}

RegionSpec parse_region(Checker& c, const json& j, const std::string& where) {
    RegionSpec r;
    if (auto k = c.string(j, "kernel", where, false)) r.kernel = *k;
    if (r.kernel != "uniform" && r.kernel != "gaussian") c.fail(where + ".kernel", "must be uniform or gaussian");
    if (auto n = c.string(j, "norm", where, false)) r.norm = *n;
    if (!kNorms.count(r.norm)) c.fail(where + ".norm", "must be one of " + join({kNorms.begin(), kNorms.end()}));
    r.target_acceptance = c.number(j, "target_acceptance", where, false);
    r.threshold = c.number(j, "threshold", where, false);
    if (r.target_acceptance.has_value() == r.threshold.has_value()) {
        c.fail(where, "give exactly one of target_acceptance and threshold");
    }
    if (r.target_acceptance && !(*r.target_acceptance > 0.0 && *r.target_acceptance < 1.0)) {
        c.fail(where + ".target_acceptance", "must lie in (0, 1)");
    }
    if (r.target_acceptance && r.kernel != "uniform") c.fail(where, "threshold tuning needs the uniform kernel");
    if (r.threshold && !(*r.threshold >= 0.0)) c.fail(where + ".threshold", "must be nonnegative");
    if (r.threshold && r.kernel == "gaussian" && !(*r.threshold > 0.0 && std::isfinite(*r.threshold))) {
        c.fail(where + ".threshold", "gaussian kernel needs a finite positive bandwidth");
    }
    if (const json* p = c.find(j, "predictive", where, false)) {
        r.dual = true;
        const std::string pw = where + ".predictive";
        if (auto n = c.string(*p, "norm", pw, false)) r.predictive_norm = *n;
        if (!kNorms.count(r.predictive_norm)) c.fail(pw + ".norm", "unknown norm");
        if (r.predictive_norm != "l_infinity") c.fail(pw + ".norm", "the predictive part supports l_infinity only");
        if (auto h = c.number(*p, "threshold", pw, true)) r.predictive_threshold = *h;
        if (!(r.predictive_threshold > 0.0)) c.fail(pw + ".threshold", "must be positive");
    }
    return r;
}

SamplerSpec parse_sampler(Checker& c, const json& j, const std::string& where, std::size_t dim) {
    SamplerSpec s;
    if (auto k = c.string(j, "kind", where, false)) s.kind = *k;
    if (s.kind != "mcmc" && s.kind != "rejection" && s.kind != "importance") {
        c.fail(where + ".kind", "must be mcmc, rejection or importance");
    }
    if (auto v = c.count(j, "iterations", where, true)) s.iterations = *v;
    if (auto v = c.count(j, "burn_in", where, false)) s.burn_in = *v;
    if (auto v = c.count(j, "pilot_iterations", where, false)) s.pilot_iterations = *v;
    if (auto v = c.count(j, "prior_draws", where, false)) s.prior_draws = *v;
    if (auto v = c.count(j, "max_rounds", where, false)) s.max_rounds = *v;
    if (auto v = c.count(j, "init_budget", where, false)) s.init_budget = *v;
    if (auto v = c.number(j, "proposal_widening", where, false)) s.proposal_widening = *v;
    s.step_scales = c.numbers(j, "step_scales", where, false);
    if (s.iterations == 0) c.fail(where + ".iterations", "must be positive");
    if (s.burn_in > s.iterations) c.fail(where + ".burn_in", "exceeds iterations");
    if (s.kind != "mcmc" && s.burn_in != 0) c.fail(where + ".burn_in", "only MCMC has a burn-in");
    if (s.pilot_iterations == 0 || s.prior_draws == 0) c.fail(where, "pilot sizes must be positive");
    if (!s.step_scales.empty() && s.step_scales.size() != dim) {
        c.fail(where + ".step_scales", "need " + std::to_string(dim) + " entries");
    }
    for (double v : s.step_scales) {
        if (!(v >= 0.0)) c.fail(where + ".step_scales", "must be nonnegative");
    }
    if (!(s.proposal_widening >= 1.0)) c.fail(where + ".proposal_widening", "must be at least 1");
    return s;
}

Transform parse_transform(Checker& c, const json& j, const std::string& where) {
    if (!j.is_string()) {
        c.fail(where, "expected identity, log or shift:<index>");
        return Transform::identity();
    }
    const auto s = j.get<std::string>();
    if (s == "identity") return Transform::identity();
    if (s == "log") return Transform::log();
    if (s.rfind("shift:", 0) == 0) {
        try {
            return Transform::shift(static_cast<std::size_t>(std::stoul(s.substr(6))));
        } catch (const std::exception&) {
        }
    }
    c.fail(where, "expected identity, log or shift:<index>");
    return Transform::identity();
}

std::string transform_name(const Transform& t) {
    switch (t.kind) {
        case Transform::Kind::identity: return "identity";
        case Transform::Kind::log: return "log";
        case Transform::Kind::shift: return "shift:" + std::to_string(t.reference);
    }
    return "identity";
}

json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

}  // namespace

std::unique_ptr<Model> make_model(const json& m) {
    Checker c;
    const std::string where = "model";
    auto kind = c.string(m, "kind", where, true);
    std::unique_ptr<Model> model;
    auto futures = [&](const char* key) {
        std::vector<std::size_t> out;
        for (double v : c.numbers(m, key, where, false)) {
            if (!(v >= 1.0) || v != std::floor(v)) {
                c.fail(where + "." + key, "expected positive integer times");
                return std::vector<std::size_t>{};
            }
            out.push_back(static_cast<std::size_t>(v));
        }
        return out;
    };
    try {
        if (!kind) {
        } else if (*kind == "gaussian_markov") {
            auto phi = c.number(m, "phi", where, true);
            auto s2 = c.number(m, "sigma2", where, true);
            auto n = c.count(m, "n", where, true);
            auto y0 = c.number(m, "y0", where, false);
            auto f = futures("future_times");
            if (c.problems.empty()) model = std::make_unique<GaussianMarkovModel>(*phi, *s2, *n, f, y0.value_or(0.0));
        } else if (*kind == "linear_gaussian_ssm") {
            auto phi = c.number(m, "phi", where, true);
            auto s2 = c.number(m, "sigma2", where, true);
            auto w2 = c.number(m, "omega2", where, true);
            auto n = c.count(m, "n", where, true);
            auto f = futures("future_times");
            if (c.problems.empty()) model = std::make_unique<LinearGaussianSSM>(*phi, *s2, *w2, *n, f);
        } else if (*kind == "mg1_queue") {
            auto n = c.count(m, "n", where, true);
            auto nf = c.count(m, "n_future", where, true);
            if (c.problems.empty()) model = std::make_unique<MG1Model>(*n, *nf);
        } else if (*kind == "lotka_volterra") {
            LvTask t;
            if (auto task = c.string(m, "task", where, true)) {
                if (*task == "missing") {
                    t.kind = LvTask::Kind::missing;
                } else if (*task != "prediction") {
                    c.fail(where + ".task", "must be prediction or missing");
                }
            }
            if (auto v = c.boolean(m, "prey_only", where)) t.prey_only = *v;
            if (auto v = c.number(m, "t1", where, true)) t.t1 = *v;
            if (auto v = c.number(m, "t2", where, true)) t.t2 = *v;
            if (auto v = c.number(m, "t3", where, t.kind == LvTask::Kind::missing)) t.t3 = *v;
            if (auto v = c.count(m, "n_obs", where, true)) t.n_obs = *v;
            if (auto v = c.number(m, "future_step", where, false)) t.future_step = *v;
            if (auto v = c.count(m, "event_cap", where, false)) t.event_cap = *v;
            auto y0 = c.numbers(m, "y0", where, false);
            if (!y0.empty()) {
                if (y0.size() != 2 || y0[0] < 0 || y0[1] < 0) {
                    c.fail(where + ".y0", "expected two nonnegative counts");
                } else {
                    t.y0 = {static_cast<std::int64_t>(y0[0]), static_cast<std::int64_t>(y0[1])};
                }
            }
            if (c.problems.empty()) model = std::make_unique<LotkaVolterraModel>(t);
        } else {
            c.fail(where + ".kind", "unknown model '" + *kind +
                                        "' (known: gaussian_markov, linear_gaussian_ssm, mg1_queue, lotka_volterra)");
        }
    } catch (const UsageError& e) {
        c.fail(where, e.what());
    }
    if (!c.problems.empty()) throw ConfigError(c.problems);
    model->capabilities().validate();
    return model;
}

Prior make_prior(const ExperimentConfig& cfg, const Model& model) {
    auto transforms = cfg.prior_transforms;
    if (transforms.empty()) transforms.assign(cfg.prior_bounds.size(), Transform::identity());
    return Prior(cfg.prior_bounds, transforms, model.parameter_names());
}

ExperimentConfig parse_config(const json& j) {
    Checker c;
    ExperimentConfig cfg;
    const std::string root = "config";
    if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});

    if (auto id = c.string(j, "experiment_id", root, true)) {
        cfg.experiment_id = *id;
        std::vector<std::string> ids;
        bool known = false;
        for (const auto& e : registered_experiments()) {
            ids.push_back(e.id);
            known = known || e.id == *id;
        }
        if (!known) c.fail("config.experiment_id", "unknown experiment '" + *id + "' (registered: " + join(ids) + ")");
    }
    if (auto s = c.count(j, "master_seed", root, true)) cfg.master_seed = *s;

    std::unique_ptr<Model> model;
    if (const json* m = c.find(j, "model", root, true)) {
        cfg.model = *m;
        try {
            model = make_model(*m);
        } catch (const ConfigError& e) {
            for (const auto& p : e.problems()) c.problems.push_back(p);
        }
        for (const auto& e : registered_experiments()) {
            if (e.id == cfg.experiment_id && m->is_object() && m->value("kind", "") != e.model_kind) {
                c.fail("config.model.kind", "experiment " + e.id + " uses model " + e.model_kind);
            }
        }
    }
    const std::size_t dim = model ? model->dimension() : 0;

    cfg.theta_true = c.numbers(j, "theta_true", root, true);
    if (model && cfg.theta_true.size() != dim) c.fail("config.theta_true", "need " + std::to_string(dim) + " values");

    if (const json* p = c.find(j, "prior", root, true)) {
        auto lo = c.numbers(*p, "lower", "config.prior", true);
        auto hi = c.numbers(*p, "upper", "config.prior", true);
        if (lo.size() != hi.size() || (model && lo.size() != dim)) {
            c.fail("config.prior", "lower and upper need one entry per parameter");
        } else {
            for (std::size_t k = 0; k < lo.size(); ++k) {
                if (!(lo[k] < hi[k])) c.fail("config.prior", "lower must be below upper for component " + std::to_string(k));
                cfg.prior_bounds.push_back({lo[k], hi[k]});
            }
        }
        if (const json* t = c.find(*p, "transforms", "config.prior", false)) {
            if (!t->is_array() || t->size() != lo.size()) {
                c.fail("config.prior.transforms", "need one transform per parameter");
            } else {
                for (std::size_t k = 0; k < t->size(); ++k) {
                    cfg.prior_transforms.push_back(parse_transform(c, (*t)[k], "config.prior.transforms"));
                }
            }
        }
    }
    if (model && c.problems.empty()) {
        try {
            Prior prior = make_prior(cfg, *model);
            if (!prior.contains(prior.make_param(cfg.theta_true))) c.fail("config.theta_true", "outside the prior support");
        } catch (const UsageError& e) {
            c.fail("config.prior", e.what());
        }
    }

    if (const json* f = c.find(j, "fixture", root, true)) {
        cfg.fixture_seed = c.count(*f, "seed", "config.fixture", false);
        cfg.fixture_path = c.string(*f, "path", "config.fixture", false);
        if (cfg.fixture_seed.has_value() == cfg.fixture_path.has_value()) {
            c.fail("config.fixture", "give exactly one of seed and path");
        }
    }
    if (const json* cal = c.find(j, "calibration", root, false)) {
        if (auto n = c.count(*cal, "n_pilot", "config.calibration", false)) cfg.calibration_pilot = *n;
    }
    if (auto b = c.count(j, "histogram_bins", root, false)) cfg.histogram_bins = *b;
    if (cfg.histogram_bins == 0) c.fail("config.histogram_bins", "must be positive");
    if (const json* ideal = c.find(j, "ideal_predictive", root, false)) {
        if (auto d = c.count(*ideal, "draws", "config.ideal_predictive", false)) cfg.ideal_draws = *d;
        if (auto r = c.number(*ideal, "radius", "config.ideal_predictive", false)) cfg.ideal_radius = *r;
        if (!(cfg.ideal_radius >= 0.0)) c.fail("config.ideal_predictive.radius", "must be nonnegative");
    }

    const json* runs = c.find(j, "runs", root, true);
    if (runs != nullptr && (!runs->is_array() || runs->empty())) c.fail("config.runs", "expected a nonempty array");
    if (runs != nullptr && runs->is_array()) {
        std::set<std::string> labels;
        const auto ids = summary_ids();
        for (std::size_t i = 0; i < runs->size(); ++i) {
            const json& r = (*runs)[i];
            const std::string where = "config.runs[" + std::to_string(i) + "]";
            RunSpec run;
            if (auto l = c.string(r, "label", where, true)) run.label = *l;
            if (!run.label.empty() && !labels.insert(run.label).second) c.fail(where + ".label", "duplicate label");
            if (run.label.find_first_of("/\\") != std::string::npos) c.fail(where + ".label", "must not contain path separators");
            if (auto from = c.string(r, "abc_f_from", where, false)) {
                run.abc_f_from = *from;
                if (!labels.count(*from) || *from == run.label) c.fail(where + ".abc_f_from", "must name an earlier run");
                if (model && !model->capabilities().conditional) {
                    c.fail(where, "ABC-F needs a model with conditional sampling");
                }
                cfg.runs.push_back(run);
                continue;
            }
            if (auto s = c.string(r, "summary", where, true)) {
                run.summary = *s;
                if (std::find(ids.begin(), ids.end(), *s) == ids.end()) {
                    c.fail(where + ".summary", "unknown summary '" + *s + "' (known: " + join(ids) + ")");
                }
            }
            if (auto m = c.string(r, "mode", where, false)) {
                if (*m == "standard") {
                    run.mode = PredictionMode::standard;
                } else if (*m == "P") {
                    run.mode = PredictionMode::P;
                } else if (*m == "L") {
                    run.mode = PredictionMode::L;
                } else {
                    c.fail(where + ".mode", "must be standard, P or L");
                }
            }
            if (auto d = c.boolean(r, "defer", where)) run.defer = *d;
            if (const json* s = c.find(r, "sampler", where, true)) run.sampler = parse_sampler(c, *s, where + ".sampler", dim);
            if (const json* g = c.find(r, "region", where, true)) run.region = parse_region(c, *g, where + ".region");
            if (run.region.dual && !run.summary.empty() && !summary_has_predictive_part(run.summary)) {
                c.fail(where + ".region.predictive", "summary " + run.summary + " has no predictive part");
            }
            if (model) {
                try {
                    check_capabilities(*model, run.mode, run.defer);
                } catch (const UsageError& e) {
                    c.fail(where + ".mode", e.what());
                }
            }
            cfg.runs.push_back(run);
        }
    }
    if (!c.problems.empty()) throw ConfigError(c.problems);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment_id"] = cfg.experiment_id;
    j["master_seed"] = cfg.master_seed;
    j["model"] = cfg.model;
    j["theta_true"] = cfg.theta_true;
    json lo = json::array();
    json hi = json::array();
    json tr = json::array();
    for (const auto& b : cfg.prior_bounds) {
        lo.push_back(b.lo);
        hi.push_back(b.hi);
    }
    for (const auto& t : cfg.prior_transforms) tr.push_back(transform_name(t));
    j["prior"] = {{"lower", lo}, {"upper", hi}};
    if (!cfg.prior_transforms.empty()) j["prior"]["transforms"] = tr;
    if (cfg.fixture_seed) j["fixture"] = {{"seed", *cfg.fixture_seed}};
    if (cfg.fixture_path) j["fixture"] = {{"path", *cfg.fixture_path}};
    j["calibration"] = {{"n_pilot", cfg.calibration_pilot}};
    j["histogram_bins"] = cfg.histogram_bins;
    j["ideal_predictive"] = {{"draws", cfg.ideal_draws}, {"radius", cfg.ideal_radius}};
    json runs = json::array();
    for (const auto& r : cfg.runs) {
        json o;
        o["label"] = r.label;
        if (r.abc_f_from) {
            o["abc_f_from"] = *r.abc_f_from;
            runs.push_back(o);
            continue;
        }
        o["summary"] = r.summary;
        o["mode"] = to_string(r.mode);
        o["defer"] = r.defer;
        const auto& s = r.sampler;
        o["sampler"] = {{"kind", s.kind},
                        {"iterations", s.iterations},
                        {"burn_in", s.burn_in},
                        {"pilot_iterations", s.pilot_iterations},
                        {"prior_draws", s.prior_draws},
                        {"max_rounds", s.max_rounds},
                        {"init_budget", s.init_budget},
                        {"proposal_widening", s.proposal_widening}};
        if (!s.step_scales.empty()) o["sampler"]["step_scales"] = s.step_scales;
        const auto& g = r.region;
        json reg = {{"kernel", g.kernel}, {"norm", g.norm}};
        if (g.target_acceptance) reg["target_acceptance"] = *g.target_acceptance;
        if (g.threshold) reg["threshold"] = number_or_inf(*g.threshold);
        if (g.dual) reg["predictive"] = {{"norm", g.predictive_norm}, {"threshold", g.predictive_threshold}};
        o["region"] = reg;
        runs.push_back(o);
    }
    j["runs"] = runs;
    return j;
}

}  // namespace abcpred
