#include <cmath>
#include <fstream>
#include <limits>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/harness/csv.hpp"
#include "abcpred/harness/experiment.hpp"
#include "abcpred/oracles/oracles.hpp"
#include "abcpred/summaries/summary.hpp"

namespace abcpred {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Sample {
    std::vector<double> x;
    std::vector<double> w;
};

/// Column of a draws table with the draw masses; rows with NaN or zero mass are dropped.
Sample draws_column(const csv::Table& t, std::size_t col) {
    std::size_t wcol = t.header.size();
    std::size_t rcol = t.header.size();
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (t.header[j] == "weight") wcol = j;
        if (t.header[j] == "repeats") rcol = j;
    }
    Sample s;
    for (const auto& row : t.rows) {
        const double w = (wcol < row.size() ? row[wcol] : 1.0) * (rcol < row.size() ? row[rcol] : 1.0);
        if (std::isnan(row[col]) || !(w > 0.0)) continue;
        s.x.push_back(row[col]);
        s.w.push_back(w);
    }
    return s;
}

json closed_form_entry(const std::string& variable, const Sample& s, const Gaussian1D& g) {
    const double m = stats::weighted_mean(s.x, s.w);
    const double v = stats::weighted_variance(s.x, s.w);
    return {{"variable", variable},
            {"oracle_mean", g.mean},
            {"oracle_variance", g.variance},
            {"mean", m},
            {"variance", v},
            {"abs_mean_error", std::abs(m - g.mean)},
            {"variance_ratio", v / g.variance},
            {"ks", stats::ks_normal(s.x, s.w, g.mean, g.sd())}};
}

json empirical_entry(const std::string& variable, const Sample& s, const Sample& o) {
    const double m = stats::weighted_mean(s.x, s.w);
    const double v = stats::weighted_variance(s.x, s.w);
    const double om = stats::weighted_mean(o.x, o.w);
    const double ov = stats::weighted_variance(o.x, o.w);
    return {{"variable", variable},
            {"oracle_mean", om},
            {"oracle_variance", ov},
            {"mean", m},
            {"variance", v},
            {"abs_mean_error", std::abs(m - om)},
            {"variance_ratio", ov > 0.0 ? v / ov : std::numeric_limits<double>::quiet_NaN()},
            {"ks", stats::ks_two_sample(s.x, s.w, o.x, o.w)}};
}

/// Exact Gaussian marginal for a draws column of the Markov or state-space example.
std::optional<Gaussian1D> exact_marginal(const Model& model, const TimeSeriesData& y, const std::string& column) {
    if (const auto* m = dynamic_cast<const GaussianMarkovModel*>(&model)) {
        const auto values = y.column(0);
        const MarkovSummaries s{markov_weighted_average(values, m->phi()), values.back()};
        if (column == "c") return markov_c_posterior(*m, s.ybar, 0.0);
        const auto at = column.find('@');
        if (at == std::string::npos) return std::nullopt;
        const double t = std::stod(column.substr(at + 1));
        const auto p = static_cast<std::size_t>(std::llround(t)) - m->n();
        if (std::abs(m->phi()) == 1.0) {
            if (p != 1) return std::nullopt;
            return markov_predictive(*m, s, MarkovVariant::exact);
        }
        return markov_predictive(*m, s, MarkovVariant::multistep, 0.0, p);
    }
    if (const auto* m = dynamic_cast<const LinearGaussianSSM*>(&model)) {
        const auto post = ssm_posteriors(*m, y.column(0));
        if (column == "c") return post.c_posterior;
        if (column == "y@" + csv::format(static_cast<double>(m->n() + 1))) return post.predictive_yn1;
    }
    return std::nullopt;
}

json not_comparable(const std::string& reason) { return {{"status", "not-comparable"}, {"reason", reason}}; }

}  // namespace

json compare_to_oracle(const fs::path& result_dir, const std::string& oracle) {
    std::ifstream in(result_dir / "experiment.json");
    if (!in) throw UsageError("no experiment.json under " + result_dir.string());
    const json experiment = json::parse(in);
    auto model = make_model(experiment.at("model"));
    const TimeSeriesData observed = read_fixture(result_dir / "fixture", *model).observed;

    json report = {{"experiment_id", experiment.at("experiment_id")}, {"oracle", oracle}};
    csv::Table ideal;
    if (oracle == "closed-form") {
        if (model->kind() != "gaussian_markov" && model->kind() != "linear_gaussian_ssm") {
            report.update(not_comparable("no closed-form oracle for model " + std::string(model->kind())));
            return report;
        }
    } else if (oracle == "ideal") {
        if (!fs::exists(result_dir / "ideal" / "draws.csv")) {
            report.update(not_comparable("bundle has no ideal-predictive draws"));
            return report;
        }
        ideal = csv::read(result_dir / "ideal" / "draws.csv");
    } else {
        throw UsageError("unknown oracle '" + oracle + "' (expected closed-form or ideal)");
    }

    json runs = json::array();
    for (const auto& run : experiment.at("runs")) {
        const std::string label = run.at("label");
        const auto draws = csv::read(result_dir / "runs" / label / "draws.csv");
        json marginals = json::array();
        for (std::size_t j = 0; j < draws.header.size(); ++j) {
            const auto& name = draws.header[j];
            if (name == "weight" || name == "repeats" || name == "prediction_truncated" || name.rfind("disc_", 0) == 0) {
                continue;
            }
            const Sample s = draws_column(draws, j);
            if (s.x.size() < 2) continue;
            if (oracle == "closed-form") {
                if (auto g = exact_marginal(*model, observed, name)) marginals.push_back(closed_form_entry(name, s, *g));
            } else {
                for (std::size_t k = 0; k < ideal.header.size(); ++k) {
                    if (ideal.header[k] != name) continue;
                    const Sample o = draws_column(ideal, k);
                    if (o.x.size() >= 2) marginals.push_back(empirical_entry(name, s, o));
                }
            }
        }
        json entry = {{"label", label}, {"marginals", marginals}};
        if (marginals.empty()) entry.update(not_comparable("no marginal of this run has an oracle counterpart"));
        runs.push_back(entry);
    }
    report["status"] = "ok";
    report["runs"] = runs;
    return report;
}

}  // namespace abcpred
