#include "abcpred/summaries/summary.hpp"

#include <algorithm>
#include <cmath>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/models/gaussian_markov.hpp"
#include "abcpred/models/linear_gaussian_ssm.hpp"
#include "abcpred/models/lotka_volterra.hpp"
#include "abcpred/models/mg1_queue.hpp"
#include "abcpred/models/ssm_moments.hpp"

namespace abcpred {

SummarySpec::SummarySpec(std::string id, std::size_t parametric_dim, std::size_t predictive_dim, Fn compute,
                         std::optional<TimeSeriesData> reference_data)
    : id_(std::move(id)),
      parametric_dim_(parametric_dim),
      predictive_dim_(predictive_dim),
      fn_(std::move(compute)),
      reference_(std::move(reference_data)) {
    if (parametric_dim_ + predictive_dim_ == 0) throw UsageError("summary " + id_ + ": empty statistic");
}

std::vector<double> SummarySpec::compute(const TimeSeriesData& data) const {
    auto s = fn_(data);
    if (s.size() != dimension()) {
        throw UsageError("summary " + id_ + ": produced " + std::to_string(s.size()) + " values, expected " +
                         std::to_string(dimension()));
    }
    for (double v : s) {
        if (!std::isfinite(v)) throw UsageError("summary " + id_ + ": non-finite value");
    }
    return s;
}

std::vector<double> compute_summary(const SummarySpec& spec, const TimeSeriesData& data) { return spec.compute(data); }

double markov_weighted_average(std::span<const double> y, double phi) {
    if (y.empty()) throw UsageError("markov summary: empty data");
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) head += y[i];
    return ((1.0 - phi) * head + y.back()) / static_cast<double>(y.size());
}

std::vector<std::string> summary_ids() {
    return {"markov.s1",     "markov.s2",     "markov.s3",     "ssm.s1",        "ssm.s2",
            "mg1.s0",        "mg1.s1",        "lv.s0.case1",   "lv.s1.case1",   "lv.s0.case2",
            "lv.s1.case2",   "lv.missing"};
}

namespace {

void require_shape(const TimeSeriesData& d, std::size_t n, std::size_t width, const std::string& id) {
    if (d.size() != n || d.width() != width) {
        throw UsageError("summary " + id + ": expected " + std::to_string(n) + " records of width " +
                         std::to_string(width) + ", got " + std::to_string(d.size()) + " x " +
                         std::to_string(d.width()));
    }
}

std::vector<double> mg1_base(const TimeSeriesData& d) {
    std::vector<double> y = d.values();
    std::sort(y.begin(), y.end());
    return {stats::quantile_sorted(y, 0.25), stats::quantile_sorted(y, 0.5), stats::quantile_sorted(y, 0.75),
            y.front(), y.back()};
}

void append_population_stats(std::vector<double>& s, std::span<const double> x) {
    s.push_back(stats::mean(x));
    s.push_back(stats::sd(x));
    s.push_back(stats::autocorrelation(x, 1));
    s.push_back(stats::autocorrelation(x, 2));
}

template <class M>
const M& model_as(const Model& model, const std::string& id) {
    const auto* m = dynamic_cast<const M*>(&model);
    if (m == nullptr) {
        throw UsageError("summary " + id + " does not apply to model " + std::string(model.kind()));
    }
    return *m;
}

}  // namespace

SummarySpec make_summary(const std::string& id, const Model& model, const TimeSeriesData* observed) {
    if (id.rfind("markov.", 0) == 0) {
        const auto& m = model_as<GaussianMarkovModel>(model, id);
        const double phi = m.phi();
        const std::size_t n = m.n();
        auto ybar = [phi, n, id](const TimeSeriesData& d) {
            require_shape(d, n, 1, id);
            return markov_weighted_average(d.values(), phi);
        };
        if (id == "markov.s1") {
            return {id, 1, 0, [ybar](const TimeSeriesData& d) { return std::vector<double>{ybar(d)}; }};
        }
        if (id == "markov.s2") {
            return {id, 2, 0, [ybar](const TimeSeriesData& d) {
                        return std::vector<double>{ybar(d), d.values().back()};
                    }};
        }
        if (id == "markov.s3") {
            return {id, 1, 0, [ybar, phi](const TimeSeriesData& d) {
                        return std::vector<double>{ybar(d) + phi * d.values().back()};
                    }};
        }
    }
    if (id == "ssm.s1" || id == "ssm.s2") {
        const auto& m = model_as<LinearGaussianSSM>(model, id);
        const auto mom = ssm_moments(m.phi(), m.sigma2(), m.omega2(), m.n());
        const Eigen::LLT<Eigen::MatrixXd> llt(mom.w);
        const Eigen::VectorXd row = id == "ssm.s1" ? Eigen::VectorXd(llt.solve(mom.mu))
                                                   : Eigen::VectorXd(llt.solve(mom.sigma.col(mom.sigma.cols() - 1)));
        const std::size_t n = m.n();
        return {id, 1, 0, [row, n, id](const TimeSeriesData& d) {
                    require_shape(d, n, 1, id);
                    const Eigen::Map<const Eigen::VectorXd> y(d.values().data(), static_cast<Eigen::Index>(n));
                    return std::vector<double>{row.dot(y)};
                }};
    }
    if (id == "mg1.s0" || id == "mg1.s1") {
        const auto& m = model_as<MG1Model>(model, id);
        const std::size_t n = m.n();
        if (id == "mg1.s0") {
            return {id, 5, 0, [n, id](const TimeSeriesData& d) {
                        require_shape(d, n, 1, id);
                        return mg1_base(d);
                    }};
        }
        if (observed == nullptr) throw UsageError("summary mg1.s1 needs the observed data as reference");
        require_shape(*observed, n, 1, id);
        std::vector<double> levels;
        for (double a : {0.7, 0.8, 0.9}) levels.push_back(stats::quantile(observed->values(), a));
        return {id, 5, 3,
                [n, id, levels](const TimeSeriesData& d) {
                    require_shape(d, n, 1, id);
                    auto s = mg1_base(d);
                    const auto& y = d.values();
                    for (double q : levels) {
                        double last = 1.0;
                        for (std::size_t i = y.size(); i-- > 0;) {
                            if (y[i] >= q) {
                                last = static_cast<double>(i + 1);
                                break;
                            }
                        }
                        s.push_back(last);
                    }
                    return s;
                },
                *observed};
    }
    if (id.rfind("lv.", 0) == 0) {
        const auto& m = model_as<LotkaVolterraModel>(model, id);
        const auto& task = m.task();
        const std::size_t n1 = task.n_obs;
        const bool missing = task.kind == LvTask::Kind::missing;
        if (id == "lv.missing") {
            if (!missing) throw UsageError("summary lv.missing needs the missing-data task");
            return {id, 8, 4, [n1, id](const TimeSeriesData& d) {
                        require_shape(d, 2 * n1, 2, id);
                        std::vector<double> s;
                        for (std::size_t block = 0; block < 2; ++block) {
                            for (std::size_t j = 0; j < 2; ++j) {
                                std::vector<double> x(n1);
                                for (std::size_t i = 0; i < n1; ++i) x[i] = d.value(block * n1 + i, j);
                                s.push_back(stats::mean(x));
                                s.push_back(stats::sd(x));
                            }
                        }
                        for (std::size_t j = 0; j < 2; ++j) s.push_back(d.value(n1 - 1, j));
                        for (std::size_t j = 0; j < 2; ++j) s.push_back(d.value(n1, j));
                        return s;
                    }};
        }
        if (missing) throw UsageError("summary " + id + " applies to the prediction tasks");
        const bool case1 = id == "lv.s0.case1" || id == "lv.s1.case1";
        const bool case2 = id == "lv.s0.case2" || id == "lv.s1.case2";
        const bool with_tail = id == "lv.s1.case1" || id == "lv.s1.case2";
        if (case1) {
            if (task.prey_only) throw UsageError("summary " + id + " needs both populations observed");
            return {id, 9, with_tail ? 2u : 0u, [n1, id, with_tail](const TimeSeriesData& d) {
                        require_shape(d, n1, 2, id);
                        const auto prey = d.column(0);
                        const auto pred = d.column(1);
                        std::vector<double> s;
                        append_population_stats(s, prey);
                        append_population_stats(s, pred);
                        s.push_back(stats::cross_correlation(prey, pred));
                        if (with_tail) {
                            s.push_back(prey.back());
                            s.push_back(pred.back());
                        }
                        return s;
                    }};
        }
        if (case2) {
            return {id, 4, with_tail ? 1u : 0u, [n1, id, with_tail](const TimeSeriesData& d) {
                        if (d.size() != n1 || d.width() < 1) require_shape(d, n1, 1, id);
                        const auto prey = d.column(0);
                        std::vector<double> s;
                        append_population_stats(s, prey);
                        if (with_tail) s.push_back(prey.back());
                        return s;
                    }};
        }
    }
    std::string known;
    for (const auto& k : summary_ids()) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown summary '" + id + "' (known: " + known + ")");
}

}  // namespace abcpred
