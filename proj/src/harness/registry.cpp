#include <map>

#include "abcpred/core/errors.hpp"
#include "abcpred/harness/config.hpp"

namespace abcpred {

namespace detail {
const std::map<std::string, std::string>& embedded_configs();
}

const std::vector<RegisteredExperiment>& registered_experiments() {
    static const std::vector<RegisteredExperiment> list = {
        {"markov-fig1", "gaussian_markov", "Gaussian Markov chain, phi = 0.5, summaries s1/s2/s3, ABC-P and ABC-F"},
        {"markov-appendix", "gaussian_markov", "Gaussian Markov chain, phi = 0.99, same layout"},
        {"mg1-varying", "mg1_queue", "M/G/1 queue, theta = (4, 7, 0.15), s0/s1 with ABC-P and ABC-L"},
        {"mg1-growing", "mg1_queue", "M/G/1 queue, theta = (8, 16, 0.15), growing queue"},
        {"lv-pred-case1", "lotka_volterra", "Lotka-Volterra prediction, both populations observed"},
        {"lv-pred-case2", "lotka_volterra", "Lotka-Volterra prediction, prey only observed"},
        {"lv-missing", "lotka_volterra", "Lotka-Volterra missing block between two observed blocks"},
    };
    return list;
}

const std::string& canonical_config(const std::string& id) {
    const auto& configs = detail::embedded_configs();
    auto it = configs.find(id);
    if (it == configs.end()) {
        std::string ids;
        for (const auto& e : registered_experiments()) ids += (ids.empty() ? "" : ", ") + e.id;
        throw UsageError("unknown experiment '" + id + "' (registered: " + ids + ")");
    }
    return it->second;
}

}  // namespace abcpred
