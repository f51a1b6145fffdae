#include "abcpred/models/ssm_moments.hpp"

#include "abcpred/core/errors.hpp"

namespace abcpred {

SsmMoments ssm_moments(double phi, double sigma2, double omega2, std::size_t n) {
    if (n == 0) throw UsageError("ssm_moments: n must be positive");
    const auto N = static_cast<Eigen::Index>(n);
    SsmMoments m;
    m.mu.resize(N);
    // powers[k] = phi^k
    Eigen::VectorXd powers(2 * N + 1);
    powers[0] = 1.0;
    for (Eigen::Index k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * phi;
    double acc = 0.0;
    for (Eigen::Index t = 0; t < N; ++t) {
        acc += powers[t];
        m.mu[t] = acc;
    }
    // Sigma_st = sigma2 * sum_{k=1}^{min(s,t)} phi^{(s-k)+(t-k)}; summing directly keeps |phi| = 1 exact
    m.sigma.resize(N, N);
    for (Eigen::Index s = 1; s <= N; ++s) {
        for (Eigen::Index t = s; t <= N; ++t) {
            double sum = 0.0;
            for (Eigen::Index k = 1; k <= s; ++k) sum += powers[(s - k) + (t - k)];
            m.sigma(s - 1, t - 1) = sigma2 * sum;
            m.sigma(t - 1, s - 1) = sigma2 * sum;
        }
    }
    m.w = m.sigma;
    m.w.diagonal().array() += omega2;
    return m;
}

}  // namespace abcpred
