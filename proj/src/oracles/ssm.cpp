#include "abcpred/core/errors.hpp"
#include "abcpred/models/ssm_moments.hpp"
#include "abcpred/oracles/oracles.hpp"

namespace abcpred {

SsmPosteriors ssm_posteriors(const LinearGaussianSSM& model, std::span<const double> y) {
    const std::size_t n = model.n();
    if (n < 2 || n > 500) throw UsageError("ssm_posteriors: need 2 <= n <= 500");
    if (y.size() != n) throw UsageError("ssm_posteriors: expected " + std::to_string(n) + " observations");
    const auto m = ssm_moments(model.phi(), model.sigma2(), model.omega2(), n);
    Eigen::LLT<Eigen::MatrixXd> llt(m.w);
    if (llt.info() != Eigen::Success) throw UsageError("ssm_posteriors: W is numerically singular");
    const auto N = static_cast<Eigen::Index>(n);
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), N);
    const Eigen::VectorXd sig_n = m.sigma.col(N - 1);
    const Eigen::VectorXd winv_mu = llt.solve(m.mu);
    const Eigen::VectorXd winv_sig = llt.solve(sig_n);
    const double mwm = m.mu.dot(winv_mu);
    const double s1 = winv_mu.dot(yv);
    const double s2 = winv_sig.dot(yv);
    const double var_c = 1.0 / mwm;
    const double mean_c = var_c * s1;
    const double gap = m.mu[N - 1] - winv_sig.dot(m.mu);  // mu_n - Sigma_n: W^-1 mu
    const double filt = m.sigma(N - 1, N - 1) - sig_n.dot(winv_sig);
    const double phi = model.phi();

    SsmPosteriors out;
    out.c_posterior = {mean_c, var_c};
    out.vn_posterior = {mean_c * gap + s2, filt + gap * gap * var_c};
    const double lead = 1.0 + phi * gap;
    out.predictive_yn1 = {phi * s2 + lead * mean_c,
                          model.omega2() + model.sigma2() + phi * phi * filt + lead * lead * var_c};
    out.joint_mean = {out.vn_posterior.mean, mean_c};
    const double cov = gap * var_c;
    out.joint_cov << out.vn_posterior.variance, cov, cov, var_c;
    return out;
}

SsmPosteriors ssm_posteriors_bruteforce(const LinearGaussianSSM& model, std::span<const double> y,
                                        double prior_variance) {
    const std::size_t n = model.n();
    if (y.size() != n) throw UsageError("ssm_posteriors_bruteforce: wrong data length");
    const auto N = static_cast<Eigen::Index>(n);
    // independent sources: c, state noises e_1..e_{n+1}, observation noises eta_1..eta_{n+1}
    const Eigen::Index ns = 1 + 2 * (N + 1);
    Eigen::VectorXd src_var(ns);
    src_var[0] = prior_variance;
    for (Eigen::Index k = 0; k <= N; ++k) {
        src_var[1 + k] = model.sigma2();
        src_var[1 + (N + 1) + k] = model.omega2();
    }
    // v_t as a linear map of the sources, t = 1..n+1
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(N + 1, ns);
    Eigen::RowVectorXd prev = Eigen::RowVectorXd::Zero(ns);
    for (Eigen::Index t = 0; t <= N; ++t) {
        Eigen::RowVectorXd cur = model.phi() * prev;
        cur[0] += 1.0;
        cur[1 + t] += 1.0;
        v.row(t) = cur;
        prev = cur;
    }
    // unknowns (c, v_n, y_{n+1}) then observed y_{1:n}
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 + N, ns);
    a(0, 0) = 1.0;
    a.row(1) = v.row(N - 1);
    a.row(2) = v.row(N);
    a(2, 1 + (N + 1) + N) += 1.0;
    for (Eigen::Index t = 0; t < N; ++t) {
        a.row(3 + t) = v.row(t);
        a(3 + t, 1 + (N + 1) + t) += 1.0;
    }
    const Eigen::MatrixXd cov = a * src_var.asDiagonal() * a.transpose();
    const Eigen::MatrixXd kxx = cov.topLeftCorner(3, 3);
    const Eigen::MatrixXd kxy = cov.topRightCorner(3, N);
    const Eigen::MatrixXd kyy = cov.bottomRightCorner(N, N);
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), N);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(kyy);
    const Eigen::Vector3d mean = kxy * ldlt.solve(yv);  // all prior means are zero
    const Eigen::Matrix3d post = kxx - kxy * ldlt.solve(kxy.transpose());

    SsmPosteriors out;
    out.c_posterior = {mean[0], post(0, 0)};
    out.vn_posterior = {mean[1], post(1, 1)};
    out.predictive_yn1 = {mean[2], post(2, 2)};
    out.joint_mean = {mean[1], mean[0]};
    out.joint_cov << post(1, 1), post(1, 0), post(0, 1), post(0, 0);
    return out;
}

}  // namespace abcpred
