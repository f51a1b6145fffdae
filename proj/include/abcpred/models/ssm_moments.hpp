#pragma once

#include <Eigen/Dense>

namespace abcpred {

/// Moments of the latent AR(1) started at v_0 = 0 with unit level:
/// E v_t = c mu_t, cov(v_s, v_t) = Sigma_st, and W = Sigma + omega2 I.
struct SsmMoments {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd w;
};

SsmMoments ssm_moments(double phi, double sigma2, double omega2, std::size_t n);

}  // namespace abcpred
