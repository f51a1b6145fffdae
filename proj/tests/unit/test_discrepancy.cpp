#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "abcpred/core/errors.hpp"
#include "abcpred/discrepancy/region.hpp"

using namespace abcpred;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

AcceptanceRegion dual_region(double hbar, double htilde) {
    return AcceptanceRegion({RegionComponent{0, 1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, hbar}},
                             RegionComponent{1, 1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, htilde}}});
}

}  // namespace

TEST(Kernel, SingleUniform) {
    const auto region = AcceptanceRegion::single(1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, 1.0});
    const std::vector<double> sy = {0.0};
    const std::vector<double> sz = {0.5};
    const auto k = kernel_weight(region, sy, sz);
    EXPECT_EQ(k.weight, 1.0);
    ASSERT_EQ(k.raw.size(), 1u);
    EXPECT_EQ(k.raw[0], 0.5);
}

TEST(Kernel, DualPredictiveSliceRejects) {
    const auto region = dual_region(1.0, 5.0);
    const std::vector<double> sy = {0.0, 0.0};
    EXPECT_EQ(kernel_weight(region, sy, std::vector<double>{0.9, 6.0}).weight, 0.0);
    EXPECT_EQ(kernel_weight(region, sy, std::vector<double>{0.9, 4.0}).weight, 1.0);
    EXPECT_EQ(kernel_weight(region, sy, std::vector<double>{1.1, 4.0}).weight, 0.0);
    EXPECT_EQ(region.mode(), AcceptanceRegion::Mode::dual);
}

TEST(Kernel, Gaussian) {
    const Kernel k{Kernel::Kind::gaussian, 2.0};
    EXPECT_NEAR(k(2.0), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(k(2.0), 0.6065, 1e-4);
    EXPECT_EQ(k(0.0), 1.0);
}

TEST(Kernel, InfiniteThresholdAcceptsEverything) {
    const Kernel k{Kernel::Kind::uniform, inf};
    EXPECT_EQ(k(1e300), 1.0);
}

TEST(Kernel, WeightIsMonotoneInThreshold) {
    const std::vector<double> sy = {0.0};
    const std::vector<double> sz = {0.7};
    for (auto kind : {Kernel::Kind::uniform, Kernel::Kind::gaussian}) {
        double prev = 0.0;
        for (double h : {0.1, 0.5, 0.7, 1.0, 3.0}) {
            const auto r = AcceptanceRegion::single(1, Norm::l_infinity(), Kernel{kind, h});
            const double w = kernel_weight(r, sy, sz).weight;
            EXPECT_GE(w, prev);
            prev = w;
        }
    }
}

TEST(Norm, WeightedQuadraticUsesInverse) {
    Eigen::MatrixXd c(2, 2);
    c << 4, 0, 0, 1;
    const auto n = Norm::weighted_quadratic(c);
    EXPECT_NEAR(n(std::vector<double>{2, 1}), 1.0 + 1.0, 1e-14);
}

TEST(Norm, WeightedEuclidean) {
    Eigen::VectorXd w(2);
    w << 4, 1;
    const auto n = Norm::weighted_euclidean(w);
    EXPECT_NEAR(n(std::vector<double>{2, 1}), std::sqrt(2.0), 1e-14);
}

TEST(Norm, LInfinity) { EXPECT_EQ(Norm::l_infinity()(std::vector<double>{-3, 2, 1}), 3.0); }

TEST(Norm, WrongLengthIsUsageError) {
    Eigen::VectorXd w(2);
    w << 4, 1;
    EXPECT_THROW(Norm::weighted_euclidean(w)(std::vector<double>{1, 2, 3}), UsageError);
}

TEST(Region, QuadraticNormRotationInvariantUnderMatchingCovariance) {
    // r^T C^{-1} r is unchanged when both r and C are rotated
    Eigen::MatrixXd c(2, 2);
    c << 2, 0.5, 0.5, 1;
    const double a = 0.7;
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    Eigen::VectorXd r(2);
    r << 0.3, -1.2;
    const Eigen::VectorXd rr = rot * r;
    const Eigen::MatrixXd cr = rot * c * rot.transpose();
    const double v1 = Norm::weighted_quadratic(c)(std::vector<double>{r(0), r(1)});
    const double v2 = Norm::weighted_quadratic(cr)(std::vector<double>{rr(0), rr(1)});
    EXPECT_NEAR(v1, v2, 1e-12);
}

TEST(TuneThreshold, Quantile) {
    std::vector<double> d(100);
    std::iota(d.begin(), d.end(), 1.0);
    const double h = tune_threshold(d, 0.10);
    EXPECT_GT(h, 10.0);
    EXPECT_LT(h, 11.0);
    EXPECT_NEAR(h, 10.9, 1e-12);
    EXPECT_GE(tune_threshold(d, 1.0 - 1e-9), 100.0 * (1.0 - 1e-6));
    EXPECT_EQ(tune_threshold(std::vector<double>{5, 5, 5}, 0.3), 5.0);
}

TEST(TuneThreshold, FailedProposalsSortLast) {
    const std::vector<double> d = {inf, 1.0, 2.0, inf};
    EXPECT_NEAR(tune_threshold(d, 0.25), 1.75, 1e-12);
}

TEST(TuneThreshold, BadTarget) {
    EXPECT_THROW(tune_threshold(std::vector<double>{1, 2}, 0.0), UsageError);
    EXPECT_THROW(tune_threshold(std::vector<double>{}, 0.1), UsageError);
}

TEST(RegionAssumptions, FixedRatioPasses) {
    std::vector<double> a;
    std::vector<double> b;
    for (int t = 0; t < 8; ++t) {
        a.push_back(std::pow(2.0, -t));
        b.push_back(5.0 * std::pow(2.0, -t));
    }
    EXPECT_TRUE(check_region_assumptions(dual_region(1, 5), {a, b}).passed);
}

TEST(RegionAssumptions, DriftingRatioFailsAtFirstStep) {
    std::vector<double> a;
    std::vector<double> b;
    for (int t = 0; t < 8; ++t) {
        a.push_back(std::pow(2.0, -t));
        b.push_back(std::pow(4.0, -t));
    }
    const auto r = check_region_assumptions(dual_region(1, 1), {a, b});
    EXPECT_FALSE(r.passed);
    ASSERT_TRUE(r.violating_index.has_value());
    EXPECT_EQ(*r.violating_index, 1u);
}

TEST(RegionAssumptions, SingleDecreasingPasses) {
    std::vector<double> h;
    for (int t = 1; t <= 10; ++t) h.push_back(1.0 / t);
    const auto region = AcceptanceRegion::single(1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, 1.0});
    EXPECT_TRUE(check_region_assumptions(region, {h}).passed);
}

TEST(RegionAssumptions, NonDecreasingIsUsageError) {
    const auto region = AcceptanceRegion::single(1, Norm::l_infinity(), Kernel{Kernel::Kind::uniform, 1.0});
    EXPECT_THROW(check_region_assumptions(region, {{1.0, 1.0, 0.5}}), UsageError);
}

TEST(Region, ThresholdsAndRawDiscrepancy) {
    auto region = dual_region(1.0, 5.0);
    EXPECT_EQ(region.thresholds(), (std::vector<double>{1.0, 5.0}));
    region.set_threshold(1, 2.0);
    EXPECT_EQ(region.thresholds()[1], 2.0);
    const auto raw = region.raw_discrepancy(std::vector<double>{0, 0}, std::vector<double>{-0.5, 3});
    EXPECT_EQ(raw, (std::vector<double>{0.5, 3.0}));
    EXPECT_EQ(region.weight_from_raw(raw), 0.0);
    EXPECT_TRUE(region.all_uniform());
}

TEST(Region, OverlappingSlicesRejected) {
    EXPECT_THROW(AcceptanceRegion({RegionComponent{0, 2, Norm::l_infinity(), Kernel{}},
                                   RegionComponent{1, 1, Norm::l_infinity(), Kernel{}}}),
                 UsageError);
}
