#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smdpde/asymptotics.hpp"

using namespace smdpde;

namespace {

// Nested finite differences in the sandwich oracle carry about 2e-7 relative error.
constexpr double kRel = 1e-6;

void expect_rel(double got, double want, double rel, const std::string& what) {
  EXPECT_NEAR(got, want, rel * std::abs(want)) << what;
}

}  // namespace

class AvarVsSandwich : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(AvarVsSandwich, SequentialMatchesQuadrature) {
  const auto [beta, rho] = GetParam();
  const double v1 = 4.0, v2 = 9.0;
  const auto rep = smdpde_block_avar(TuningBeta(beta), 2.0, 3.0, rho);
  const Eigen::MatrixXd C = oracle::sandwich_covariance(true, beta, v1, v2, rho);
  const std::string tag = "beta=" + std::to_string(beta) + " rho=" + std::to_string(rho);
  expect_rel(rep.var_mean, C(0, 0), kRel, "mean " + tag);
  expect_rel(rep.var_sigma2_1, C(1, 1), kRel, "var1 " + tag);
  expect_rel(rep.var_sigma2_2, C(3, 3), kRel, "var2 " + tag);
  expect_rel(rep.var_rho, C(4, 4), kRel, "rho " + tag);
}

TEST_P(AvarVsSandwich, JointMatchesQuadrature) {
  const auto [beta, rho] = GetParam();
  const double v1 = 4.0, v2 = 9.0;
  const auto rep = mdpde_block_avar(TuningBeta(beta), 2.0, 3.0, rho);
  const Eigen::MatrixXd C = oracle::sandwich_covariance(false, beta, v1, v2, rho);
  const std::string tag = "beta=" + std::to_string(beta) + " rho=" + std::to_string(rho);
  expect_rel(rep.var_mean, C(0, 0), kRel, "mean " + tag);
  expect_rel(rep.var_sigma2_1, C(1, 1), kRel, "var1 " + tag);
  expect_rel(rep.var_sigma2_2, C(3, 3), kRel, "var2 " + tag);
  expect_rel(rep.var_rho, C(4, 4), kRel, "rho " + tag);
}

INSTANTIATE_TEST_SUITE_P(Grid, AvarVsSandwich,
                         ::testing::Combine(::testing::Values(0.0, 0.1, 0.5, 0.7),
                                            ::testing::Values(-0.7, 0.0, 0.3)));

TEST(Avar, BetaZeroIsFisherInformation) {
  const auto s = smdpde_block_avar(TuningBeta(0.0), 2.0, 3.0, 0.4);
  const auto m = mdpde_block_avar(TuningBeta(0.0), 2.0, 3.0, 0.4);
  for (const auto& r : {s, m}) {
    EXPECT_NEAR(r.var_sigma2_1, 2 * 16.0, 1e-10);
    EXPECT_NEAR(r.var_sigma2_2, 2 * 81.0, 1e-9);
    EXPECT_NEAR(r.var_rho, std::pow(1 - 0.16, 2), 1e-12);
    EXPECT_NEAR(r.var_mean, 4.0, 1e-14);
  }
}

TEST(Avar, JointCorrelationEfficiencyDoesNotDependOnRho) {
  // The joint estimator is affine equivariant, so its correlation ARE is
  // the same at every rho.
  for (double beta : {0.1, 0.3, 0.5, 0.7}) {
    const double at0 = 1.0 / mdpde_block_avar(TuningBeta(beta), 1, 1, 0.0).var_rho;
    for (double rho : {-0.7, -0.5, 0.3, 0.7}) {
      const double r = std::pow(1 - rho * rho, 2) / mdpde_block_avar(TuningBeta(beta), 1, 1, rho).var_rho;
      EXPECT_NEAR(r, at0, 1e-10 * at0) << beta << " " << rho;
    }
  }
}

TEST(Avar, Validation) {
  EXPECT_THROW(smdpde_block_avar(TuningBeta(0.3), 0.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(mdpde_block_avar(TuningBeta(0.3), 1.0, 1.0, 1.0), DomainError);
}

TEST(AreTables, SymmetricInRhoAndCsvLayout) {
  const std::vector<double> betas = {0.0, 0.1, 0.3};
  const std::vector<double> rhos = {-0.5, 0.0, 0.5};
  const auto t = are_tables(betas, rhos);
  ASSERT_EQ(t.correlation.size(), 9u);
  for (std::size_t j = 0; j < betas.size(); ++j) {
    EXPECT_EQ(t.cell(0, j).smdpde, t.cell(2, j).smdpde);
    EXPECT_EQ(t.cell(0, j).mdpde, t.cell(2, j).mdpde);
  }
  EXPECT_DOUBLE_EQ(t.cell(1, 0).smdpde, 100.0);
  EXPECT_DOUBLE_EQ(t.marginal[0].variance_mdpde, 100.0);

  const std::string corr = correlation_are_csv(t);
  EXPECT_EQ(corr.substr(0, corr.find("\r\n")), "rho,beta=0,beta=0.1,beta=0.3");
  EXPECT_NE(corr.find("\r\n0,100(100),"), std::string::npos);
  const std::string marg = marginal_are_csv(t);
  EXPECT_EQ(marg.substr(0, marg.find("\r\n")), "estimator,method,beta=0,beta=0.1,beta=0.3");
  EXPECT_NE(marg.find("\r\nVariance,MDPDE,100,"), std::string::npos);

  EXPECT_THROW(are_tables({}, rhos), ValidationError);
  EXPECT_THROW(are_tables(betas, {1.0}), ValidationError);
  EXPECT_THROW(are_tables({1.2}, rhos), ValidationError);
}
