#include "qfluct/fluctuation.hpp"
#include "qfluct/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace qfluct;

namespace {

CMatrix qubit_h(double omega) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = -omega / 2.0;
  h(1, 1) = omega / 2.0;
  return h;
}

CVector plus() { return CVector::Ones(2) / std::sqrt(2.0); }
CVector minus() {
  CVector v(2);
  v << 1.0, -1.0;
  return v / std::sqrt(2.0);
}

}  // namespace

TEST(Fluctuation, UpsilonForPlusToMinus) {
  const double c = std::cosh(0.5);
  EXPECT_NEAR(upsilon(qubit_h(1.0), 1.0, plus(), minus()), c * c, 1e-13);
}

TEST(Fluctuation, TransitionOfIdentity) {
  Rng rng(31);
  const CVector psi = random_pure(3, rng), phi = random_pure(3, rng);
  EXPECT_NEAR(transition_pure(identity_channel(3), psi, phi), std::norm(phi.dot(psi)), 1e-13);
}

TEST(Fluctuation, InfoExchangeClosedForm) {
  RVector r(2);
  r << 0.7, 0.3;
  const DensityOperator gamma = DensityOperator::diagonal(r);
  const RecoveryFamily fam(identity_channel(2), gamma);
  const TransitionBasis b = TransitionBasis::forward(gamma, fam);
  const cplx dq = info_exchange(b, 0, 1, 1, 0);
  EXPECT_NEAR(dq.real(), 0.0, 1e-13);
  EXPECT_NEAR(dq.imag(), std::log(0.7 / 0.3), 1e-13);
  const cplx diag = info_exchange(b, 0, 0, 1, 1);
  EXPECT_NEAR(diag.real(), -std::log(0.3) + std::log(0.7), 1e-13);
  EXPECT_NEAR(diag.imag(), 0.0, 1e-13);
}

TEST(Fluctuation, QuasiProbabilityNormalization) {
  Rng rng(32);
  const RecoveryFamily fam(random_channel(2, 3, 2, rng), random_full_rank_state(2, rng));
  const DensityOperator rho = random_full_rank_state(2, rng);
  const TpmQuasiProb p = tpm_quasiprob(fam.forward(), TransitionBasis::forward(rho, fam));
  EXPECT_LT(std::abs(p.total() - 1.0), 1e-12);
}

TEST(Fluctuation, DetailedBalanceRatio) {
  Rng rng(33);
  const RecoveryFamily fam(random_channel(2, 2, 2, rng), random_full_rank_state(2, rng));
  const DetailedBalance db = detailed_balance_ratio(fam, random_pure(2, rng), random_pure(2, rng));
  EXPECT_NEAR(db.ratio, db.rhs, 1e-10 * db.rhs);
}

TEST(Fluctuation, IntegralEqualityAndMean) {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const RecoveryFamily fam(random_channel(3, 2, 3, rng), random_full_rank_state(3, rng));
    const DensityOperator rho = random_full_rank_state(3, rng);
    const EpDistribution fwd = ep_distribution(fam, rho);
    EXPECT_LT(std::abs(fwd.total() - 1.0), 1e-12);
    for (double theta : {0.0, 0.9}) {
      const IntegralQft q = integral_qft(fam, rho, fwd, theta);
      EXPECT_LT(q.deviation, 1e-10);
      EXPECT_NEAR(q.kappa, 1.0, 1e-10);
    }
    const MeanEntropyProduction m = mean_entropy_production(fwd, fam, rho);
    EXPECT_NEAR(m.mean_re.real(), m.relative_entropy_drop, 1e-10);
    EXPECT_LT(std::abs(m.mean_im), 1e-10);
  }
}

TEST(Fluctuation, KappaBelowOneForRankDeficientState) {
  Rng rng(35);
  const RecoveryFamily fam(random_channel(3, 3, 2, rng), random_full_rank_state(3, rng));
  const DensityOperator rho = random_state(3, 1, rng);
  const EpDistribution fwd = ep_distribution(fam, rho);
  const IntegralQft q = integral_qft(fam, rho, fwd, 0.3);
  EXPECT_LT(q.deviation, 1e-10);
  EXPECT_LE(q.kappa, 1.0 + 1e-12);
}

TEST(Fluctuation, CrooksForRandomChannel) {
  Rng rng(36);
  const RecoveryFamily fam(random_channel(2, 2, 2, rng), random_full_rank_state(2, rng));
  const DensityOperator rho = random_full_rank_state(2, rng);
  const EpDistribution fwd = ep_distribution(fam, rho);
  for (double theta : {0.0, 0.5}) {
    const CrooksReport r = crooks_check(fwd, backward_ep_distribution(fam, theta, rho), theta);
    EXPECT_FALSE(r.checked.empty());
    EXPECT_LT(r.max_deviation, 1e-9);
  }
}

TEST(Fluctuation, IdentityOnReferenceHasZeroEntropyProduction) {
  RVector r(2);
  r << 0.6, 0.4;
  const DensityOperator gamma = DensityOperator::diagonal(r);
  const RecoveryFamily fam(identity_channel(2), gamma);
  const EpDistribution d = ep_distribution(fam, gamma);
  for (const EpAtom& a : d.significant(1e-12)) {
    EXPECT_NEAR(a.sigma_re, 0.0, 1e-12);
    EXPECT_NEAR(a.sigma_im, 0.0, 1e-12);
  }
}

TEST(Fluctuation, DistributionCsvHeader) {
  const DensityOperator rho = DensityOperator::maximally_mixed(2);
  const RecoveryFamily fam(identity_channel(2), rho);
  std::ostringstream os;
  write_distribution_csv(os, ep_distribution(fam, rho), nullptr);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')).find("sigma_R"), 0u);
}
