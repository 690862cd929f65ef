#include "qfluct/petz.hpp"
#include "qfluct/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace qfluct;

namespace {

RecoveryFamily random_family(Index din, Index dout, Rng& rng) {
  return RecoveryFamily(random_channel(din, dout, 3, rng), random_full_rank_state(din, rng));
}

}  // namespace

TEST(Petz, G0IsNormalized) {
  double sum = 0.0;
  const int n = 200000;
  const double a = 40.0, h = 2.0 * a / n;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    sum += w * g0(-a + k * h);
  }
  EXPECT_NEAR(sum * h, 1.0, 1e-9);
  EXPECT_NEAR(g0(0.0), std::acos(-1.0) / 4.0, 1e-15);
}

TEST(Petz, QuadratureMass) {
  const Quadrature q = averaging_quadrature();
  EXPECT_EQ(q.nodes.size(), 241u);
  EXPECT_NEAR(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), 1.0, 1e-12);
  double first_moment = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) first_moment += q.weights[k] * q.nodes[k];
  EXPECT_NEAR(first_moment, 0.0, 1e-12);
}

TEST(Petz, RecoversReferenceForEveryTheta) {
  Rng rng(21);
  const RecoveryFamily fam = random_family(3, 2, rng);
  for (double theta : {0.0, 0.4, -1.3}) {
    const KrausChannel r = rotated_petz(fam, theta);
    EXPECT_LT(r.tp_defect(), 1e-10);
    EXPECT_LT(max_abs(apply_channel(r, fam.evolved_reference().matrix()) - fam.reference().matrix()), 1e-10);
  }
}

TEST(Petz, UnitaryChannelIsInverted) {
  Rng rng(22);
  const CMatrix u = random_unitary(3, rng);
  const RecoveryFamily fam(unitary_channel(u), random_full_rank_state(3, rng));
  const DensityOperator rho = random_full_rank_state(3, rng);
  const CMatrix back = apply_channel(petz(fam), apply_channel(fam.forward(), rho.matrix()));
  EXPECT_LT(max_abs(back - rho.matrix()), 1e-11);
}

TEST(Petz, ReverseOfReverseIsForward) {
  Rng rng(23);
  const RecoveryFamily fam = random_family(2, 3, rng);
  const RecoveryFamily reversed(petz(fam), fam.evolved_reference());
  const KrausChannel twice = petz(reversed);
  EXPECT_LT(max_abs(choi(twice) - choi(fam.forward())), 1e-9);
}

TEST(Petz, RankDeficientImageStaysTracePreserving) {
  std::vector<CMatrix> k(1, CMatrix::Zero(3, 2));
  k[0](0, 0) = 1.0;
  k[0](1, 1) = 1.0;
  const RecoveryFamily fam(KrausChannel(k), DensityOperator::maximally_mixed(2));
  EXPECT_LT(rotated_petz(fam, 0.7).tp_defect(), 1e-10);
}

TEST(Petz, AveragedRecoveryIsTracePreservingAndFixesReference) {
  Rng rng(24);
  const RecoveryFamily fam = random_family(2, 2, rng);
  const DensityOperator sigma = random_full_rank_state(2, rng);
  EXPECT_NEAR(averaged_recovery(fam, sigma.matrix()).trace().real(), 1.0, 1e-10);
  EXPECT_LT(max_abs(averaged_recovery(fam, fam.evolved_reference().matrix()) - fam.reference().matrix()), 1e-9);
}
