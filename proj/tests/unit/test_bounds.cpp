#include "qfluct/bounds.hpp"
#include "qfluct/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace qfluct;

namespace {

CMatrix ladder(Index d) {
  CMatrix h = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) h(k, k) = static_cast<double>(k);
  return h;
}

DensityOperator tilted_plus() {
  CVector v(2);
  v << 0.8, 0.6;
  return DensityOperator::normalized(0.7 * v * v.adjoint() + 0.15 * CMatrix::Identity(2, 2), 1e-12);
}

ReportOptions quick() {
  ReportOptions o;
  o.fidelity_grid = {0.0, 1.0};
  return o;
}

}  // namespace

TEST(Bounds, IdentityChannelSaturatesMerging) {
  const CMatrix l = ladder(2);
  const DensityOperator gamma = DensityOperator::gibbs(l, 1.0);
  const MergingBound b = coherence_merging_bound(identity_channel(2), tilted_plus(), gamma, l, 0, 1);
  EXPECT_TRUE(b.holds());
  EXPECT_NEAR(b.lhs, b.rhs, 1e-12);
}

TEST(Bounds, MergingRejectsNonCommutingReference) {
  const CMatrix l = ladder(2);
  try {
    coherence_merging_bound(identity_channel(2), tilted_plus(), tilted_plus(), l, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ReferenceNotCommuting);
  }
}

TEST(Bounds, IncoherentStateHasNoAsymmetryChange) {
  RVector p(3);
  p << 0.5, 0.3, 0.2;
  const DensityOperator rho = DensityOperator::diagonal(p);
  EXPECT_NEAR(relative_entropy_of_asymmetry(rho, ladder(3)), 0.0, 1e-12);
  const ResourceReport r = asymmetry_ft(identity_channel(3), rho, ladder(3), quick());
  EXPECT_TRUE(r.satisfied) << r.violations.size();
  EXPECT_NEAR(r.resource_change, 0.0, 1e-12);
}

TEST(Bounds, DepolarizingLosesAsymmetryStrictly) {
  const ResourceReport r = asymmetry_ft(depolarizing_channel(2, 0.4), tilted_plus(), ladder(2), quick());
  EXPECT_TRUE(r.satisfied);
  EXPECT_LT(r.resource_change, -1e-3);
  EXPECT_GT(r.bound_lhs, r.bound_rhs + 1e-3);
}

TEST(Bounds, AsymmetryRequiresCovariance) {
  CMatrix had(2, 2);
  had << 1.0, 1.0, 1.0, -1.0;
  try {
    asymmetry_ft(unitary_channel(had / std::sqrt(2.0)), tilted_plus(), ladder(2), quick());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCovariant);
  }
}

TEST(Bounds, UnitaryChannelIsReversible) {
  Rng rng(71);
  const RecoveryFamily fam(unitary_channel(random_unitary(3, rng)), random_full_rank_state(3, rng));
  const ResourceReport r = reversibility_check(fam, random_full_rank_state(3, rng), quick());
  EXPECT_TRUE(r.satisfied);
  EXPECT_NEAR(r.mean_sigma_R, 0.0, 1e-10);
  EXPECT_NEAR(r.averaged_fidelity, 1.0, 1e-10);
}

TEST(Bounds, FreeEnergyUnderThermalSwap) {
  const CMatrix h = ladder(2);
  CMatrix swap = CMatrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) swap(b * 2 + a, a * 2 + b) = 1.0;
  const KrausChannel partial = thermodynamic_channel(
      (std::sqrt(0.5) * (CMatrix::Identity(4, 4) + I_UNIT * swap)).eval(), DensityOperator::gibbs(h, 1.0), h, h, h, h, 1.0);
  const ResourceReport r = free_energy_ft(partial, tilted_plus(), 1.0, h, h, quick());
  EXPECT_TRUE(r.satisfied);
  EXPECT_LT(r.resource_change, 0.0);
  EXPECT_GE(r.bound_lhs, r.bound_rhs - 1e-12);
}

TEST(Bounds, BellPairLoccLosesOneEbit) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ResourceReport r = locc_entanglement_ft(measure_b_protocol(2, 2), bell, quick());
  EXPECT_TRUE(r.satisfied);
  EXPECT_NEAR(r.resource_change, -std::log(2.0), 1e-10);
  EXPECT_THROW(locc_entanglement_ft(measure_b_protocol(2, 2), DensityOperator::maximally_mixed(4), quick()), Error);
}

TEST(Bounds, ReportJsonHasKeys) {
  const ResourceReport r = asymmetry_ft(depolarizing_channel(2, 0.4), tilted_plus(), ladder(2), quick());
  const std::string js = to_json(r);
  for (const char* key : {"\"kind\"", "\"bound_lhs\"", "\"fidelity_by_theta\"", "\"violations\""}) {
    EXPECT_NE(js.find(key), std::string::npos) << key;
  }
}

TEST(Bounds, ThermalOperationHasFlatSpectrum) {
  Rng rng(72);
  const CMatrix hs = ladder(2), hb = ladder(3);
  const CMatrix total = tensor(hs, CMatrix::Identity(3, 3)) + tensor(CMatrix::Identity(2, 2), hb);
  const CMatrix u = random_energy_conserving_unitary(total.diagonal().real(), rng);
  const KrausChannel ch = thermodynamic_channel(u, DensityOperator::gibbs(hb, 1.0), hs, hs, hb, hb, 1.0);
  const RecoveryFamily fam(ch, DensityOperator::gibbs(hs, 1.0));
  const SymmetrySpectrum s = symmetry_diagnostic(fam, random_pure(2, rng), random_pure(2, rng), 4.0 * std::acos(-1.0));
  ASSERT_EQ(s.peaks.size(), 1u);
  EXPECT_NEAR(s.peaks[0], 0.0, 1e-12);
  EXPECT_TRUE(s.matches);
}

TEST(Bounds, CoherentBathSpectrumPeaks) {
  JcConfig c;
  c.n_max = 28;
  c.bath = BathKind::CoherentGibbs;
  c.tau = find_return_time(c, 18.66);
  const RecoveryFamily fam(jc_channel(c), atom_gibbs(c));
  const CVector plus = CVector::Ones(2) / std::sqrt(2.0);
  const SymmetrySpectrum s = symmetry_diagnostic(fam, plus, plus, 4.0 * std::acos(-1.0));
  EXPECT_TRUE(s.matches);
  std::vector<double> peaks = s.peaks;
  std::sort(peaks.begin(), peaks.end());
  const std::vector<double> expected{-1.0, -0.5, 0.0, 0.5, 1.0};
  ASSERT_EQ(peaks.size(), expected.size());
  for (std::size_t k = 0; k < peaks.size(); ++k) EXPECT_NEAR(peaks[k], expected[k], 1e-12);
}
