#include "qfluct/lindblad.hpp"
#include "qfluct/random.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace qfluct;

namespace {

CMatrix lowering() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

CMatrix pauli_x() {
  CMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

LindbladGenerator driven_qubit() { return LindbladGenerator(pauli_x(), {std::sqrt(0.1) * lowering()}); }

CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

}  // namespace

TEST(Lindblad, SuperoperatorMatchesApply) {
  Rng rng(41);
  const CMatrix h = ginibre(3, 3, rng);
  const LindbladGenerator gen((h + h.adjoint()) / 2.0, {ginibre(3, 3, rng), ginibre(3, 3, rng)});
  const CMatrix x = ginibre(3, 3, rng);
  EXPECT_LT((gen.superoperator() * vec(x) - vec(gen.apply(x))).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(std::abs(gen.apply(x).trace()), 1e-12);
}

TEST(Lindblad, AmplitudeDampingDecay) {
  const double gamma = 0.5;
  const LindbladGenerator gen(CMatrix::Zero(2, 2), {std::sqrt(gamma) * lowering()});
  const DensityOperator excited = DensityOperator::pure(CVector::Unit(2, 1));
  const Trajectory tr = evolve(gen, excited, 2.0, 1e-3, 100);
  ASSERT_EQ(tr.times.size(), tr.states.size());
  EXPECT_NEAR(tr.times.back(), 2.0, 1e-12);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    EXPECT_NEAR(tr.states[k](1, 1).real(), std::exp(-gamma * tr.times[k]), 1e-10);
  }
}

TEST(Lindblad, PropagateMatchesExponential) {
  const LindbladGenerator gen = driven_qubit();
  Rng rng(42);
  const CMatrix x = ginibre(2, 2, rng);
  const double t = 1.3;
  const CVector exact = (gen.superoperator() * t).exp() * vec(x);
  EXPECT_LT((vec(propagate(gen, x, t, 1e-3)) - exact).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Lindblad, OversizedStepIsRejected) {
  const LindbladGenerator gen(CMatrix::Zero(2, 2), {10.0 * lowering()});
  try {
    evolve(gen, DensityOperator::pure(CVector::Unit(2, 1)), 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
}

TEST(Lindblad, SqrtDerivativeByFiniteDifference) {
  Rng rng(43);
  const DensityOperator g = random_full_rank_state(3, rng);
  const CMatrix d = ginibre(3, 3, rng);
  const CMatrix dg = (d + d.adjoint()) / 2.0 - CMatrix::Identity(3, 3) * ((d + d.adjoint()) / 2.0).trace() / 3.0;
  const double eps = 1e-6;
  const CMatrix fd = (mat_pow(CMatrix(g.matrix() + eps * dg), 0.5) - mat_pow(CMatrix(g.matrix() - eps * dg), 0.5)) / (2 * eps);
  EXPECT_LT(max_abs(sqrt_derivative(g.spectrum(), dg) - fd), 1e-8);
}

TEST(Lindblad, ReverseGeneratorPreservesStationaryReference) {
  const double g = 0.3, n = 0.25;
  const LindbladGenerator gen(CMatrix::Zero(2, 2),
                              {std::sqrt(g * (1 + n)) * lowering(), std::sqrt(g * n) * CMatrix(lowering().adjoint())});
  RVector p(2);
  p << (1 + n) / (1 + 2 * n), n / (1 + 2 * n);
  const CMatrix gamma = DensityOperator::diagonal(p).matrix();
  EXPECT_LT(max_abs(gen.apply(gamma)), 1e-14);
  const LindbladGenerator rev = reverse_generator(gen, gamma, CMatrix::Zero(2, 2));
  EXPECT_LT(max_abs(rev.apply(gamma)), 1e-13);
}

TEST(Lindblad, ReversedTrajectoryRetracesForward) {
  RVector p(2);
  p << 0.7, 0.3;
  const ReverseCheck rc = reverse_recovery_check(driven_qubit(), DensityOperator::diagonal(p), 0.5, 1e-3);
  EXPECT_LT(rc.max_error, 1e-10);
  EXPECT_LE(rc.final_error, rc.max_error);
  EXPECT_FALSE(rc.reversed.states.empty());
}

TEST(Lindblad, InfinitesimalPetzIsSecondOrder) {
  RVector p(2);
  p << 0.7, 0.3;
  const DensityOperator gamma = DensityOperator::diagonal(p);
  const double e1 = infinitesimal_petz_error(driven_qubit(), gamma, 1e-3);
  const double e2 = infinitesimal_petz_error(driven_qubit(), gamma, 5e-4);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}
