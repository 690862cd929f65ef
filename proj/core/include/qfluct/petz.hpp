#pragma once

#include "qfluct/channels.hpp"

#include <vector>

namespace qfluct {

// A forward channel together with a full-rank reference state and its image.
class RecoveryFamily {
 public:
  RecoveryFamily(KrausChannel forward, DensityOperator reference);

  const KrausChannel& forward() const { return forward_; }
  const DensityOperator& reference() const { return reference_; }
  const DensityOperator& evolved_reference() const { return evolved_; }

 private:
  KrausChannel forward_;
  DensityOperator reference_;
  DensityOperator evolved_;
};

// Kraus operators gamma^{1/2 + i theta} K_m^dagger N(gamma)^{-1/2 - i theta}. When N(gamma) is
// rank deficient the kernel of N(gamma) is sent to gamma so the map stays trace preserving.
KrausChannel rotated_petz(const RecoveryFamily& fam, double theta);
KrausChannel petz(const RecoveryFamily& fam);

// (pi/2) / (cosh(pi theta) + 1), a probability density on the real line.
double g0(double theta);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;  // include g0 and sum to one
};

// Composite Simpson rule for g0 on [-cutoff, cutoff], renormalized by the truncated mass.
Quadrature averaging_quadrature(double cutoff = 12.0, int n_nodes = 241);

// sum_k w_k R^{theta_k / 2}(x)
CMatrix averaged_recovery(const RecoveryFamily& fam, const CMatrix& x, double cutoff = 12.0,
                          int n_nodes = 241);

}  // namespace qfluct
