#include "qfluct/petz.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qfluct {

RecoveryFamily::RecoveryFamily(KrausChannel forward, DensityOperator reference)
    : forward_(std::move(forward)),
      reference_(std::move(reference)),
      evolved_(apply_channel(forward_, reference_)) {
  if (reference_.dim() != forward_.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "reference does not match channel input");
  }
  if (!reference_.full_rank()) {
    std::ostringstream os;
    os << "reference has rank " << reference_.spectrum().rank() << " < " << reference_.dim();
    throw Error(ErrorKind::RankDeficientReference, os.str());
  }
}

KrausChannel rotated_petz(const RecoveryFamily& fam, double theta) {
  const auto& gs = fam.reference().spectrum();
  const auto& ns = fam.evolved_reference().spectrum();
  const CMatrix left = mat_pow(gs, cplx(0.5, theta));
  const CMatrix right = mat_pow(ns, cplx(-0.5, -theta));
  std::vector<CMatrix> kraus;
  kraus.reserve(fam.forward().size());
  for (const auto& k : fam.forward().kraus()) kraus.push_back(left * k.adjoint() * right);

  for (Index kk = 0; kk < ns.dim(); ++kk) {
    if (ns.in_support(kk)) continue;
    for (Index i = 0; i < gs.dim(); ++i) {
      kraus.push_back(std::sqrt(gs.values(i)) * gs.vectors.col(i) * ns.vectors.col(kk).adjoint());
    }
  }
  return KrausChannel(std::move(kraus), Validation::Check, 1e-6);
}

KrausChannel petz(const RecoveryFamily& fam) { return rotated_petz(fam, 0.0); }

double g0(double theta) {
  return (std::numbers::pi / 2.0) / (std::cosh(std::numbers::pi * theta) + 1.0);
}

Quadrature averaging_quadrature(double cutoff, int n_nodes) {
  if (n_nodes < 3 || n_nodes % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "Simpson rule needs an odd node count >= 3");
  }
  if (!(cutoff > 0.0)) throw Error(ErrorKind::InvalidArgument, "cutoff must be positive");
  Quadrature q;
  const double h = 2.0 * cutoff / (n_nodes - 1);
  double total = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    const double t = -cutoff + k * h;
    const double s = (k == 0 || k == n_nodes - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const double w = s * h / 3.0 * g0(t);
    q.nodes.push_back(t);
    q.weights.push_back(w);
    total += w;
  }
  for (double& w : q.weights) w /= total;
  return q;
}

CMatrix averaged_recovery(const RecoveryFamily& fam, const CMatrix& x, double cutoff,
                          int n_nodes) {
  const Quadrature q = averaging_quadrature(cutoff, n_nodes);
  CMatrix out = CMatrix::Zero(fam.reference().dim(), fam.reference().dim());
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    out += q.weights[k] * apply_channel(rotated_petz(fam, q.nodes[k] / 2.0), x);
  }
  return out;
}

}  // namespace qfluct
