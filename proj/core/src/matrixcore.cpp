#include "qfluct/matrixcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfluct {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::RankDeficientReference: return "RankDeficientReference";
    case ErrorKind::NotCptp: return "NotCptp";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::DegenerateBackward: return "DegenerateBackward";
    case ErrorKind::MissingAtom: return "MissingAtom";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::EnergyConservationViolated: return "EnergyConservationViolated";
    case ErrorKind::NotPovm: return "NotPovm";
    case ErrorKind::InconsistentLabels: return "InconsistentLabels";
    case ErrorKind::NotCovariant: return "NotCovariant";
    case ErrorKind::ReferenceNotCommuting: return "ReferenceNotCommuting";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

double SpectralDecomposition::support_threshold() const {
  if (values.size() == 0) return 0.0;
  return tol::rank * std::max(values(0), 0.0);
}

Index SpectralDecomposition::rank() const {
  const double thr = support_threshold();
  Index r = 0;
  for (Index k = 0; k < dim(); ++k) r += values(k) > thr ? 1 : 0;
  return r;
}

CMatrix SpectralDecomposition::reconstruct() const {
  return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

CMatrix SpectralDecomposition::support_projector() const {
  return apply_on_support([](double) { return cplx(1.0); });
}

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return max_abs(a - a.adjoint());
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

SpectralDecomposition herm_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "herm_eig expects a square matrix");
  }
  const double defect = hermitian_defect(a);
  if (defect > tol::hermitian) {
    std::ostringstream os;
    os << "matrix deviates from Hermitian by " << defect;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a));
  SpectralDecomposition s;
  s.values = solver.eigenvalues().reverse();
  s.vectors = solver.eigenvectors().rowwise().reverse();
  return s;
}

CMatrix mat_pow(const SpectralDecomposition& s, cplx alpha) {
  if (alpha == cplx(0.0)) return s.support_projector();
  return s.apply_on_support([alpha](double l) { return std::exp(alpha * std::log(l)); });
}

CMatrix mat_pow(const CMatrix& a, cplx alpha) { return mat_pow(herm_eig(a), alpha); }

CMatrix mat_log(const SpectralDecomposition& s) {
  return s.apply_on_support([](double l) { return cplx(std::log(l)); });
}

CMatrix expm_hermitian(const CMatrix& h, cplx scale) {
  const auto s = herm_eig(h);
  CVector d(s.dim());
  for (Index k = 0; k < s.dim(); ++k) d(k) = std::exp(scale * s.values(k));
  return s.vectors * d.asDiagonal() * s.vectors.adjoint();
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix partial_trace(const CMatrix& a, const std::vector<Index>& dims,
                      const std::vector<Index>& keep) {
  Index total = 1;
  for (Index d : dims) total *= d;
  if (a.rows() != total || a.cols() != total) {
    throw Error(ErrorKind::DimensionMismatch, "partial_trace: dims do not match matrix");
  }
  const Index n = static_cast<Index>(dims.size());
  std::vector<bool> kept(n, false);
  for (Index k : keep) {
    if (k < 0 || k >= n) throw Error(ErrorKind::InvalidArgument, "partial_trace: bad subsystem");
    kept[k] = true;
  }
  Index dk = 1, dt = 1;
  for (Index s = 0; s < n; ++s) (kept[s] ? dk : dt) *= dims[s];

  // Full index = sum over subsystems, last subsystem fastest.
  auto compose = [&](Index ik, Index it) {
    Index full = 0, stride = 1;
    for (Index s = n - 1; s >= 0; --s) {
      Index digit;
      if (kept[s]) {
        digit = ik % dims[s];
        ik /= dims[s];
      } else {
        digit = it % dims[s];
        it /= dims[s];
      }
      full += digit * stride;
      stride *= dims[s];
    }
    return full;
  };
  std::vector<Index> map(dk * dt);
  for (Index ik = 0; ik < dk; ++ik)
    for (Index it = 0; it < dt; ++it) map[ik * dt + it] = compose(ik, it);

  CMatrix out = CMatrix::Zero(dk, dk);
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (Index t = 0; t < dt; ++t) acc += a(map[r * dt + t], map[c * dt + t]);
      out(r, c) = acc;
    }
  return out;
}

double trace_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

double fidelity(const CMatrix& rho, const CMatrix& tau) {
  if (rho.rows() != tau.rows() || rho.cols() != tau.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "fidelity: dimension mismatch");
  }
  const CMatrix a = mat_pow(rho, 0.5);
  const CMatrix b = mat_pow(tau, 0.5);
  const double f = trace_norm(a * b);
  return f * f;
}

DensityOperator::DensityOperator(const CMatrix& m, Unchecked) : m_(m) {}

DensityOperator::DensityOperator(const CMatrix& m) : m_(m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "density operator must be square and non-empty");
  }
  const double herm = hermitian_defect(m);
  if (herm > tol::state_hermitian) {
    std::ostringstream os;
    os << "density operator deviates from Hermitian by " << herm;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol::trace) {
    std::ostringstream os;
    os << "trace " << tr << " differs from one";
    throw Error(ErrorKind::InvalidState, os.str());
  }
  m_ = hermitian_part(m);
  finish();
}

void DensityOperator::finish() {
  s_ = herm_eig(m_);
  for (Index k = 0; k < s_.dim(); ++k) {
    double& l = s_.values(k);
    if (l < -tol::clamp) {
      std::ostringstream os;
      os << "negative eigenvalue " << l;
      throw Error(ErrorKind::InvalidState, os.str());
    }
    if (l < 0.0) l = 0.0;
  }
}

DensityOperator DensityOperator::normalized(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "density operator must be square and non-empty");
  }
  const double herm = hermitian_defect(m);
  if (herm > tolerance) {
    std::ostringstream os;
    os << "operator deviates from Hermitian by " << herm;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    std::ostringstream os;
    os << "trace " << tr << " differs from one";
    throw Error(ErrorKind::InvalidState, os.str());
  }
  DensityOperator out(hermitian_part(m) / tr, Unchecked{});
  out.finish();
  return out;
}

DensityOperator DensityOperator::pure(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidState, "zero state vector");
  const CVector v = psi / n;
  return DensityOperator(CMatrix(v * v.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(Index d) {
  return DensityOperator(CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
}

DensityOperator DensityOperator::gibbs(const CMatrix& h, double beta) {
  const auto s = herm_eig(h);
  const double emin = s.values(s.dim() - 1);
  CVector w(s.dim());
  for (Index k = 0; k < s.dim(); ++k) w(k) = std::exp(-beta * (s.values(k) - emin));
  w /= w.sum();
  CMatrix m = s.vectors * w.asDiagonal() * s.vectors.adjoint();
  return DensityOperator::normalized(m, 1e-8);
}

DensityOperator DensityOperator::diagonal(const RVector& p) {
  return DensityOperator(CMatrix(p.cast<cplx>().asDiagonal()));
}

double DensityOperator::entropy() const {
  double s = 0.0;
  for (Index k = 0; k < s_.dim(); ++k) {
    const double l = s_.values(k);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) { return rho.entropy(); }

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "relative_entropy: dimension mismatch");
  }
  const auto& ss = sigma.spectrum();
  const CMatrix proj = ss.support_projector();
  const double overlap = (proj * rho.matrix()).trace().real();
  if (overlap < 1.0 - tol::support_overlap) {
    std::ostringstream os;
    os << "support of rho not contained in support of sigma (overlap " << overlap << ")";
    throw Error(ErrorKind::SupportViolation, os.str());
  }
  const CMatrix log_sigma = mat_log(ss);
  return -rho.entropy() - (rho.matrix() * log_sigma).trace().real();
}

double fidelity(const DensityOperator& rho, const DensityOperator& tau) {
  const CMatrix a = mat_pow(rho.spectrum(), 0.5);
  const CMatrix b = mat_pow(tau.spectrum(), 0.5);
  const double f = trace_norm(a * b);
  return f * f;
}

CMatrix dephase(const CMatrix& x, const CMatrix& basis) {
  const CMatrix y = basis.adjoint() * x * basis;
  return basis * CMatrix(y.diagonal().asDiagonal()) * basis.adjoint();
}

double relative_entropy_of_coherence(const DensityOperator& rho, const CMatrix& basis) {
  const auto d = DensityOperator::normalized(dephase(rho.matrix(), basis), 1e-8);
  return d.entropy() - rho.entropy();
}

}  // namespace qfluct
