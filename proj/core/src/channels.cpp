#include "qfluct/channels.hpp"

#include <cmath>
#include <sstream>

namespace qfluct {

KrausChannel::KrausChannel(std::vector<CMatrix> kraus, Validation validation, double tolerance)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorKind::InvalidArgument, "channel needs a Kraus operator");
  din_ = kraus_.front().cols();
  dout_ = kraus_.front().rows();
  for (const auto& k : kraus_) {
    if (k.cols() != din_ || k.rows() != dout_) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators have inconsistent shapes");
    }
  }
  if (validation == Validation::Check) {
    const double defect = tp_defect();
    if (defect > tolerance) {
      std::ostringstream os;
      os << "sum K^dagger K deviates from identity by " << defect;
      throw Error(ErrorKind::NotCptp, os.str());
    }
  }
}

double KrausChannel::tp_defect() const {
  CMatrix s = CMatrix::Zero(din_, din_);
  for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
  return max_abs(s - CMatrix::Identity(din_, din_));
}

CMatrix apply_channel(const KrausChannel& ch, const CMatrix& x) {
  if (x.rows() != ch.dim_in() || x.cols() != ch.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "channel input dimension mismatch");
  }
  CMatrix out = CMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
  return DensityOperator::normalized(apply_channel(ch, rho.matrix()), 1e-6);
}

CMatrix adjoint_apply(const KrausChannel& ch, const CMatrix& y) {
  if (y.rows() != ch.dim_out() || y.cols() != ch.dim_out()) {
    throw Error(ErrorKind::DimensionMismatch, "adjoint channel input dimension mismatch");
  }
  CMatrix out = CMatrix::Zero(ch.dim_in(), ch.dim_in());
  for (const auto& k : ch.kraus()) out.noalias() += k.adjoint() * y * k;
  return out;
}

CMatrix rescale(const SpectralDecomposition& a, cplx alpha, const CMatrix& x) {
  const CMatrix p = mat_pow(a, alpha);
  return p * x * p.adjoint();
}

CMatrix rescale(const CMatrix& a, cplx alpha, const CMatrix& x) {
  return rescale(herm_eig(a), alpha, x);
}

CMatrix choi(const KrausChannel& ch) {
  const Index din = ch.dim_in(), dout = ch.dim_out();
  CMatrix j = CMatrix::Zero(din * dout, din * dout);
  CVector v(din * dout);
  for (const auto& k : ch.kraus()) {
    for (Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    j.noalias() += v * v.adjoint();
  }
  return j;
}

ChoiCheck check_choi(const CMatrix& j, Index din, Index dout, double tolerance) {
  if (j.rows() != din * dout || j.cols() != din * dout) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix has wrong dimension");
  }
  ChoiCheck c;
  const auto s = herm_eig(hermitian_part(j));
  c.min_eigenvalue = s.values(s.dim() - 1);
  CMatrix tr_out = CMatrix::Zero(din, din);
  for (Index i = 0; i < din; ++i)
    for (Index k = 0; k < din; ++k) tr_out(i, k) = j.block(i * dout, k * dout, dout, dout).trace();
  c.tp_defect = max_abs(tr_out - CMatrix::Identity(din, din));
  c.completely_positive = c.min_eigenvalue >= -tolerance && hermitian_defect(j) <= tolerance;
  c.trace_preserving = c.tp_defect <= tolerance;
  return c;
}

KrausChannel from_choi(const CMatrix& j, Index din, Index dout, double tolerance) {
  const ChoiCheck c = check_choi(j, din, dout, tolerance);
  if (!c.ok()) {
    std::ostringstream os;
    os << "Choi matrix min eigenvalue " << c.min_eigenvalue << ", trace defect " << c.tp_defect;
    throw Error(ErrorKind::NotCptp, os.str());
  }
  const auto s = herm_eig(hermitian_part(j));
  const double cutoff = 1e-14 * std::max(s.values(0), 1.0);
  std::vector<CMatrix> kraus;
  for (Index m = 0; m < s.dim(); ++m) {
    if (s.values(m) <= cutoff) continue;
    CMatrix k(dout, din);
    const double w = std::sqrt(s.values(m));
    for (Index i = 0; i < din; ++i) k.col(i) = w * s.vectors.col(m).segment(i * dout, dout);
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus), Validation::Check, tolerance);
}

KrausChannel compress(const KrausChannel& ch) {
  if (ch.size() <= static_cast<std::size_t>(ch.dim_in() * ch.dim_out())) return ch;
  return from_choi(choi(ch), ch.dim_in(), ch.dim_out(), std::max(1e-8, 2.0 * ch.tp_defect()));
}

KrausChannel identity_channel(Index d) { return KrausChannel({CMatrix::Identity(d, d)}); }

KrausChannel unitary_channel(const CMatrix& u) { return KrausChannel({u}); }

KrausChannel depolarizing_channel(Index d, double p) {
  if (p < 0.0 || p > 1.0) throw Error(ErrorKind::InvalidArgument, "depolarizing p outside [0,1]");
  std::vector<CMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(d, d));
  if (p > 0.0) {
    const double w = std::sqrt(p / static_cast<double>(d));
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) {
        CMatrix k = CMatrix::Zero(d, d);
        k(a, b) = w;
        kraus.push_back(std::move(k));
      }
  }
  return KrausChannel(std::move(kraus));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.dim_out() != second.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "compose: dimension mismatch");
  }
  std::vector<CMatrix> kraus;
  for (const auto& b : second.kraus())
    for (const auto& a : first.kraus()) kraus.push_back(b * a);
  return compress(KrausChannel(std::move(kraus), Validation::Skip));
}

namespace {

template <class Map>
CMatrix choi_of(Index din, Index dout, Map map) {
  CMatrix j = CMatrix::Zero(din * dout, din * dout);
  for (Index a = 0; a < din; ++a)
    for (Index b = 0; b < din; ++b) {
      CMatrix e = CMatrix::Zero(din, din);
      e(a, b) = 1.0;
      j.block(a * dout, b * dout, dout, dout) = map(e);
    }
  return j;
}

}  // namespace

double covariance_defect(const KrausChannel& ch, const DensityOperator& reference, double theta) {
  const DensityOperator out_ref = apply_channel(ch, reference);
  const CMatrix u_in = mat_pow(reference.spectrum(), cplx(0.0, theta));
  const CMatrix u_out = mat_pow(out_ref.spectrum(), cplx(0.0, -theta));
  const CMatrix rotated = choi_of(ch.dim_in(), ch.dim_out(), [&](const CMatrix& e) {
    return CMatrix(u_out * apply_channel(ch, CMatrix(u_in * e * u_in.adjoint())) * u_out.adjoint());
  });
  return max_abs(rotated - choi(ch));
}

double covariance_defect(const KrausChannel& ch, const CMatrix& l_in, const CMatrix& l_out,
                         double t) {
  const CMatrix u_in = expm_hermitian(l_in, cplx(0.0, -t));
  const CMatrix u_out = expm_hermitian(l_out, cplx(0.0, -t));
  const CMatrix rotated = choi_of(ch.dim_in(), ch.dim_out(), [&](const CMatrix& e) {
    return CMatrix(u_out.adjoint() * apply_channel(ch, CMatrix(u_in * e * u_in.adjoint())) * u_out);
  });
  return max_abs(rotated - choi(ch));
}

KrausChannel dilation_channel(const CMatrix& u, Index dim_sys, const DensityOperator& bath) {
  const Index db = bath.dim();
  if (u.rows() != dim_sys * db || u.cols() != dim_sys * db) {
    throw Error(ErrorKind::DimensionMismatch, "dilation unitary does not match system and bath");
  }
  const auto& s = bath.spectrum();
  std::vector<CMatrix> kraus;
  for (Index n = 0; n < s.dim(); ++n) {
    if (!s.in_support(n)) continue;
    const double w = std::sqrt(s.values(n));
    const CVector& bn = s.vectors.col(n);
    // U (I (x) |b_n>) as a (dim_sys*db) x dim_sys matrix.
    CMatrix ub = CMatrix::Zero(dim_sys * db, dim_sys);
    for (Index i = 0; i < dim_sys; ++i) ub.col(i) = u.middleCols(i * db, db) * bn;
    for (Index m = 0; m < db; ++m) {
      CMatrix k(dim_sys, dim_sys);
      for (Index r = 0; r < dim_sys; ++r) k.row(r) = ub.row(r * db + m);
      kraus.push_back(w * k);
    }
  }
  return KrausChannel(std::move(kraus), Validation::Check, 1e-8);
}

KrausChannel dilation_channel(const CMatrix& u, Index dim_sys, const CVector& bath_state) {
  return dilation_channel(u, dim_sys, DensityOperator::pure(bath_state));
}

}  // namespace qfluct
