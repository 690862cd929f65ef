#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfluct {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

enum class ErrorKind {
  NotHermitian,
  DimensionMismatch,
  InvalidState,
  InvalidArgument,
  SupportViolation,
  RankDeficientReference,
  NotCptp,
  NotPure,
  DegenerateBackward,
  MissingAtom,
  StepTooLarge,
  TruncationInsufficient,
  EnergyConservationViolated,
  NotPovm,
  InconsistentLabels,
  NotCovariant,
  ReferenceNotCommuting,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace tol {
inline constexpr double hermitian = 1e-8;
inline constexpr double state_hermitian = 1e-10;
inline constexpr double rank = 1e-12;
inline constexpr double clamp = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double support_overlap = 1e-9;
}  // namespace tol

// Eigenvalues in descending order, eigenvectors as columns.
struct SpectralDecomposition {
  RVector values;
  CMatrix vectors;

  Index dim() const { return values.size(); }
  double support_threshold() const;
  bool in_support(Index k) const { return values(k) > support_threshold(); }
  Index rank() const;
  CMatrix reconstruct() const;
  CMatrix support_projector() const;
  // sum_k f(lambda_k) |v_k><v_k| over the support
  template <class F>
  CMatrix apply_on_support(F f) const {
    const double thr = support_threshold();
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (Index k = 0; k < dim(); ++k) {
      if (values(k) <= thr) continue;
      const cplx fk = f(values(k));
      out.noalias() += fk * vectors.col(k) * vectors.col(k).adjoint();
    }
    return out;
  }
};

SpectralDecomposition herm_eig(const CMatrix& a);

double hermitian_defect(const CMatrix& a);
double max_abs(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);

// A^alpha on the support of A (zero on the kernel).
CMatrix mat_pow(const SpectralDecomposition& s, cplx alpha);
CMatrix mat_pow(const CMatrix& a, cplx alpha);
CMatrix mat_log(const SpectralDecomposition& s);
// exp(scale * H) for Hermitian H.
CMatrix expm_hermitian(const CMatrix& h, cplx scale);

CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);
CMatrix partial_trace(const CMatrix& a, const std::vector<Index>& dims,
                      const std::vector<Index>& keep);

double trace_norm(const CMatrix& a);
double fidelity(const CMatrix& rho, const CMatrix& tau);

class DensityOperator {
 public:
  // Strict: Hermitian to 1e-10, trace one to 1e-10, eigenvalues >= -1e-10.
  explicit DensityOperator(const CMatrix& m);

  // Hermitizes and renormalizes when the defects are below `tolerance`.
  static DensityOperator normalized(const CMatrix& m, double tolerance);
  static DensityOperator pure(const CVector& psi);
  static DensityOperator maximally_mixed(Index d);
  static DensityOperator gibbs(const CMatrix& h, double beta);
  static DensityOperator diagonal(const RVector& p);

  const CMatrix& matrix() const { return m_; }
  const SpectralDecomposition& spectrum() const { return s_; }
  Index dim() const { return m_.rows(); }
  double entropy() const;
  bool full_rank() const { return s_.rank() == dim(); }

 private:
  struct Unchecked {};
  DensityOperator(const CMatrix& m, Unchecked);
  void finish();

  CMatrix m_;
  SpectralDecomposition s_;
};

double von_neumann_entropy(const DensityOperator& rho);
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const DensityOperator& rho, const DensityOperator& tau);
// S(rho || D(rho)) with D the dephasing in the given orthonormal basis.
double relative_entropy_of_coherence(const DensityOperator& rho, const CMatrix& basis);
CMatrix dephase(const CMatrix& x, const CMatrix& basis);

}  // namespace qfluct
