#pragma once

#include "qfluct/matrixcore.hpp"

#include <vector>

namespace qfluct {

enum class Validation { Check, Skip };

struct ChoiCheck {
  double min_eigenvalue = 0.0;
  double tp_defect = 0.0;
  bool completely_positive = false;
  bool trace_preserving = false;
  bool ok() const { return completely_positive && trace_preserving; }
};

class KrausChannel {
 public:
  KrausChannel() = default;
  explicit KrausChannel(std::vector<CMatrix> kraus, Validation validation = Validation::Check,
                        double tolerance = 1e-8);

  Index dim_in() const { return din_; }
  Index dim_out() const { return dout_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }
  double tp_defect() const;

 private:
  std::vector<CMatrix> kraus_;
  Index din_ = 0;
  Index dout_ = 0;
};

// Linear extension to arbitrary operators.
CMatrix apply_channel(const KrausChannel& ch, const CMatrix& x);
DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);
CMatrix adjoint_apply(const KrausChannel& ch, const CMatrix& y);

// J_A^alpha(X) = A^alpha X (A^alpha)^dagger
CMatrix rescale(const SpectralDecomposition& a, cplx alpha, const CMatrix& x);
CMatrix rescale(const CMatrix& a, cplx alpha, const CMatrix& x);

// Unnormalized Choi matrix sum_ij |i><j| (x) N(|i><j|), input index slow.
CMatrix choi(const KrausChannel& ch);
ChoiCheck check_choi(const CMatrix& j, Index din, Index dout, double tolerance = 1e-8);
KrausChannel from_choi(const CMatrix& j, Index din, Index dout, double tolerance = 1e-8);
// Minimal Kraus representation via the Choi eigendecomposition.
KrausChannel compress(const KrausChannel& ch);

KrausChannel identity_channel(Index d);
KrausChannel unitary_channel(const CMatrix& u);
KrausChannel depolarizing_channel(Index d, double p);
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

// Max-norm Choi distance between N and J_{N(ref)}^{-i theta} o N o J_{ref}^{i theta}.
double covariance_defect(const KrausChannel& ch, const DensityOperator& reference, double theta);
// Max-norm Choi distance between N and U_t^dagger N(U_t . U_t^dagger) U_t with U_t = exp(-i L t).
double covariance_defect(const KrausChannel& ch, const CMatrix& l_in, const CMatrix& l_out,
                         double t);

// Kraus operators sqrt(q_n) (I (x) <b_m|) U (I (x) |b_n>) for the bath state sum_n q_n |b_n><b_n|.
KrausChannel dilation_channel(const CMatrix& u, Index dim_sys, const DensityOperator& bath);
KrausChannel dilation_channel(const CMatrix& u, Index dim_sys, const CVector& bath_state);

}  // namespace qfluct
