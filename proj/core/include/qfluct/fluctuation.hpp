#pragma once

#include "qfluct/petz.hpp"

#include <iosfwd>
#include <vector>

namespace qfluct {

// Eigensystems entering a two-point measurement scheme: the initial state (p_mu, psi_mu), the
// state measured at the end (p'_nu, phi'_nu), and the reference eigenbases before (r_i) and
// after (r'_k) the process.
struct TransitionBasis {
  SpectralDecomposition initial;
  SpectralDecomposition final_state;
  SpectralDecomposition reference_in;
  SpectralDecomposition reference_out;

  // rho -> N(rho) with reference gamma -> N(gamma).
  static TransitionBasis forward(const DensityOperator& rho, const RecoveryFamily& fam);
  // N(rho) -> rho with reference N(gamma) -> gamma.
  static TransitionBasis backward(const DensityOperator& rho, const RecoveryFamily& fam);
};

double transition_pure(const KrausChannel& ch, const CVector& psi, const CVector& phi);

enum class Direction { Initial, Final };

// Initial: <psi|gamma^{-1}|psi>^{-1/2} gamma^{-1/2} psi.
// Final:   <phi|N(gamma)|phi>^{-1/2} N(gamma)^{1/2} phi.
CVector rescaled_vector(const SpectralDecomposition& reference, const CVector& v, Direction dir);

struct DetailedBalance {
  double forward = 0.0;
  double backward = 0.0;
  double ratio = 0.0;
  double rhs = 0.0;  // <psi|gamma^{-1}|psi> <phi|N(gamma)|phi>
};

DetailedBalance detailed_balance_ratio(const RecoveryFamily& fam, const CVector& psi,
                                       const CVector& phi);

// exp[beta dE + log <psi|e^{beta H}|psi> <phi|e^{-beta H'}|phi>], dE = <H'>_phi - <H>_psi.
double upsilon(const CMatrix& h, const CMatrix& h_final, double beta, const CVector& psi,
               const CVector& phi);
double upsilon(const CMatrix& h, double beta, const CVector& psi, const CVector& phi);

// -1/2 log(r'_k r'_l) + 1/2 log(r_i r_j) + i [-1/2 log(r'_k / r'_l) + 1/2 log(r_i / r_j)]
cplx info_exchange(const TransitionBasis& basis, Index i, Index j, Index k, Index l);

class TpmQuasiProb {
 public:
  TpmQuasiProb(TransitionBasis basis, std::vector<cplx> data);

  const TransitionBasis& basis() const { return basis_; }
  Index n_initial() const { return basis_.initial.dim(); }
  Index n_final() const { return basis_.final_state.dim(); }
  Index dim_in() const { return basis_.reference_in.dim(); }
  Index dim_out() const { return basis_.reference_out.dim(); }

  cplx operator()(Index mu, Index i, Index j, Index nu, Index k, Index l) const {
    return data_[offset(mu, i, j, nu, k, l)];
  }
  cplx& at(Index mu, Index i, Index j, Index nu, Index k, Index l) {
    return data_[offset(mu, i, j, nu, k, l)];
  }
  const std::vector<cplx>& data() const { return data_; }
  cplx total() const;

  std::size_t offset(Index mu, Index i, Index j, Index nu, Index k, Index l) const {
    const Index di = dim_in(), dout = dim_out();
    return static_cast<std::size_t>(((((mu * di + i) * di + j) * n_final() + nu) * dout + k) *
                                        dout + l);
  }

 private:
  TransitionBasis basis_;
  std::vector<cplx> data_;
};

// P^{mu nu}_{ij,kl} = p_mu <phi_nu| Pi_k N(Pi_i |psi_mu><psi_mu| Pi_j) Pi_l |phi_nu>
TpmQuasiProb tpm_quasiprob(const KrausChannel& ch, const TransitionBasis& basis);

struct EpAtom {
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  cplx weight = 0.0;
};

// Distribution of the complex entropy production sigma = ds - dq over table entries. Entries
// whose initial or final eigenvalue lies outside the support are left out; every linear
// moment of the omitted block vanishes.
class EpDistribution {
 public:
  static constexpr double default_bin_tolerance = 1e-9;

  EpDistribution() = default;
  EpDistribution(std::vector<EpAtom> atoms, double omitted_abs_weight);

  const std::vector<EpAtom>& atoms() const { return atoms_; }
  double omitted_abs_weight() const { return omitted_; }
  cplx total() const;
  cplx mean_re() const;  // sum W sigma_R
  cplx mean_im() const;  // sum W sigma_I
  // sum W exp(-sigma_R + i theta sigma_I)
  cplx exp_average(double theta) const;
  const EpAtom* find(double sigma_re, double sigma_im, double tolerance) const;
  // Atoms with |W| above the threshold.
  std::vector<EpAtom> significant(double weight_tolerance) const;
  // sigma_R -> sum over sigma_I of W
  std::vector<std::pair<double, cplx>> real_marginal(double tolerance) const;

 private:
  std::vector<EpAtom> atoms_;
  double omitted_ = 0.0;
};

EpDistribution ep_distribution(const TpmQuasiProb& table,
                               double bin_tolerance = EpDistribution::default_bin_tolerance);
EpDistribution ep_distribution(const RecoveryFamily& fam, const DensityOperator& rho,
                               double bin_tolerance = EpDistribution::default_bin_tolerance);
// Built from R^theta applied to N(rho) with the roles of the two eigensystems exchanged.
EpDistribution backward_ep_distribution(
    const RecoveryFamily& fam, double theta, const DensityOperator& rho,
    double bin_tolerance = EpDistribution::default_bin_tolerance);

struct CrooksAtom {
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  cplx forward = 0.0;
  cplx backward = 0.0;   // at -sigma^*
  cplx expected = 0.0;   // exp(sigma_R - 2 i theta sigma_I)
  double deviation = 0.0;  // |forward - expected backward| / |expected backward|
};

struct CrooksReport {
  double theta = 0.0;
  std::vector<CrooksAtom> checked;
  std::vector<EpAtom> zero_backward;
  double max_deviation = 0.0;
};

// Pairs each forward atom sigma with the backward atom at -sigma^*. Atoms with
// |P_backward| <= weight_tolerance are reported separately.
CrooksReport crooks_check(const EpDistribution& forward, const EpDistribution& backward,
                          double theta, double weight_tolerance = 1e-12,
                          double bin_tolerance = 1e-8);

// Tr[Pi_rho R^{theta/2}(N(rho))]
double kappa(const RecoveryFamily& fam, const DensityOperator& rho, double theta);

struct IntegralQft {
  double theta = 0.0;
  cplx lhs = 0.0;
  double kappa = 0.0;
  double deviation = 0.0;
};

IntegralQft integral_qft(const RecoveryFamily& fam, const DensityOperator& rho,
                         const EpDistribution& forward, double theta);

struct MeanEntropyProduction {
  cplx mean_re = 0.0;  // sum W sigma_R
  cplx mean_im = 0.0;  // sum W sigma_I
  double relative_entropy_drop = 0.0;  // S(rho||gamma) - S(N(rho)||N(gamma))
};

MeanEntropyProduction mean_entropy_production(const EpDistribution& forward,
                                              const RecoveryFamily& fam,
                                              const DensityOperator& rho);

// sigma_R, sigma_I, Re/Im forward weight, Re/Im backward weight at -sigma^*.
void write_distribution_csv(std::ostream& os, const EpDistribution& forward,
                            const EpDistribution* backward);

}  // namespace qfluct
