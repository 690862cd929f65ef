#pragma once

#include "qfluct/fluctuation.hpp"
#include "qfluct/models.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qfluct {

// Default theta values for the integral fluctuation checks.
std::vector<double> default_check_thetas();
// 129 points on [-12, 12].
std::vector<double> default_fidelity_grid();

struct ResourceReport {
  std::string kind;
  double mean_sigma_R = 0.0;
  double mean_sigma_I = 0.0;   // |sum W sigma_I|
  double relative_entropy_drop = 0.0;
  double resource_change = 0.0;  // Delta F, Delta C or Delta E_S
  double equilibrium_shift = 0.0;  // Delta F_eq for the free energy

  std::vector<double> thetas;
  std::vector<cplx> lhs_by_theta;
  std::vector<double> kappa_by_theta;

  std::vector<double> fidelity_grid;
  std::vector<double> fidelity_by_theta;  // F(rho, R^{theta/2} o N(rho))
  double averaged_fidelity = 0.0;         // F(rho, Rbar o N(rho))
  double mean_fidelity = 0.0;             // integral of g0(theta) F_theta

  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  bool satisfied = true;
  std::vector<std::string> violations;

  void require(bool ok, const std::string& message);
};

// Keys: kind, mean_sigma_R, mean_sigma_I, relative_entropy_drop, resource_change,
// equilibrium_shift, kappa_by_theta, lhs_by_theta, fidelity_by_theta, averaged_fidelity,
// mean_fidelity, bound_lhs, bound_rhs, satisfied, violations.
void write_json(std::ostream& os, const ResourceReport& report);
std::string to_json(const ResourceReport& report);

struct ReportOptions {
  std::vector<double> thetas = default_check_thetas();
  std::vector<double> fidelity_grid = default_fidelity_grid();
  double qft_tolerance = 1e-7;
};

// Delta F = -<sigma_R>/beta + Delta F_eq with reference gamma_S. The balanced equality
// <e^{beta dF}> = e^{beta Delta F_eq} kappa_theta, sigma_I = 0 on every weighted atom and
// F(rho, Rbar o N(rho)) >= e^{beta (Delta F - Delta F_eq)} are checked.
ResourceReport free_energy_ft(const KrausChannel& ch, const DensityOperator& rho, double beta,
                              const CMatrix& h_s, const CMatrix& h_s_final,
                              const ReportOptions& opt = {});

// Projection onto the eigenspaces of L.
CMatrix asymmetry_dephase(const CMatrix& x, const CMatrix& l);
// S(rho || D(rho))
double relative_entropy_of_asymmetry(const DensityOperator& rho, const CMatrix& l);
// Largest covariance defect of ch under exp(-i L t) over a fixed set of times.
double generator_covariance_defect(const KrausChannel& ch, const CMatrix& l_in, const CMatrix& l_out);

// Delta C = C(N(rho)) - C(rho) = -<sigma_R> with reference D(rho). Throws NotCovariant when
// the channel does not commute with exp(-i L t).
ResourceReport asymmetry_ft(const KrausChannel& ch, const DensityOperator& rho, const CMatrix& l,
                            const ReportOptions& opt = {});

struct MergingBound {
  double lhs = 0.0;  // |N(rho)_{k'l'}|
  double rhs = 0.0;
  std::vector<std::pair<Index, Index>> omega_plus;
  std::vector<std::pair<Index, Index>> omega_minus;
  bool holds(double tolerance = 1e-9) const { return lhs <= rhs + tolerance; }
};

// Matrix elements are taken in an eigenbasis of L that also diagonalizes gamma (input) and
// N(gamma) (output). k and l index that output basis, ordered by ascending L eigenvalue.
MergingBound coherence_merging_bound(const KrausChannel& ch, const DensityOperator& rho,
                                     const DensityOperator& gamma, const CMatrix& l, Index k,
                                     Index l_index);

// Pure input: Delta E_S = sum_m P_m E_S(Phi_m) - E_S(Psi). Throws NotPure otherwise.
// The reference I_A (x) rho_B enters normalized; the factor d_A cancels in every dq.
ResourceReport locc_entanglement_ft(const LoccProtocol& protocol, const DensityOperator& psi_ab,
                                    const ReportOptions& opt = {});
ResourceReport locc_entanglement_ft(const LoccProtocol& protocol, const CVector& psi_ab,
                                    const ReportOptions& opt = {});
// Mixed input: Delta I(A>B) with I(A>B) = S(rho_B) - S(rho_AB).
ResourceReport locc_coherent_info_ft(const LoccProtocol& protocol, const DensityOperator& rho_ab,
                                     const ReportOptions& opt = {});

// <sigma_R> >= -log F(rho, Rbar o N(rho)); when <sigma_R> vanishes every F_theta is one.
ResourceReport reversibility_check(const RecoveryFamily& fam, const DensityOperator& rho,
                                   const ReportOptions& opt = {});

struct SymmetrySpectrum {
  std::vector<double> thetas;
  std::vector<double> transition;     // T(U(theta/2) psi -> V(theta/2) phi)
  std::vector<double> frequencies;    // angular frequency of each DFT bin
  std::vector<double> amplitudes;     // |DFT| / n
  std::vector<double> peaks;          // frequencies with amplitude above the threshold
  std::vector<double> expected;       // sigma_I values carried by the transition
  double resolution = 0.0;
  bool matches = false;
};

// Uniform grid of n (a power of two) points on [0, theta_max). Peaks are bins whose amplitude
// exceeds `threshold`; `expected` collects sigma_I of the weighted (i j -> k l) terms.
SymmetrySpectrum symmetry_diagnostic(const RecoveryFamily& fam, const CVector& psi,
                                     const CVector& phi, double theta_max, int n = 256,
                                     double threshold = 1e-9);

}  // namespace qfluct
