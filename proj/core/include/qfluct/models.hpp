#pragma once

#include "qfluct/channels.hpp"
#include "qfluct/config.hpp"
#include "qfluct/lindblad.hpp"

#include <vector>

namespace qfluct {

// Atom basis: index 0 = |g>, index 1 = |e>. Joint atom-field index = atom * (n_max + 1) + n.
inline constexpr Index kGround = 0;
inline constexpr Index kExcited = 1;

enum class BathKind { Thermal, CoherentGibbs };

struct JcConfig {
  double beta = 1.0;
  double omega0 = 1.0;
  double g = 0.1;
  int n_max = 40;
  double gamma_noise = 0.0;  // emission rate of the atomic noise
  double tau = 18.66;
  double dt = 1e-3;
  BathKind bath = BathKind::Thermal;

  // Finite parameters, n_max >= 1 and a thermal tail beyond n_max below 1e-12.
  void validate() const;
  Index field_dim() const { return n_max + 1; }
  Index joint_dim() const { return 2 * field_dim(); }

  static JcConfig from(const KeyValueConfig& cfg);
};

const char* to_string(BathKind kind);

CMatrix atom_hamiltonian(const JcConfig& cfg);  // omega0 sigma_z / 2
CMatrix field_hamiltonian(const JcConfig& cfg);  // omega0 a^dagger a
// omega0 sigma_z/2 + omega0 a^dagger a + g (sigma_+ a + sigma_- a^dagger), with the Pauli
// convention sigma_+- = sigma_x +- i sigma_y.
CMatrix jc_hamiltonian(const JcConfig& cfg);
DensityOperator atom_gibbs(const JcConfig& cfg);
DensityOperator field_bath(const JcConfig& cfg);  // thermal or coherent-Gibbs
CVector coherent_gibbs_vector(const JcConfig& cfg);

KrausChannel jc_channel(const JcConfig& cfg);
// JC interaction plus atomic emission sqrt(Gamma) |g><e| and absorption
// sqrt(Gamma e^{-beta omega0}) |e><g| on the joint space.
LindbladGenerator noise_lindbladian(const JcConfig& cfg);
// Choi matrix assembled from RK4 evolution of |a><b| (x) bath, traced over the field.
KrausChannel jc_noisy_channel(const JcConfig& cfg);
// jc_noisy_channel when gamma_noise > 0, jc_channel otherwise.
KrausChannel jc_any_channel(const JcConfig& cfg);

// ||N(gamma_a) - gamma_a||_F for the closed JC dynamics at time tau.
double return_residual(const JcConfig& cfg, double tau);
// Minimizes return_residual over [seed - half_width, seed + half_width].
double find_return_time(const JcConfig& cfg, double seed, double half_width = 0.5);

// (|g> + |e>)/sqrt(2) mixed with white noise: 1/2 |psi><psi| + I/4.
DensityOperator half_mixed_plus_state();

// Tr_B[U (rho (x) gamma_B) U^dagger] after checking U conserves H_S + H_B -> H_S' + H_B'.
KrausChannel thermodynamic_channel(const CMatrix& u, const DensityOperator& gamma_b,
                                   const CMatrix& h_s, const CMatrix& h_s_final,
                                   const CMatrix& h_b, const CMatrix& h_b_final, double beta);

// One-way LOCC: Bob applies measurement operators K_m, Alice applies V_m, outcome m is kept
// in a classical register. The output space is A (x) B (x) M.
struct LoccProtocol {
  Index dim_a = 0;
  Index dim_b = 0;
  std::vector<CMatrix> alice;  // V_m, unitary on A
  std::vector<CMatrix> bob;    // K_m with sum K_m^dagger K_m = I

  Index outcomes() const { return static_cast<Index>(bob.size()); }
};

KrausChannel locc_channel(const LoccProtocol& protocol);
// Projective computational-basis measurement on B, no correction on A.
LoccProtocol measure_b_protocol(Index dim_a, Index dim_b);

}  // namespace qfluct
