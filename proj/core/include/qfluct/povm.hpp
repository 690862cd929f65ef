#pragma once

#include "qfluct/fluctuation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qfluct {

enum class PovmTag { Basis, Plus, Times };

// Element attached to eigenvector `state` of the measured state. Basis uses `i`; Plus and
// Times use the pair i < j of reference eigenvectors.
struct PovmLabel {
  Index state = 0;
  PovmTag tag = PovmTag::Basis;
  Index i = 0;
  Index j = 0;

  std::string str() const;
  static PovmLabel parse(const std::string& s);
  bool operator==(const PovmLabel&) const = default;
};

struct PovmElement {
  PovmLabel label;
  CMatrix op;
};

struct PovmPair {
  Index dim_in = 0;
  Index dim_out = 0;
  std::vector<PovmElement> first;   // (c) Pi_i Pi_psi_mu and pair combinations
  std::vector<PovmElement> second;  // (c) Pi_phi_nu Pi_k and pair combinations
};

// First set for state eigenvectors psi_mu and reference projectors Pi_i:
//   (1/sqrt d) Pi_i Pi_psi, (1/sqrt 2d)(Pi_i + Pi_j) Pi_psi, (1/sqrt 2d)(Pi_i + i Pi_j) Pi_psi;
// the second set mirrors it on the output side. Completeness is checked.
PovmPair build_povms(const TransitionBasis& basis);

struct TwoPointDistribution {
  std::vector<PovmLabel> first;
  std::vector<PovmLabel> second;
  Eigen::MatrixXd prob;  // prob(m, m')
};

// Tr[M'_{m'} N(M_m rho M_m^dagger) M'_{m'}^dagger]
TwoPointDistribution two_point_distribution(const KrausChannel& ch, const DensityOperator& rho,
                                            const PovmPair& povms);
// Tr[M_m^dagger R(M'_{m'}^dagger N(rho) M'_{m'}) M_m]
TwoPointDistribution backward_two_point_distribution(const KrausChannel& recovery,
                                                     const DensityOperator& final_state,
                                                     const PovmPair& povms);

TpmQuasiProb reconstruct_quasiprob(const TwoPointDistribution& dist, const TransitionBasis& basis);

void write_csv(std::ostream& os, const TwoPointDistribution& dist);
TwoPointDistribution read_csv(std::istream& in);

}  // namespace qfluct
