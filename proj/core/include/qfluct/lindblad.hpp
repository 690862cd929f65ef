#pragma once

#include "qfluct/channels.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

namespace qfluct {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

// L(rho) = -i[H, rho] + sum_n (L_n rho L_n^dagger - 1/2 {L_n^dagger L_n, rho})
class LindbladGenerator {
 public:
  LindbladGenerator(CMatrix hamiltonian, std::vector<CMatrix> jumps);

  Index dim() const { return h_.rows(); }
  const CMatrix& hamiltonian() const { return h_; }
  const std::vector<CMatrix>& jumps() const { return jumps_; }

  CMatrix apply(const CMatrix& rho) const;
  // Column-stacking superoperator, dim^2 x dim^2.
  CMatrix superoperator() const { return CMatrix(super_); }
  const SparseCMatrix& sparse_superoperator() const { return super_; }

 private:
  CMatrix h_;
  std::vector<CMatrix> jumps_;
  SparseCMatrix super_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
};

// Fixed-step RK4; each step is re-Hermitized and renormalized. Every `store_every`-th state is
// kept (the final state always is).
Trajectory evolve(const LindbladGenerator& gen, const DensityOperator& rho0, double tau,
                  double dt, int store_every = 1);

// Plain RK4 on an arbitrary operator (no projection), e.g. |i><j| (x) bath.
CMatrix propagate(const LindbladGenerator& gen, const CMatrix& x0, double tau, double dt);

// Generator of the reversed process for the instantaneous reference gamma_t:
// L~_n = G L_n^dagger G^{-1},
// H~ = -1/2 (G H G^{-1} + i dG G^{-1} + i/2 sum_n G L_n^dagger L_n G^{-1}) + h.c.,
// with G = gamma_t^{1/2} and dG its time derivative.
LindbladGenerator reverse_generator(const LindbladGenerator& gen, const CMatrix& gamma_t,
                                    const CMatrix& dgamma_dt);

// d/dt gamma^{1/2} from d/dt gamma (divided differences of sqrt in the eigenbasis).
CMatrix sqrt_derivative(const SpectralDecomposition& gamma, const CMatrix& dgamma_dt);

struct ReverseCheck {
  double max_error = 0.0;    // max_t || reversed(t~) - gamma(tau - t~) ||_max
  double final_error = 0.0;  // at t~ = tau
  Trajectory reversed;       // sampled on the forward checkpoints, in reverse time
};

// Evolves gamma0 forward to tau, then runs the reverse generator from gamma_tau and compares
// with the forward trajectory. Memory is bounded by checkpointing.
ReverseCheck reverse_recovery_check(const LindbladGenerator& gen, const DensityOperator& gamma0,
                                    double tau, double dt);

// Choi max-norm distance between X + dt L~(X) and the Petz recovery of the one-step channel
// {1 - (iH + 1/2 sum L^dagger L) dt, sqrt(dt) L_n} for the reference gamma.
double infinitesimal_petz_error(const LindbladGenerator& gen, const DensityOperator& gamma,
                                double dt);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace qfluct
