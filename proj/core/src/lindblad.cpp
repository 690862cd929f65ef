#include "qfluct/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qfluct {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Triplets of c (B^T (x) A), the column-stacked form of X -> c A X B.
void add_sandwich(std::vector<Triplet>& out, const CMatrix& a, const CMatrix& b, cplx c) {
  const Index d = a.rows();
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      if (b(j, i) == cplx(0.0)) continue;
      for (Index s = 0; s < d; ++s)
        for (Index r = 0; r < d; ++r) {
          if (a(r, s) == cplx(0.0)) continue;
          out.emplace_back(i * d + r, j * d + s, c * b(j, i) * a(r, s));
        }
    }
}

}  // namespace

LindbladGenerator::LindbladGenerator(CMatrix hamiltonian, std::vector<CMatrix> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  if (h_.rows() != h_.cols()) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian not square");
  if (hermitian_defect(h_) > tol::hermitian) {
    throw Error(ErrorKind::NotHermitian, "Lindblad Hamiltonian is not Hermitian");
  }
  h_ = hermitian_part(h_);
  const Index d = dim();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix damping = CMatrix::Zero(d, d);
  std::vector<Triplet> t;
  for (const auto& l : jumps_) {
    if (l.rows() != d || l.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "jump operator dimension mismatch");
    }
    damping += l.adjoint() * l;
    add_sandwich(t, l, l.adjoint(), 1.0);
  }
  damping = hermitian_part(damping);
  add_sandwich(t, h_, id, cplx(0.0, -1.0));
  add_sandwich(t, id, h_, cplx(0.0, 1.0));
  add_sandwich(t, damping, id, -0.5);
  add_sandwich(t, id, damping, -0.5);
  super_.resize(d * d, d * d);
  super_.setFromTriplets(t.begin(), t.end());
  super_.prune(cplx(0.0), 0.0);
}

CMatrix LindbladGenerator::apply(const CMatrix& rho) const {
  const Index d = dim();
  if (rho.rows() != d || rho.cols() != d) throw Error(ErrorKind::DimensionMismatch, "operator/generator mismatch");
  const CVector v = super_ * rho.reshaped();
  return v.reshaped(d, d);
}

namespace {

template <class Rhs>
CMatrix rk4_step(const CMatrix& x, double h, Rhs rhs) {
  const CMatrix k1 = rhs(0, x);
  const CMatrix k2 = rhs(1, CMatrix(x + 0.5 * h * k1));
  const CMatrix k3 = rhs(1, CMatrix(x + 0.5 * h * k2));
  const CMatrix k4 = rhs(2, CMatrix(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Index step_count(double tau, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidArgument, "duration must be non-negative");
  return static_cast<Index>(std::ceil(tau / dt - 1e-9));
}

CMatrix project_state(const CMatrix& x) {
  CMatrix y = hermitian_part(x);
  const double tr = y.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "trace drifted to " << tr << " within one step";
    throw Error(ErrorKind::StepTooLarge, os.str());
  }
  return y / tr;
}

void check_positive(const CMatrix& x, double t) {
  const auto s = herm_eig(x);
  const double lmin = s.values(s.dim() - 1);
  if (lmin < -1e-6) {
    std::ostringstream os;
    os << "eigenvalue " << lmin << " at t = " << t;
    throw Error(ErrorKind::StepTooLarge, os.str());
  }
}

}  // namespace

Trajectory evolve(const LindbladGenerator& gen, const DensityOperator& rho0, double tau,
                  double dt, int store_every) {
  if (rho0.dim() != gen.dim()) throw Error(ErrorKind::DimensionMismatch, "state/generator mismatch");
  if (store_every < 1) throw Error(ErrorKind::InvalidArgument, "store_every must be >= 1");
  const Index n = step_count(tau, dt);
  const double h = n > 0 ? tau / static_cast<double>(n) : 0.0;
  Trajectory traj;
  CMatrix x = rho0.matrix();
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  const auto rhs = [&gen](int, const CMatrix& y) { return gen.apply(y); };
  for (Index s = 1; s <= n; ++s) {
    x = project_state(rk4_step(x, h, rhs));
    if (s % store_every == 0 || s == n) {
      const double t = h * static_cast<double>(s);
      check_positive(x, t);
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

CMatrix propagate(const LindbladGenerator& gen, const CMatrix& x0, double tau, double dt) {
  if (x0.rows() != gen.dim() || x0.cols() != gen.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operator/generator mismatch");
  }
  const Index n = step_count(tau, dt);
  const double h = n > 0 ? tau / static_cast<double>(n) : 0.0;
  const SparseCMatrix& sup = gen.sparse_superoperator();
  CVector x = x0.reshaped();
  CVector k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
  for (Index s = 0; s < n; ++s) {
    k1.noalias() = sup * x;
    k2.noalias() = sup * (x + 0.5 * h * k1);
    k3.noalias() = sup * (x + 0.5 * h * k2);
    k4.noalias() = sup * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x.reshaped(gen.dim(), gen.dim());
}

CMatrix sqrt_derivative(const SpectralDecomposition& gamma, const CMatrix& dgamma_dt) {
  const CMatrix& v = gamma.vectors;
  CMatrix y = v.adjoint() * dgamma_dt * v;
  for (Index a = 0; a < y.rows(); ++a)
    for (Index b = 0; b < y.cols(); ++b) {
      // (sqrt(a) - sqrt(b)) / (a - b), which tends to 1 / (2 sqrt(a)) on degenerate pairs.
      y(a, b) /= std::sqrt(gamma.values(a)) + std::sqrt(gamma.values(b));
    }
  return v * y * v.adjoint();
}

LindbladGenerator reverse_generator(const LindbladGenerator& gen, const CMatrix& gamma_t,
                                    const CMatrix& dgamma_dt) {
  const auto s = herm_eig(gamma_t);
  if (s.rank() < s.dim() || s.values(s.dim() - 1) <= 0.0) {
    throw Error(ErrorKind::SupportViolation, "instantaneous reference lost full rank");
  }
  const CMatrix g = mat_pow(s, 0.5);
  const CMatrix g_inv = mat_pow(s, -0.5);
  const CMatrix g_dot = sqrt_derivative(s, hermitian_part(dgamma_dt));
  CMatrix damping = CMatrix::Zero(gen.dim(), gen.dim());
  std::vector<CMatrix> jumps;
  for (const auto& l : gen.jumps()) {
    jumps.push_back(g * l.adjoint() * g_inv);
    damping += l.adjoint() * l;
  }
  const CMatrix a = g * gen.hamiltonian() * g_inv + I_UNIT * g_dot * g_inv +
                    0.5 * I_UNIT * g * damping * g_inv;
  CMatrix h = -0.5 * (a + a.adjoint());
  return LindbladGenerator(std::move(h), std::move(jumps));
}

ReverseCheck reverse_recovery_check(const LindbladGenerator& gen, const DensityOperator& gamma0,
                                    double tau, double dt) {
  if (gamma0.dim() != gen.dim()) throw Error(ErrorKind::DimensionMismatch, "state/generator mismatch");
  const Index n = step_count(tau, dt);
  const double h = n > 0 ? tau / static_cast<double>(n) : 0.0;
  const Index seg = std::max<Index>(1, static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const Index sample = std::max<Index>(1, n / 1000);
  const auto fwd = [&gen](int, const CMatrix& y) { return gen.apply(y); };

  // Checkpoints every `seg` full steps; forward states are integrated at half steps so that
  // the reverse RK4 stages see the reference at t, t - h/2 and t - h.
  std::vector<CMatrix> checkpoints;
  CMatrix x = gamma0.matrix();
  checkpoints.push_back(x);
  for (Index s = 1; s <= n; ++s) {
    x = project_state(rk4_step(x, h / 2.0, fwd));
    x = project_state(rk4_step(x, h / 2.0, fwd));
    if (s % seg == 0 && s < n) checkpoints.push_back(x);
  }
  const CMatrix gamma_tau = x;

  ReverseCheck rc;
  CMatrix y = gamma_tau;
  rc.reversed.times.push_back(0.0);
  rc.reversed.states.push_back(y);
  for (Index c = static_cast<Index>(checkpoints.size()) - 1; c >= 0; --c) {
    const Index first = c * seg;
    const Index last = std::min(n, first + seg);
    std::vector<CMatrix> half;
    half.reserve(static_cast<std::size_t>(2 * (last - first) + 1));
    half.push_back(checkpoints[static_cast<std::size_t>(c)]);
    for (Index q = 0; q < 2 * (last - first); ++q) {
      half.push_back(project_state(rk4_step(half.back(), h / 2.0, fwd)));
    }
    for (Index m = last - first; m >= 1; --m) {
      const std::size_t hi = static_cast<std::size_t>(2 * m);
      const LindbladGenerator r0 = reverse_generator(gen, half[hi], gen.apply(half[hi]));
      const LindbladGenerator r1 = reverse_generator(gen, half[hi - 1], gen.apply(half[hi - 1]));
      const LindbladGenerator r2 = reverse_generator(gen, half[hi - 2], gen.apply(half[hi - 2]));
      const auto rev = [&](int stage, const CMatrix& z) {
        return stage == 0 ? r0.apply(z) : (stage == 1 ? r1.apply(z) : r2.apply(z));
      };
      y = project_state(rk4_step(y, h, rev));
      const double err = max_abs(y - half[hi - 2]);
      rc.max_error = std::max(rc.max_error, err);
      const Index done = n - (first + m - 1);
      if (done % sample == 0 || done == n) {
        rc.reversed.times.push_back(h * static_cast<double>(done));
        rc.reversed.states.push_back(y);
      }
      if (done == n) rc.final_error = err;
    }
  }
  return rc;
}

double infinitesimal_petz_error(const LindbladGenerator& gen, const DensityOperator& gamma,
                                double dt) {
  const Index d = gen.dim();
  CMatrix damping = CMatrix::Zero(d, d);
  for (const auto& l : gen.jumps()) damping += l.adjoint() * l;
  std::vector<CMatrix> kraus;
  kraus.push_back(CMatrix::Identity(d, d) - (I_UNIT * gen.hamiltonian() + 0.5 * damping) * dt);
  for (const auto& l : gen.jumps()) kraus.push_back(std::sqrt(dt) * l);
  const KrausChannel step(std::move(kraus), Validation::Skip);

  const auto& gs = gamma.spectrum();
  const CMatrix out = apply_channel(step, gamma.matrix());
  const auto os = herm_eig(hermitian_part(out));
  const CMatrix left = mat_pow(gs, 0.5);
  const CMatrix right = mat_pow(os, -0.5);
  std::vector<CMatrix> rk;
  for (const auto& k : step.kraus()) rk.push_back(left * k.adjoint() * right);
  const CMatrix petz_choi = choi(KrausChannel(std::move(rk), Validation::Skip));

  const LindbladGenerator rev = reverse_generator(gen, gamma.matrix(), gen.apply(gamma.matrix()));
  CMatrix gen_choi = CMatrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      CMatrix e = CMatrix::Zero(d, d);
      e(a, b) = 1.0;
      gen_choi.block(a * d, b * d, d, d) = e + dt * rev.apply(e);
    }
  return max_abs(petz_choi - gen_choi);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  const Index d = traj.states.empty() ? 0 : traj.states.front().rows();
  os << 't';
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) os << ",re_" << a << '_' << b << ",im_" << a << '_' << b;
  os << '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    os << traj.times[s];
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) {
        const cplx z = traj.states[s](a, b);
        os << ',' << z.real() << ',' << z.imag();
      }
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace qfluct
