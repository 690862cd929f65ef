#include "qfluct/models.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <sstream>

namespace qfluct {

const char* to_string(BathKind kind) {
  return kind == BathKind::Thermal ? "thermal" : "coherent_gibbs";
}

void JcConfig::validate() const {
  const bool finite = std::isfinite(beta) && std::isfinite(omega0) && std::isfinite(g) &&
                      std::isfinite(gamma_noise) && std::isfinite(tau) && std::isfinite(dt);
  if (!finite) throw Error(ErrorKind::InvalidArgument, "JC parameters must be finite");
  if (!(beta > 0.0) || !(omega0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta and omega0 must be positive");
  }
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
  if (gamma_noise < 0.0 || tau < 0.0 || !(dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gamma_noise, tau must be >= 0 and dt > 0");
  }
  const double tail = std::exp(-beta * omega0 * (n_max + 1));
  if (tail >= 1e-12) {
    std::ostringstream os;
    os << "thermal weight beyond n_max = " << n_max << " is " << tail;
    throw Error(ErrorKind::TruncationInsufficient, os.str());
  }
}

JcConfig JcConfig::from(const KeyValueConfig& kv) {
  JcConfig c;
  c.beta = kv.get_double("beta", c.beta);
  c.omega0 = kv.get_double("omega0", c.omega0);
  c.g = kv.get_double("g", c.g);
  c.n_max = kv.get_int("n_max", c.n_max);
  c.gamma_noise = kv.get_double("gamma_noise", c.gamma_noise);
  c.tau = kv.get_double("tau", c.tau);
  c.dt = kv.get_double("dt", c.dt);
  const std::string bath = kv.get_string("bath", "thermal");
  if (bath == "thermal") {
    c.bath = BathKind::Thermal;
  } else if (bath == "coherent_gibbs") {
    c.bath = BathKind::CoherentGibbs;
  } else {
    throw Error(ErrorKind::InvalidArgument,
                kv.source() + ": bath must be 'thermal' or 'coherent_gibbs', got '" + bath + "'");
  }
  c.validate();
  return c;
}

CMatrix atom_hamiltonian(const JcConfig& cfg) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(kGround, kGround) = -cfg.omega0 / 2.0;
  h(kExcited, kExcited) = cfg.omega0 / 2.0;
  return h;
}

CMatrix field_hamiltonian(const JcConfig& cfg) {
  const Index nf = cfg.field_dim();
  CMatrix h = CMatrix::Zero(nf, nf);
  for (Index n = 0; n < nf; ++n) h(n, n) = cfg.omega0 * static_cast<double>(n);
  return h;
}

namespace {

CMatrix annihilation(Index nf) {
  CMatrix a = CMatrix::Zero(nf, nf);
  for (Index n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix ladder(Index to, Index from) {
  CMatrix s = CMatrix::Zero(2, 2);
  s(to, from) = 1.0;
  return s;
}

}  // namespace

CMatrix jc_hamiltonian(const JcConfig& cfg) {
  const Index nf = cfg.field_dim();
  const CMatrix a = annihilation(nf);
  const CMatrix sigma_plus = 2.0 * ladder(kExcited, kGround);
  const CMatrix sigma_minus = sigma_plus.adjoint();
  CMatrix h = tensor(atom_hamiltonian(cfg), CMatrix::Identity(nf, nf)) +
              tensor(CMatrix::Identity(2, 2), field_hamiltonian(cfg));
  h += cfg.g * (tensor(sigma_plus, a) + tensor(sigma_minus, CMatrix(a.adjoint())));
  return h;
}

DensityOperator atom_gibbs(const JcConfig& cfg) {
  return DensityOperator::gibbs(atom_hamiltonian(cfg), cfg.beta);
}

CVector coherent_gibbs_vector(const JcConfig& cfg) {
  const Index nf = cfg.field_dim();
  CVector v(nf);
  for (Index n = 0; n < nf; ++n) v(n) = std::exp(-0.5 * cfg.beta * cfg.omega0 * static_cast<double>(n));
  return v / v.norm();
}

DensityOperator field_bath(const JcConfig& cfg) {
  if (cfg.bath == BathKind::CoherentGibbs) return DensityOperator::pure(coherent_gibbs_vector(cfg));
  return DensityOperator::gibbs(field_hamiltonian(cfg), cfg.beta);
}

KrausChannel jc_channel(const JcConfig& cfg) {
  cfg.validate();
  const CMatrix u = expm_hermitian(jc_hamiltonian(cfg), cplx(0.0, -cfg.tau));
  const KrausChannel ch = compress(dilation_channel(u, 2, field_bath(cfg)));
  if (cfg.bath == BathKind::Thermal) {
    const DensityOperator ga = atom_gibbs(cfg);
    const double drift = max_abs(apply_channel(ch, ga.matrix()) - ga.matrix());
    if (drift > 1e-8) {
      std::ostringstream os;
      os << "thermal JC channel moves gamma_a by " << drift;
      throw Error(ErrorKind::TruncationInsufficient, os.str());
    }
  }
  return ch;
}

LindbladGenerator noise_lindbladian(const JcConfig& cfg) {
  const Index nf = cfg.field_dim();
  const CMatrix id = CMatrix::Identity(nf, nf);
  std::vector<CMatrix> jumps;
  if (cfg.gamma_noise > 0.0) {
    const double emit = cfg.gamma_noise;
    const double absorb = cfg.gamma_noise * std::exp(-cfg.beta * cfg.omega0);
    jumps.push_back(std::sqrt(emit) * tensor(ladder(kGround, kExcited), id));
    jumps.push_back(std::sqrt(absorb) * tensor(ladder(kExcited, kGround), id));
  }
  return LindbladGenerator(jc_hamiltonian(cfg), std::move(jumps));
}

KrausChannel jc_noisy_channel(const JcConfig& cfg) {
  cfg.validate();
  const LindbladGenerator gen = noise_lindbladian(cfg);
  const CMatrix bath = field_bath(cfg).matrix();
  const std::vector<Index> dims{2, cfg.field_dim()};
  CMatrix j = CMatrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a)
    for (Index b = a; b < 2; ++b) {
      const CMatrix x0 = tensor(ladder(a, b), bath);
      const CMatrix out = partial_trace(propagate(gen, x0, cfg.tau, cfg.dt), dims, {0});
      j.block(a * 2, b * 2, 2, 2) = out;
      if (b != a) j.block(b * 2, a * 2, 2, 2) = out.adjoint();
    }
  return from_choi(j, 2, 2, 1e-6);
}

KrausChannel jc_any_channel(const JcConfig& cfg) {
  return cfg.gamma_noise > 0.0 ? jc_noisy_channel(cfg) : jc_channel(cfg);
}

namespace {

struct ReturnProblem {
  SpectralDecomposition h;
  CMatrix initial;  // gamma_a (x) bath
  CMatrix target;
  Index nf;

  double operator()(double tau) const {
    CVector ph(h.dim());
    for (Index k = 0; k < h.dim(); ++k) ph(k) = std::exp(cplx(0.0, -tau * h.values(k)));
    const CMatrix u = h.vectors * ph.asDiagonal() * h.vectors.adjoint();
    const CMatrix out = partial_trace(u * initial * u.adjoint(), {2, nf}, {0});
    return (out - target).norm();
  }
};

ReturnProblem return_problem(const JcConfig& cfg) {
  const DensityOperator ga = atom_gibbs(cfg);
  return {herm_eig(jc_hamiltonian(cfg)), tensor(ga.matrix(), field_bath(cfg).matrix()),
          ga.matrix(), cfg.field_dim()};
}

}  // namespace

double return_residual(const JcConfig& cfg, double tau) {
  cfg.validate();
  return return_problem(cfg)(tau);
}

double find_return_time(const JcConfig& cfg, double seed, double half_width) {
  cfg.validate();
  if (!(half_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "half_width must be positive");
  const ReturnProblem p = return_problem(cfg);
  const auto r = boost::math::tools::brent_find_minima(p, std::max(0.0, seed - half_width),
                                                       seed + half_width, 50);
  return r.first;
}

DensityOperator half_mixed_plus_state() {
  CVector psi(2);
  psi << 1.0, 1.0;
  psi /= std::sqrt(2.0);
  const CMatrix m = 0.5 * psi * psi.adjoint() + 0.25 * CMatrix::Identity(2, 2);
  return DensityOperator(m);
}

KrausChannel thermodynamic_channel(const CMatrix& u, const DensityOperator& gamma_b,
                                   const CMatrix& h_s, const CMatrix& h_s_final,
                                   const CMatrix& h_b, const CMatrix& h_b_final, double beta) {
  const Index ds = h_s.rows(), db = h_b.rows();
  if (h_s_final.rows() != ds || h_b_final.rows() != db || gamma_b.dim() != db ||
      u.rows() != ds * db || u.cols() != ds * db) {
    throw Error(ErrorKind::DimensionMismatch, "thermodynamic channel dimensions disagree");
  }
  const CMatrix h0 = tensor(h_s, CMatrix::Identity(db, db)) + tensor(CMatrix::Identity(ds, ds), h_b);
  const CMatrix h1 =
      tensor(h_s_final, CMatrix::Identity(db, db)) + tensor(CMatrix::Identity(ds, ds), h_b_final);
  const double defect = max_abs(u * h0 * u.adjoint() - h1);
  if (defect > 1e-8) {
    std::ostringstream os;
    os << "U H U^dagger differs from H' by " << defect;
    throw Error(ErrorKind::EnergyConservationViolated, os.str());
  }
  if (max_abs(gamma_b.matrix() - DensityOperator::gibbs(h_b, beta).matrix()) > 1e-8) {
    throw Error(ErrorKind::InvalidArgument, "bath state is not the Gibbs state of H_B");
  }
  KrausChannel ch = compress(dilation_channel(u, ds, gamma_b));
  const double drift = max_abs(apply_channel(ch, DensityOperator::gibbs(h_s, beta).matrix()) -
                               DensityOperator::gibbs(h_s_final, beta).matrix());
  if (drift > 1e-8) {
    std::ostringstream os;
    os << "Gibbs state mapped with error " << drift;
    throw Error(ErrorKind::EnergyConservationViolated, os.str());
  }
  return ch;
}

KrausChannel locc_channel(const LoccProtocol& p) {
  if (p.alice.size() != p.bob.size() || p.bob.empty()) {
    throw Error(ErrorKind::InvalidArgument, "LOCC protocol needs one V_m per K_m");
  }
  CMatrix povm = CMatrix::Zero(p.dim_b, p.dim_b);
  for (std::size_t m = 0; m < p.bob.size(); ++m) {
    if (p.bob[m].rows() != p.dim_b || p.bob[m].cols() != p.dim_b || p.alice[m].rows() != p.dim_a ||
        p.alice[m].cols() != p.dim_a) {
      throw Error(ErrorKind::DimensionMismatch, "LOCC operator dimension mismatch");
    }
    if (max_abs(p.alice[m].adjoint() * p.alice[m] - CMatrix::Identity(p.dim_a, p.dim_a)) > 1e-8) {
      throw Error(ErrorKind::InvalidArgument, "Alice's correction is not unitary");
    }
    povm += p.bob[m].adjoint() * p.bob[m];
  }
  const double defect = max_abs(povm - CMatrix::Identity(p.dim_b, p.dim_b));
  if (defect > 1e-8) {
    std::ostringstream os;
    os << "sum K_m^dagger K_m deviates from identity by " << defect;
    throw Error(ErrorKind::NotPovm, os.str());
  }
  const Index n = p.outcomes();
  std::vector<CMatrix> kraus;
  for (Index m = 0; m < n; ++m) {
    CMatrix reg = CMatrix::Zero(n, 1);
    reg(m, 0) = 1.0;
    kraus.push_back(tensor(tensor(p.alice[static_cast<std::size_t>(m)], p.bob[static_cast<std::size_t>(m)]), reg));
  }
  return KrausChannel(std::move(kraus));
}

LoccProtocol measure_b_protocol(Index dim_a, Index dim_b) {
  LoccProtocol p;
  p.dim_a = dim_a;
  p.dim_b = dim_b;
  for (Index m = 0; m < dim_b; ++m) {
    CMatrix k = CMatrix::Zero(dim_b, dim_b);
    k(m, m) = 1.0;
    p.bob.push_back(k);
    p.alice.push_back(CMatrix::Identity(dim_a, dim_a));
  }
  return p;
}

}  // namespace qfluct
