#include "setup.hpp"

#include <cmath>

namespace qfluct::cli {

namespace {

CMatrix ladder_hamiltonian(Index d, double omega0) {
  CMatrix h = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) h(k, k) = omega0 * static_cast<double>(k);
  return h;
}

DensityOperator make_state(const std::string& name, Index d, const CMatrix& h, double beta) {
  if (name == "half_mixed_plus") {
    if (d != 2) throw Error(ErrorKind::InvalidArgument, "half_mixed_plus needs a qubit");
    return half_mixed_plus_state();
  }
  if (name == "maximally_mixed") return DensityOperator::maximally_mixed(d);
  if (name == "gibbs") return DensityOperator::gibbs(h, beta);
  if (name == "plus" || name == "ground" || name == "excited") return DensityOperator::pure(named_vector(name, d));
  throw Error(ErrorKind::InvalidArgument, "unknown state '" + name + "'");
}

}  // namespace

CVector named_vector(const std::string& name, Index dim) {
  CVector v = CVector::Zero(dim);
  if (name == "plus") {
    v.setOnes();
  } else if (name == "minus") {
    for (Index k = 0; k < dim; ++k) v(k) = k % 2 == 0 ? 1.0 : -1.0;
  } else if (name == "ground") {
    v(kGround) = 1.0;
  } else if (name == "excited") {
    v(kExcited) = 1.0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown vector '" + name + "'");
  }
  return v / v.norm();
}

Setup load_setup(const KeyValueConfig& cfg) {
  Setup s{cfg.get_string("model", "jc"), std::nullopt, {}, DensityOperator::maximally_mixed(1),
          DensityOperator::maximally_mixed(1), CMatrix(), 1.0, 1.0};
  const std::string state = cfg.get_string("state", "half_mixed_plus");
  if (s.model == "jc") {
    JcConfig jc = JcConfig::from(cfg);
    if (cfg.get_bool("tau_refine", false)) jc.tau = find_return_time(jc, jc.tau);
    s.beta = jc.beta;
    s.omega0 = jc.omega0;
    s.channel = jc_any_channel(jc);
    s.reference = atom_gibbs(jc);
    s.h_system = atom_hamiltonian(jc);
    s.rho = make_state(state, 2, s.h_system, s.beta);
    s.jc = jc;
    return s;
  }
  const int d = cfg.get_int("dim", 2);
  if (d < 1) throw Error(ErrorKind::InvalidArgument, cfg.source() + ": dim must be positive");
  s.beta = cfg.get_double("beta", 1.0);
  s.omega0 = cfg.get_double("omega0", 1.0);
  s.h_system = ladder_hamiltonian(d, s.omega0);
  if (s.model == "identity") {
    s.channel = identity_channel(d);
  } else if (s.model == "depolarizing") {
    s.channel = depolarizing_channel(d, cfg.get_double("p", 0.5));
  } else {
    throw Error(ErrorKind::InvalidArgument,
                cfg.source() + ": model must be jc, identity or depolarizing, got '" + s.model + "'");
  }
  s.reference = DensityOperator::gibbs(s.h_system, s.beta);
  s.rho = make_state(state, d, s.h_system, s.beta);
  return s;
}

GeneratorSetup load_generator(const KeyValueConfig& cfg) {
  const std::string kind = cfg.get_string("generator", "driven_qubit");
  const double tau = cfg.get_double("tau", 2.0);
  const double dt = cfg.get_double("dt", 1e-3);
  if (kind == "driven_qubit") {
    CMatrix sx(2, 2), sm = CMatrix::Zero(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    sm(0, 1) = std::sqrt(cfg.get_double("decay", 0.1));
    const std::vector<double> p = cfg.get_doubles("gamma0", {0.7, 0.3});
    if (p.size() != 2) throw Error(ErrorKind::InvalidArgument, cfg.source() + ": gamma0 needs two values");
    RVector diag(2);
    diag << p[0], p[1];
    return {LindbladGenerator(cfg.get_double("drive", 1.0) * sx, {sm}), DensityOperator::diagonal(diag), tau, dt};
  }
  if (kind == "jc_noise") {
    const JcConfig jc = JcConfig::from(cfg);
    return {noise_lindbladian(jc), DensityOperator(tensor(atom_gibbs(jc).matrix(), field_bath(jc).matrix())),
            tau, dt};
  }
  throw Error(ErrorKind::InvalidArgument, cfg.source() + ": generator must be driven_qubit or jc_noise");
}

std::vector<double> pick_thetas(const std::vector<double>& flags, const KeyValueConfig& cfg,
                                const std::vector<double>& fallback) {
  if (!flags.empty()) return flags;
  return cfg.get_doubles("thetas", fallback);
}

}  // namespace qfluct::cli
