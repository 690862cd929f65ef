#include "setup.hpp"

#include "qfluct/bounds.hpp"
#include "qfluct/povm.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

using namespace qfluct;
using namespace qfluct::cli;

namespace {

struct Context {
  KeyValueConfig cfg;
  std::string config_path;
  std::ostream* out = &std::cout;
  std::vector<double> thetas;
  bool quiet = false;
  std::vector<std::string> violations;

  void note(const std::string& msg) const {
    if (!quiet) std::clog << msg << '\n';
  }
  void violate(const std::string& msg) { violations.push_back(msg); }
};

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void csv_header(std::ostream& os, std::initializer_list<const char*> cols) {
  bool first = true;
  for (const char* c : cols) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  os << '\n';
  os << std::setprecision(17);
}

void cmd_detailed_balance(Context& c) {
  if (c.cfg.get_string("model", "jc") != "jc") {
    throw Error(ErrorKind::InvalidArgument, "detailed-balance sweeps tau and needs model = jc");
  }
  JcConfig jc = JcConfig::from(c.cfg);
  const double t0 = c.cfg.get_double("tau_min", 0.5);
  const double t1 = c.cfg.get_double("tau_max", 30.0);
  const int n = c.cfg.get_int("tau_points", 60);
  if (n < 1 || t1 < t0) throw Error(ErrorKind::InvalidArgument, "invalid tau grid");
  const CVector psi = named_vector(c.cfg.get_string("psi", "plus"), 2);
  const CVector phi = named_vector(c.cfg.get_string("phi", "minus"), 2);
  const CMatrix h = atom_hamiltonian(jc);
  const double de = (phi.adjoint() * h * phi).value().real() - (psi.adjoint() * h * psi).value().real();
  const double ups = upsilon(h, jc.beta, psi, phi) * std::exp(-jc.beta * de);
  std::ostream& os = *c.out;
  csv_header(os, {"tau", "T_fwd", "T_bwd", "ratio", "upsilon_rhs"});
  for (int k = 0; k < n; ++k) {
    jc.tau = n == 1 ? t0 : t0 + (t1 - t0) * k / (n - 1);
    const RecoveryFamily fam(jc_any_channel(jc), atom_gibbs(jc));
    const DetailedBalance db = detailed_balance_ratio(fam, psi, phi);
    os << jc.tau << ',' << db.forward << ',' << db.backward << ',' << db.ratio << ',' << ups << '\n';
    if (std::abs(db.ratio - db.rhs) > 1e-6 * std::max(1.0, std::abs(db.rhs))) {
      c.violate("detailed balance ratio " + num(db.ratio) + " differs from " + num(db.rhs) + " at tau " + num(jc.tau));
    }
  }
  c.note("Upsilon e^{-beta dE} = " + num(ups));
}

void cmd_entropy_dist(Context& c) {
  const Setup s = load_setup(c.cfg);
  const RecoveryFamily fam = s.family();
  const double theta = pick_thetas(c.thetas, c.cfg, {0.0}).front();
  const EpDistribution fwd = ep_distribution(fam, s.rho);
  const EpDistribution bwd = backward_ep_distribution(fam, theta, s.rho);
  write_distribution_csv(*c.out, fwd, &bwd);
  const IntegralQft q = integral_qft(fam, s.rho, fwd, theta);
  if (q.deviation > 1e-7) c.violate("integral equality deviates by " + num(q.deviation));
  c.note(std::to_string(fwd.atoms().size()) + " atoms, <sigma_R> = " + num(fwd.mean_re().real()));
}

void cmd_crooks(Context& c) {
  const Setup s = load_setup(c.cfg);
  const RecoveryFamily fam = s.family();
  const EpDistribution fwd = ep_distribution(fam, s.rho);
  std::ostream& os = *c.out;
  csv_header(os, {"theta", "sigma_R", "sigma_I", "forward_re", "forward_im", "backward_re", "backward_im", "deviation"});
  for (double theta : pick_thetas(c.thetas, c.cfg, {0.0})) {
    const CrooksReport r = crooks_check(fwd, backward_ep_distribution(fam, theta, s.rho), theta, 1e-10);
    for (const auto& a : r.checked) {
      os << theta << ',' << a.sigma_re << ',' << a.sigma_im << ',' << a.forward.real() << ',' << a.forward.imag()
         << ',' << a.backward.real() << ',' << a.backward.imag() << ',' << a.deviation << '\n';
    }
    if (r.max_deviation > 1e-6) c.violate("Crooks relation deviates by " + num(r.max_deviation) + " at theta " + num(theta));
    c.note("theta " + num(theta) + ": " + std::to_string(r.checked.size()) + " atoms, max deviation " + num(r.max_deviation));
  }
}

void cmd_integral_qft(Context& c) {
  const Setup s = load_setup(c.cfg);
  const RecoveryFamily fam = s.family();
  const EpDistribution fwd = ep_distribution(fam, s.rho);
  std::ostream& os = *c.out;
  csv_header(os, {"theta", "lhs_re", "lhs_im", "kappa", "deviation"});
  for (double theta : pick_thetas(c.thetas, c.cfg, default_check_thetas())) {
    const IntegralQft q = integral_qft(fam, s.rho, fwd, theta);
    os << theta << ',' << q.lhs.real() << ',' << q.lhs.imag() << ',' << q.kappa << ',' << q.deviation << '\n';
    if (q.deviation > 1e-7) c.violate("integral equality deviates by " + num(q.deviation) + " at theta " + num(theta));
  }
}

void cmd_lindblad_reverse(Context& c) {
  const GeneratorSetup g = load_generator(c.cfg);
  const ReverseCheck rc = reverse_recovery_check(g.generator, g.gamma0, g.tau, g.dt);
  write_trajectory_csv(*c.out, rc.reversed);
  const double limit = std::max(10.0 * g.dt * g.dt, 1e-12);
  if (rc.max_error > limit) c.violate("reverse trajectory error " + num(rc.max_error) + " above " + num(limit));
  c.note("max error " + num(rc.max_error) + ", final error " + num(rc.final_error));
}

void cmd_povm(Context& c) {
  const Setup s = load_setup(c.cfg);
  const RecoveryFamily fam = s.family();
  const TransitionBasis basis = TransitionBasis::forward(s.rho, fam);
  TwoPointDistribution dist;
  if (c.cfg.has("input")) {
    std::ifstream in(c.cfg.get_string("input", ""));
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + c.cfg.get_string("input", ""));
    dist = read_csv(in);
  } else {
    dist = two_point_distribution(s.channel, s.rho, build_povms(basis));
  }
  write_csv(*c.out, dist);
  const TpmQuasiProb rebuilt = reconstruct_quasiprob(dist, basis);
  const TpmQuasiProb direct = tpm_quasiprob(s.channel, basis);
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.data().size(); ++k) worst = std::max(worst, std::abs(direct.data()[k] - rebuilt.data()[k]));
  if (worst > 1e-8) c.violate("reconstruction differs from the direct table by " + num(worst));
  c.note("max reconstruction error " + num(worst));
}

void cmd_covariance(Context& c) {
  const Setup s = load_setup(c.cfg);
  const bool expect = c.cfg.get_bool("expect_covariant", false);
  std::ostream& os = *c.out;
  csv_header(os, {"theta", "reference_defect", "generator_defect"});
  for (double theta : pick_thetas(c.thetas, c.cfg, {0.5, 1.0, 2.0})) {
    const double ref = covariance_defect(s.channel, s.reference, theta);
    const double gen = covariance_defect(s.channel, s.h_system, s.h_system, theta);
    os << theta << ',' << ref << ',' << gen << '\n';
    if (expect && std::max(ref, gen) > 1e-7) c.violate("covariance defect " + num(std::max(ref, gen)) + " at " + num(theta));
  }
}

ReportOptions report_options(const Context& c) {
  ReportOptions opt;
  opt.thetas = pick_thetas(c.thetas, c.cfg, default_check_thetas());
  opt.fidelity_grid = c.cfg.get_doubles("fidelity_grid", default_fidelity_grid());
  return opt;
}

void emit_report(Context& c, const ResourceReport& r) {
  write_json(*c.out, r);
  for (const auto& v : r.violations) c.violate(v);
  c.note(r.kind + ": change " + num(r.resource_change) + ", <sigma_R> " + num(r.mean_sigma_R));
}

void cmd_free_energy(Context& c) {
  const Setup s = load_setup(c.cfg);
  emit_report(c, free_energy_ft(s.channel, s.rho, s.beta, s.h_system, s.h_system, report_options(c)));
}

void cmd_asymmetry(Context& c) {
  const Setup s = load_setup(c.cfg);
  emit_report(c, asymmetry_ft(s.channel, s.rho, s.h_system, report_options(c)));
}

void cmd_coherence_merge(Context& c) {
  const Setup s = load_setup(c.cfg);
  const Index d = s.rho.dim();
  std::ostream& os = *c.out;
  csv_header(os, {"k", "l", "lhs", "rhs", "holds"});
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      const MergingBound mb = coherence_merging_bound(s.channel, s.rho, s.reference, s.h_system, k, l);
      os << k << ',' << l << ',' << mb.lhs << ',' << mb.rhs << ',' << (mb.holds() ? 1 : 0) << '\n';
      if (!mb.holds()) c.violate("merging bound fails at (" + std::to_string(k) + ", " + std::to_string(l) + ")");
    }
}

void cmd_locc(Context& c) {
  const int da = c.cfg.get_int("dim_a", 2), db = c.cfg.get_int("dim_b", 2);
  if (da < 1 || db < 1) throw Error(ErrorKind::InvalidArgument, "dim_a and dim_b must be positive");
  const LoccProtocol protocol = measure_b_protocol(da, db);
  const std::string state = c.cfg.get_string("locc_state", "bell");
  CVector psi = CVector::Zero(da * db);
  for (Index k = 0; k < std::min(da, db); ++k) psi(k * db + k) = 1.0;
  psi /= psi.norm();
  const ReportOptions opt = report_options(c);
  if (state == "bell") {
    emit_report(c, locc_entanglement_ft(protocol, psi, opt));
  } else if (state == "werner") {
    const double v = c.cfg.get_double("visibility", 0.8);
    const Index n = da * db;
    const CMatrix m = v * psi * psi.adjoint() + (1.0 - v) * CMatrix::Identity(n, n) / static_cast<double>(n);
    emit_report(c, locc_coherent_info_ft(protocol, DensityOperator::normalized(m, 1e-10), opt));
  } else {
    throw Error(ErrorKind::InvalidArgument, "locc_state must be bell or werner");
  }
}

void cmd_symmetry(Context& c) {
  const Setup s = load_setup(c.cfg);
  const Index d = s.rho.dim();
  const CVector psi = named_vector(c.cfg.get_string("psi", "plus"), d);
  const CVector phi = named_vector(c.cfg.get_string("phi", "plus"), d);
  const double theta_max = c.cfg.get_double("theta_max", 4.0 * std::numbers::pi / (s.beta * s.omega0));
  const int n = c.cfg.get_int("theta_points", 256);
  const SymmetrySpectrum sp = symmetry_diagnostic(s.family(), psi, phi, theta_max, n);
  std::ostream& os = *c.out;
  csv_header(os, {"bin", "theta", "transition", "frequency", "amplitude"});
  for (std::size_t k = 0; k < sp.thetas.size(); ++k) {
    os << k << ',' << sp.thetas[k] << ',' << sp.transition[k] << ',' << sp.frequencies[k] << ',' << sp.amplitudes[k] << '\n';
  }
  std::ostringstream peaks;
  for (double p : sp.peaks) peaks << ' ' << p;
  c.note("peaks:" + peaks.str());
  if (!sp.matches) c.violate("spectral peaks do not match the sigma_I values of the transition");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum fluctuation theorem toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::vector<double> thetas;
  bool quiet = false;

  const std::map<std::string, std::pair<std::string, std::function<void(Context&)>>> commands{
      {"detailed-balance", {"forward/backward transition ratio over a tau grid", cmd_detailed_balance}},
      {"entropy-dist", {"forward and backward entropy production distribution", cmd_entropy_dist}},
      {"crooks-check", {"detailed Crooks relation atom by atom", cmd_crooks}},
      {"integral-qft", {"integral fluctuation equality against kappa", cmd_integral_qft}},
      {"lindblad-reverse", {"reverse generator trajectory recovery", cmd_lindblad_reverse}},
      {"povm-reconstruct", {"two-point POVM statistics and reconstruction", cmd_povm}},
      {"covariance", {"covariance defects of the channel", cmd_covariance}},
      {"free-energy", {"free energy fluctuation report", cmd_free_energy}},
      {"asymmetry", {"asymmetry fluctuation report", cmd_asymmetry}},
      {"coherence-merge", {"coherence merging bounds for every output pair", cmd_coherence_merge}},
      {"locc", {"entanglement fluctuation under one-way LOCC", cmd_locc}},
      {"symmetry-spectrum", {"Fourier spectrum of rotated transition probabilities", cmd_symmetry}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--theta", thetas, "theta value, repeatable")->take_all();
    sub->add_flag("--quiet", quiet, "suppress progress notes");
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string name;
  for (const auto& [n, sub] : subs) {
    if (sub->parsed()) name = n;
  }
  Context ctx;
  ctx.config_path = config_path;
  ctx.thetas = thetas;
  ctx.quiet = quiet;
  std::ofstream file;
  try {
    ctx.cfg = KeyValueConfig::load(config_path);
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + out_path);
      ctx.out = &file;
    }
    commands.at(name).second(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (!ctx.violations.empty()) {
    nlohmann::json report = {{"subcommand", name}, {"config", config_path}, {"violations", ctx.violations}};
    std::cerr << report.dump(2) << '\n';
    return 2;
  }
  return 0;
}
