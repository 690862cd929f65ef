// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qfluct/bounds.hpp"
#include "qfluct/lindblad.hpp"
#include "qfluct/models.hpp"
#include "qfluct/povm.hpp"
#include "qfluct/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qfluct;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %s: %s; runtime %.1f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, time_limit_s, in_time ? "" : " EXCEEDED");
  std::fflush(stdout);
}

std::string str(const char* label, double v) {
  std::ostringstream os;
  os.precision(6);
  os << label << " " << v;
  return os.str();
}

CVector basis_plus(double sign) {
  CVector v(2);
  v << 1.0, sign;
  return v / std::sqrt(2.0);
}

JcConfig jc_config(BathKind bath) {
  JcConfig cfg;
  cfg.beta = 1.0;
  cfg.omega0 = 1.0;
  cfg.g = 0.1;
  cfg.n_max = 40;
  cfg.tau = 18.66;
  cfg.bath = bath;
  return cfg;
}

// |log(P_fwd / (e^{sigma_R - 2 i theta sigma_I} P_bwd))| over atoms with |P_bwd| > 1e-10.
double crooks_log_deviation(const EpDistribution& fwd, const EpDistribution& bwd, double theta,
                            int& checked) {
  double worst = 0.0;
  for (const auto& a : fwd.atoms()) {
    const EpAtom* b = bwd.find(-a.sigma_re, a.sigma_im, 1e-8);
    if (b == nullptr || std::abs(b->weight) <= 1e-10) continue;
    const cplx predicted = std::exp(cplx(a.sigma_re, -2.0 * theta * a.sigma_im)) * b->weight;
    worst = std::max(worst, std::abs(std::log(a.weight / predicted)));
    ++checked;
  }
  return worst;
}

Outcome criterion1() {
  const double target = std::pow(std::cosh(0.5), 2);
  const CVector psi = basis_plus(1.0), phi = basis_plus(-1.0);
  double worst = 0.0;
  int count = 0;
  for (double g : {0.05, 0.1})
    for (double gamma : {0.0, 0.1})
      for (int t = 0; t < 20; ++t) {
        JcConfig cfg;
        cfg.g = g;
        cfg.gamma_noise = gamma;
        cfg.n_max = 28;
        cfg.dt = 2e-2;
        cfg.tau = 1.0 + 1.0 * t;
        const RecoveryFamily fam(jc_any_channel(cfg), atom_gibbs(cfg));
        const DetailedBalance db = detailed_balance_ratio(fam, psi, phi);
        worst = std::max(worst, std::abs(db.ratio - target));
        ++count;
      }
  return {worst < 1e-6, std::to_string(count) + " (g, Gamma, tau) points, " + str("max |ratio - cosh^2(1/2)| =", worst)};
}

Outcome criterion2() {
  const DensityOperator rho = half_mixed_plus_state();
  int checked = 0;
  const RecoveryFamily thermal(jc_channel(jc_config(BathKind::Thermal)), atom_gibbs(jc_config(BathKind::Thermal)));
  const EpDistribution f_th = ep_distribution(thermal, rho);
  const double dev_th = crooks_log_deviation(f_th, backward_ep_distribution(thermal, 0.0, rho), 0.0, checked);
  const int checked_th = checked;

  const JcConfig cc = jc_config(BathKind::CoherentGibbs);
  const RecoveryFamily coherent(jc_channel(cc), atom_gibbs(cc));
  const EpDistribution f_co = ep_distribution(coherent, rho);
  double dev_co = 0.0;
  for (double theta : {0.0, 0.7}) {
    dev_co = std::max(dev_co, crooks_log_deviation(f_co, backward_ep_distribution(coherent, theta, rho), theta, checked));
  }
  std::ostringstream os;
  os << "thermal: " << checked_th << " atoms, max dev " << dev_th << "; coherent (theta 0, 0.7): "
     << checked - checked_th << " atoms, max dev " << dev_co;
  return {dev_th < 1e-6 && dev_co < 1e-6 && checked_th > 0 && checked > checked_th, os.str()};
}

Outcome criterion3() {
  const DensityOperator rho = half_mixed_plus_state();
  const JcConfig cc = jc_config(BathKind::CoherentGibbs);
  const EpDistribution co = ep_distribution(RecoveryFamily(jc_channel(cc), atom_gibbs(cc)), rho);
  double most_negative = 0.0, im_off = 0.0;
  const double unit = cc.beta * cc.omega0;
  for (const auto& a : co.significant(1e-10)) {
    most_negative = std::min(most_negative, a.weight.real());
    double best = 1e300;
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) best = std::min(best, std::abs(a.sigma_im - s * unit));
    im_off = std::max(im_off, best);
  }
  const JcConfig tc = jc_config(BathKind::Thermal);
  const EpDistribution th = ep_distribution(RecoveryFamily(jc_channel(tc), atom_gibbs(tc)), rho);
  double min_thermal = 0.0, im_thermal = 0.0;
  for (const auto& a : th.atoms()) min_thermal = std::min(min_thermal, a.weight.real());
  for (const auto& a : th.significant(1e-10)) im_thermal = std::max(im_thermal, std::abs(a.sigma_im));
  std::ostringstream os;
  os << "coherent min weight " << most_negative << ", sigma_I off-lattice " << im_off
     << "; thermal min weight " << min_thermal << ", max |sigma_I| " << im_thermal;
  return {most_negative < -1e-4 && im_off < 1e-8 && min_thermal >= -1e-10 && im_thermal < 1e-8, os.str()};
}

Outcome criterion4() {
  Rng rng(20240601);
  std::uniform_int_distribution<int> dim(2, 4), kr(1, 4);
  double worst_qft = 0.0, min_mean = 1e300, worst_im = 0.0, worst_kappa_dev = 0.0, max_kappa = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Index din = dim(rng), dout = dim(rng);
    const RecoveryFamily fam(random_channel(din, dout, kr(rng), rng), random_full_rank_state(din, rng));
    const DensityOperator rho = random_full_rank_state(din, rng);
    const EpDistribution d = ep_distribution(fam, rho);
    for (double th : {0.0, 1.0, -2.5}) worst_qft = std::max(worst_qft, std::abs(d.exp_average(th) - 1.0));
    min_mean = std::min(min_mean, d.mean_re().real());
    worst_im = std::max(worst_im, std::abs(d.mean_im()));
  }
  for (int n = 0; n < 200; ++n) {
    const Index din = dim(rng), dout = dim(rng);
    const RecoveryFamily fam(random_channel(din, dout, kr(rng), rng), random_full_rank_state(din, rng));
    const DensityOperator rho = random_state(din, 1 + n % (din - 1), rng);
    const EpDistribution d = ep_distribution(fam, rho);
    for (double th : {0.0, 1.0, -2.5}) {
      const IntegralQft q = integral_qft(fam, rho, d, th);
      worst_kappa_dev = std::max(worst_kappa_dev, q.deviation);
      max_kappa = std::max(max_kappa, q.kappa);
    }
  }
  std::ostringstream os;
  os << "max |lhs - 1| " << worst_qft << ", min <sigma_R> " << min_mean << ", max |<sigma_I>| " << worst_im
     << "; rank-deficient: max |lhs - kappa| " << worst_kappa_dev << ", max kappa " << max_kappa;
  return {worst_qft < 1e-7 && min_mean >= -1e-9 && worst_im <= 1e-9 && worst_kappa_dev < 1e-7 &&
              max_kappa <= 1.0 + 1e-12,
          os.str()};
}

Outcome criterion5() {
  JcConfig cfg = jc_config(BathKind::Thermal);
  cfg.gamma_noise = 0.1;
  cfg.dt = 1e-3;
  const KrausChannel ch = jc_noisy_channel(cfg);
  const DensityOperator rho = half_mixed_plus_state();
  ReportOptions opt;
  opt.thetas = {0.0};
  const CMatrix h = atom_hamiltonian(cfg);
  const ResourceReport f = free_energy_ft(ch, rho, cfg.beta, h, h, opt);
  const ResourceReport c = asymmetry_ft(ch, rho, h, opt);
  const double qf = std::abs(f.lhs_by_theta[0] - 1.0), qc = std::abs(c.lhs_by_theta[0] - 1.0);
  const bool df_ok = std::abs(f.resource_change / -0.233 - 1.0) <= 0.05;
  const bool dc_ok = std::abs(c.resource_change / -0.115 - 1.0) <= 0.05;
  std::ostringstream os;
  os << "Delta F " << f.resource_change << " (target -0.233), Delta C " << c.resource_change
     << " (target -0.115), |QFT - 1| " << qf << ", " << qc;
  return {df_ok && dc_ok && qf < 1e-6 && qc < 1e-6, os.str()};
}

LindbladGenerator driven_qubit() {
  CMatrix sx(2, 2), sm = CMatrix::Zero(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sm(0, 1) = std::sqrt(0.1);
  return LindbladGenerator(sx, {sm});
}

Outcome criterion6() {
  const LindbladGenerator gen = driven_qubit();
  RVector p(2);
  p << 0.7, 0.3;
  const DensityOperator gamma0 = DensityOperator::diagonal(p);
  const ReverseCheck rc = reverse_recovery_check(gen, gamma0, 2.0, 1e-4);
  const double e1 = infinitesimal_petz_error(gen, gamma0, 1e-3);
  const double e2 = infinitesimal_petz_error(gen, gamma0, 5e-4);
  const double ratio = e1 / e2;
  std::ostringstream os;
  os << "trajectory error " << rc.max_error << " (tau 2, dt 1e-4); Petz error " << e1 << " -> " << e2
     << ", ratio " << ratio;
  return {rc.max_error < 1e-4 && ratio >= 3.5 && ratio <= 4.5, os.str()};
}

double povm_gap(const KrausChannel& ch, const DensityOperator& rho, const DensityOperator& gamma) {
  const RecoveryFamily fam(ch, gamma);
  const TransitionBasis basis = TransitionBasis::forward(rho, fam);
  const TpmQuasiProb direct = tpm_quasiprob(ch, basis);
  const TpmQuasiProb rebuilt = reconstruct_quasiprob(two_point_distribution(ch, rho, build_povms(basis)), basis);
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.data().size(); ++k) {
    worst = std::max(worst, std::abs(direct.data()[k] - rebuilt.data()[k]));
  }
  return worst;
}

Outcome criterion7() {
  const JcConfig cc = jc_config(BathKind::CoherentGibbs);
  const double jc = povm_gap(jc_channel(cc), half_mixed_plus_state(), atom_gibbs(cc));
  Rng rng(7);
  std::uniform_int_distribution<int> kr(1, 4);
  double worst = 0.0;
  for (Index d : {2, 3})
    for (int n = 0; n < 100; ++n) {
      worst = std::max(worst, povm_gap(random_channel(d, d, kr(rng), rng), random_full_rank_state(d, rng),
                                       random_full_rank_state(d, rng)));
    }
  std::ostringstream os;
  os << "JC coherent max entry error " << jc << ", 200 random channels max entry error " << worst;
  return {jc < 1e-8 && worst < 1e-8, os.str()};
}

Outcome criterion8() {
  Rng rng(88);
  std::uniform_int_distribution<int> dim(2, 3), kr(1, 3);
  ReportOptions opt;
  opt.fidelity_grid = {0.0};
  int violations = 0;
  double tightest = 1e300;
  for (int n = 0; n < 500; ++n) {
    const Index din = dim(rng), dout = dim(rng);
    const RecoveryFamily fam(random_channel(din, dout, kr(rng), rng), random_full_rank_state(din, rng));
    const DensityOperator rho = random_state(din, n % 5 == 0 ? 1 : din, rng);
    const ResourceReport r = reversibility_check(fam, rho, opt);
    const double slack = r.mean_sigma_R + std::log(r.averaged_fidelity);
    tightest = std::min(tightest, slack);
    if (slack < -1e-9) ++violations;
  }

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ResourceReport locc = locc_entanglement_ft(measure_b_protocol(2, 2), bell);
  const double de = locc.resource_change;
  const bool locc_ok = std::abs(de + std::log(2.0)) < 1e-9 && de <= locc.bound_rhs + 1e-9;

  // Thermal operations are covariant under the reference's own modular group.
  double worst_theta = 0.0;
  for (int n = 0; n < 50; ++n) {
    const Index ds = 2 + n % 2, db = 3;
    RVector es(ds), eb(db);
    for (Index k = 0; k < ds; ++k) es(k) = static_cast<double>(k);
    for (Index k = 0; k < db; ++k) eb(k) = static_cast<double>(k);
    RVector total(ds * db);
    for (Index a = 0; a < ds; ++a)
      for (Index b = 0; b < db; ++b) total(a * db + b) = es(a) + eb(b);
    const CMatrix hs = es.cast<cplx>().asDiagonal(), hb = eb.cast<cplx>().asDiagonal();
    const double beta = 0.4 + 0.1 * (n % 7);
    const KrausChannel ch = thermodynamic_channel(random_energy_conserving_unitary(total, rng),
                                                  DensityOperator::gibbs(hb, beta), hs, hs, hb, hb, beta);
    const RecoveryFamily fam(ch, DensityOperator::gibbs(hs, beta));
    const CMatrix j0 = choi(rotated_petz(fam, 0.0));
    for (double th : {0.3, -1.1, 2.7}) worst_theta = std::max(worst_theta, max_abs(choi(rotated_petz(fam, th)) - j0));
  }
  std::ostringstream os;
  os << "500 instances: " << violations << " violations of <sigma_R> >= -log F (min slack " << tightest
     << "); Bell LOCC Delta E_S " << de << " vs log Fbar " << locc.bound_rhs
     << "; covariant max theta deviation " << worst_theta;
  return {violations == 0 && locc_ok && worst_theta < 1e-8, os.str()};
}

Outcome criterion9() {
  Rng rng(99);
  std::uniform_int_distribution<int> level(0, 3), kr(1, 4);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  int violations = 0, checks = 0;
  double worst = -1e300;
  for (int n = 0; n < 1000; ++n) {
    const Index d = 2 + n % 2;
    RVector levels(d), r(d);
    for (Index k = 0; k < d; ++k) {
      levels(k) = level(rng);
      r(k) = unif(rng);
    }
    r /= r.sum();
    const KrausChannel ch = random_covariant_channel(levels, levels, kr(rng), rng);
    const CMatrix l = levels.cast<cplx>().asDiagonal();
    const DensityOperator gamma = DensityOperator::diagonal(r);
    const DensityOperator rho = random_state(d, 1 + n % d, rng);
    for (Index k = 0; k < d; ++k)
      for (Index q = 0; q < d; ++q) {
        const MergingBound mb = coherence_merging_bound(ch, rho, gamma, l, k, q);
        worst = std::max(worst, mb.lhs - mb.rhs);
        ++checks;
        if (!mb.holds(1e-9)) ++violations;
      }
  }
  std::ostringstream os;
  os << checks << " (k', l') checks, " << violations << " violations, max lhs - rhs " << worst;
  return {violations == 0, os.str()};
}

}  // namespace

int main() {
  run(1, "Upsilon factor in the detailed balance ratio", 60, criterion1);
  run(2, "Crooks relation, incoherent and coherent bath", 120, criterion2);
  run(3, "Negativity and sigma_I lattice", 120, criterion3);
  run(4, "Integral fluctuation theorem on random instances", 300, criterion4);
  run(5, "Free energy and asymmetry losses in the noisy JC model", 600, criterion5);
  run(6, "Reverse Lindblad generator", 120, criterion6);
  run(7, "POVM reconstruction of the quasi-probability", 120, criterion7);
  run(8, "Reversibility bounds", 300, criterion8);
  run(9, "Coherence merging bound", 300, criterion9);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
