#include "qfluct/bounds.hpp"

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qfluct {

std::vector<double> default_check_thetas() { return {0.0, 1.0, -2.5}; }

std::vector<double> default_fidelity_grid() {
  std::vector<double> g(129);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = -12.0 + 24.0 * static_cast<double>(k) / 128.0;
  return g;
}

void ResourceReport::require(bool ok, const std::string& message) {
  if (ok) return;
  satisfied = false;
  violations.push_back(message);
}

std::string to_json(const ResourceReport& r) {
  using nlohmann::json;
  json kappa = json::array(), lhs = json::array(), fid = json::array();
  for (std::size_t k = 0; k < r.thetas.size(); ++k) {
    kappa.push_back({{"theta", r.thetas[k]}, {"kappa", r.kappa_by_theta[k]}});
    lhs.push_back({{"theta", r.thetas[k]}, {"re", r.lhs_by_theta[k].real()}, {"im", r.lhs_by_theta[k].imag()}});
  }
  for (std::size_t k = 0; k < r.fidelity_grid.size(); ++k) {
    fid.push_back({{"theta", r.fidelity_grid[k]}, {"fidelity", r.fidelity_by_theta[k]}});
  }
  json j = {{"kind", r.kind},
            {"mean_sigma_R", r.mean_sigma_R},
            {"mean_sigma_I", r.mean_sigma_I},
            {"relative_entropy_drop", r.relative_entropy_drop},
            {"resource_change", r.resource_change},
            {"equilibrium_shift", r.equilibrium_shift},
            {"kappa_by_theta", kappa},
            {"lhs_by_theta", lhs},
            {"fidelity_by_theta", fid},
            {"averaged_fidelity", r.averaged_fidelity},
            {"mean_fidelity", r.mean_fidelity},
            {"bound_lhs", r.bound_lhs},
            {"bound_rhs", r.bound_rhs},
            {"satisfied", r.satisfied},
            {"violations", r.violations}};
  return j.dump(2);
}

void write_json(std::ostream& os, const ResourceReport& report) { os << to_json(report) << '\n'; }

namespace {

std::string fmt(const char* what, double a, double b) {
  std::ostringstream os;
  os.precision(12);
  os << what << ": " << a << " vs " << b;
  return os.str();
}

// Shared part of every report: mean entropy production, integral equality on the check
// thetas and recovery fidelities.
EpDistribution fill_common(ResourceReport& r, const RecoveryFamily& fam, const DensityOperator& rho,
                           const ReportOptions& opt) {
  EpDistribution dist = ep_distribution(fam, rho);
  const MeanEntropyProduction mean = mean_entropy_production(dist, fam, rho);
  r.mean_sigma_R = mean.mean_re.real();
  r.mean_sigma_I = std::abs(mean.mean_im);
  r.relative_entropy_drop = mean.relative_entropy_drop;
  r.require(std::abs(r.mean_sigma_R - r.relative_entropy_drop) < 1e-8,
            fmt("mean sigma_R differs from the relative entropy drop", r.mean_sigma_R,
                r.relative_entropy_drop));
  r.require(r.mean_sigma_I < 1e-9, fmt("mean sigma_I does not vanish", r.mean_sigma_I, 0.0));
  r.require(r.mean_sigma_R >= -1e-9, fmt("negative mean entropy production", r.mean_sigma_R, 0.0));

  for (double th : opt.thetas) {
    const IntegralQft q = integral_qft(fam, rho, dist, th);
    r.thetas.push_back(th);
    r.lhs_by_theta.push_back(q.lhs);
    r.kappa_by_theta.push_back(q.kappa);
    r.require(q.deviation < opt.qft_tolerance,
              fmt(("integral equality at theta=" + std::to_string(th)).c_str(), std::abs(q.lhs), q.kappa));
  }

  const CMatrix out = apply_channel(fam.forward(), rho.matrix());
  r.fidelity_grid = opt.fidelity_grid;
  for (double th : opt.fidelity_grid) {
    r.fidelity_by_theta.push_back(fidelity(rho.matrix(), apply_channel(rotated_petz(fam, th / 2.0), out)));
  }
  const Quadrature q = averaging_quadrature();
  CMatrix averaged = CMatrix::Zero(rho.dim(), rho.dim());
  r.mean_fidelity = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const CMatrix back = apply_channel(rotated_petz(fam, q.nodes[k] / 2.0), out);
    averaged += q.weights[k] * back;
    r.mean_fidelity += q.weights[k] * fidelity(rho.matrix(), back);
  }
  r.averaged_fidelity = fidelity(rho.matrix(), averaged);
  for (double f : r.fidelity_by_theta) r.require(f <= 1.0 + 1e-9, fmt("fidelity above one", f, 1.0));
  return dist;
}

double log_partition(const CMatrix& h, double beta) {
  const SpectralDecomposition s = herm_eig(h);
  const double emin = s.values.minCoeff();
  double z = 0.0;
  for (Index k = 0; k < s.dim(); ++k) z += std::exp(-beta * (s.values(k) - emin));
  return std::log(z) - beta * emin;
}

double energy(const CMatrix& rho, const CMatrix& h) { return (rho * h).trace().real(); }

// Eigenbasis of L (ascending eigenvalues) refined inside degenerate blocks by the eigenbasis
// of `ref`.
struct JointBasis {
  CMatrix vectors;
  RVector levels;
  RVector weights;
};

JointBasis joint_basis(const CMatrix& l, const CMatrix& ref) {
  const SpectralDecomposition s = herm_eig(l);
  const Index d = s.dim();
  JointBasis jb{CMatrix(d, d), RVector(d), RVector(d)};
  Index pos = 0;
  Index a = d - 1;
  while (a >= 0) {
    Index b = a;
    while (b - 1 >= 0 && std::abs(s.values(b - 1) - s.values(a)) < 1e-9) --b;
    const CMatrix block = s.vectors.middleCols(b, a - b + 1);
    const SpectralDecomposition inner = herm_eig(CMatrix(block.adjoint() * ref * block));
    for (Index c = 0; c < inner.dim(); ++c) {
      jb.vectors.col(pos) = block * inner.vectors.col(c);
      jb.levels(pos) = s.values(a);
      jb.weights(pos) = inner.values(c);
      ++pos;
    }
    a = b - 1;
  }
  return jb;
}

void check_covariant(const KrausChannel& ch, const CMatrix& l_in, const CMatrix& l_out) {
  const double defect = generator_covariance_defect(ch, l_in, l_out);
  if (defect > 1e-7) {
    std::ostringstream os;
    os << "channel is not covariant under the generator (defect " << defect << ")";
    throw Error(ErrorKind::NotCovariant, os.str());
  }
}

ResourceReport locc_report(const LoccProtocol& protocol, const DensityOperator& rho_ab,
                           const ReportOptions& opt, bool pure) {
  const Index da = protocol.dim_a, db = protocol.dim_b;
  if (rho_ab.dim() != da * db) throw Error(ErrorKind::DimensionMismatch, "state does not match A (x) B");
  const CMatrix rho_b = partial_trace(rho_ab.matrix(), {da, db}, {1});
  const DensityOperator gamma(tensor(CMatrix(CMatrix::Identity(da, da) / static_cast<double>(da)), rho_b));
  const RecoveryFamily fam(locc_channel(protocol), gamma);

  ResourceReport r;
  r.kind = pure ? "locc_entanglement" : "locc_coherent_information";
  fill_common(r, fam, rho_ab, opt);

  auto coherent_info = [&](const CMatrix& m) {
    const DensityOperator joint = DensityOperator::normalized(m, 1e-8);
    const DensityOperator b = DensityOperator::normalized(partial_trace(m, {da, db}, {1}), 1e-8);
    return b.entropy() - (pure ? 0.0 : joint.entropy());
  };
  double after = 0.0;
  for (std::size_t m = 0; m < protocol.bob.size(); ++m) {
    const CMatrix op = tensor(protocol.alice[m], protocol.bob[m]);
    const CMatrix phi = op * rho_ab.matrix() * op.adjoint();
    const double pm = phi.trace().real();
    if (pm < 1e-14) continue;
    after += pm * coherent_info(phi / pm);
  }
  r.resource_change = after - coherent_info(rho_ab.matrix());
  r.require(std::abs(r.resource_change + r.mean_sigma_R) < 1e-8,
            fmt("resource change differs from -<sigma_R>", r.resource_change, -r.mean_sigma_R));
  r.require(r.resource_change <= 1e-9, fmt("LOCC increased the resource", r.resource_change, 0.0));
  if (pure) {
    r.bound_lhs = r.resource_change;
    r.bound_rhs = std::log(r.mean_fidelity);
  } else {
    r.bound_lhs = r.resource_change;
    r.bound_rhs = std::log(r.averaged_fidelity);
  }
  r.require(r.bound_lhs <= r.bound_rhs + 1e-9, fmt("recovery bound", r.bound_lhs, r.bound_rhs));
  return r;
}

}  // namespace

ResourceReport free_energy_ft(const KrausChannel& ch, const DensityOperator& rho, double beta,
                              const CMatrix& h_s, const CMatrix& h_s_final,
                              const ReportOptions& opt) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be positive");
  const DensityOperator gamma = DensityOperator::gibbs(h_s, beta);
  const RecoveryFamily fam(ch, gamma);
  ResourceReport r;
  r.kind = "free_energy";
  const double gibbs_drift =
      max_abs(fam.evolved_reference().matrix() - DensityOperator::gibbs(h_s_final, beta).matrix());
  r.require(gibbs_drift < 1e-8, fmt("N(gamma_S) is not the final Gibbs state", gibbs_drift, 0.0));

  const EpDistribution dist = fill_common(r, fam, rho, opt);
  r.equilibrium_shift = (log_partition(h_s, beta) - log_partition(h_s_final, beta)) / beta;
  r.resource_change = -r.mean_sigma_R / beta + r.equilibrium_shift;

  const DensityOperator out = apply_channel(ch, rho);
  const double direct = (energy(out.matrix(), h_s_final) - out.entropy() / beta) -
                        (energy(rho.matrix(), h_s) - rho.entropy() / beta);
  r.require(std::abs(direct - r.resource_change) < 1e-8,
            fmt("free energy change differs from the distribution mean", direct, r.resource_change));
  r.require(r.resource_change <= r.equilibrium_shift + 1e-9,
            fmt("free energy increased beyond equilibrium", r.resource_change, r.equilibrium_shift));
  double max_im = 0.0;
  for (const auto& a : dist.significant(1e-10)) max_im = std::max(max_im, std::abs(a.sigma_im));
  r.require(max_im < 1e-8, fmt("imaginary entropy production on a weighted atom", max_im, 0.0));

  r.bound_lhs = r.averaged_fidelity;
  r.bound_rhs = std::exp(beta * (r.resource_change - r.equilibrium_shift));
  r.require(r.bound_lhs >= r.bound_rhs - 1e-9, fmt("recovery fidelity bound", r.bound_lhs, r.bound_rhs));
  return r;
}

CMatrix asymmetry_dephase(const CMatrix& x, const CMatrix& l) {
  const SpectralDecomposition s = herm_eig(l);
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  Index a = 0;
  while (a < s.dim()) {
    Index b = a + 1;
    while (b < s.dim() && std::abs(s.values(b) - s.values(a)) < 1e-9) ++b;
    const CMatrix v = s.vectors.middleCols(a, b - a);
    const CMatrix p = v * v.adjoint();
    out += p * x * p;
    a = b;
  }
  return out;
}

double relative_entropy_of_asymmetry(const DensityOperator& rho, const CMatrix& l) {
  return relative_entropy(rho, DensityOperator::normalized(asymmetry_dephase(rho.matrix(), l), 1e-8));
}

double generator_covariance_defect(const KrausChannel& ch, const CMatrix& l_in, const CMatrix& l_out) {
  double worst = 0.0;
  for (double t : {0.1, 0.37, 1.0, 2.9, 7.3}) {
    worst = std::max(worst, covariance_defect(ch, l_in, l_out, t));
  }
  return worst;
}

ResourceReport asymmetry_ft(const KrausChannel& ch, const DensityOperator& rho, const CMatrix& l,
                            const ReportOptions& opt) {
  if (ch.dim_in() != ch.dim_out() || l.rows() != ch.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "generator does not match channel");
  }
  check_covariant(ch, l, l);
  const DensityOperator reference = DensityOperator::normalized(asymmetry_dephase(rho.matrix(), l), 1e-8);
  const RecoveryFamily fam(ch, reference);
  ResourceReport r;
  r.kind = "asymmetry";
  fill_common(r, fam, rho, opt);

  const DensityOperator out = apply_channel(ch, rho);
  const double commute = max_abs(fam.evolved_reference().matrix() - asymmetry_dephase(out.matrix(), l));
  r.require(commute < 1e-8, fmt("N(D(rho)) differs from D(N(rho))", commute, 0.0));
  r.resource_change = relative_entropy_of_asymmetry(out, l) - relative_entropy_of_asymmetry(rho, l);
  r.require(std::abs(r.resource_change + r.mean_sigma_R) < 1e-8,
            fmt("asymmetry change differs from -<sigma_R>", r.resource_change, -r.mean_sigma_R));
  r.bound_lhs = r.averaged_fidelity;
  r.bound_rhs = std::exp(r.resource_change);
  r.require(r.bound_lhs >= r.bound_rhs - 1e-9, fmt("recovery fidelity bound", r.bound_lhs, r.bound_rhs));
  return r;
}

MergingBound coherence_merging_bound(const KrausChannel& ch, const DensityOperator& rho,
                                     const DensityOperator& gamma, const CMatrix& l, Index k,
                                     Index l_index) {
  const Index d = ch.dim_in();
  if (ch.dim_out() != d || l.rows() != d || rho.dim() != d || gamma.dim() != d) {
    throw Error(ErrorKind::DimensionMismatch, "coherence merging needs matching dimensions");
  }
  if (k < 0 || k >= d || l_index < 0 || l_index >= d) {
    throw Error(ErrorKind::InvalidArgument, "output index out of range");
  }
  if (max_abs(gamma.matrix() * l - l * gamma.matrix()) > 1e-9) {
    throw Error(ErrorKind::ReferenceNotCommuting, "reference does not commute with the generator");
  }
  if (!gamma.full_rank()) throw Error(ErrorKind::RankDeficientReference, "reference is not full rank");
  check_covariant(ch, l, l);

  const JointBasis in = joint_basis(l, gamma.matrix());
  const JointBasis out = joint_basis(l, apply_channel(ch, gamma.matrix()));
  const CMatrix rho_in = in.vectors.adjoint() * rho.matrix() * in.vectors;
  const CMatrix rho_out = out.vectors.adjoint() * apply_channel(ch, rho.matrix()) * out.vectors;

  MergingBound mb;
  mb.lhs = std::abs(rho_out(k, l_index));
  const double gap = out.levels(k) - out.levels(l_index);
  const double rk = std::max(out.weights(k), 0.0), rl = std::max(out.weights(l_index), 0.0);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (std::abs(in.levels(i) - in.levels(j) - gap) > 1e-9) continue;
      const double a = std::abs(rho_in(i, j));
      // exp(-dq_R) = sqrt(r'_k r'_l / (r_i r_j))
      const double factor = std::sqrt(rk * rl / (in.weights(i) * in.weights(j)));
      if (factor <= 1.0) {
        mb.omega_plus.emplace_back(i, j);
        mb.rhs += a * factor;
      } else {
        mb.omega_minus.emplace_back(i, j);
        mb.rhs += a;
      }
    }
  return mb;
}

ResourceReport locc_entanglement_ft(const LoccProtocol& protocol, const DensityOperator& psi_ab,
                                    const ReportOptions& opt) {
  if (psi_ab.spectrum().rank() != 1) throw Error(ErrorKind::NotPure, "input state is not pure");
  return locc_report(protocol, psi_ab, opt, true);
}

ResourceReport locc_entanglement_ft(const LoccProtocol& protocol, const CVector& psi_ab,
                                    const ReportOptions& opt) {
  if (std::abs(psi_ab.norm() - 1.0) > 1e-10) throw Error(ErrorKind::NotPure, "state vector is not normalized");
  return locc_report(protocol, DensityOperator::pure(psi_ab), opt, true);
}

ResourceReport locc_coherent_info_ft(const LoccProtocol& protocol, const DensityOperator& rho_ab,
                                     const ReportOptions& opt) {
  return locc_report(protocol, rho_ab, opt, false);
}

ResourceReport reversibility_check(const RecoveryFamily& fam, const DensityOperator& rho,
                                   const ReportOptions& opt) {
  ResourceReport r;
  r.kind = "reversibility";
  fill_common(r, fam, rho, opt);
  r.resource_change = -r.mean_sigma_R;
  r.bound_lhs = r.mean_sigma_R;
  r.bound_rhs = -std::log(r.averaged_fidelity);
  r.require(r.bound_lhs >= r.bound_rhs - 1e-8, fmt("<sigma_R> >= -log F(rho, Rbar N rho)", r.bound_lhs, r.bound_rhs));
  r.require(r.bound_lhs >= -std::log(r.mean_fidelity) - 1e-8,
            fmt("<sigma_R> >= -log Fbar", r.bound_lhs, -std::log(r.mean_fidelity)));
  if (r.mean_sigma_R < 1e-10) {
    for (std::size_t k = 0; k < r.fidelity_grid.size(); ++k) {
      r.require(r.fidelity_by_theta[k] > 1.0 - 1e-7,
                fmt("no entropy production but imperfect recovery", r.fidelity_by_theta[k], 1.0));
    }
  }
  return r;
}

SymmetrySpectrum symmetry_diagnostic(const RecoveryFamily& fam, const CVector& psi, const CVector& phi,
                                     double theta_max, int n, double threshold) {
  if (n < 2 || (n & (n - 1)) != 0) throw Error(ErrorKind::InvalidArgument, "grid length must be a power of two");
  if (!(theta_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta range must be positive");
  const KrausChannel& ch = fam.forward();
  if (psi.size() != ch.dim_in() || phi.size() != ch.dim_out()) {
    throw Error(ErrorKind::DimensionMismatch, "transition vectors do not match channel");
  }
  const auto& s_in = fam.reference().spectrum();
  const auto& s_out = fam.evolved_reference().spectrum();
  const CMatrix kernel_out = CMatrix::Identity(s_out.dim(), s_out.dim()) - s_out.support_projector();

  SymmetrySpectrum sp;
  sp.resolution = 2.0 * std::numbers::pi / theta_max;
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  for (int t = 0; t < n; ++t) {
    const double th = theta_max * t / n;
    const CMatrix u = mat_pow(s_in, cplx(0.0, th / 2.0));
    const CMatrix v = mat_pow(s_out, cplx(0.0, th / 2.0)) + kernel_out;
    const double value = transition_pure(ch, u * psi, v * phi);
    sp.thetas.push_back(th);
    sp.transition.push_back(value);
    buf[t][0] = value;
    buf[t][1] = 0.0;
  }
  fftw_execute(plan);
  for (int b = 0; b < n; ++b) {
    const int signed_bin = b < n / 2 ? b : b - n;
    const double f = sp.resolution * signed_bin;
    const double amp = std::hypot(buf[b][0], buf[b][1]) / n;
    sp.frequencies.push_back(f);
    sp.amplitudes.push_back(amp);
    if (amp > threshold) sp.peaks.push_back(f);
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  std::sort(sp.peaks.begin(), sp.peaks.end());

  // Weighted sigma_I values of the transition, grouped.
  const CVector c = s_in.vectors.adjoint() * (psi / psi.norm());
  const CVector dv = s_out.vectors.adjoint() * (phi / phi.norm());
  std::vector<std::pair<double, cplx>> terms;
  for (Index i = 0; i < s_in.dim(); ++i)
    for (Index j = 0; j < s_in.dim(); ++j) {
      if (!s_in.in_support(i) || !s_in.in_support(j)) continue;
      const CMatrix img = s_out.vectors.adjoint() *
                          apply_channel(ch, CMatrix(s_in.vectors.col(i) * s_in.vectors.col(j).adjoint())) *
                          s_out.vectors;
      for (Index k = 0; k < s_out.dim(); ++k)
        for (Index l = 0; l < s_out.dim(); ++l) {
          if (!s_out.in_support(k) || !s_out.in_support(l)) continue;
          const cplx w = c(i) * std::conj(c(j)) * std::conj(dv(k)) * dv(l) * img(k, l);
          const double sigma_im = 0.5 * std::log(s_out.values(k) / s_out.values(l)) -
                                  0.5 * std::log(s_in.values(i) / s_in.values(j));
          terms.emplace_back(sigma_im, w);
        }
    }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t a = 0;
  while (a < terms.size()) {
    std::size_t b = a;
    cplx sum = 0.0;
    while (b < terms.size() && terms[b].first - terms[a].first < 1e-9) sum += terms[b++].second;
    if (std::abs(sum) > threshold) sp.expected.push_back(terms[a].first);
    a = b;
  }
  auto near = [&](const std::vector<double>& set, double x) {
    return std::any_of(set.begin(), set.end(), [&](double y) { return std::abs(x - y) < 0.5 * sp.resolution; });
  };
  sp.matches = std::all_of(sp.expected.begin(), sp.expected.end(), [&](double x) { return near(sp.peaks, x); }) &&
               std::all_of(sp.peaks.begin(), sp.peaks.end(), [&](double x) { return near(sp.expected, x); });
  return sp;
}

}  // namespace qfluct
