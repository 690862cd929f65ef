#include "qfluct/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qfluct {

TransitionBasis TransitionBasis::forward(const DensityOperator& rho, const RecoveryFamily& fam) {
  if (rho.dim() != fam.forward().dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "state does not match channel input");
  }
  const DensityOperator out = apply_channel(fam.forward(), rho);
  return {rho.spectrum(), out.spectrum(), fam.reference().spectrum(),
          fam.evolved_reference().spectrum()};
}

TransitionBasis TransitionBasis::backward(const DensityOperator& rho, const RecoveryFamily& fam) {
  if (rho.dim() != fam.forward().dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "state does not match channel input");
  }
  const DensityOperator out = apply_channel(fam.forward(), rho);
  return {out.spectrum(), rho.spectrum(), fam.evolved_reference().spectrum(),
          fam.reference().spectrum()};
}

double transition_pure(const KrausChannel& ch, const CVector& psi, const CVector& phi) {
  const CVector a = psi / psi.norm();
  const CVector b = phi / phi.norm();
  return (b.adjoint() * apply_channel(ch, CMatrix(a * a.adjoint())) * b).value().real();
}

CVector rescaled_vector(const SpectralDecomposition& reference, const CVector& v, Direction dir) {
  if (v.size() != reference.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector does not match reference");
  }
  const CVector u = v / v.norm();
  CVector out;
  if (dir == Direction::Initial) {
    const double overlap = (reference.support_projector() * u).squaredNorm();
    if (overlap < 1.0 - tol::support_overlap) {
      throw Error(ErrorKind::SupportViolation, "vector leaves the reference support");
    }
    out = mat_pow(reference, -0.5) * u;
  } else {
    out = mat_pow(reference, 0.5) * u;
  }
  const double n = out.norm();
  if (n == 0.0) throw Error(ErrorKind::SupportViolation, "vector orthogonal to reference support");
  return out / n;
}

DetailedBalance detailed_balance_ratio(const RecoveryFamily& fam, const CVector& psi,
                                       const CVector& phi) {
  const auto& gs = fam.reference().spectrum();
  const auto& ns = fam.evolved_reference().spectrum();
  DetailedBalance db;
  db.forward = transition_pure(fam.forward(), psi, phi);
  const CVector psi_t = rescaled_vector(gs, psi, Direction::Initial);
  const CVector phi_t = rescaled_vector(ns, phi, Direction::Final);
  db.backward = transition_pure(petz(fam), phi_t, psi_t);
  if (db.backward < 1e-14) {
    std::ostringstream os;
    os << "backward transition probability " << db.backward;
    throw Error(ErrorKind::DegenerateBackward, os.str());
  }
  db.ratio = db.forward / db.backward;
  const CVector a = psi / psi.norm();
  const CVector b = phi / phi.norm();
  db.rhs = (a.adjoint() * mat_pow(gs, -1.0) * a).value().real() *
           (b.adjoint() * fam.evolved_reference().matrix() * b).value().real();
  return db;
}

double upsilon(const CMatrix& h, const CMatrix& h_final, double beta, const CVector& psi,
               const CVector& phi) {
  const CVector a = psi / psi.norm();
  const CVector b = phi / phi.norm();
  const double de = (b.adjoint() * h_final * b).value().real() - (a.adjoint() * h * a).value().real();
  const double up = (a.adjoint() * expm_hermitian(h, beta) * a).value().real();
  const double down = (b.adjoint() * expm_hermitian(h_final, -beta) * b).value().real();
  return std::exp(beta * de + std::log(up * down));
}

double upsilon(const CMatrix& h, double beta, const CVector& psi, const CVector& phi) {
  return upsilon(h, h, beta, psi, phi);
}

cplx info_exchange(const TransitionBasis& basis, Index i, Index j, Index k, Index l) {
  const auto& r = basis.reference_in.values;
  const auto& rp = basis.reference_out.values;
  const bool ok = i >= 0 && j >= 0 && k >= 0 && l >= 0 && i < r.size() && j < r.size() &&
                  k < rp.size() && l < rp.size() && basis.reference_in.in_support(i) &&
                  basis.reference_in.in_support(j) && basis.reference_out.in_support(k) &&
                  basis.reference_out.in_support(l);
  if (!ok) throw Error(ErrorKind::SupportViolation, "info_exchange indices outside support");
  const double li = std::log(r(i)), lj = std::log(r(j));
  const double lk = std::log(rp(k)), ll = std::log(rp(l));
  return {-0.5 * (lk + ll) + 0.5 * (li + lj), -0.5 * (lk - ll) + 0.5 * (li - lj)};
}

TpmQuasiProb::TpmQuasiProb(TransitionBasis basis, std::vector<cplx> data)
    : basis_(std::move(basis)), data_(std::move(data)) {
  const std::size_t expected = static_cast<std::size_t>(n_initial() * dim_in() * dim_in() *
                                                        n_final() * dim_out() * dim_out());
  if (data_.size() != expected) {
    throw Error(ErrorKind::DimensionMismatch, "quasi-probability table has wrong size");
  }
}

cplx TpmQuasiProb::total() const {
  cplx s = 0.0;
  for (const auto& x : data_) s += x;
  return s;
}

TpmQuasiProb tpm_quasiprob(const KrausChannel& ch, const TransitionBasis& basis) {
  const Index din = basis.reference_in.dim(), dout = basis.reference_out.dim();
  const Index nm = basis.initial.dim(), nn = basis.final_state.dim();
  if (ch.dim_in() != din || ch.dim_out() != dout || nm != din || nn != dout) {
    throw Error(ErrorKind::DimensionMismatch, "transition basis does not match channel");
  }
  const CMatrix& v = basis.reference_in.vectors;
  const CMatrix& w = basis.reference_out.vectors;
  const CMatrix c = v.adjoint() * basis.initial.vectors;       // c(i, mu) = <v_i|psi_mu>
  const CMatrix d = w.adjoint() * basis.final_state.vectors;   // d(k, nu) = <w_k|phi_nu>

  std::vector<CMatrix> t(static_cast<std::size_t>(din * din));
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j) {
      const CMatrix e = v.col(i) * v.col(j).adjoint();
      t[static_cast<std::size_t>(i * din + j)] = w.adjoint() * apply_channel(ch, e) * w;
    }

  std::vector<cplx> data(static_cast<std::size_t>(nm * din * din * nn * dout * dout));
  TpmQuasiProb table(basis, std::move(data));
  for (Index mu = 0; mu < nm; ++mu) {
    const double p = basis.initial.values(mu);
    for (Index i = 0; i < din; ++i)
      for (Index j = 0; j < din; ++j) {
        const cplx a = p * c(i, mu) * std::conj(c(j, mu));
        const CMatrix& tij = t[static_cast<std::size_t>(i * din + j)];
        for (Index nu = 0; nu < nn; ++nu)
          for (Index k = 0; k < dout; ++k)
            for (Index l = 0; l < dout; ++l) {
              table.at(mu, i, j, nu, k, l) = a * std::conj(d(k, nu)) * d(l, nu) * tij(k, l);
            }
      }
  }
  return table;
}

EpDistribution::EpDistribution(std::vector<EpAtom> atoms, double omitted_abs_weight)
    : atoms_(std::move(atoms)), omitted_(omitted_abs_weight) {}

cplx EpDistribution::total() const {
  cplx s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

cplx EpDistribution::mean_re() const {
  cplx s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.sigma_re;
  return s;
}

cplx EpDistribution::mean_im() const {
  cplx s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.sigma_im;
  return s;
}

cplx EpDistribution::exp_average(double theta) const {
  cplx s = 0.0;
  for (const auto& a : atoms_) s += a.weight * std::exp(cplx(-a.sigma_re, theta * a.sigma_im));
  return s;
}

const EpAtom* EpDistribution::find(double sigma_re, double sigma_im, double tolerance) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), sigma_re - tolerance,
                             [](const EpAtom& a, double x) { return a.sigma_re < x; });
  const EpAtom* best = nullptr;
  double best_d = INFINITY;
  for (; it != atoms_.end() && it->sigma_re <= sigma_re + tolerance; ++it) {
    const double dist = std::max(std::abs(it->sigma_re - sigma_re), std::abs(it->sigma_im - sigma_im));
    if (dist <= tolerance && dist < best_d) {
      best = &*it;
      best_d = dist;
    }
  }
  return best;
}

std::vector<EpAtom> EpDistribution::significant(double weight_tolerance) const {
  std::vector<EpAtom> out;
  for (const auto& a : atoms_)
    if (std::abs(a.weight) > weight_tolerance) out.push_back(a);
  return out;
}

std::vector<std::pair<double, cplx>> EpDistribution::real_marginal(double tolerance) const {
  std::vector<std::pair<double, cplx>> out;
  for (const auto& a : atoms_) {
    if (!out.empty() && std::abs(a.sigma_re - out.back().first) <= tolerance) {
      out.back().second += a.weight;
    } else {
      out.emplace_back(a.sigma_re, a.weight);
    }
  }
  return out;
}

namespace {

struct Entry {
  double re;
  double im;
  cplx w;
};

// Anchored clustering: a group starts at its smallest member and extends `tol` from there.
template <class Key>
std::vector<std::pair<std::size_t, std::size_t>> groups(const std::vector<Entry>& e, std::size_t b,
                                                        std::size_t end, double tol, Key key) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t s = b;
  while (s < end) {
    std::size_t t = s + 1;
    while (t < end && key(e[t]) - key(e[s]) <= tol) ++t;
    out.emplace_back(s, t);
    s = t;
  }
  return out;
}

std::vector<EpAtom> bin(std::vector<Entry> entries, double tol) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.re < b.re || (a.re == b.re && a.im < b.im); });
  std::vector<EpAtom> atoms;
  for (auto [s, t] : groups(entries, 0, entries.size(), tol, [](const Entry& x) { return x.re; })) {
    std::sort(entries.begin() + static_cast<std::ptrdiff_t>(s),
              entries.begin() + static_cast<std::ptrdiff_t>(t),
              [](const Entry& a, const Entry& b) { return a.im < b.im || (a.im == b.im && a.re < b.re); });
    for (auto [u, v] : groups(entries, s, t, tol, [](const Entry& x) { return x.im; })) {
      EpAtom a;
      for (std::size_t q = u; q < v; ++q) {
        a.sigma_re += entries[q].re;
        a.sigma_im += entries[q].im;
        a.weight += entries[q].w;
      }
      a.sigma_re /= static_cast<double>(v - u);
      a.sigma_im /= static_cast<double>(v - u);
      atoms.push_back(a);
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const EpAtom& a, const EpAtom& b) { return a.sigma_re < b.sigma_re; });
  return atoms;
}

}  // namespace

EpDistribution ep_distribution(const TpmQuasiProb& table, double bin_tolerance) {
  const auto& b = table.basis();
  const Index nm = table.n_initial(), nn = table.n_final();
  const Index din = table.dim_in(), dout = table.dim_out();
  std::vector<Entry> entries;
  entries.reserve(table.data().size());
  double omitted = 0.0;
  for (Index mu = 0; mu < nm; ++mu) {
    const bool mu_ok = b.initial.in_support(mu);
    for (Index i = 0; i < din; ++i)
      for (Index j = 0; j < din; ++j) {
        const bool ij_ok = b.reference_in.in_support(i) && b.reference_in.in_support(j);
        for (Index nu = 0; nu < nn; ++nu) {
          const bool nu_ok = b.final_state.in_support(nu);
          for (Index k = 0; k < dout; ++k)
            for (Index l = 0; l < dout; ++l) {
              const cplx w = table(mu, i, j, nu, k, l);
              const bool kl_ok = b.reference_out.in_support(k) && b.reference_out.in_support(l);
              if (!(mu_ok && nu_ok && ij_ok && kl_ok)) {
                omitted += std::abs(w);
                continue;
              }
              const double ds = std::log(b.initial.values(mu)) - std::log(b.final_state.values(nu));
              const cplx dq = info_exchange(b, i, j, k, l);
              entries.push_back({ds - dq.real(), -dq.imag(), w});
            }
        }
      }
  }
  return EpDistribution(bin(std::move(entries), bin_tolerance), omitted);
}

EpDistribution ep_distribution(const RecoveryFamily& fam, const DensityOperator& rho,
                               double bin_tolerance) {
  return ep_distribution(tpm_quasiprob(fam.forward(), TransitionBasis::forward(rho, fam)),
                         bin_tolerance);
}

EpDistribution backward_ep_distribution(const RecoveryFamily& fam, double theta,
                                        const DensityOperator& rho, double bin_tolerance) {
  const KrausChannel r = rotated_petz(fam, theta);
  return ep_distribution(tpm_quasiprob(r, TransitionBasis::backward(rho, fam)), bin_tolerance);
}

CrooksReport crooks_check(const EpDistribution& forward, const EpDistribution& backward,
                          double theta, double weight_tolerance, double bin_tolerance) {
  CrooksReport rep;
  rep.theta = theta;
  for (const auto& a : forward.atoms()) {
    const EpAtom* b = backward.find(-a.sigma_re, a.sigma_im, bin_tolerance);
    if (b == nullptr) {
      if (std::abs(a.weight) <= weight_tolerance) continue;
      std::ostringstream os;
      os << "no backward atom at (" << -a.sigma_re << ", " << a.sigma_im << ")";
      throw Error(ErrorKind::MissingAtom, os.str());
    }
    if (std::abs(a.weight) <= weight_tolerance && std::abs(b->weight) <= weight_tolerance) continue;
    if (std::abs(b->weight) <= weight_tolerance) {
      rep.zero_backward.push_back(a);
      continue;
    }
    CrooksAtom c;
    c.sigma_re = a.sigma_re;
    c.sigma_im = a.sigma_im;
    c.forward = a.weight;
    c.backward = b->weight;
    c.expected = std::exp(cplx(a.sigma_re, -2.0 * theta * a.sigma_im));
    const cplx predicted = c.expected * c.backward;
    c.deviation = std::abs(c.forward - predicted) / std::abs(predicted);
    rep.max_deviation = std::max(rep.max_deviation, c.deviation);
    rep.checked.push_back(c);
  }
  return rep;
}

double kappa(const RecoveryFamily& fam, const DensityOperator& rho, double theta) {
  const CMatrix out = apply_channel(fam.forward(), rho.matrix());
  const CMatrix back = apply_channel(rotated_petz(fam, theta / 2.0), out);
  return (rho.spectrum().support_projector() * back).trace().real();
}

IntegralQft integral_qft(const RecoveryFamily& fam, const DensityOperator& rho,
                         const EpDistribution& forward, double theta) {
  IntegralQft q;
  q.theta = theta;
  q.lhs = forward.exp_average(theta);
  q.kappa = kappa(fam, rho, theta);
  q.deviation = std::abs(q.lhs - q.kappa);
  return q;
}

MeanEntropyProduction mean_entropy_production(const EpDistribution& forward,
                                              const RecoveryFamily& fam,
                                              const DensityOperator& rho) {
  MeanEntropyProduction m;
  m.mean_re = forward.mean_re();
  m.mean_im = forward.mean_im();
  const DensityOperator out = apply_channel(fam.forward(), rho);
  m.relative_entropy_drop = relative_entropy(rho, fam.reference()) -
                            relative_entropy(out, fam.evolved_reference());
  return m;
}

void write_distribution_csv(std::ostream& os, const EpDistribution& forward,
                            const EpDistribution* backward) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "sigma_R,sigma_I,weight_fwd,weight_fwd_imag";
  if (backward != nullptr) os << ",weight_bwd,weight_bwd_imag";
  os << '\n';
  for (const auto& a : forward.atoms()) {
    os << a.sigma_re << ',' << a.sigma_im << ',' << a.weight.real() << ',' << a.weight.imag();
    if (backward != nullptr) {
      const EpAtom* b = backward->find(-a.sigma_re, a.sigma_im, 1e-8);
      const cplx w = b != nullptr ? b->weight : cplx(0.0);
      os << ',' << w.real() << ',' << w.imag();
    }
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace qfluct
