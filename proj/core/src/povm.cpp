#include "qfluct/povm.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace qfluct {

std::string PovmLabel::str() const {
  std::ostringstream os;
  os << state << ':';
  switch (tag) {
    case PovmTag::Basis: os << 'b' << i; break;
    case PovmTag::Plus: os << 'p' << i << '-' << j; break;
    case PovmTag::Times: os << 'x' << i << '-' << j; break;
  }
  return os.str();
}

PovmLabel PovmLabel::parse(const std::string& s) {
  PovmLabel l;
  const auto colon = s.find(':');
  auto bad = [&s]() -> PovmLabel {
    throw Error(ErrorKind::InconsistentLabels, "malformed POVM label '" + s + "'");
  };
  if (colon == std::string::npos || colon + 1 >= s.size()) return bad();
  try {
    std::size_t used = 0;
    l.state = std::stol(s.substr(0, colon), &used);
    if (used != colon) return bad();
    const char t = s[colon + 1];
    const std::string rest = s.substr(colon + 2);
    if (t == 'b') {
      l.tag = PovmTag::Basis;
      l.i = std::stol(rest, &used);
      if (used != rest.size()) return bad();
    } else if (t == 'p' || t == 'x') {
      l.tag = t == 'p' ? PovmTag::Plus : PovmTag::Times;
      const auto dash = rest.find('-');
      if (dash == std::string::npos) return bad();
      l.i = std::stol(rest.substr(0, dash), &used);
      if (used != dash) return bad();
      const std::string tail = rest.substr(dash + 1);
      l.j = std::stol(tail, &used);
      if (used != tail.size()) return bad();
    } else {
      return bad();
    }
  } catch (const std::logic_error&) {
    return bad();
  }
  return l;
}

namespace {

CMatrix projector(const CMatrix& vecs, Index k) { return vecs.col(k) * vecs.col(k).adjoint(); }

// Coefficient operators c_a, indexed like the labels: Pi_i/sqrt d, (Pi_i+Pi_j)/sqrt 2d, ...
std::vector<std::pair<PovmLabel, CMatrix>> combos(const SpectralDecomposition& ref, Index state) {
  const Index d = ref.dim();
  const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
  const double s2 = 1.0 / std::sqrt(2.0 * static_cast<double>(d));
  std::vector<std::pair<PovmLabel, CMatrix>> out;
  for (Index i = 0; i < d; ++i) {
    out.push_back({{state, PovmTag::Basis, i, 0}, s1 * projector(ref.vectors, i)});
  }
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const CMatrix pi = projector(ref.vectors, i), pj = projector(ref.vectors, j);
      out.push_back({{state, PovmTag::Plus, i, j}, s2 * (pi + pj)});
      out.push_back({{state, PovmTag::Times, i, j}, s2 * (pi + I_UNIT * pj)});
    }
  return out;
}

void check_complete(const std::vector<PovmElement>& set, Index d, const char* which) {
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& e : set) s += e.op.adjoint() * e.op;
  const double defect = max_abs(s - CMatrix::Identity(d, d));
  if (defect > 1e-10) {
    std::ostringstream os;
    os << which << " measurement deviates from completeness by " << defect;
    throw Error(ErrorKind::NotPovm, os.str());
  }
}

}  // namespace

PovmPair build_povms(const TransitionBasis& basis) {
  PovmPair p;
  p.dim_in = basis.reference_in.dim();
  p.dim_out = basis.reference_out.dim();
  if (basis.initial.dim() != p.dim_in || basis.final_state.dim() != p.dim_out) {
    throw Error(ErrorKind::DimensionMismatch, "transition basis dimensions disagree");
  }
  for (Index mu = 0; mu < basis.initial.dim(); ++mu) {
    const CMatrix pm = projector(basis.initial.vectors, mu);
    for (auto& [label, c] : combos(basis.reference_in, mu)) p.first.push_back({label, c * pm});
  }
  for (Index nu = 0; nu < basis.final_state.dim(); ++nu) {
    const CMatrix pn = projector(basis.final_state.vectors, nu);
    for (auto& [label, c] : combos(basis.reference_out, nu)) p.second.push_back({label, pn * c});
  }
  check_complete(p.first, p.dim_in, "first");
  check_complete(p.second, p.dim_out, "second");
  return p;
}

namespace {

TwoPointDistribution empty_distribution(const PovmPair& povms) {
  TwoPointDistribution d;
  for (const auto& e : povms.first) d.first.push_back(e.label);
  for (const auto& e : povms.second) d.second.push_back(e.label);
  d.prob = Eigen::MatrixXd::Zero(static_cast<Index>(d.first.size()), static_cast<Index>(d.second.size()));
  return d;
}

}  // namespace

TwoPointDistribution two_point_distribution(const KrausChannel& ch, const DensityOperator& rho,
                                            const PovmPair& povms) {
  if (ch.dim_in() != povms.dim_in || ch.dim_out() != povms.dim_out || rho.dim() != povms.dim_in) {
    throw Error(ErrorKind::DimensionMismatch, "POVMs do not match channel");
  }
  TwoPointDistribution d = empty_distribution(povms);
  for (std::size_t a = 0; a < povms.first.size(); ++a) {
    const CMatrix& m = povms.first[a].op;
    const CMatrix out = apply_channel(ch, CMatrix(m * rho.matrix() * m.adjoint()));
    for (std::size_t b = 0; b < povms.second.size(); ++b) {
      const CMatrix& mp = povms.second[b].op;
      d.prob(static_cast<Index>(a), static_cast<Index>(b)) = (mp * out * mp.adjoint()).trace().real();
    }
  }
  return d;
}

TwoPointDistribution backward_two_point_distribution(const KrausChannel& recovery,
                                                     const DensityOperator& final_state,
                                                     const PovmPair& povms) {
  if (recovery.dim_in() != povms.dim_out || recovery.dim_out() != povms.dim_in ||
      final_state.dim() != povms.dim_out) {
    throw Error(ErrorKind::DimensionMismatch, "POVMs do not match recovery map");
  }
  TwoPointDistribution d = empty_distribution(povms);
  for (std::size_t b = 0; b < povms.second.size(); ++b) {
    const CMatrix& mp = povms.second[b].op;
    const CMatrix back = apply_channel(recovery, CMatrix(mp.adjoint() * final_state.matrix() * mp));
    for (std::size_t a = 0; a < povms.first.size(); ++a) {
      const CMatrix& m = povms.first[a].op;
      d.prob(static_cast<Index>(a), static_cast<Index>(b)) = (m.adjoint() * back * m).trace().real();
    }
  }
  return d;
}

namespace {

using Key = std::tuple<Index, int, Index, Index>;

Key key_of(const PovmLabel& l) { return {l.state, static_cast<int>(l.tag), l.i, l.j}; }

}  // namespace

TpmQuasiProb reconstruct_quasiprob(const TwoPointDistribution& dist, const TransitionBasis& basis) {
  const Index din = basis.reference_in.dim(), dout = basis.reference_out.dim();
  const Index nm = basis.initial.dim(), nn = basis.final_state.dim();
  if (dist.prob.rows() != static_cast<Index>(dist.first.size()) ||
      dist.prob.cols() != static_cast<Index>(dist.second.size())) {
    throw Error(ErrorKind::InconsistentLabels, "probability table does not match its labels");
  }
  std::map<Key, Index> rows, cols;
  for (std::size_t a = 0; a < dist.first.size(); ++a) {
    if (!rows.emplace(key_of(dist.first[a]), static_cast<Index>(a)).second) {
      throw Error(ErrorKind::InconsistentLabels, "duplicate label " + dist.first[a].str());
    }
  }
  for (std::size_t b = 0; b < dist.second.size(); ++b) {
    if (!cols.emplace(key_of(dist.second[b]), static_cast<Index>(b)).second) {
      throw Error(ErrorKind::InconsistentLabels, "duplicate label " + dist.second[b].str());
    }
  }
  auto row = [&](Index mu, PovmTag t, Index i, Index j) {
    const auto it = rows.find({mu, static_cast<int>(t), i, j});
    if (it == rows.end()) {
      throw Error(ErrorKind::InconsistentLabels,
                  "missing first label " + PovmLabel{mu, t, i, j}.str());
    }
    return it->second;
  };
  auto col = [&](Index nu, PovmTag t, Index k, Index l) {
    const auto it = cols.find({nu, static_cast<int>(t), k, l});
    if (it == cols.end()) {
      throw Error(ErrorKind::InconsistentLabels,
                  "missing second label " + PovmLabel{nu, t, k, l}.str());
    }
    return it->second;
  };
  if (rows.size() != static_cast<std::size_t>(nm * din * din) ||
      cols.size() != static_cast<std::size_t>(nn * dout * dout)) {
    throw Error(ErrorKind::InconsistentLabels, "label sets do not match the transition basis");
  }

  const double scale = static_cast<double>(din * dout);
  TpmQuasiProb table(basis, std::vector<cplx>(static_cast<std::size_t>(nm * din * din * nn * dout * dout)));
  for (Index mu = 0; mu < nm; ++mu)
    for (Index nu = 0; nu < nn; ++nu) {
      auto p = [&](Index r, Index c) { return dist.prob(r, c); };
      // Diagonal blocks.
      for (Index i = 0; i < din; ++i)
        for (Index k = 0; k < dout; ++k) {
          table.at(mu, i, i, nu, k, k) = scale * p(row(mu, PovmTag::Basis, i, 0), col(nu, PovmTag::Basis, k, 0));
        }
      // Q for a basis element on one side and a pair on the other.
      auto q_out = [&](Index i, PovmTag t, Index k, Index l) {
        const Index r = row(mu, PovmTag::Basis, i, 0);
        return p(r, col(nu, t, k, l)) -
               0.5 * (p(r, col(nu, PovmTag::Basis, k, 0)) + p(r, col(nu, PovmTag::Basis, l, 0)));
      };
      auto q_in = [&](PovmTag t, Index i, Index j, Index k) {
        const Index c = col(nu, PovmTag::Basis, k, 0);
        return p(row(mu, t, i, j), c) -
               0.5 * (p(row(mu, PovmTag::Basis, i, 0), c) + p(row(mu, PovmTag::Basis, j, 0), c));
      };
      for (Index i = 0; i < din; ++i)
        for (Index k = 0; k < dout; ++k)
          for (Index l = k + 1; l < dout; ++l) {
            const double qp = q_out(i, PovmTag::Plus, k, l), qx = q_out(i, PovmTag::Times, k, l);
            table.at(mu, i, i, nu, k, l) = scale * cplx(qp, qx);
            table.at(mu, i, i, nu, l, k) = scale * cplx(qp, -qx);
          }
      for (Index i = 0; i < din; ++i)
        for (Index j = i + 1; j < din; ++j)
          for (Index k = 0; k < dout; ++k) {
            const double qp = q_in(PovmTag::Plus, i, j, k), qx = q_in(PovmTag::Times, i, j, k);
            table.at(mu, i, j, nu, k, k) = scale * cplx(qp, qx);
            table.at(mu, j, i, nu, k, k) = scale * cplx(qp, -qx);
          }
      // Both sides off-diagonal.
      const PovmTag tags[2] = {PovmTag::Plus, PovmTag::Times};
      for (Index i = 0; i < din; ++i)
        for (Index j = i + 1; j < din; ++j)
          for (Index k = 0; k < dout; ++k)
            for (Index l = k + 1; l < dout; ++l) {
              double pbar = 0.0;
              for (Index x : {i, j})
                for (Index u : {k, l})
                  pbar += p(row(mu, PovmTag::Basis, x, 0), col(nu, PovmTag::Basis, u, 0));
              double q[2][2];
              for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                  const double side_in = q_out(i, tags[b], k, l) + q_out(j, tags[b], k, l);
                  const double side_out = q_in(tags[a], i, j, k) + q_in(tags[a], i, j, l);
                  q[a][b] = p(row(mu, tags[a], i, j), col(nu, tags[b], k, l)) -
                            0.5 * (side_in + side_out) - 0.25 * pbar;
                }
              const cplx pp = q[0][0], px = q[0][1], xp = q[1][0], xx = q[1][1];
              table.at(mu, i, j, nu, k, l) = scale * (pp + I_UNIT * px + I_UNIT * xp - xx);
              table.at(mu, i, j, nu, l, k) = scale * (pp - I_UNIT * px + I_UNIT * xp + xx);
              table.at(mu, j, i, nu, k, l) = scale * (pp + I_UNIT * px - I_UNIT * xp + xx);
              table.at(mu, j, i, nu, l, k) = scale * (pp - I_UNIT * px - I_UNIT * xp - xx);
            }
    }
  return table;
}

void write_csv(std::ostream& os, const TwoPointDistribution& dist) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "label_m,label_m',probability\n";
  for (Index a = 0; a < dist.prob.rows(); ++a)
    for (Index b = 0; b < dist.prob.cols(); ++b) {
      os << dist.first[static_cast<std::size_t>(a)].str() << ','
         << dist.second[static_cast<std::size_t>(b)].str() << ',' << dist.prob(a, b) << '\n';
    }
  os.flags(flags);
  os.precision(prec);
}

TwoPointDistribution read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("label_m,", 0) != 0) {
    throw Error(ErrorKind::InconsistentLabels, "missing two-point distribution header");
  }
  std::vector<std::tuple<PovmLabel, PovmLabel, double>> rows;
  std::map<std::string, Index> first_idx, second_idx;
  TwoPointDistribution d;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, v;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, v)) {
      throw Error(ErrorKind::InconsistentLabels, "line " + std::to_string(lineno) + ": expected 3 fields");
    }
    double x = 0.0;
    try {
      x = std::stod(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InconsistentLabels, "line " + std::to_string(lineno) + ": bad probability");
    }
    const PovmLabel la = PovmLabel::parse(a), lb = PovmLabel::parse(b);
    if (first_idx.emplace(a, static_cast<Index>(d.first.size())).second) d.first.push_back(la);
    if (second_idx.emplace(b, static_cast<Index>(d.second.size())).second) d.second.push_back(lb);
    rows.emplace_back(la, lb, x);
  }
  const Index nr = static_cast<Index>(d.first.size()), nc = static_cast<Index>(d.second.size());
  if (static_cast<Index>(rows.size()) != nr * nc) {
    throw Error(ErrorKind::InconsistentLabels, "two-point table is not a full product of labels");
  }
  d.prob = Eigen::MatrixXd::Constant(nr, nc, NAN);
  for (const auto& [la, lb, x] : rows) {
    const Index r = first_idx.at(la.str()), c = second_idx.at(lb.str());
    if (!std::isnan(d.prob(r, c))) throw Error(ErrorKind::InconsistentLabels, "duplicate entry");
    d.prob(r, c) = x;
  }
  return d;
}

}  // namespace qfluct
