#include "qfluct/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qfluct {

namespace {

constexpr double kLevelTolerance = 1e-9;

}  // namespace

CMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) g(r, c) = cplx(n(rng), n(rng));
  return g;
}

CMatrix random_isometry(Index rows, Index cols, Rng& rng) {
  if (rows < cols) throw Error(ErrorKind::InvalidArgument, "isometry needs rows >= cols");
  const CMatrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR();
  for (Index c = 0; c < cols; ++c) {
    const double a = std::abs(r(c, c));
    if (a > 0.0) q.col(c) *= r(c, c) / a;
  }
  return q;
}

CMatrix random_unitary(Index d, Rng& rng) { return random_isometry(d, d, rng); }

CVector random_pure(Index d, Rng& rng) {
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

DensityOperator random_state(Index d, Index rank, Rng& rng) {
  if (rank < 1 || rank > d) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator::normalized(m, 1e-8);
}

DensityOperator random_full_rank_state(Index d, Rng& rng) { return random_state(d, d, rng); }

KrausChannel random_channel(Index din, Index dout, Index n_kraus, Rng& rng) {
  n_kraus = std::max(n_kraus, (din + dout - 1) / dout);
  const CMatrix v = random_isometry(dout * n_kraus, din, rng);
  std::vector<CMatrix> kraus;
  for (Index m = 0; m < n_kraus; ++m) kraus.push_back(v.middleRows(m * dout, dout));
  return KrausChannel(std::move(kraus));
}

KrausChannel random_covariant_channel(const RVector& levels_in, const RVector& levels_out,
                                      Index n_kraus, Rng& rng) {
  const Index din = levels_in.size(), dout = levels_out.size();
  CMatrix j = choi(random_channel(din, dout, n_kraus, rng));
  for (Index i = 0; i < din; ++i)
    for (Index a = 0; a < dout; ++a)
      for (Index jj = 0; jj < din; ++jj)
        for (Index b = 0; b < dout; ++b) {
          const double gap = (levels_in(i) - levels_in(jj)) - (levels_out(a) - levels_out(b));
          if (std::abs(gap) > kLevelTolerance) j(i * dout + a, jj * dout + b) = 0.0;
        }
  return from_choi(j, din, dout);
}

CMatrix random_energy_conserving_unitary(const RVector& energies, Rng& rng) {
  const Index d = energies.size();
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  CMatrix u = CMatrix::Zero(d, d);
  for (Index a = 0; a < d; ++a) {
    if (used[static_cast<std::size_t>(a)]) continue;
    std::vector<Index> block;
    for (Index b = a; b < d; ++b) {
      if (!used[static_cast<std::size_t>(b)] && std::abs(energies(b) - energies(a)) < kLevelTolerance) {
        block.push_back(b);
        used[static_cast<std::size_t>(b)] = true;
      }
    }
    const Index n = static_cast<Index>(block.size());
    const CMatrix ub = random_unitary(n, rng);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) u(block[r], block[c]) = ub(r, c);
  }
  return u;
}

}  // namespace qfluct
