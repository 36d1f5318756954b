#include "qgeo/qosc_reps.hpp"

#include "qgeo/errors.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qgeo {

namespace {

using Triplet = Eigen::Triplet<cplx>;

double maxAbsOn(const Eigen::MatrixXcd& M, const std::vector<bool>& mask) {
  double m = 0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (mask[i] && mask[j]) m = std::max(m, std::abs(M(i, j)));
  return m;
}

}  // namespace

std::vector<bool> QOscRep::exactMask() const {
  std::vector<bool> m(dim, true);
  if (kind == RepKind::Fock) m[dim - 1] = false;
  return m;
}

QOscRep fockRep(int M, cplx q) {
  if (M < 2) throw PreconditionError("fockRep: cutoff must be at least 2");
  QOscRep r;
  r.kind = RepKind::Fock;
  r.dim = r.cutoff = M;
  r.q = q;
  r.a = Eigen::MatrixXcd::Zero(M, M);
  r.aStar = Eigen::MatrixXcd::Zero(M, M);
  r.k = Eigen::MatrixXcd::Zero(M, M);
  r.kInv = Eigen::MatrixXcd::Zero(M, M);
  for (int n = 0; n < M; ++n) {
    if (n + 1 < M) {
      r.a(n, n + 1) = 1.0;
      r.aStar(n + 1, n) = 1.0 - std::pow(q, 2 + 2 * n);
    }
    r.k(n, n) = std::pow(q, n + 0.5);
    r.kInv(n, n) = 1.0 / r.k(n, n);
  }
  return r;
}

QOscRep cyclicRep(int N, cplx kappa, cplx rho) {
  // for even N, q^N = -1 and the shift does not close on Z_N
  if (N < 3 || N % 2 == 0) throw PreconditionError("cyclicRep: N must be odd and at least 3");
  if (kappa == 0.0 || rho == 0.0) throw PreconditionError("cyclicRep: kappa and rho must be nonzero");
  QOscRep r;
  r.kind = RepKind::Cyclic;
  r.dim = r.N = N;
  r.q = rootPower(N, 1);
  r.kappa = kappa;
  r.rho = rho;
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(N, N), Z = Eigen::MatrixXcd::Zero(N, N),
                   Zinv = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    X(n, n) = rootPower(N, n);
    Z((n + 1) % N, n) = 1.0;
    Zinv(n, (n + 1) % N) = 1.0;
  }
  Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(N, N);
  r.k = kappa * X;
  r.kInv = X.adjoint() / kappa;
  r.aStar = (Id - kappa * kappa * X * X * rootPower(N, -1)) * Z / rho;
  r.a = rho * Zinv;
  return r;
}

double RelationResiduals::max() const { return std::max({commutator, kaStar, ka, kSquared}); }

RelationResiduals relationResiduals(const QOscRep& r) {
  auto mask = r.exactMask();
  Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(r.dim, r.dim);
  const cplx q = r.q;
  RelationResiduals res;
  res.commutator = maxAbsOn(q * r.aStar * r.a - r.a * r.aStar / q - (q - 1.0 / q) * Id, mask);
  res.kaStar = maxAbsOn(r.k * r.aStar - q * r.aStar * r.k, mask);
  res.ka = maxAbsOn(r.k * r.a - r.a * r.k / q, mask);
  Eigen::MatrixXcd k2 = r.k * r.k;
  res.kSquared = std::max(maxAbsOn(k2 - q * (Id - r.aStar * r.a), mask),
                          maxAbsOn(k2 - (Id - r.a * r.aStar) / q, mask));
  return res;
}

Eigen::MatrixXcd localL(const QOscRep& rep, const LParams& p) {
  const int d = rep.dim;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(4 * d, 4 * d);
  Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(d, d);
  L.block(0, 0, d, d) = Id;
  L.block(d, d, d, d) = p.lambda * rep.k;
  L.block(d, 2 * d, d, d) = rep.aStar;
  L.block(2 * d, d, d, d) = p.lambda * p.mu * rep.a;
  L.block(2 * d, 2 * d, d, d) = -p.mu * rep.k;
  L.block(3 * d, 3 * d, d, d) = p.lambda * p.mu * Id;
  return L;
}

SpMat oscillatorOp(const Eigen::MatrixXcd& op, int slot, int d) {
  Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd f[3] = {Id, Id, Id};
  f[slot] = op;
  Eigen::MatrixXcd full = Eigen::kroneckerProduct(Eigen::kroneckerProduct(f[0], f[1]).eval(), f[2]);
  return full.sparseView();
}

LOperators buildL(const std::array<QOscRep, 3>& reps, const std::array<LParams, 3>& params, double maxEntries) {
  const int d = reps[0].dim;
  for (const auto& r : reps) {
    if (r.dim != d) throw ConfigError("buildL: representations must share a dimension");
    if (std::abs(r.q - reps[0].q) > 1e-14) throw ConfigError("buildL: representations must share q");
  }
  const long long D3 = static_cast<long long>(d) * d * d;
  // worst case: every row of a dense block contributes d entries, four blocks per row
  double estimate = 8.0 * D3 * 2.0 * d;
  if (estimate > maxEntries) throw ConfigError("buildL: operator size exceeds the configured entry limit");

  const int pos[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  SpMat out[3];
  for (int j = 0; j < 3; ++j) {
    Eigen::MatrixXcd B = localL(reps[j], params[j]);
    int u = pos[j][0], v = pos[j][1], w = 3 - u - v;
    std::vector<Triplet> trips;
    for (int s = 0; s < 8; ++s)
      for (int t = 0; t < 8; ++t) {
        int sb[3] = {(s >> 2) & 1, (s >> 1) & 1, s & 1}, tb[3] = {(t >> 2) & 1, (t >> 1) & 1, t & 1};
        if (sb[w] != tb[w]) continue;
        int r = 2 * sb[v] + sb[u], c = 2 * tb[v] + tb[u];
        Eigen::MatrixXcd blk = B.block(r * d, c * d, d, d);
        if (blk.cwiseAbs().maxCoeff() == 0.0) continue;
        SpMat full = oscillatorOp(blk, j, d);
        for (int k = 0; k < full.outerSize(); ++k)
          for (SpMat::InnerIterator it(full, k); it; ++it)
            trips.emplace_back(s * D3 + it.row(), t * D3 + it.col(), it.value());
      }
    out[j].resize(8 * D3, 8 * D3);
    out[j].setFromTriplets(trips.begin(), trips.end());
  }
  return {out[0], out[1], out[2], d};
}

SpMat embedOscillator(const SpMat& R) {
  const long long D3 = R.rows();
  std::vector<Triplet> trips;
  trips.reserve(8 * R.nonZeros());
  for (int s = 0; s < 8; ++s)
    for (int k = 0; k < R.outerSize(); ++k)
      for (SpMat::InnerIterator it(R, k); it; ++it) trips.emplace_back(s * D3 + it.row(), s * D3 + it.col(), it.value());
  SpMat out(8 * D3, 8 * D3);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

double intertwineCheck(const LOperators& L, const SpMat& R, const std::vector<bool>& rowMask) {
  SpMat Rf = embedOscillator(R);
  SpMat lhs = L.L12 * (L.L13 * (L.L23 * Rf));
  SpMat rhs = Rf * (L.L23 * (L.L13 * L.L12));
  SpMat diff = lhs - rhs;
  const long long D3 = R.rows();
  double scale = 0, worst = 0;
  for (int k = 0; k < lhs.outerSize(); ++k)
    for (SpMat::InnerIterator it(lhs, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it) {
      if (!rowMask.empty() && !rowMask[it.row() % D3]) continue;
      worst = std::max(worst, std::abs(it.value()));
    }
  return scale > 0 ? worst / scale : worst;
}

std::vector<bool> fockInteriorMask(int M) {
  std::vector<bool> m(static_cast<size_t>(M) * M * M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c) m[(a * M + b) * M + c] = a + b <= M - 2 && b + c <= M - 2;
  return m;
}

std::array<cplx, 3> parameterCombinations(const std::array<LParams, 3>& p) {
  for (const auto& x : p)
    if (x.lambda == 0.0 || x.mu == 0.0) throw DomainError("parameterCombinations: zero lambda or mu");
  return {p[1].lambda / p[2].lambda, p[0].lambda * p[2].mu, p[0].mu / p[1].mu};
}

CyclicParams cyclicParamsFromTriangle(const SphericalTriangle& tri, int N) {
  const cplx I(0, 1);
  auto root = [N](double x) { return std::pow(x, 1.0 / N); };
  const auto& th = tri.theta;
  CyclicParams p;
  p.N = N;
  p.kappa = {I * root(std::tan(th[0] / 2)), I * root(1.0 / std::tan(th[1] / 2)), I * root(std::tan(th[2] / 2))};
  p.rho = {std::polar(1.0, -tri.beta[2] / N) * root(std::sin(tri.a[1]) / std::sin(tri.beta[0])), 1.0, 1.0};
  p.L[1] = {1.0, 1.0};
  p.L[2] = {std::polar(1.0, tri.a[0] / N), 1.0};
  p.L[0] = {std::polar(1.0, -tri.a[1] / N), std::polar(1.0, tri.a[2] / N)};
  return p;
}

std::array<QOscRep, 3> cyclicReps(const CyclicParams& p) {
  return {cyclicRep(p.N, p.kappa[0], p.rho[0]), cyclicRep(p.N, p.kappa[1], p.rho[1]),
          cyclicRep(p.N, p.kappa[2], p.rho[2])};
}

}  // namespace qgeo
