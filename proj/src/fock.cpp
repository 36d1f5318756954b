#include "qgeo/errors.hpp"
#include "qgeo/rmatrices.hpp"

#include <cmath>

namespace qgeo {

namespace {

template <class C>
C pochhammer(C a, C qs, int n) {
  C p = 1;
  for (int j = 0; j < n; ++j) {
    p *= C(1) - a;
    a *= qs;
  }
  return p;
}

template <class C>
C ipow(C x, int e) {
  C r = 1;
  if (e < 0) {
    x = C(1) / x;
    e = -e;
  }
  for (; e > 0; --e) r *= x;
  return r;
}

template <class C>
C element(const Index3& n, const Index3& np, C q) {
  const auto [n1, n2, n3] = n;
  const auto [m1, m2, m3] = np;
  for (int v : {n1, n2, n3, m1, m2, m3})
    if (v < 0) throw PreconditionError("fockElement: negative index");
  if (n1 + n2 != m1 + m2 || n2 + n3 != m2 + m3) return C(0);
  const C qs = q * q;
  const C pre = C(n2 % 2 ? -1 : 1) * ipow(q, (m1 - n2) * (m3 - n2));
  const C b = ipow(qs, 1 + m3), z = ipow(qs, 1 + n1);
  if (m2 <= n3) {
    // qbinom(n3, m2) 2phi1(q^-2m2, b; q^2(1-m2+n3); q^2, z), terminating after m2 terms
    const C c = ipow(qs, 1 - m2 + n3);
    C sum = 1, term = 1, qn = 1;
    for (int k = 0; k < m2; ++k) {
      term *= (C(1) - ipow(qs, k - m2)) * (C(1) - b * qn) * z / ((C(1) - c * qn) * (C(1) - qn * qs));
      sum += term;
      qn *= qs;
    }
    const C binom = pochhammer(qs, qs, n3) / (pochhammer(qs, qs, m2) * pochhammer(qs, qs, n3 - m2));
    return pre * binom * sum;
  }
  // m2 > n3: the binomial vanishes while the series has a pole at c = q^{2(1 - m2 + n3)};
  // the product stays finite and is summed here in closed form
  const int j = m2 - n3 - 1;
  C sum = 0;
  for (int k = j + 1; k <= m2; ++k)
    sum += pochhammer(ipow(qs, -m2), qs, k) * pochhammer(b, qs, k) /
           (pochhammer(qs, qs, k) * pochhammer(qs, qs, k - j - 1)) * ipow(z, k);
  return pre * pochhammer(qs, qs, n3) / pochhammer(qs, qs, m2) * sum;
}

}  // namespace

cplx fockElement(const Index3& n, const Index3& np, cplx q) { return element<cplx>(n, np, q); }

xcplx fockElementExtended(const Index3& n, const Index3& np, cplx q) { return element<xcplx>(n, np, xcplx(q)); }

FockRMatrix::FockRMatrix(cplx q, int maxIndex, double perturbation)
    : q_(q), side_(maxIndex + 1), perturbation_(perturbation) {
  const int s = side_;
  table_.assign(static_cast<size_t>(s) * s * s * s * s * s, 0.0L);
  for (int n1 = 0; n1 < s; ++n1)
    for (int n2 = 0; n2 < s; ++n2)
      for (int n3 = 0; n3 < s; ++n3)
        for (int m2 = 0; m2 < s; ++m2) {
          int m1 = n1 + n2 - m2, m3 = n2 + n3 - m2;
          if (m1 < 0 || m3 < 0 || m1 >= s || m3 >= s) continue;
          size_t idx = ((((static_cast<size_t>(n1) * s + n2) * s + n3) * s + m1) * s + m2) * s + m3;
          table_[idx] = compute({n1, n2, n3}, {m1, m2, m3});
        }
}

xcplx FockRMatrix::compute(const Index3& n, const Index3& np) const {
  xcplx v = fockElementExtended(n, np, q_);
  if (perturbation_ != 0.0) v *= 1.0L + static_cast<long double>(perturbation_) * (n[0] + 2 * np[2]);
  return v;
}

xcplx FockRMatrix::extended(const Index3& n, const Index3& np) const {
  const int s = side_;
  for (int v : n)
    if (v >= s) return compute(n, np);
  for (int v : np)
    if (v >= s) return compute(n, np);
  size_t idx = ((((static_cast<size_t>(n[0]) * s + n[1]) * s + n[2]) * s + np[0]) * s + np[1]) * s + np[2];
  return table_[idx];
}

SpMat fockRMatrix(int M, cplx q) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int n1 = 0; n1 < M; ++n1)
    for (int n2 = 0; n2 < M; ++n2)
      for (int n3 = 0; n3 < M; ++n3)
        for (int m2 = 0; m2 < M; ++m2) {
          int m1 = n1 + n2 - m2, m3 = n2 + n3 - m2;
          if (m1 < 0 || m3 < 0 || m1 >= M || m3 >= M) continue;
          cplx v = fockElement({n1, n2, n3}, {m1, m2, m3}, q);
          if (v != 0.0) trips.emplace_back((n1 * M + n2) * M + n3, (m1 * M + m2) * M + m3, v);
        }
  SpMat R(M * M * M, M * M * M);
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

namespace {

// Internal indices derived from the charge deltas must stay inside the
// range those deltas allow; a violation means the enumeration is wrong.
void requireBound(bool ok) {
  if (!ok) throw std::logic_error("tetrahedron sum: internal index outside its charge bound");
}

}  // namespace

double relativeResidual(cplx lhs, cplx rhs, double floor) {
  if (std::abs(lhs) < floor && std::abs(rhs) < floor) return 0.0;
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

TEResult fockTECheck(const std::array<int, 6>& in, const std::array<int, 6>& out, const FockRMatrix& R) {
  const auto [n1, n2, n3, n4, n5, n6] = in;
  const auto [a1, a2, a3, a4, a5, a6] = out;
  TEResult res;
  xcplx lhs = 0, rhs = 0;
  // Left: R123 R145 R246 R356. The first factor's deltas fix p1, p3 from
  // p2, and each later factor has one undetermined output fixed by its
  // first delta, so the sum is over p2 alone: 0 <= p2 <= min(n1+n2, n2+n3).
  {
    const int hi = std::min(n1 + n2, n2 + n3);
    for (int p2 = 0; p2 <= hi; ++p2) {
      int p1 = n1 + n2 - p2, p3 = n2 + n3 - p2;
      int p4 = p1 + n4 - a1, p5 = n4 + n5 - p4, p6 = p4 + n6 - a4;
      requireBound(p1 >= 0 && p3 >= 0 && p1 <= n1 + n2 && p3 <= n2 + n3);
      if (p4 < 0 || p5 < 0 || p6 < 0) continue;
      lhs += R.extended({n1, n2, n3}, {p1, p2, p3}) * R.extended({p1, n4, n5}, {a1, p4, p5}) *
             R.extended({p2, p4, n6}, {a2, a4, p6}) * R.extended({p3, p5, p6}, {a3, a5, a6});
      ++res.terms;
    }
  }
  // Right: R356 R246 R145 R123, summed over p5 in [0, min(n3+n5, n5+n6)].
  {
    const int hi = std::min(n3 + n5, n5 + n6);
    for (int p5 = 0; p5 <= hi; ++p5) {
      int p3 = n3 + n5 - p5, p6 = n5 + n6 - p5;
      int p4 = n4 + p6 - a6, p2 = n2 + n4 - p4, p1 = n1 + p4 - a4;
      requireBound(p3 >= 0 && p6 >= 0 && p3 <= n3 + n5 && p6 <= n5 + n6);
      if (p4 < 0 || p2 < 0 || p1 < 0) continue;
      rhs += R.extended({n3, n5, n6}, {p3, p5, p6}) * R.extended({n2, n4, p6}, {p2, p4, a6}) *
             R.extended({n1, p4, p5}, {p1, a4, a5}) * R.extended({p1, p2, p3}, {a1, a2, a3});
      ++res.terms;
    }
  }
  res.lhs = cplx(lhs);
  res.rhs = cplx(rhs);
  const long double scale = std::abs(lhs) + std::abs(rhs);
  res.residual = scale < 1e-14L ? 0.0 : static_cast<double>(std::abs(lhs - rhs) / scale);
  return res;
}

}  // namespace qgeo
