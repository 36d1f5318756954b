#include "qgeo/quadrature.hpp"

#include "qgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace qgeo {

namespace {

double legendreRatio(int n, double x, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  dp = n * (x * p1 - p0) / (x * x - 1.0);
  return p1;
}

GaussRule buildGaussLegendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double dx = legendreRatio(n, x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendreRatio(n, x, dp);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const CFun& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> fc = f(c);
  std::complex<double> k = fc * kWgk[7];
  std::complex<double> g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    std::complex<double> s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

const GaussRule& gaussLegendre(int n) {
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, buildGaussLegendre(n)).first;
  return it->second;
}

std::complex<double> integratePanels(const CFun& f, double lo, double hi, int panels, int order) {
  const GaussRule& g = gaussLegendre(order);
  double width = (hi - lo) / panels;
  std::complex<double> total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * width;
    double c = a + 0.5 * width;
    std::complex<double> s = 0.0;
    for (int i = 0; i < order; ++i) s += g.w[i] * f(c + 0.5 * width * g.x[i]);
    total += 0.5 * width * s;
  }
  return total;
}

QuadResult integrateDoubling(const CFun& f, double lo, double hi, double relTol, int startPanels,
                             int maxPanels, int order, double absFloor) {
  QuadResult r;
  int panels = startPanels;
  std::complex<double> prev = integratePanels(f, lo, hi, panels, order);
  r.evaluations = panels * order;
  while (true) {
    panels *= 2;
    std::complex<double> cur = integratePanels(f, lo, hi, panels, order);
    r.evaluations += panels * order;
    double diff = std::abs(cur - prev);
    double scale = std::max(std::abs(cur), absFloor);
    r.value = cur;
    r.error = diff;
    if (diff <= relTol * scale) return r;
    if (panels >= maxPanels)
      throw AccuracyError("panel doubling did not converge", scale > 0 ? diff / scale : diff);
    prev = cur;
  }
}

QuadResult integrateGK(const CFun& f, double lo, double hi, double relTol, double absTol,
                       int maxIntervals) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, lo, hi);
  heap.push(first);
  std::complex<double> total = first.value;
  double err = first.error;
  int evals = 15;
  while (err > std::max(absTol, relTol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= maxIntervals)
      throw AccuracyError("Gauss-Kronrod subdivision limit reached",
                          std::abs(total) > 0 ? err / std::abs(total) : err);
    Segment s = heap.top();
    heap.pop();
    double mid = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, mid), r = gk15(f, mid, s.b);
    evals += 30;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // recompute the sum from the leaves to shed accumulated rounding
  std::complex<double> sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, evals};
}

QuadResult integrateRealLine(const CFun& f, double relTol, double tailTol, double Z0, double slab,
                             double Zmax, double center) {
  QuadResult r = integrateGK(f, center - Z0, center + Z0, relTol);
  double Z = Z0;
  while (true) {
    QuadResult left = integrateGK(f, center - Z - slab, center - Z, relTol, relTol * std::abs(r.value));
    QuadResult right = integrateGK(f, center + Z, center + Z + slab, relTol, relTol * std::abs(r.value));
    r.value += left.value + right.value;
    r.error += left.error + right.error;
    r.evaluations += left.evaluations + right.evaluations;
    Z += slab;
    double tail = std::abs(left.value) + std::abs(right.value);
    if (tail <= tailTol * std::abs(r.value)) return r;
    if (Z >= Zmax)
      throw AccuracyError("integrand tail did not decay within range",
                          std::abs(r.value) > 0 ? tail / std::abs(r.value) : tail);
  }
}

}  // namespace qgeo
