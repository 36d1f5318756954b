#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qgeo {

using CFun = std::function<std::complex<double>(double)>;

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule; cached per n.
const GaussRule& gaussLegendre(int n);

// Fixed composite rule: `panels` equal panels, `order` points each.
std::complex<double> integratePanels(const CFun& f, double lo, double hi, int panels,
                                     int order = 20);

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;
  int evaluations = 0;
};

// Composite Gauss-Legendre, doubling the panel count until successive values
// differ by less than relTol (relative to max(|value|, absFloor)).
QuadResult integrateDoubling(const CFun& f, double lo, double hi, double relTol,
                             int startPanels = 32, int maxPanels = 1 << 14,
                             int order = 20, double absFloor = 0.0);

// Adaptive Gauss-Kronrod 7/15 with bisection.
QuadResult integrateGK(const CFun& f, double lo, double hi, double relTol,
                       double absTol = 0.0, int maxIntervals = 2000);

// Integral over the real line: start on [-Z0, Z0], add slabs of width `slab`
// on both sides until the added tail is below tailTol of the running value.
QuadResult integrateRealLine(const CFun& f, double relTol, double tailTol,
                             double Z0 = 4.0, double slab = 2.0, double Zmax = 200.0,
                             double center = 0.0);

}  // namespace qgeo
