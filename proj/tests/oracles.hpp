#pragma once

#include <cmath>
#include <limits>

#include "lipgm/numerics.hpp"

namespace lipgm::testing {

// log(ab - c^2) - (s11 a + s22 b + 2 s12 c) - 2 lambda |c|.
inline double glasso2(const SymMatrix& s, double lambda, double a, double b, double c) {
  const double det = a * b - c * c;
  if (a <= 0.0 || det <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(det) - (s(0, 0) * a + s(1, 1) * b + 2.0 * s(0, 1) * c) - 2.0 * lambda * std::abs(c);
}

// Brute-force maximization over a 3-D grid that is repeatedly re-centered
// on the best point and shrunk.
inline double glasso2_grid_max(const SymMatrix& s, double lambda) {
  double ca = 1.0 / s(0, 0);
  double cb = 1.0 / s(1, 1);
  double cc = 0.0;
  double ra = 2.0 * ca;
  double rb = 2.0 * cb;
  double rc = std::sqrt(ca * cb) * 2.0;
  double best = glasso2(s, lambda, ca, cb, cc);
  const int g = 30;
  for (int round = 0; round < 30; ++round) {
    double ba = ca;
    double bb = cb;
    double bc = cc;
    for (int i = -g; i <= g; ++i)
      for (int j = -g; j <= g; ++j)
        for (int k = -g; k <= g; ++k) {
          const double a = ca + ra * i / g;
          const double b = cb + rb * j / g;
          const double c = cc + rc * k / g;
          const double v = glasso2(s, lambda, a, b, c);
          if (v > best) {
            best = v;
            ba = a;
            bb = b;
            bc = c;
          }
        }
    ca = ba;
    cb = bb;
    cc = bc;
    ra *= 0.5;
    rb *= 0.5;
    rc *= 0.5;
  }
  return best;
}

}  // namespace lipgm::testing
