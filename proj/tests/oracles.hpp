// Test-side numerical oracles, independent of the library's solver paths:
// closed-form eigenvalues for 2x2/3x3 symmetric matrices, a plain classical
// Jacobi eigensolver for small n, and brute-force Rayleigh-quotient search.
#ifndef RBX_TESTS_ORACLES_HPP
#define RBX_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rbx/rng.hpp"
#include "rbx/types.hpp"

namespace oracle {

// Largest root of the characteristic polynomial of [[a, b], [b, c]].
inline double top_eigenvalue_2x2(double a, double b, double c) {
  double mean = 0.5 * (a + c);
  double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return mean + disc;
}

inline double det3(const std::vector<double>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// Largest eigenvalue of a symmetric 3x3 matrix via the trigonometric solution
// of the characteristic cubic.
inline double top_eigenvalue_3x3(const std::vector<double>& m) {
  double p1 = m[1] * m[1] + m[2] * m[2] + m[5] * m[5];
  if (p1 == 0.0) return std::max({m[0], m[4], m[8]});
  double q = (m[0] + m[4] + m[8]) / 3.0;
  double p2 = (m[0] - q) * (m[0] - q) + (m[4] - q) * (m[4] - q) +
              (m[8] - q) * (m[8] - q) + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  std::vector<double> b(9);
  for (int i = 0; i < 9; ++i) b[i] = m[i] / p;
  b[0] -= q / p;
  b[4] -= q / p;
  b[8] -= q / p;
  double r = det3(b) / 2.0;
  r = std::clamp(r, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

// Classical Jacobi rotations; returns all eigenvalues, descending.
inline std::vector<double> eigenvalues_sym(std::size_t n,
                                           std::vector<double> a) {
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
    if (off <= 1e-300) break;
    double scale = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) scale = std::max(scale, std::fabs(a[i]));
    if (off <= 1e-15 * std::max(1.0, scale)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (apq == 0.0) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p];
          double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k];
          double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  std::sort(values.begin(), values.end(), std::greater<double>());
  return values;
}

inline rbx::Vector random_unit(rbx::Rng& rng, std::size_t n) {
  rbx::Vector v(n);
  double len = 0.0;
  do {
    for (double& x : v) x = rng.normal();
    len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
  } while (len < 1e-8);
  for (double& x : v) x /= len;
  return v;
}

// Maximum Rayleigh quotient over random unit probes.
inline double max_rayleigh(std::size_t n, const std::vector<double>& m,
                           std::size_t trials, rbx::Rng& rng) {
  double best = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    rbx::Vector v = random_unit(rng, n);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) quad += v[i] * m[i * n + j] * v[j];
    best = std::max(best, quad);
  }
  return best;
}

}  // namespace oracle

#endif  // RBX_TESTS_ORACLES_HPP
