#ifndef CONELAB_TESTS_ORACLES_HPP
#define CONELAB_TESTS_ORACLES_HPP

// Test-only finite-difference oracles. They share no numerics with the
// library paths they check: eigenvalues come from Sturm-count bisection on
// explicitly assembled tridiagonal systems.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracles {

// Smallest eigenvalue of A x = lambda B x with A symmetric tridiagonal and
// B diagonal positive definite.
inline double smallest_tridiag_gen_eigenvalue(
    const std::vector<double>& diag, const std::vector<double>& off,
    const std::vector<double>& bdiag) {
  const int n = static_cast<int>(diag.size());
  if (n == 0 || static_cast<int>(off.size()) != n - 1 ||
      static_cast<int>(bdiag.size()) != n) {
    throw std::invalid_argument("oracle: bad tridiagonal sizes");
  }

  auto count_below = [&](double x) {
    int count = 0;
    double d = diag[0] - x * bdiag[0];
    if (d < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      if (d == 0.0) d = 1e-300;
      d = diag[i] - x * bdiag[i] - off[i - 1] * off[i - 1] / d;
      if (d < 0.0) ++count;
    }
    return count;
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                          (i < n - 1 ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, (diag[i] - radius) / bdiag[i]);
    hi = std::max(hi, (diag[i] + radius) / bdiag[i]);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 300 && hi - lo > 1e-14 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Principal eigenvalue of -w'' = nu w on (0, length) with Dirichlet ends,
// discretized on n interior nodes.
inline double fd_dirichlet_interval(double length, int n) {
  const double h = length / (n + 1);
  const std::vector<double> diag(n, 2.0 / (h * h));
  const std::vector<double> off(n - 1, -1.0 / (h * h));
  const std::vector<double> bdiag(n, 1.0);
  return smallest_tridiag_gen_eigenvalue(diag, off, bdiag);
}

// Principal polar-cap eigenvalue via the substitution x = cos(t):
// minimize int (1-x^2) v'^2 / int v^2 over (cos theta0, 1] with v = 0 at the
// lower end and a free upper end (the weight vanishes there). Piecewise
// linear elements with midpoint stiffness and trapezoid mass.
inline double fd_cap_eigenvalue(double theta0, int n) {
  const double x0 = std::cos(theta0);
  const double h = (1.0 - x0) / n;
  auto p_mid = [&](int i) {  // p((x_i + x_{i+1})/2), interval i = 0..n-1
    const double x = x0 + (i + 0.5) * h;
    return 1.0 - x * x;
  };
  std::vector<double> diag(n), off(n - 1), bdiag(n);
  for (int i = 1; i <= n; ++i) {  // unknown v_i at x_i, i = 1..n
    const double left = p_mid(i - 1) / h;
    const double right = i < n ? p_mid(i) / h : 0.0;
    diag[i - 1] = left + right;
    bdiag[i - 1] = (i < n) ? h : h / 2.0;
    if (i < n) off[i - 1] = -p_mid(i) / h;
  }
  return smallest_tridiag_gen_eigenvalue(diag, off, bdiag);
}

// Richardson step assuming O(h^2): combine values at n and 2n nodes.
inline double richardson_h2(double coarse, double fine) {
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace oracles

#endif  // CONELAB_TESTS_ORACLES_HPP
