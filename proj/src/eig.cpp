#include "conelab/eig.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conelab::eig {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Solver =
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>;

double infinity_norm(const SpMat& a) {
  Vec row_sums = Vec::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      row_sums[it.row()] += std::abs(it.value());
    }
  }
  return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

}  // namespace

EigResult smallest_pair(const fem::AssembledSystem& sys, double tol,
                        int max_iter) {
  const SpMat& k_mat = sys.K.matrix();
  const SpMat& m_mat = sys.M.matrix();
  const int n = static_cast<int>(k_mat.rows());
  if (n == 0) throw std::invalid_argument("smallest_pair: empty system");
  if (max_iter < 1) throw std::invalid_argument("smallest_pair: max_iter < 1");

  Solver cg;
  cg.setTolerance(std::clamp(0.01 * tol, 1e-14, 1e-10));
  cg.setMaxIterations(8L * n);
  cg.compute(k_mat);
  if (cg.info() != Eigen::Success) {
    throw std::runtime_error(
        "smallest_pair: stiffness not positive definite (preconditioner "
        "breakdown)");
  }

  Vec u = Vec::Ones(n);
  double m_norm2 = u.dot(m_mat * u);
  if (!(m_norm2 > 0.0)) {
    throw std::runtime_error("smallest_pair: weighted mass annihilates the start vector");
  }
  u /= std::sqrt(m_norm2);
  double mu = u.dot(k_mat * u);

  double rel_residual = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < max_iter) {
    ++it;
    const Vec rhs = m_mat * u;
    Vec z = cg.solveWithGuess(rhs, Vec(u / mu));
    if (cg.info() == Eigen::NumericalIssue) {
      throw std::runtime_error("smallest_pair: inner PCG breakdown");
    }
    const double zm = z.dot(m_mat * z);
    if (!(zm > 0.0)) {
      throw std::runtime_error("smallest_pair: iterate left the admissible set");
    }
    z /= std::sqrt(zm);
    const Vec kz = k_mat * z;
    mu = z.dot(kz);
    rel_residual = (kz - mu * (m_mat * z)).norm() / kz.norm();
    u = z;
    if (rel_residual <= tol) break;
  }
  if (rel_residual > tol) {
    throw std::runtime_error(
        "smallest_pair: no convergence within max_iter iterations");
  }

  if (u.sum() < 0.0) u = -u;
  const double u_max = u.maxCoeff();
  const double u_min = u.minCoeff();
  const double undershoot =
      u_max > 0.0 ? std::max(0.0, -u_min / u_max)
                  : std::numeric_limits<double>::infinity();

  EigResult result;
  result.mu_h = mu;
  result.u_h = std::move(u);
  result.rel_residual = rel_residual;
  result.iterations = it;
  result.positivity_undershoot = undershoot;
  result.positivity_ok = undershoot <= 1e-10;
  return result;
}

Vec resolvent_solve(const fem::AssembledSystem& sys, double lambda,
                    const Vec& rhs) {
  const SpMat a = sys.K.matrix() - lambda * sys.M.matrix();
  Eigen::SimplicialLDLT<SpMat> ldlt(a);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
    throw std::runtime_error("supercritical shift");
  }
  const double a_norm = infinity_norm(a);
  const double rhs_norm = rhs.norm();
  Vec z = ldlt.solve(rhs);
  for (int k = 0; k < 6; ++k) {
    const Vec r = rhs - a * z;
    if (r.norm() <= 1e-12 * (rhs_norm + a_norm * z.norm())) return z;
    z += ldlt.solve(r);
  }
  if ((rhs - a * z).norm() > 1e-12 * (rhs_norm + a_norm * z.norm())) {
    throw std::runtime_error("resolvent_solve: residual tolerance not reached");
  }
  return z;
}

double bs_identity_check(const fem::AssembledSystem& sys, const EigResult& eig,
                         const std::vector<double>& lambdas) {
  const double u_norm = eig.u_h.norm();
  double worst = 0.0;
  for (double lambda : lambdas) {
    if (lambda < 0.0 || lambda >= eig.mu_h) {
      throw std::invalid_argument(
          "bs_identity_check: lambda must satisfy 0 <= lambda < mu_h");
    }
    const Vec z = resolvent_solve(sys, lambda, sys.M.apply(eig.u_h));
    const double defect =
        (z - eig.u_h / (eig.mu_h - lambda)).norm() / u_norm;
    worst = std::max(worst, defect);
  }
  return worst;
}

double second_eigenvalue_probe(const fem::AssembledSystem& sys,
                               const EigResult& eig, int steps) {
  const SpMat& k_mat = sys.K.matrix();
  const SpMat& m_mat = sys.M.matrix();
  const int n = static_cast<int>(k_mat.rows());
  if (n < 2) throw std::invalid_argument("second_eigenvalue_probe: dim < 2");

  Solver cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(8L * n);
  cg.compute(k_mat);
  if (cg.info() != Eigen::Success) {
    throw std::runtime_error("second_eigenvalue_probe: factorization failure");
  }

  auto deflate = [&](Vec& v) {
    v -= v.dot(m_mat * eig.u_h) * eig.u_h;  // u_h is M-normalized
  };

  // Deterministic start with a sign flip so it is not M-orthogonal to
  // nothing but u_h by accident.
  Vec v = Vec::Ones(n);
  for (int i = 0; i < n; i += 2) v[i] = -1.0;
  deflate(v);
  double vm = v.dot(m_mat * v);
  if (!(vm > 0.0)) throw std::runtime_error("second_eigenvalue_probe: degenerate start");
  v /= std::sqrt(vm);

  double quotient = v.dot(k_mat * v);
  for (int s = 0; s < steps; ++s) {
    Vec z = cg.solve(m_mat * v);
    deflate(z);
    const double zm = z.dot(m_mat * z);
    if (!(zm > 0.0)) break;
    z /= std::sqrt(zm);
    quotient = z.dot(k_mat * z);
    v = std::move(z);
  }
  return quotient;
}

double smallest_tridiag_eigenvalue(const std::vector<double>& diag,
                                   const std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw std::invalid_argument("empty tridiagonal matrix");
  if (static_cast<int>(off.size()) != n - 1) {
    throw std::invalid_argument("tridiagonal: off-diagonal size mismatch");
  }

  auto count_below = [&](double x) {
    // Negative pivots of LDL^T of (T - x I).
    int count = 0;
    double d = diag[0] - x;
    if (d < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      if (d == 0.0) d = 1e-300;
      d = diag[i] - x - off[i - 1] * off[i - 1] / d;
      if (d < 0.0) ++count;
    }
    return count;
  };

  double lo = diag[0];
  double hi = diag[0];
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                          (i < n - 1 ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 200 && hi - lo > 1e-14 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double lanczos_smallest_ritz(const fem::SparseSym& a, int steps) {
  const SpMat& mat = a.matrix();
  const int n = static_cast<int>(mat.rows());
  if (n == 0) throw std::invalid_argument("lanczos: empty matrix");
  steps = std::min(steps, n);

  std::vector<Vec> basis;
  basis.reserve(steps);
  std::vector<double> alpha;
  std::vector<double> beta;

  Vec q = Vec::Ones(n);
  q /= q.norm();
  basis.push_back(q);
  Vec prev = Vec::Zero(n);
  double b = 0.0;
  for (int k = 0; k < steps; ++k) {
    Vec w = mat * basis.back();
    const double al = basis.back().dot(w);
    alpha.push_back(al);
    if (k + 1 == steps) break;
    w -= al * basis.back();
    if (k > 0) w -= b * prev;
    for (const Vec& v : basis) w -= v.dot(w) * v;  // full reorthogonalization
    b = w.norm();
    if (b < 1e-14) break;
    beta.push_back(b);
    prev = basis.back();
    basis.push_back(w / b);
  }
  beta.resize(alpha.size() - 1);
  return smallest_tridiag_eigenvalue(alpha, beta);
}

}  // namespace conelab::eig
