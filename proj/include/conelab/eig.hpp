#ifndef CONELAB_EIG_HPP
#define CONELAB_EIG_HPP

/**
 * @file eig.hpp
 * @brief Smallest generalized eigenpair of (K, M_V), resolvent solves, and
 *        the discrete resolvent identity check.
 */

#include <vector>

#include "conelab/fem.hpp"

namespace conelab::eig {

using fem::Vec;

struct EigResult {
  double mu_h;
  Vec u_h;              ///< M-normalized, sign fixed so the entry sum is positive
  double rel_residual;  ///< ||K u - mu M u|| / ||K u||
  int iterations;
  bool positivity_ok;   ///< no interior sign change beyond 1e-10 undershoot
  double positivity_undershoot;  ///< max(0, -min(u) / max(u))
};

/**
 * @brief Principal eigenpair by inverse power iteration on the pencil.
 *
 * Each step solves K z = M u with preconditioned conjugate gradients
 * (incomplete-Cholesky preconditioner), M-normalizes, and updates mu by the
 * Rayleigh quotient. The start vector is all ones on the free DOFs, so runs
 * are reproducible. Converged when rel_residual <= tol.
 *
 * Throws std::runtime_error on preconditioner/solver breakdown (K not
 * positive definite) and on non-convergence within max_iter.
 */
EigResult smallest_pair(const fem::AssembledSystem& sys, double tol,
                        int max_iter);

/**
 * @brief Solves (K - lambda M) z = rhs for a subcritical shift lambda < mu_h.
 *
 * Uses a sparse LDLT factorization with iterative refinement until the
 * backward-error residual ||rhs - A z|| / (||rhs|| + |A|_inf ||z||) drops
 * below 1e-12. A shift at or above mu_h makes the matrix indefinite and is
 * rejected as std::runtime_error("supercritical shift").
 */
Vec resolvent_solve(const fem::AssembledSystem& sys, double lambda,
                    const Vec& rhs);

/**
 * @brief Discrete resolvent identity defect.
 *
 * For each lambda computes
 *   d(lambda) = ||(K - lambda M)^{-1} M u_h - u_h / (mu_h - lambda)|| / ||u_h||
 * and returns the maximum. For a converged eigenpair this is exact linear
 * algebra, so the defect is bounded by solver tolerances. Every lambda must
 * satisfy 0 <= lambda < mu_h.
 */
double bs_identity_check(const fem::AssembledSystem& sys, const EigResult& eig,
                         const std::vector<double>& lambdas);

/// Rayleigh quotient after `steps` inverse iterations M-orthogonal to u_h;
/// an upper estimate of the second eigenvalue, used as the gap probe behind
/// the discrete uniqueness check.
double second_eigenvalue_probe(const fem::AssembledSystem& sys,
                               const EigResult& eig, int steps = 1);

/// Smallest Ritz value of a k-step Lanczos run on A (deterministic start);
/// positive for SPD matrices, used as the definiteness probe.
double lanczos_smallest_ritz(const fem::SparseSym& a, int steps = 20);

/// Smallest eigenvalue of a symmetric tridiagonal matrix (Sturm bisection).
double smallest_tridiag_eigenvalue(const std::vector<double>& diag,
                                   const std::vector<double>& off);

}  // namespace conelab::eig

#endif  // CONELAB_EIG_HPP
