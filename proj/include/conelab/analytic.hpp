#ifndef CONELAB_ANALYTIC_HPP
#define CONELAB_ANALYTIC_HPP

/**
 * @file analytic.hpp
 * @brief Closed-form spectral objects of planar/spherical cones with the
 *        inverse-square weight.
 *
 * Everything in this header is exact (up to the stated solver tolerances for
 * the cap eigenvalue) and serves as ground truth for the finite-element
 * pipeline: cross-section eigenvalues, the critical coupling, radial
 * exponents, separated solutions, and the principal mode of a radially
 * truncated cone.
 */

#include <functional>
#include <optional>
#include <variant>

namespace conelab::analytic {

/// Planar angular sector of opening `theta` on S^1 (dimension must be 2).
struct Arc {
  double theta;  ///< opening angle, 0 < theta < 2*pi
};

/// Geodesic polar cap of half-angle `theta0` on S^2 (dimension must be 3).
struct Cap {
  double theta0;  ///< polar half-angle, 0 < theta0 < pi
};

/// User-supplied principal cross-section eigenvalue, any dimension >= 2.
struct Explicit {
  double lambda_D;  ///< must be positive
};

/// Cross-section descriptor of the cone {(r, omega) : r > 0, omega in D}.
struct CrossSection {
  int dimension{2};
  std::variant<Arc, Cap, Explicit> shape{Arc{}};

  /// Throws std::invalid_argument on any constraint violation.
  void validate() const;
};

/// Principal cross-section eigenvalue together with the critical coupling
/// mu_C = (N-2)^2/4 + lambda_D.
struct ConeSpectrum {
  double lambda_D;
  double mu_C;
  int N;
};

/// Roots of alpha^2 + (N-2) alpha + (mu - lambda_D) = 0, ordered
/// alpha_plus >= alpha_minus.
struct ExponentPair {
  double alpha_plus;
  double alpha_minus;
  double discriminant;  ///< (N-2)^2 - 4 (mu - lambda_D)
};

/**
 * @brief Radial factor of a separated solution.
 *
 * Evaluates a * r^{alpha_plus} + b * r^{alpha_minus}, or, in log mode,
 * r^{alpha} * log r with alpha the double root -(N-2)/2.
 */
struct RadialProfile {
  double a{0.0};
  double b{0.0};
  ExponentPair exponents{};
  bool log_mode{false};

  double operator()(double r) const;
};

/// Result of cross_section_eigenpair. The sampler is sup-normalized to 1,
/// positive inside the section and zero on its boundary; it is absent for
/// Explicit cross-sections.
struct CrossSectionMode {
  double lambda_D;
  std::optional<std::function<double(double)>> v_D;
};

/**
 * @brief Principal Dirichlet eigenpair of the spherical Laplacian on D.
 *
 * Arc: lambda_D = (pi/theta)^2 with v_D(phi) = sin(pi phi / theta), exact.
 * Cap: bisection shooting (fixed-step RK4) on the polar-cap equation
 *      -(sin t v')' = lambda sin t v with regularity at t = 0 and
 *      v(theta0) = 0; eigenvalue tolerance 1e-10.
 * Explicit: pass-through, no sampler.
 *
 * Throws std::invalid_argument on an invalid cross-section and
 * std::runtime_error if the shooting bisection fails to converge.
 */
CrossSectionMode cross_section_eigenpair(const CrossSection& cs);

/// mu_C = (N-2)^2/4 + lambda_D. Requires N >= 2 and lambda_D > 0.
ConeSpectrum hardy_constant(int N, double lambda_D);

/**
 * @brief Radial exponents alpha_pm for coupling mu.
 *
 * Defined for mu <= (N-2)^2/4 + lambda_D; a negative discriminant is a hard
 * error (std::domain_error, "supercritical coupling").
 */
ExponentPair exponents(int N, double lambda_D, double mu);

/// Profile a r^{alpha_plus} + b r^{alpha_minus}; a, b >= 0.
RadialProfile separated_solution(const ConeSpectrum& spec, double mu, double a,
                                 double b);

/// The companion profile r^{-(N-2)/2} log r at the critical coupling.
RadialProfile log_critical_profile(const ConeSpectrum& spec);

/**
 * @brief Finite-difference residual of the radial equation at radius r.
 *
 * Evaluates -u'' - (N-1)/r u' - (mu - lambda_D)/r^2 u by central differences
 * with step h = r * 1e-5. Exact separated solutions give values at the
 * O(h^2) floor.
 */
double euler_residual(const RadialProfile& u, const ConeSpectrum& spec,
                      double mu, double r);

/**
 * @brief Principal Dirichlet mode of the cone truncated to r in (r_min, r_max).
 *
 * With L = log(r_max/r_min) the eigenvalue is mu_C + (pi/L)^2 and the radial
 * factor is r^{-(N-2)/2} sin(pi log(r/r_min) / L); the full eigenfunction is
 * radial(r) * v_D(omega). This is the exact ground truth the FEM sweeps are
 * checked against.
 */
struct TruncatedConeMode {
  double mu;
  double r_min;
  double r_max;
  double L;  ///< log(r_max / r_min)
  int N;

  double radial(double r) const;
};

/// Throws std::invalid_argument unless 0 < r_min < r_max.
TruncatedConeMode truncated_cone_mu(const ConeSpectrum& spec, double r_min,
                                    double r_max);

}  // namespace conelab::analytic

#endif  // CONELAB_ANALYTIC_HPP
