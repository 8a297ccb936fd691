#include "conelab/analytic.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace conelab::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCapEigTol = 1e-10;
constexpr int kCapRk4Steps = 4000;
constexpr int kMaxBisection = 200;

struct CapShot {
  double v_end;
  std::vector<double> samples;  // v at t_k = k * theta0 / steps, k = 0..steps
};

// Integrates v'' = -cot(t) v' - lambda v across (0, theta0] with fixed-step
// RK4. The first grid point is seeded from the regular series
// v = 1 - (lambda/4) t^2 + lambda(lambda - 2/3)/64 t^4, which keeps the
// cot singularity out of the march.
CapShot shoot_cap(double lambda, double theta0, bool keep_samples) {
  const int n = kCapRk4Steps;
  const double h = theta0 / n;

  CapShot shot;
  if (keep_samples) {
    shot.samples.reserve(n + 1);
    shot.samples.push_back(1.0);
  }

  const double a2 = -lambda / 4.0;
  const double a4 = lambda * (lambda - 2.0 / 3.0) / 64.0;
  double t = h;
  double v = 1.0 + a2 * t * t + a4 * t * t * t * t;
  double w = 2.0 * a2 * t + 4.0 * a4 * t * t * t;  // v'
  if (keep_samples) shot.samples.push_back(v);

  auto rhs = [lambda](double tt, double vv, double ww, double& dv,
                      double& dw) {
    dv = ww;
    dw = -ww / std::tan(tt) - lambda * vv;
  };

  for (int k = 1; k < n; ++k) {
    double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
    rhs(t, v, w, k1v, k1w);
    rhs(t + 0.5 * h, v + 0.5 * h * k1v, w + 0.5 * h * k1w, k2v, k2w);
    rhs(t + 0.5 * h, v + 0.5 * h * k2v, w + 0.5 * h * k2w, k3v, k3w);
    rhs(t + h, v + h * k3v, w + h * k3w, k4v, k4w);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    t += h;
    if (keep_samples) shot.samples.push_back(v);
  }
  shot.v_end = v;
  return shot;
}

double cap_lambda(double theta0) {
  // Walk lambda up geometrically until the endpoint value changes sign,
  // then bisect. At lambda -> 0 the regular solution is constant, so the
  // endpoint starts positive.
  double lo = 1e-4;
  double f_lo = shoot_cap(lo, theta0, false).v_end;
  if (f_lo <= 0.0) {
    throw std::runtime_error("cap shooting: bracket start not positive");
  }
  double hi = lo;
  double f_hi = f_lo;
  bool bracketed = false;
  for (int k = 0; k < 400; ++k) {
    hi *= 1.2;
    f_hi = shoot_cap(hi, theta0, false).v_end;
    if (f_hi < 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    f_lo = f_hi;
  }
  if (!bracketed) {
    throw std::runtime_error("cap shooting: no sign change up to lambda bound");
  }

  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = shoot_cap(mid, theta0, false).v_end;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= kCapEigTol * std::max(1.0, hi)) {
      return 0.5 * (lo + hi);
    }
  }
  throw std::runtime_error(
      "cap shooting: bisection did not converge in max steps");
}

std::function<double(double)> cap_sampler(double lambda, double theta0) {
  CapShot shot = shoot_cap(lambda, theta0, true);
  auto samples = std::make_shared<std::vector<double>>(std::move(shot.samples));
  // Pin the Dirichlet end and sup-normalize.
  samples->back() = 0.0;
  double vmax = 0.0;
  for (double s : *samples) vmax = std::max(vmax, std::abs(s));
  for (double& s : *samples) s /= vmax;

  const int n = static_cast<int>(samples->size()) - 1;
  return [samples, theta0, n](double t) {
    if (t <= 0.0 || t >= theta0) return 0.0;
    const double x = t / theta0 * n;
    const int i = std::min(static_cast<int>(x), n - 1);
    const double f = x - i;
    return (1.0 - f) * (*samples)[i] + f * (*samples)[i + 1];
  };
}

}  // namespace

void CrossSection::validate() const {
  if (dimension < 2) {
    throw std::invalid_argument("cross-section dimension must be >= 2");
  }
  if (const auto* arc = std::get_if<Arc>(&shape)) {
    if (dimension != 2) {
      throw std::invalid_argument("arc cross-section requires dimension 2");
    }
    if (!(arc->theta > 0.0) || !(arc->theta < 2.0 * kPi)) {
      throw std::invalid_argument("arc angle must lie in (0, 2*pi)");
    }
  } else if (const auto* cap = std::get_if<Cap>(&shape)) {
    if (dimension != 3) {
      throw std::invalid_argument("cap cross-section requires dimension 3");
    }
    if (!(cap->theta0 > 0.0) || !(cap->theta0 < kPi)) {
      throw std::invalid_argument("cap angle must lie in (0, pi)");
    }
  } else {
    const auto& ex = std::get<Explicit>(shape);
    if (!(ex.lambda_D > 0.0)) {
      throw std::invalid_argument("explicit lambda_D must be positive");
    }
  }
}

CrossSectionMode cross_section_eigenpair(const CrossSection& cs) {
  cs.validate();
  if (const auto* arc = std::get_if<Arc>(&cs.shape)) {
    const double theta = arc->theta;
    const double lambda = (kPi / theta) * (kPi / theta);
    auto v = [theta](double phi) {
      if (phi <= 0.0 || phi >= theta) return 0.0;
      return std::sin(kPi * phi / theta);
    };
    return {lambda, v};
  }
  if (const auto* cap = std::get_if<Cap>(&cs.shape)) {
    const double lambda = cap_lambda(cap->theta0);
    return {lambda, cap_sampler(lambda, cap->theta0)};
  }
  return {std::get<Explicit>(cs.shape).lambda_D, std::nullopt};
}

ConeSpectrum hardy_constant(int N, double lambda_D) {
  if (N < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(lambda_D > 0.0)) {
    throw std::invalid_argument("lambda_D must be positive");
  }
  const double q = 0.25 * (N - 2) * (N - 2);
  return {lambda_D, q + lambda_D, N};
}

ExponentPair exponents(int N, double lambda_D, double mu) {
  if (N < 2) throw std::invalid_argument("dimension must be >= 2");
  const double p = static_cast<double>(N - 2);
  double disc = p * p - 4.0 * (mu - lambda_D);
  const double scale = p * p + 4.0 * (std::abs(mu) + std::abs(lambda_D));
  if (disc < -1e-12 * std::max(1.0, scale)) {
    throw std::domain_error("supercritical coupling");
  }
  if (std::abs(disc) <= 1e-12 * std::max(1.0, scale)) {
    disc = 0.0;  // mu == mu_C up to roundoff: exact double root
  }
  const double root = std::sqrt(disc);
  return {0.5 * (-p + root), 0.5 * (-p - root), disc};
}

namespace {

// Extended precision keeps the central-difference residual floor below
// 1e-8 * |u| / r^2 at step h = r * 1e-5.
long double eval_profile(const RadialProfile& u, long double r) {
  if (u.log_mode) {
    return std::pow(r, static_cast<long double>(u.exponents.alpha_plus)) *
           std::log(r);
  }
  return static_cast<long double>(u.a) *
             std::pow(r, static_cast<long double>(u.exponents.alpha_plus)) +
         static_cast<long double>(u.b) *
             std::pow(r, static_cast<long double>(u.exponents.alpha_minus));
}

}  // namespace

double RadialProfile::operator()(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  return static_cast<double>(eval_profile(*this, r));
}

RadialProfile separated_solution(const ConeSpectrum& spec, double mu, double a,
                                 double b) {
  if (a < 0.0 || b < 0.0) {
    throw std::invalid_argument("profile coefficients must be nonnegative");
  }
  return {a, b, exponents(spec.N, spec.lambda_D, mu), false};
}

RadialProfile log_critical_profile(const ConeSpectrum& spec) {
  return {0.0, 0.0, exponents(spec.N, spec.lambda_D, spec.mu_C), true};
}

double euler_residual(const RadialProfile& u, const ConeSpectrum& spec,
                      double mu, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const long double rl = r;
  const long double h = rl * 1e-5L;
  const long double up = eval_profile(u, rl + h);
  const long double um = eval_profile(u, rl - h);
  const long double u0 = eval_profile(u, rl);
  const long double d2 = (up - 2.0L * u0 + um) / (h * h);
  const long double d1 = (up - um) / (2.0L * h);
  const long double res = -d2 - (spec.N - 1) / rl * d1 -
                          (static_cast<long double>(mu) - spec.lambda_D) /
                              (rl * rl) * u0;
  return static_cast<double>(res);
}

double TruncatedConeMode::radial(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const double s = std::log(r / r_min);
  return std::pow(r, -0.5 * (N - 2)) * std::sin(kPi * s / L);
}

TruncatedConeMode truncated_cone_mu(const ConeSpectrum& spec, double r_min,
                                    double r_max) {
  if (!(r_min > 0.0) || !(r_min < r_max)) {
    throw std::invalid_argument("truncation radii must satisfy 0 < r_min < r_max");
  }
  const double L = std::log(r_max / r_min);
  const double mu = spec.mu_C + (kPi / L) * (kPi / L);
  return {mu, r_min, r_max, L, spec.N};
}

}  // namespace conelab::analytic
