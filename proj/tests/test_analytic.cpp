#include "conelab/analytic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace conelab;
namespace an = conelab::analytic;

namespace {
constexpr double kPi = std::numbers::pi;

an::CrossSection arc(double theta) { return {2, an::Arc{theta}}; }
an::CrossSection cap(double theta0) { return {3, an::Cap{theta0}}; }
}  // namespace

TEST_CASE("arc eigenpair matches the finite-difference oracle and (pi/theta)^2") {
  const double theta = kPi / 2.0;
  const auto mode = an::cross_section_eigenpair(arc(theta));

  CHECK(mode.lambda_D == doctest::Approx(4.0).epsilon(1e-12));

  // Independent oracle: Dirichlet FD eigenvalue on (0, theta), Richardson
  // extrapolated.
  const double coarse = oracles::fd_dirichlet_interval(theta, 1000);
  const double fine = oracles::fd_dirichlet_interval(theta, 2000);
  const double oracle = oracles::richardson_h2(coarse, fine);
  CHECK(oracle == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(mode.lambda_D == doctest::Approx(oracle).epsilon(1e-8));

  REQUIRE(mode.v_D.has_value());
  const auto& v = *mode.v_D;
  CHECK(v(theta / 2.0) == doctest::Approx(1.0).epsilon(1e-14));  // sup norm
  CHECK(v(theta / 4.0) == doctest::Approx(std::sin(kPi / 4.0)).epsilon(1e-14));
  CHECK(v(0.0) == 0.0);
  CHECK(v(theta) == 0.0);
}

TEST_CASE("arc eigenvalues follow (pi/theta)^2 for general openings") {
  for (double theta : {0.3, 1.0, kPi, 1.75 * kPi}) {
    const auto mode = an::cross_section_eigenpair(arc(theta));
    CHECK(mode.lambda_D ==
          doctest::Approx((kPi / theta) * (kPi / theta)).epsilon(1e-12));
  }
}

TEST_CASE("hemisphere cap eigenpair is the l=1 zonal harmonic") {
  const auto mode = an::cross_section_eigenpair(cap(kPi / 2.0));
  CHECK(std::abs(mode.lambda_D - 2.0) <= 1e-8);

  REQUIRE(mode.v_D.has_value());
  const auto& v = *mode.v_D;
  for (double t : {0.2, 0.7, 1.2, 1.5}) {
    CHECK(v(t) == doctest::Approx(std::cos(t)).epsilon(1e-6));
  }
  CHECK(v(kPi / 2.0) == 0.0);
}

TEST_CASE("cap shooting agrees with the Legendre finite-difference oracle") {
  for (double theta0 : {0.6, 1.0, 2.2}) {
    const auto mode = an::cross_section_eigenpair(cap(theta0));
    const double coarse = oracles::fd_cap_eigenvalue(theta0, 2000);
    const double fine = oracles::fd_cap_eigenvalue(theta0, 4000);
    const double oracle = oracles::richardson_h2(coarse, fine);
    CHECK(mode.lambda_D ==
          doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("explicit cross-section passes through with no sampler") {
  const an::CrossSection cs{5, an::Explicit{7.3}};
  const auto mode = an::cross_section_eigenpair(cs);
  CHECK(mode.lambda_D == 7.3);
  CHECK_FALSE(mode.v_D.has_value());
}

TEST_CASE("cross-section validation rejects bad descriptors") {
  CHECK_THROWS_AS(an::cross_section_eigenpair({2, an::Cap{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::cross_section_eigenpair({3, an::Arc{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::cross_section_eigenpair({2, an::Arc{-0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::cross_section_eigenpair({2, an::Arc{2.5 * kPi}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::cross_section_eigenpair({3, an::Cap{3.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::cross_section_eigenpair({4, an::Explicit{-1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(an::hardy_constant(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(an::hardy_constant(3, 0.0), std::invalid_argument);
}

TEST_CASE("critical coupling values") {
  CHECK(an::hardy_constant(2, 4.0).mu_C == 4.0);
  CHECK(an::hardy_constant(3, 2.0).mu_C == 2.25);
  // lambda_D -> 0 recovers the free Hardy constant (N-2)^2/4.
  CHECK(an::hardy_constant(3, 1e-9).mu_C ==
        doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("exponents: critical double root and simple examples") {
  SUBCASE("double root at mu_C") {
    for (int n : {2, 3, 4, 7}) {
      const auto spec = an::hardy_constant(n, 2.7);
      const auto e = an::exponents(n, spec.lambda_D, spec.mu_C);
      CHECK(e.alpha_plus == doctest::Approx(-(n - 2) / 2.0).epsilon(1e-13));
      CHECK(e.alpha_minus == doctest::Approx(-(n - 2) / 2.0).epsilon(1e-13));
      CHECK(e.discriminant == 0.0);
    }
  }
  SUBCASE("harmonic half-plane mode") {
    const auto e = an::exponents(2, 1.0, 0.0);
    CHECK(e.alpha_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.alpha_minus == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("hemisphere at mu = 2") {
    const auto e = an::exponents(3, 2.0, 2.0);
    CHECK(e.alpha_plus == doctest::Approx(0.0));
    CHECK(e.alpha_minus == doctest::Approx(-1.0));
  }
  SUBCASE("supercritical coupling is rejected") {
    CHECK_THROWS_AS(an::exponents(2, 4.0, 4.0 + 1e-6), std::domain_error);
    CHECK_THROWS_AS(an::exponents(3, 2.0, 3.0), std::domain_error);
  }
}

TEST_CASE("Vieta identities hold over random admissible couplings") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_real_distribution<double> lam(0.05, 25.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const int n = dim(rng);
    const double lambda_d = lam(rng);
    const double mu_c = an::hardy_constant(n, lambda_d).mu_C;
    const double mu = mu_c - frac(rng) * (mu_c + 10.0);
    const auto e = an::exponents(n, lambda_d, mu);
    const double scale =
        std::max({1.0, std::abs(e.alpha_plus), std::abs(e.alpha_minus)});
    CHECK(std::abs(e.alpha_plus + e.alpha_minus + (n - 2)) <= 1e-12 * scale);
    CHECK(std::abs(e.alpha_plus * e.alpha_minus - (mu - lambda_d)) <=
          1e-12 * std::max(1.0, std::abs(mu - lambda_d)));
    CHECK(e.alpha_plus >= e.alpha_minus);
  }
}

TEST_CASE("separated solutions evaluate as the expected power laws") {
  SUBCASE("pure growing mode r on the half-plane") {
    const auto spec = an::hardy_constant(2, 1.0);
    const auto u = an::separated_solution(spec, 0.0, 1.0, 0.0);
    for (double r : {0.1, 1.0, 2.5, 700.0}) {
      CHECK(u(r) == doctest::Approx(r).epsilon(1e-14));
    }
  }
  SUBCASE("critical profile r^{-(N-2)/2}") {
    const auto spec = an::hardy_constant(4, 3.0);
    const auto u = an::separated_solution(spec, spec.mu_C, 0.0, 1.0);
    for (double r : {0.2, 1.0, 9.0}) {
      CHECK(u(r) == doctest::Approx(1.0 / r).epsilon(1e-13));
    }
  }
  SUBCASE("mu = lambda_D gives alpha = {0, -(N-2)}") {
    const auto spec = an::hardy_constant(4, 5.0);
    const auto u = an::separated_solution(spec, spec.lambda_D, 2.0, 3.0);
    for (double r : {0.5, 1.0, 2.0}) {
      CHECK(u(r) == doctest::Approx(2.0 + 3.0 / (r * r)).epsilon(1e-13));
    }
  }
  SUBCASE("negative coefficients are rejected") {
    const auto spec = an::hardy_constant(2, 1.0);
    CHECK_THROWS_AS(an::separated_solution(spec, 0.0, -1.0, 0.0),
                    std::invalid_argument);
  }
}

namespace {
double residual_floor(const an::RadialProfile& u, const an::ConeSpectrum& spec,
                      double mu, double r) {
  const double scale = std::abs(u(r)) / (r * r);
  return 1e-8 * std::max(1.0, std::abs(mu - spec.lambda_D)) *
         std::max(scale, 1e-30);
}
}  // namespace

TEST_CASE("euler residual vanishes on exact solutions") {
  SUBCASE("separated solutions at r = 1") {
    const auto spec = an::hardy_constant(3, 2.0);
    for (double mu : {-1.0, 0.0, 1.5, spec.mu_C}) {
      const auto u = an::separated_solution(spec, mu, 1.0, 2.0);
      CHECK(std::abs(an::euler_residual(u, spec, mu, 1.0)) <=
            residual_floor(u, spec, mu, 1.0));
    }
  }
  SUBCASE("log companion profile at the critical coupling") {
    const auto spec = an::hardy_constant(5, 1.3);
    const auto u = an::log_critical_profile(spec);
    const double r = std::exp(1.0);
    CHECK(std::abs(an::euler_residual(u, spec, spec.mu_C, r)) <=
          residual_floor(u, spec, spec.mu_C, r));
  }
  SUBCASE("100 random radii in [1e-3, 1e3]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> logr(std::log(1e-3), std::log(1e3));
    const auto spec = an::hardy_constant(3, 2.0);
    const auto u = an::separated_solution(spec, 1.0, 0.7, 1.3);
    const auto w = an::log_critical_profile(spec);
    for (int k = 0; k < 100; ++k) {
      const double r = std::exp(logr(rng));
      CHECK(std::abs(an::euler_residual(u, spec, 1.0, r)) <=
            residual_floor(u, spec, 1.0, r));
      if (std::abs(std::log(r)) > 1e-2) {  // log profile vanishes at r = 1
        CHECK(std::abs(an::euler_residual(w, spec, spec.mu_C, r)) <=
              residual_floor(w, spec, spec.mu_C, r) +
                  1e-8 * std::pow(r, -0.5 * (spec.N - 2)) / (r * r));
      }
    }
  }
  SUBCASE("a non-solution keeps an O(1) residual") {
    const auto spec = an::hardy_constant(2, 1.0);
    const an::RadialProfile u{1.0, 0.0, {2.0, -2.0, 16.0}, false};  // r^2
    CHECK(an::euler_residual(u, spec, 0.0, 1.0) ==
          doctest::Approx(-3.0).epsilon(1e-6));
  }
}

TEST_CASE("truncated cone mode: eigenvalue law and FD oracle") {
  const auto spec = an::hardy_constant(2, 4.0);

  SUBCASE("frozen value for the six-decade band") {
    const auto mode = an::truncated_cone_mu(spec, 1e-3, 1e3);
    CHECK(mode.L == doctest::Approx(6.0 * std::log(10.0)).epsilon(1e-14));
    CHECK(mode.mu == doctest::Approx(4.05171).epsilon(2e-5));
  }

  SUBCASE("agrees with the 1D finite-difference oracle at O(h^2)") {
    const auto mode = an::truncated_cone_mu(spec, 1e-3, 1e3);
    const double exact_shift = mode.mu - spec.mu_C;
    const double err_coarse =
        std::abs(oracles::fd_dirichlet_interval(mode.L, 500) - exact_shift);
    const double err_fine =
        std::abs(oracles::fd_dirichlet_interval(mode.L, 1000) - exact_shift);
    CHECK(err_fine < err_coarse);
    CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.15));
  }

  SUBCASE("L = pi gives mu_C + 1") {
    const auto mode = an::truncated_cone_mu(spec, 1.0, std::exp(kPi));
    CHECK(mode.mu == doctest::Approx(spec.mu_C + 1.0).epsilon(1e-12));
  }

  SUBCASE("monotone decay to mu_C as the band widens") {
    double prev = std::numeric_limits<double>::infinity();
    for (double decades : {2.0, 4.0, 8.0, 16.0}) {
      const double r = std::pow(10.0, decades / 2.0);
      const double mu = an::truncated_cone_mu(spec, 1.0 / r, r).mu;
      CHECK(mu > spec.mu_C);
      CHECK(mu < prev);
      prev = mu;
    }
  }

  SUBCASE("radial factor is the sine mode in log r") {
    const auto mode = an::truncated_cone_mu(spec, 0.01, 100.0);
    const double r_mid = 1.0;  // center of the band
    CHECK(mode.radial(r_mid) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mode.radial(0.01) == doctest::Approx(0.0));
    CHECK(std::abs(mode.radial(100.0)) <= 1e-12);
  }

  SUBCASE("invalid truncation radii are rejected") {
    CHECK_THROWS_AS(an::truncated_cone_mu(spec, 2.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(an::truncated_cone_mu(spec, 0.0, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("truncated cone mode carries the dimensional prefactor") {
  const auto spec = an::hardy_constant(4, 2.0);
  const auto mode = an::truncated_cone_mu(spec, 0.1, 10.0);
  const double r = 3.0;
  const double expected = std::pow(r, -1.0) *
                          std::sin(kPi * std::log(r / 0.1) / mode.L);
  CHECK(mode.radial(r) == doctest::Approx(expected).epsilon(1e-13));
}
