#ifndef CONELAB_LAB_HPP
#define CONELAB_LAB_HPP

/**
 * @file lab.hpp
 * @brief Experiment orchestration: truncation sweeps, gap detection,
 *        localization diagnostics, decay-exponent fits, the shrinking-bump
 *        probe, the near-optimal bump search, and monotonicity checks.
 */

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conelab/analytic.hpp"
#include "conelab/eig.hpp"
#include "conelab/fem.hpp"
#include "conelab/geometry.hpp"

namespace conelab::lab {

using fem::Vec;

/// Mesh density held fixed in log-polar units across a sweep, so every
/// truncation point sees the same element size.
struct ResolutionPolicy {
  int radial_per_decade{12};
  int n_angular{24};
};

struct SolverOptions {
  double tol{1e-10};
  int max_iter{20000};
};

struct TruncationPoint {
  double r_min;
  double r_max;
};

struct SweepPlan {
  geom::DomainSpec domain;  ///< r_min / r_max are overridden per point
  geom::PotentialSpec potential;
  std::vector<TruncationPoint> schedule;  ///< strictly increasing in L
  ResolutionPolicy resolution;
  SolverOptions solver;
  /// V-mass reference window for the localization ratio; defaults to
  /// [r_a/10, 10 r_b] around the first bulge, or two centered decades for a
  /// pure cone.
  std::optional<std::pair<double, double>> reference_window;
  int workers{2};

  void validate() const;
};

/// Per-decade V-mass split of a discrete eigenvector.
struct ConcentrationDiagnostic {
  std::vector<double> edges;      ///< annulus edges in r, ascending
  std::vector<double> fractions;  ///< V-mass fraction per annulus, sums to 1
  double localization_ratio{0.0};
  double max_annulus_fraction{0.0};

  double decades() const;
};

ConcentrationDiagnostic concentration(const geom::Mesh& mesh,
                                      const geom::PotentialSpec& pot,
                                      const Vec& u_vertex,
                                      std::pair<double, double> window);

/// Log-log least-squares slope of the eigenvector along the mid-angle ray.
struct DecayFit {
  double r_lo{0.0};
  double r_hi{0.0};
  double slope{0.0};
  double slope_stderr{0.0};
  double predicted{0.0};  ///< alpha_pm at the limiting coupling
  int n_samples{0};
};

struct DecayOptions {
  std::pair<double, double> near_window;
  std::pair<double, double> far_window;
  /// Divide out sin(pi log(r/r_min) / L) before fitting (pure-cone mode).
  bool remove_envelope{false};
  double envelope_L{0.0};
};

/// Near/far windows from the first bulge ([100 r_min, r_a/10] and
/// [10 r_b, r_max/100]), or mid-band windows with envelope removal for a
/// pure cone.
DecayOptions default_decay_options(const geom::DomainSpec& domain);

struct DecayFitPair {
  DecayFit near;
  DecayFit far;
};

/// Requires a structured mesh; throws std::invalid_argument("decay window
/// too small") when a window holds fewer than 5 positive samples.
DecayFitPair decay_fit(const geom::Mesh& mesh, const Vec& u_vertex,
                       double mu_limit, const analytic::ConeSpectrum& spec,
                       const DecayOptions& opt);

enum class Classification {
  localized_minimizer,
  spreading_nonattained,
  inconclusive,
};

const char* to_string(Classification c);

/// Documented decision thresholds, calibrated on the two closed-form
/// regimes (attached minimizer vs. the exact spread truncated-cone mode).
struct ClassificationThresholds {
  /// Localized: localization ratio at the largest L at least this, and not
  /// below its value at the smallest L.
  double localized_ratio_min{0.9};
  /// Spreading: max annulus fraction times decade count at most this at
  /// every point (the exact spread mode gives about 2), and the ratio test
  /// above fails.
  double spreading_q_max{2.5};
  double trend_eps{1e-9};
};

struct SweepRow {
  double L{0.0};
  double r_min{0.0};
  double r_max{0.0};
  int dofs{0};
  double mu_h{0.0};
  double residual{0.0};
  int iterations{0};
  bool positivity_ok{true};
  ConcentrationDiagnostic conc;
  double slope_near{0.0};  ///< NaN when the window is unavailable
  double slope_far{0.0};
};

struct Verdict {
  double mu_extrapolated{0.0};  ///< intercept of mu(L) = mu_inf + c / L^2
  double fit_c{0.0};
  double mu_C{0.0};
  double gap_vs_muC{0.0};  ///< mu_C - mu_extrapolated
  Classification classification{Classification::inconclusive};
  double localization_first{0.0};
  double localization_last{0.0};
  double maxfrac_decades_low{0.0};
  double maxfrac_decades_high{0.0};
  std::string notes;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  Verdict verdict;
  bool solver_failure{false};
  std::string failure_message;
};

/// One fully solved truncation point.
struct PointSolve {
  geom::Mesh mesh;
  fem::AssembledSystem sys;
  eig::EigResult eig;
  double L{0.0};
};

PointSolve solve_point(const geom::DomainSpec& domain,
                       const geom::PotentialSpec& pot,
                       const ResolutionPolicy& res, const SolverOptions& opt);

Classification classify(const std::vector<SweepRow>& rows,
                        const ClassificationThresholds& thresholds = {});

SweepResult sweep_truncation(const SweepPlan& plan);

struct GapResult {
  SweepResult with_bulge;
  SweepResult without_bulge;
  std::vector<double> pointwise_gaps;  ///< mu_h(cone) - mu_h(cone u bulge)
  double gap_extrapolated{0.0};        ///< mu_C - mu_inf(cone u bulge)
  bool strict_gap_everywhere{false};
  bool below_muC{false};
};

/// Paired sweeps on compatible meshes (the cone mesh is a sub-complex of the
/// bulged mesh). With an empty bulge list both sweeps are the same run and
/// all gaps are zero.
GapResult gap_experiment(const geom::DomainSpec& cone,
                         const std::vector<geom::Bulge>& bulges,
                         const SweepPlan& plan);

struct ProbeEntry {
  double extra_angle;
  SweepResult sweep;
};

struct ProbeResult {
  std::vector<ProbeEntry> entries;  ///< in shrinking bulge order
  int crossover_index{-1};          ///< first spreading verdict, -1 if none
  bool monotone_transition{true};   ///< no localized verdict after it
};

/// Shrinking-bulge experiment under a fixed admissible potential well. The
/// crossover index is reported, never asserted.
ProbeResult nonattainment_probe(const geom::DomainSpec& cone,
                                const std::vector<double>& extra_angles,
                                double band_r_a, double band_r_b,
                                const geom::PotentialSpec& pot,
                                const SweepPlan& plan);

struct BumpPoint {
  double angle;
  double L;
  int dofs;
  double mu_B;
};

struct BumpSearchResult {
  std::vector<BumpPoint> series;
  double mu_X{0.0};
  bool decreasing{false};
  bool bounded_below{false};  ///< every mu_B >= mu_X (1 - tol)
};

struct BumpSpec {
  double angle;  ///< sector opening, grows toward theta_X
  TruncationPoint truncation;
};

/// Sector "bumps" of the ambient cone solved as whole domains; the series
/// must decrease toward mu_X = lambda of the full-angle section.
BumpSearchResult bump_search(double theta_X, const std::vector<BumpSpec>& bumps,
                             const ResolutionPolicy& res,
                             const SolverOptions& opt);

struct MonotonicityConfig {
  geom::DomainSpec cone;
  double band_r_a{1.0};
  double band_r_b{2.0};
  std::vector<double> bulge_extras;  ///< increasing widths
  int refine_levels{2};
  std::vector<double> w_amplitudes;  ///< increasing, first may be 0
  geom::WBump bump_template;         ///< amplitude overridden per step
  ResolutionPolicy resolution;
  SolverOptions solver;
};

struct MonotonicityReport {
  std::vector<double> mu_domain_chain;     ///< strictly decreasing expected
  std::vector<double> mu_refine_chain;     ///< non-increasing expected
  std::vector<double> mu_potential_chain;  ///< non-decreasing expected
  bool domain_ok{false};
  bool refine_ok{false};
  bool potential_ok{false};
  std::string offending;  ///< empty when all chains pass

  bool all_ok() const { return domain_ok && refine_ok && potential_ok; }
};

MonotonicityReport monotonicity_suite(const MonotonicityConfig& config);

// Result emission -----------------------------------------------------------

void write_results_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_verdict_json(std::ostream& os, const Verdict& verdict);
/// Per-point log-annulus histogram: "r_lo,r_hi,fraction" rows.
void write_annulus_csv(std::ostream& os, const SweepRow& row);
/// mu against 1/L^2 together with the fitted line.
void write_mu_fit_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                      const Verdict& verdict);

}  // namespace conelab::lab

#endif  // CONELAB_LAB_HPP
