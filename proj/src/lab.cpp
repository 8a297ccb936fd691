#include "conelab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace conelab::lab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

analytic::ConeSpectrum arc_spectrum(double theta) {
  return analytic::hardy_constant(2, (kPi / theta) * (kPi / theta));
}

std::pair<double, double> default_window(const geom::DomainSpec& domain) {
  if (!domain.bulges.empty()) {
    const auto& b = domain.bulges.front();
    return {b.r_a / 10.0, 10.0 * b.r_b};
  }
  const double center = std::sqrt(domain.r_min * domain.r_max);
  return {center / 10.0, center * 10.0};
}

struct LineFit {
  double intercept;
  double slope;
  double slope_stderr;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - intercept - slope * x[i];
    ss_res += r * r;
  }
  const double stderr_ =
      n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return {intercept, slope, stderr_};
}

SweepRow run_point(const SweepPlan& plan, const TruncationPoint& tp) {
  geom::DomainSpec dom = plan.domain;
  dom.r_min = tp.r_min;
  dom.r_max = tp.r_max;

  PointSolve ps = solve_point(dom, plan.potential, plan.resolution, plan.solver);
  const Vec u_vertex = ps.sys.scatter(ps.eig.u_h);
  const auto window =
      plan.reference_window ? *plan.reference_window : default_window(dom);

  SweepRow row;
  row.L = ps.L;
  row.r_min = tp.r_min;
  row.r_max = tp.r_max;
  row.dofs = ps.sys.n_free();
  row.mu_h = ps.eig.mu_h;
  row.residual = ps.eig.rel_residual;
  row.iterations = ps.eig.iterations;
  row.positivity_ok = ps.eig.positivity_ok;
  row.conc = concentration(ps.mesh, plan.potential, u_vertex, window);
  row.slope_near = kNaN;
  row.slope_far = kNaN;
  try {
    const auto fits = decay_fit(ps.mesh, u_vertex, ps.eig.mu_h,
                                arc_spectrum(dom.theta),
                                default_decay_options(dom));
    row.slope_near = fits.near.slope;
    row.slope_far = fits.far.slope;
  } catch (const std::invalid_argument&) {
    // window too small at this truncation; slopes stay NaN
  }
  return row;
}

Verdict make_verdict(const std::vector<SweepRow>& rows, double theta) {
  Verdict v;
  v.mu_C = arc_spectrum(theta).mu_C;
  if (rows.size() < 2) {
    v.mu_extrapolated = kNaN;
    v.fit_c = kNaN;
    v.gap_vs_muC = kNaN;
    v.classification = Classification::inconclusive;
    v.notes = "fewer than two sweep points";
    return v;
  }
  std::vector<double> x, y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const auto& r : rows) {
    x.push_back(1.0 / (r.L * r.L));
    y.push_back(r.mu_h);
  }
  const LineFit fit = least_squares(x, y);
  v.mu_extrapolated = fit.intercept;
  v.fit_c = fit.slope;
  v.gap_vs_muC = v.mu_C - v.mu_extrapolated;
  v.classification = classify(rows);
  v.localization_first = rows.front().conc.localization_ratio;
  v.localization_last = rows.back().conc.localization_ratio;
  double q_lo = std::numeric_limits<double>::infinity();
  double q_hi = 0.0;
  for (const auto& r : rows) {
    const double q = r.conc.max_annulus_fraction * r.conc.decades();
    q_lo = std::min(q_lo, q);
    q_hi = std::max(q_hi, q);
  }
  v.maxfrac_decades_low = q_lo;
  v.maxfrac_decades_high = q_hi;

  std::ostringstream notes;
  notes << "classified " << to_string(v.classification) << " from "
        << rows.size() << " points";
  v.notes = notes.str();
  return v;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void SweepPlan::validate() const {
  if (schedule.empty()) {
    throw std::invalid_argument("sweep plan: empty truncation schedule");
  }
  double prev = 0.0;
  for (const auto& tp : schedule) {
    if (!(tp.r_min > 0.0) || !(tp.r_min < tp.r_max)) {
      throw std::invalid_argument("sweep plan: invalid truncation point");
    }
    const double L = std::log(tp.r_max / tp.r_min);
    if (L <= prev) {
      throw std::invalid_argument(
          "sweep plan: schedule must be strictly increasing in L");
    }
    prev = L;
  }
  if (resolution.radial_per_decade < 1 || resolution.n_angular < 2) {
    throw std::invalid_argument("sweep plan: degenerate resolution policy");
  }
  if (workers < 1) throw std::invalid_argument("sweep plan: workers < 1");
}

double ConcentrationDiagnostic::decades() const {
  if (edges.size() < 2) return 0.0;
  return std::log10(edges.back() / edges.front());
}

ConcentrationDiagnostic concentration(const geom::Mesh& mesh,
                                      const geom::PotentialSpec& pot,
                                      const Vec& u_vertex,
                                      std::pair<double, double> window) {
  if (u_vertex.size() != static_cast<Eigen::Index>(mesh.vertices.size())) {
    throw std::invalid_argument("concentration: vector size mismatch");
  }
  const double total_decades = std::log10(mesh.r_max / mesh.r_min);
  const int n_ann = std::max(1, static_cast<int>(std::ceil(total_decades - 1e-9)));

  ConcentrationDiagnostic diag;
  diag.edges.resize(n_ann + 1);
  for (int k = 0; k <= n_ann; ++k) {
    diag.edges[k] = std::min(mesh.r_max, mesh.r_min * std::pow(10.0, k));
  }
  diag.fractions.assign(n_ann, 0.0);

  // Same interior 3-point rule as the mass assembly.
  static constexpr double kQ[3][3] = {
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
      {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
  };

  double total = 0.0;
  double in_window = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& a = mesh.vertices[tri[0]];
    const auto& b = mesh.vertices[tri[1]];
    const auto& c = mesh.vertices[tri[2]];
    const double area = mesh.signed_area(static_cast<int>(t));
    double mass = 0.0;
    for (const auto& q : kQ) {
      const double px = q[0] * a.x + q[1] * b.x + q[2] * c.x;
      const double py = q[0] * a.y + q[1] * b.y + q[2] * c.y;
      const double u = q[0] * u_vertex[tri[0]] + q[1] * u_vertex[tri[1]] +
                       q[2] * u_vertex[tri[2]];
      mass += area / 3.0 * pot(px, py) * u * u;
    }
    const double rc = std::hypot((a.x + b.x + c.x) / 3.0,
                                 (a.y + b.y + c.y) / 3.0);
    const int k = std::clamp(
        static_cast<int>(std::floor(std::log10(rc / mesh.r_min))), 0,
        n_ann - 1);
    diag.fractions[k] += mass;
    total += mass;
    if (rc >= window.first && rc <= window.second) in_window += mass;
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("concentration: vanishing V-mass");
  }
  for (double& f : diag.fractions) f /= total;
  diag.localization_ratio = in_window / total;
  diag.max_annulus_fraction =
      *std::max_element(diag.fractions.begin(), diag.fractions.end());
  return diag;
}

DecayOptions default_decay_options(const geom::DomainSpec& domain) {
  DecayOptions opt;
  if (!domain.bulges.empty()) {
    const auto& b = domain.bulges.front();
    opt.near_window = {100.0 * domain.r_min, b.r_a / 10.0};
    opt.far_window = {10.0 * b.r_b, domain.r_max / 100.0};
    opt.remove_envelope = false;
  } else {
    const double center = std::sqrt(domain.r_min * domain.r_max);
    opt.near_window = {100.0 * domain.r_min, center};
    opt.far_window = {center, domain.r_max / 100.0};
    opt.remove_envelope = true;
    opt.envelope_L = std::log(domain.r_max / domain.r_min);
  }
  return opt;
}

DecayFitPair decay_fit(const geom::Mesh& mesh, const Vec& u_vertex,
                       double mu_limit, const analytic::ConeSpectrum& spec,
                       const DecayOptions& opt) {
  if (!mesh.structured) {
    throw std::invalid_argument("decay_fit: requires a structured mesh");
  }
  const auto exps = analytic::exponents(spec.N, spec.lambda_D, mu_limit);
  const int j_mid = mesh.grading.n_angular / 2;

  auto fit_window = [&](std::pair<double, double> w,
                        double predicted) -> DecayFit {
    std::vector<double> xs, ys;
    for (int i = 0; i <= mesh.grading.n_radial; ++i) {
      const int v = mesh.base_vertex(i, j_mid);
      const double r = mesh.vertices[v].r;
      if (r < w.first || r > w.second) continue;
      double val = u_vertex[v];
      if (opt.remove_envelope) {
        const double env =
            std::sin(kPi * std::log(r / mesh.r_min) / opt.envelope_L);
        if (env <= 1e-12) continue;
        val /= env;
      }
      if (!(val > 0.0)) continue;
      xs.push_back(std::log(r));
      ys.push_back(std::log(val));
    }
    if (xs.size() < 5) {
      throw std::invalid_argument("decay window too small");
    }
    const LineFit fit = least_squares(xs, ys);
    DecayFit out;
    out.r_lo = w.first;
    out.r_hi = w.second;
    out.slope = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    out.predicted = predicted;
    out.n_samples = static_cast<int>(xs.size());
    return out;
  };

  DecayFitPair pair;
  pair.near = fit_window(opt.near_window, exps.alpha_plus);
  pair.far = fit_window(opt.far_window, exps.alpha_minus);
  return pair;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::localized_minimizer:
      return "localized-minimizer";
    case Classification::spreading_nonattained:
      return "spreading-nonattained";
    case Classification::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Classification classify(const std::vector<SweepRow>& rows,
                        const ClassificationThresholds& th) {
  if (rows.size() < 2) return Classification::inconclusive;
  const double loc_first = rows.front().conc.localization_ratio;
  const double loc_last = rows.back().conc.localization_ratio;
  if (loc_last >= th.localized_ratio_min &&
      loc_last + th.trend_eps >= loc_first) {
    return Classification::localized_minimizer;
  }
  bool spreading = loc_last < th.localized_ratio_min;
  for (const auto& r : rows) {
    const double q = r.conc.max_annulus_fraction * r.conc.decades();
    if (q > th.spreading_q_max) spreading = false;
  }
  return spreading ? Classification::spreading_nonattained
                   : Classification::inconclusive;
}

PointSolve solve_point(const geom::DomainSpec& domain,
                       const geom::PotentialSpec& pot,
                       const ResolutionPolicy& res, const SolverOptions& opt) {
  const geom::DomainSpec dom = geom::build_domain(domain);
  const double decades = std::log10(dom.r_max / dom.r_min);
  const int n_radial = std::max(
      2, static_cast<int>(std::lround(decades * res.radial_per_decade)));

  PointSolve ps;
  ps.mesh = geom::generate_mesh(dom, n_radial, res.n_angular);
  ps.sys = fem::assemble_system(ps.mesh, pot);
  ps.eig = eig::smallest_pair(ps.sys, opt.tol, opt.max_iter);
  ps.L = std::log(dom.r_max / dom.r_min);
  return ps;
}

SweepResult sweep_truncation(const SweepPlan& plan) {
  plan.validate();
  const int n = static_cast<int>(plan.schedule.size());
  std::vector<std::optional<SweepRow>> slots(n);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::string err_message;

  auto work = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        slots[i] = run_point(plan, plan.schedule[i]);
      } catch (const std::exception& e) {
        {
          const std::lock_guard<std::mutex> guard(err_mutex);
          if (err_message.empty()) err_message = e.what();
        }
        failed.store(true);
        return;
      }
    }
  };

  const int n_workers = std::clamp(plan.workers, 1, n);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  SweepResult result;
  for (auto& slot : slots) {
    if (slot) result.rows.push_back(std::move(*slot));
  }
  result.solver_failure = failed.load();
  result.failure_message = err_message;
  if (!result.solver_failure && result.rows.size() >= 2) {
    result.verdict = make_verdict(result.rows, plan.domain.theta);
  } else {
    result.verdict = Verdict{};
    result.verdict.mu_C = arc_spectrum(plan.domain.theta).mu_C;
    result.verdict.mu_extrapolated = kNaN;
    result.verdict.fit_c = kNaN;
    result.verdict.gap_vs_muC = kNaN;
    result.verdict.classification = Classification::inconclusive;
    result.verdict.notes = result.solver_failure
                               ? "solver failure: " + err_message
                               : "insufficient sweep points";
  }
  return result;
}

GapResult gap_experiment(const geom::DomainSpec& cone,
                         const std::vector<geom::Bulge>& bulges,
                         const SweepPlan& plan) {
  SweepPlan bulged = plan;
  bulged.domain = cone;
  bulged.domain.bulges = bulges;
  if (!bulged.reference_window) {
    bulged.reference_window = default_window(
        bulges.empty() ? bulged.domain : [&] {
          geom::DomainSpec d = bulged.domain;
          d.r_min = plan.schedule.front().r_min;
          d.r_max = plan.schedule.front().r_max;
          return geom::build_domain(d);
        }());
  }
  SweepPlan plain = bulged;
  plain.domain.bulges.clear();

  GapResult g;
  g.with_bulge = sweep_truncation(bulged);
  g.without_bulge = bulges.empty() ? g.with_bulge : sweep_truncation(plain);

  const std::size_t n =
      std::min(g.with_bulge.rows.size(), g.without_bulge.rows.size());
  g.strict_gap_everywhere = !bulges.empty() && n > 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap =
        g.without_bulge.rows[i].mu_h - g.with_bulge.rows[i].mu_h;
    g.pointwise_gaps.push_back(gap);
    if (!(gap > 0.0)) g.strict_gap_everywhere = false;
  }
  g.gap_extrapolated =
      g.with_bulge.verdict.mu_C - g.with_bulge.verdict.mu_extrapolated;
  g.below_muC = g.gap_extrapolated > 0.0;
  return g;
}

ProbeResult nonattainment_probe(const geom::DomainSpec& cone,
                                const std::vector<double>& extra_angles,
                                double band_r_a, double band_r_b,
                                const geom::PotentialSpec& pot,
                                const SweepPlan& plan) {
  if (extra_angles.empty()) {
    throw std::invalid_argument("probe: empty bulge sequence");
  }
  for (std::size_t i = 1; i < extra_angles.size(); ++i) {
    if (!(extra_angles[i] < extra_angles[i - 1])) {
      throw std::invalid_argument("probe: bulges must shrink strictly");
    }
  }
  for (const auto& b : pot.w_bumps) {
    if (b.amplitude < 0.0) {
      throw std::invalid_argument("probe: bump amplitude must be nonnegative");
    }
    if (!(b.phi_lo > 0.0) || !(b.phi_lo < b.phi_hi) ||
        !(b.phi_hi < cone.theta)) {
      throw std::invalid_argument(
          "probe: potential bump must be supported strictly inside the cone");
    }
    const auto& tight = plan.schedule.front();
    if (!(b.r_c > tight.r_min) || !(b.r_c < b.r_d) ||
        !(b.r_d < tight.r_max)) {
      throw std::invalid_argument(
          "probe: potential bump must lie inside every truncation band");
    }
  }

  ProbeResult result;
  for (double extra : extra_angles) {
    SweepPlan p = plan;
    p.domain = cone;
    p.domain.bulges = {{band_r_a, band_r_b, extra}};
    p.potential = pot;
    if (!p.reference_window) {
      p.reference_window = {band_r_a / 10.0, 10.0 * band_r_b};
    }
    result.entries.push_back({extra, sweep_truncation(p)});
  }

  result.crossover_index = -1;
  result.monotone_transition = true;
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto cls = result.entries[i].sweep.verdict.classification;
    if (cls == Classification::spreading_nonattained &&
        result.crossover_index < 0) {
      result.crossover_index = static_cast<int>(i);
    }
    if (result.crossover_index >= 0 &&
        static_cast<int>(i) > result.crossover_index &&
        cls == Classification::localized_minimizer) {
      result.monotone_transition = false;
    }
  }
  return result;
}

BumpSearchResult bump_search(double theta_X, const std::vector<BumpSpec>& bumps,
                             const ResolutionPolicy& res,
                             const SolverOptions& opt) {
  if (bumps.empty()) throw std::invalid_argument("bump_search: empty series");
  BumpSearchResult result;
  result.mu_X = (kPi / theta_X) * (kPi / theta_X);

  const geom::PotentialSpec hardy;
  for (const auto& spec : bumps) {
    if (!(spec.angle > 0.0) || spec.angle > theta_X) {
      throw std::invalid_argument(
          "bump_search: bump angle must lie in (0, theta_X]");
    }
    geom::DomainSpec dom;
    dom.theta = spec.angle;
    dom.theta_X = theta_X;
    dom.r_min = spec.truncation.r_min;
    dom.r_max = spec.truncation.r_max;
    const PointSolve ps = solve_point(dom, hardy, res, opt);
    result.series.push_back(
        {spec.angle, ps.L, ps.sys.n_free(), ps.eig.mu_h});
  }

  result.decreasing = true;
  for (std::size_t i = 1; i < result.series.size(); ++i) {
    if (!(result.series[i].mu_B < result.series[i - 1].mu_B)) {
      result.decreasing = false;
    }
  }
  result.bounded_below = true;
  for (const auto& p : result.series) {
    if (!(p.mu_B >= result.mu_X * (1.0 - opt.tol))) {
      result.bounded_below = false;
    }
  }
  return result;
}

MonotonicityReport monotonicity_suite(const MonotonicityConfig& config) {
  MonotonicityReport report;
  std::ostringstream offending;

  const geom::PotentialSpec hardy;

  // Domain enlargement chain: widening bulges must strictly lower mu_h.
  for (double extra : config.bulge_extras) {
    geom::DomainSpec dom = config.cone;
    dom.bulges = {{config.band_r_a, config.band_r_b, extra}};
    report.mu_domain_chain.push_back(
        solve_point(dom, hardy, config.resolution, config.solver).eig.mu_h);
  }
  report.domain_ok = true;
  for (std::size_t i = 1; i < report.mu_domain_chain.size(); ++i) {
    if (!(report.mu_domain_chain[i] < report.mu_domain_chain[i - 1])) {
      report.domain_ok = false;
      offending << "domain chain: mu(extra=" << config.bulge_extras[i]
                << ") = " << report.mu_domain_chain[i]
                << " !< mu(extra=" << config.bulge_extras[i - 1]
                << ") = " << report.mu_domain_chain[i - 1] << "; ";
    }
  }

  // Refinement chain: nested spaces, mu_h non-increasing.
  {
    const geom::DomainSpec dom = geom::build_domain(config.cone);
    const double decades = std::log10(dom.r_max / dom.r_min);
    const int n_radial = std::max(
        2, static_cast<int>(std::lround(decades *
                                        config.resolution.radial_per_decade)));
    geom::Mesh mesh =
        geom::generate_mesh(dom, n_radial, config.resolution.n_angular);
    for (int level = 0; level <= config.refine_levels; ++level) {
      const auto sys = fem::assemble_system(mesh, hardy);
      report.mu_refine_chain.push_back(
          eig::smallest_pair(sys, config.solver.tol, config.solver.max_iter)
              .mu_h);
      if (level < config.refine_levels) mesh = geom::refine_mesh(mesh);
    }
    report.refine_ok = true;
    for (std::size_t i = 1; i < report.mu_refine_chain.size(); ++i) {
      const double tol = 1e-11 * std::abs(report.mu_refine_chain[i - 1]);
      if (!(report.mu_refine_chain[i] <= report.mu_refine_chain[i - 1] + tol)) {
        report.refine_ok = false;
        offending << "refinement chain: level " << i << " mu = "
                  << report.mu_refine_chain[i] << " > level " << i - 1
                  << " mu = " << report.mu_refine_chain[i - 1] << "; ";
      }
    }
  }

  // Potential chain: growing well amplitude must not lower mu_h.
  for (double w0 : config.w_amplitudes) {
    geom::PotentialSpec pot;
    pot.w_bumps = {config.bump_template};
    pot.w_bumps.front().amplitude = w0;
    report.mu_potential_chain.push_back(
        solve_point(config.cone, pot, config.resolution, config.solver)
            .eig.mu_h);
  }
  report.potential_ok = true;
  for (std::size_t i = 1; i < report.mu_potential_chain.size(); ++i) {
    const double tol = 1e-11 * std::abs(report.mu_potential_chain[i - 1]);
    if (!(report.mu_potential_chain[i] >=
          report.mu_potential_chain[i - 1] - tol)) {
      report.potential_ok = false;
      offending << "potential chain: mu(w0=" << config.w_amplitudes[i]
                << ") = " << report.mu_potential_chain[i]
                << " < mu(w0=" << config.w_amplitudes[i - 1]
                << ") = " << report.mu_potential_chain[i - 1] << "; ";
    }
  }

  report.offending = offending.str();
  return report;
}

void write_results_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os.precision(12);
  os << "L,r_min,r_max,dofs,mu_h,residual,localization_ratio,"
        "max_annulus_fraction,slope_near,slope_far\n";
  for (const auto& r : rows) {
    os << r.L << ',' << r.r_min << ',' << r.r_max << ',' << r.dofs << ','
       << r.mu_h << ',' << r.residual << ',' << r.conc.localization_ratio
       << ',' << r.conc.max_annulus_fraction << ',' << r.slope_near << ','
       << r.slope_far << '\n';
  }
}

void write_verdict_json(std::ostream& os, const Verdict& verdict) {
  os.precision(17);
  os << "{\n"
     << "  \"schema_version\": 1,\n"
     << "  \"mu_extrapolated\": " << verdict.mu_extrapolated << ",\n"
     << "  \"fit_c\": " << verdict.fit_c << ",\n"
     << "  \"mu_C\": " << verdict.mu_C << ",\n"
     << "  \"gap_vs_muC\": " << verdict.gap_vs_muC << ",\n"
     << "  \"classification\": \"" << to_string(verdict.classification)
     << "\",\n"
     << "  \"localization_first\": " << verdict.localization_first << ",\n"
     << "  \"localization_last\": " << verdict.localization_last << ",\n"
     << "  \"maxfrac_decades_low\": " << verdict.maxfrac_decades_low << ",\n"
     << "  \"maxfrac_decades_high\": " << verdict.maxfrac_decades_high
     << ",\n"
     << "  \"notes\": \"" << json_escape(verdict.notes) << "\"\n"
     << "}\n";
}

void write_annulus_csv(std::ostream& os, const SweepRow& row) {
  os.precision(12);
  os << "r_lo,r_hi,fraction\n";
  for (std::size_t k = 0; k + 1 < row.conc.edges.size(); ++k) {
    os << row.conc.edges[k] << ',' << row.conc.edges[k + 1] << ','
       << row.conc.fractions[k] << '\n';
  }
}

void write_mu_fit_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                      const Verdict& verdict) {
  os.precision(12);
  os << "inv_L2,mu_h,mu_fit\n";
  for (const auto& r : rows) {
    const double x = 1.0 / (r.L * r.L);
    os << x << ',' << r.mu_h << ','
       << verdict.mu_extrapolated + verdict.fit_c * x << '\n';
  }
}

}  // namespace conelab::lab
