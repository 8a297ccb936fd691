#include "conelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace conelab::geom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalized_angle(double x, double y) {
  double phi = std::atan2(y, x);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

// Flags every vertex that lies on an edge shared by exactly one triangle.
std::vector<std::uint8_t> boundary_mask(
    int n_vertices, const std::vector<std::array<int, 3>>& triangles) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e];
      int b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  std::vector<std::uint8_t> mask(n_vertices, 0);
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) {
      mask[edge.first] = 1;
      mask[edge.second] = 1;
    }
  }
  return mask;
}

}  // namespace

double PotentialSpec::operator()(double x, double y) const {
  double v = hardy ? 1.0 / (x * x + y * y) : 1.0;
  if (w_bumps.empty()) return v;
  const double r = std::hypot(x, y);
  const double phi = normalized_angle(x, y);
  for (const auto& b : w_bumps) {
    if (r >= b.r_c && r <= b.r_d && phi >= b.phi_lo && phi <= b.phi_hi) {
      v -= b.amplitude;
    }
  }
  return v;
}

DomainSpec build_domain(DomainSpec spec) {
  if (!(spec.r_min > 0.0) || !(spec.r_min < spec.r_max)) {
    throw std::invalid_argument("domain: requires 0 < r_min < r_max");
  }
  if (!(spec.theta > 0.0) || !(spec.theta <= spec.theta_X) ||
      !(spec.theta_X <= kTwoPi)) {
    throw std::invalid_argument("domain: requires 0 < theta <= theta_X <= 2*pi");
  }
  for (const auto& b : spec.bulges) {
    if (!(b.extra_angle > 0.0)) {
      throw std::invalid_argument("domain: bulge extra_angle must be positive");
    }
    if (!(b.r_a > spec.r_min) || !(b.r_a < b.r_b) || !(b.r_b < spec.r_max)) {
      throw std::invalid_argument(
          "domain: bulge outside truncation band (requires r_min < r_a < r_b "
          "< r_max)");
    }
    if (spec.theta + b.extra_angle > spec.theta_X) {
      throw std::invalid_argument("domain: bulge exits ambient cone");
    }
  }
  std::sort(spec.bulges.begin(), spec.bulges.end(),
            [](const Bulge& a, const Bulge& b) { return a.r_a < b.r_a; });
  // Merge overlapping or touching radial bands to their hull.
  std::vector<Bulge> merged;
  for (const auto& b : spec.bulges) {
    if (!merged.empty() && b.r_a <= merged.back().r_b) {
      merged.back().r_b = std::max(merged.back().r_b, b.r_b);
      merged.back().extra_angle =
          std::max(merged.back().extra_angle, b.extra_angle);
    } else {
      merged.push_back(b);
    }
  }
  spec.bulges = std::move(merged);
  return spec;
}

int Mesh::base_vertex(int level, int column) const {
  return level * (grading.n_angular + 1) + column;
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Vertex& a = vertices[tri[0]];
  const Vertex& b = vertices[tri[1]];
  const Vertex& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::min_signed_area() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    m = std::min(m, signed_area(static_cast<int>(t)));
  }
  return m;
}

int Mesh::n_free() const {
  int n = 0;
  for (auto d : dirichlet) {
    if (!d) ++n;
  }
  return n;
}

Mesh generate_mesh(const DomainSpec& raw, int n_radial, int n_angular) {
  if (n_radial < 2 || n_angular < 2) {
    throw std::invalid_argument("generate_mesh: degenerate resolution");
  }
  const DomainSpec domain = build_domain(raw);

  Mesh mesh;
  mesh.grading.n_radial = n_radial;
  mesh.grading.n_angular = n_angular;
  mesh.theta = domain.theta;
  mesh.r_min = domain.r_min;
  mesh.r_max = domain.r_max;
  mesh.structured = true;

  const double s_min = std::log(domain.r_min);
  const double s_max = std::log(domain.r_max);
  const double ds = (s_max - s_min) / n_radial;
  const double dphi = domain.theta / n_angular;
  mesh.grading.ratio = std::exp(ds);

  // Base tensor grid, vertex index = level * (n_angular + 1) + column.
  mesh.vertices.reserve((n_radial + 1) * (n_angular + 1));
  for (int i = 0; i <= n_radial; ++i) {
    const double r = std::exp(s_min + i * ds);
    for (int j = 0; j <= n_angular; ++j) {
      const double phi = j * dphi;
      mesh.vertices.push_back({r * std::cos(phi), r * std::sin(phi), r, phi});
    }
  }
  for (int i = 0; i < n_radial; ++i) {
    for (int j = 0; j < n_angular; ++j) {
      const int v00 = mesh.base_vertex(i, j);
      const int v10 = mesh.base_vertex(i + 1, j);
      const int v11 = mesh.base_vertex(i + 1, j + 1);
      const int v01 = mesh.base_vertex(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
      mesh.tag.push_back(RegionTag::cone);
      mesh.tag.push_back(RegionTag::cone);
    }
  }

  // Bulge bands: snap the radial interval to mesh levels, attach extra
  // angular columns along phi = theta.
  int prev_hi = -1;
  for (const auto& b : domain.bulges) {
    const int lo = std::clamp(
        static_cast<int>(std::lround((std::log(b.r_a) - s_min) / ds)), 0,
        n_radial);
    const int hi = std::clamp(
        static_cast<int>(std::lround((std::log(b.r_b) - s_min) / ds)), 0,
        n_radial);
    if (hi <= lo) {
      throw std::invalid_argument(
          "generate_mesh: degenerate resolution (bulge thinner than one "
          "radial layer)");
    }
    if (lo <= prev_hi) {
      throw std::invalid_argument(
          "generate_mesh: degenerate resolution (bulge bands collide after "
          "snapping)");
    }
    prev_hi = hi;

    const int columns =
        std::max(1, static_cast<int>(std::lround(b.extra_angle / dphi)));
    const double dphi_b = b.extra_angle / columns;

    // Bulge vertex (level i, extra column k >= 1); column 0 is the base-grid
    // column at phi = theta.
    const int first = static_cast<int>(mesh.vertices.size());
    for (int i = lo; i <= hi; ++i) {
      const double r = std::exp(s_min + i * ds);
      for (int k = 1; k <= columns; ++k) {
        const double phi = domain.theta + k * dphi_b;
        mesh.vertices.push_back({r * std::cos(phi), r * std::sin(phi), r, phi});
      }
    }
    auto bulge_vertex = [&](int i, int k) {
      if (k == 0) return mesh.base_vertex(i, n_angular);
      return first + (i - lo) * columns + (k - 1);
    };
    for (int i = lo; i < hi; ++i) {
      for (int k = 0; k < columns; ++k) {
        const int v00 = bulge_vertex(i, k);
        const int v10 = bulge_vertex(i + 1, k);
        const int v11 = bulge_vertex(i + 1, k + 1);
        const int v01 = bulge_vertex(i, k + 1);
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
        mesh.tag.push_back(RegionTag::bulge);
        mesh.tag.push_back(RegionTag::bulge);
      }
    }
    mesh.bands.push_back({lo, hi, s_min + lo * ds, s_min + hi * ds,
                          domain.theta, domain.theta + b.extra_angle,
                          columns});
  }

  mesh.dirichlet =
      boundary_mask(static_cast<int>(mesh.vertices.size()), mesh.triangles);
  if (mesh.min_signed_area() <= 0.0) {
    throw std::logic_error("generate_mesh: produced an inverted triangle");
  }
  return mesh;
}

Mesh refine_mesh(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  fine.grading = {2 * mesh.grading.n_radial, 2 * mesh.grading.n_angular,
                  std::sqrt(mesh.grading.ratio)};
  fine.theta = mesh.theta;
  fine.r_min = mesh.r_min;
  fine.r_max = mesh.r_max;
  fine.bands = mesh.bands;
  fine.structured = false;  // midpoints leave the log-polar tensor grid

  std::map<std::pair<int, int>, int> midpoint;
  auto midpoint_of = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    auto it = midpoint.find({a, b});
    if (it != midpoint.end()) return it->second;
    const Vertex& va = fine.vertices[a];
    const Vertex& vb = fine.vertices[b];
    const double x = 0.5 * (va.x + vb.x);
    const double y = 0.5 * (va.y + vb.y);
    const int idx = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back({x, y, std::hypot(x, y), normalized_angle(x, y)});
    midpoint.emplace(std::make_pair(a, b), idx);
    return idx;
  };

  fine.triangles.reserve(4 * mesh.triangles.size());
  fine.tag.reserve(4 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int ab = midpoint_of(tri[0], tri[1]);
    const int bc = midpoint_of(tri[1], tri[2]);
    const int ca = midpoint_of(tri[2], tri[0]);
    fine.triangles.push_back({tri[0], ab, ca});
    fine.triangles.push_back({ab, tri[1], bc});
    fine.triangles.push_back({ca, bc, tri[2]});
    fine.triangles.push_back({ab, bc, ca});
    for (int c = 0; c < 4; ++c) fine.tag.push_back(mesh.tag[t]);
  }

  fine.dirichlet =
      boundary_mask(static_cast<int>(fine.vertices.size()), fine.triangles);
  return fine;
}

Mesh cone_only(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  out.grading = mesh.grading;
  out.theta = mesh.theta;
  out.r_min = mesh.r_min;
  out.r_max = mesh.r_max;
  out.structured = mesh.structured;

  std::vector<std::uint8_t> used(mesh.vertices.size(), 0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.tag[t] != RegionTag::cone) continue;
    out.triangles.push_back(mesh.triangles[t]);
    out.tag.push_back(RegionTag::cone);
    for (int v : mesh.triangles[t]) used[v] = 1;
  }
  out.dirichlet =
      boundary_mask(static_cast<int>(out.vertices.size()), out.triangles);
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (!used[v]) out.dirichlet[v] = 1;  // orphaned bulge vertices stay constrained
  }
  return out;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  for (const auto& v : mesh.vertices) {
    const auto idx = static_cast<std::size_t>(&v - mesh.vertices.data());
    os << v.x << ' ' << v.y << ' ' << v.r << ' ' << v.phi << ' '
       << static_cast<int>(mesh.dirichlet[idx]) << '\n';
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' '
       << (mesh.tag[t] == RegionTag::bulge ? "bulge" : "cone") << '\n';
  }
}

}  // namespace conelab::geom
