#include "conelab/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace conelab::fem {

namespace {

// Interior 3-point rule, degree-2 exact. Barycentric coordinates and equal
// weights of 1/3 (times area).
constexpr double kQ3[3][3] = {
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
};

// 6-point rule, degree-4 exact.
struct QPoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.816847572980459;
constexpr double kB1 = 0.091576213509771;
constexpr double kW1 = 0.109951743655322;
constexpr double kA2 = 0.108103018168070;
constexpr double kB2 = 0.445948490915965;
constexpr double kW2 = 0.223381589678011;
constexpr QPoint kQ6[6] = {
    {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2},
};

struct ElementGeometry {
  double area;
  Eigen::Matrix<double, 2, 3> grad;  // constant P1 shape gradients
};

ElementGeometry element_geometry(const std::array<Eigen::Vector2d, 3>& xy) {
  const double x1 = xy[0].x(), y1 = xy[0].y();
  const double x2 = xy[1].x(), y2 = xy[1].y();
  const double x3 = xy[2].x(), y3 = xy[2].y();
  const double twice_area = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1);
  const double area = 0.5 * twice_area;

  double max_edge2 = 0.0;
  for (int e = 0; e < 3; ++e) {
    max_edge2 = std::max(max_edge2, (xy[(e + 1) % 3] - xy[e]).squaredNorm());
  }
  if (!(area > 1e-14 * max_edge2)) {
    throw std::runtime_error("degenerate triangle in assembly");
  }

  ElementGeometry g;
  g.area = area;
  g.grad.col(0) << (y2 - y3) / twice_area, (x3 - x2) / twice_area;
  g.grad.col(1) << (y3 - y1) / twice_area, (x1 - x3) / twice_area;
  g.grad.col(2) << (y1 - y2) / twice_area, (x2 - x1) / twice_area;
  return g;
}

std::array<Eigen::Vector2d, 3> corners(const geom::Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  std::array<Eigen::Vector2d, 3> xy;
  for (int i = 0; i < 3; ++i) {
    xy[i] = {mesh.vertices[tri[i]].x, mesh.vertices[tri[i]].y};
  }
  return xy;
}

// Identity map for the full assembly, vertex -> free index otherwise.
SparseSym assemble(const geom::Mesh& mesh, const std::vector<int>& index,
                   int dim, bool stiffness, const geom::PotentialSpec* pot) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto xy = corners(mesh, static_cast<int>(t));
    const Eigen::Matrix3d el = stiffness
                                   ? element_stiffness(xy)
                                   : element_weighted_mass(xy, *pot);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int ia = index[tri[a]];
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int ib = index[tri[b]];
        if (ib < 0) continue;
        triplets.emplace_back(ia, ib, el(a, b));
      }
    }
  }
  return SparseSym::from_triplets(dim, triplets);
}

std::vector<int> identity_index(const geom::Mesh& mesh) {
  std::vector<int> idx(mesh.vertices.size());
  for (std::size_t v = 0; v < idx.size(); ++v) idx[v] = static_cast<int>(v);
  return idx;
}

std::vector<int> free_index_map(const geom::Mesh& mesh) {
  std::vector<int> idx(mesh.vertices.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < idx.size(); ++v) {
    if (!mesh.dirichlet[v]) idx[v] = next++;
  }
  return idx;
}

}  // namespace

SparseSym SparseSym::from_triplets(
    int dim, const std::vector<Eigen::Triplet<double>>& triplets) {
  SparseSym s;
  Eigen::SparseMatrix<double> a(dim, dim);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseMatrix<double> at = a.transpose();
  s.mat_ = 0.5 * (a + at);
  s.mat_.makeCompressed();
  return s;
}

void SparseSym::write_coordinate(std::ostream& os) const {
  os.precision(17);
  for (int k = 0; k < mat_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

Eigen::Matrix3d element_stiffness(const std::array<Eigen::Vector2d, 3>& xy) {
  const ElementGeometry g = element_geometry(xy);
  return g.area * (g.grad.transpose() * g.grad);
}

Eigen::Matrix3d element_weighted_mass(const std::array<Eigen::Vector2d, 3>& xy,
                                      const geom::PotentialSpec& pot) {
  const ElementGeometry g = element_geometry(xy);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (const auto& q : kQ3) {
    const Eigen::Vector2d p =
        q[0] * xy[0] + q[1] * xy[1] + q[2] * xy[2];
    const double v = pot(p.x(), p.y());
    if (v < 0.0) {
      std::ostringstream msg;
      msg << "potential sign violation at (" << p.x() << ", " << p.y() << ")";
      throw std::runtime_error(msg.str());
    }
    const double w = g.area / 3.0 * v;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        m(a, b) += w * q[a] * q[b];
      }
    }
  }
  return m;
}

SparseSym assemble_stiffness_full(const geom::Mesh& mesh) {
  return assemble(mesh, identity_index(mesh),
                  static_cast<int>(mesh.vertices.size()), true, nullptr);
}

SparseSym assemble_weighted_mass_full(const geom::Mesh& mesh,
                                      const geom::PotentialSpec& pot) {
  return assemble(mesh, identity_index(mesh),
                  static_cast<int>(mesh.vertices.size()), false, &pot);
}

SparseSym assemble_stiffness(const geom::Mesh& mesh) {
  const auto idx = free_index_map(mesh);
  return assemble(mesh, idx, mesh.n_free(), true, nullptr);
}

SparseSym assemble_weighted_mass(const geom::Mesh& mesh,
                                 const geom::PotentialSpec& pot) {
  const auto idx = free_index_map(mesh);
  return assemble(mesh, idx, mesh.n_free(), false, &pot);
}

Vec AssembledSystem::scatter(const Vec& u_free) const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(free_index.size()));
  for (std::size_t v = 0; v < free_index.size(); ++v) {
    if (free_index[v] >= 0) out[static_cast<Eigen::Index>(v)] = u_free[free_index[v]];
  }
  return out;
}

Vec AssembledSystem::gather(const Vec& u_vertex) const {
  Vec out(n_free());
  for (int f = 0; f < n_free(); ++f) out[f] = u_vertex[vertex_of_free[f]];
  return out;
}

AssembledSystem AssembledSystem::from_matrices(SparseSym K, SparseSym M) {
  AssembledSystem sys;
  const int n = K.dim();
  sys.K = std::move(K);
  sys.M = std::move(M);
  sys.free_index.resize(n);
  sys.vertex_of_free.resize(n);
  for (int i = 0; i < n; ++i) {
    sys.free_index[i] = i;
    sys.vertex_of_free[i] = i;
  }
  return sys;
}

AssembledSystem assemble_system(const geom::Mesh& mesh,
                                const geom::PotentialSpec& pot) {
  AssembledSystem sys;
  sys.free_index = free_index_map(mesh);
  for (std::size_t v = 0; v < sys.free_index.size(); ++v) {
    if (sys.free_index[v] >= 0) sys.vertex_of_free.push_back(static_cast<int>(v));
  }
  const int n = static_cast<int>(sys.vertex_of_free.size());
  sys.K = assemble(mesh, sys.free_index, n, true, nullptr);
  sys.M = assemble(mesh, sys.free_index, n, false, &pot);
  return sys;
}

double rayleigh_quotient(const AssembledSystem& sys, const Vec& u_free) {
  const double denom = sys.M.quad(u_free, u_free);
  if (!(denom > 1e-300)) {
    throw std::runtime_error("V-degenerate vector");
  }
  return sys.K.quad(u_free, u_free) / denom;
}

void CutoffField::validate(const geom::Mesh& mesh) const {
  if (chi.size() != static_cast<Eigen::Index>(mesh.vertices.size())) {
    throw std::invalid_argument("cutoff: size mismatch with mesh");
  }
  for (Eigen::Index i = 0; i < chi.size(); ++i) {
    if (!(chi[i] >= 0.0 && chi[i] <= 1.0)) {
      throw std::invalid_argument("cutoff: value outside [0, 1]");
    }
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.tag[t] != geom::RegionTag::bulge) continue;
    for (int v : mesh.triangles[t]) {
      if (chi[v] != 1.0) {
        throw std::invalid_argument(
            "cutoff: chi must equal 1 on the bulge closure");
      }
    }
  }
}

CutoffField make_collar_cutoff(const geom::Mesh& mesh, double collar_width) {
  if (!(collar_width > 0.0)) {
    throw std::invalid_argument("cutoff: collar width must be positive");
  }
  CutoffField field;
  field.collar_width = collar_width;
  field.chi = Vec::Zero(static_cast<Eigen::Index>(mesh.vertices.size()));
  if (mesh.bands.empty()) return field;  // no bulge: chi == 0

  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const double s = std::log(mesh.vertices[v].r);
    const double phi = mesh.vertices[v].phi;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& band : mesh.bands) {
      const double dsd = std::max({band.s_lo - s, s - band.s_hi, 0.0});
      const double dpd = std::max({band.phi_lo - phi, phi - band.phi_hi, 0.0});
      dist = std::min(dist, std::max(dsd, dpd));
    }
    field.chi[static_cast<Eigen::Index>(v)] =
        std::clamp(1.0 - dist / collar_width, 0.0, 1.0);
  }
  // Pin the closure exactly; the ramp may dip below 1 by roundoff.
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.tag[t] != geom::RegionTag::bulge) continue;
    for (int v : mesh.triangles[t]) field.chi[v] = 1.0;
  }
  return field;
}

CutoffSplit cutoff_split_terms(const geom::Mesh& mesh, const Vec& u_vertex,
                               const CutoffField& chi) {
  if (u_vertex.size() != static_cast<Eigen::Index>(mesh.vertices.size()) ||
      chi.chi.size() != u_vertex.size()) {
    throw std::invalid_argument("cutoff_split_terms: vector size mismatch");
  }
  double grad_u2 = 0.0;
  double grad_cut2 = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto xy = corners(mesh, static_cast<int>(t));
    const ElementGeometry g = element_geometry(xy);
    const auto& tri = mesh.triangles[t];

    Eigen::Vector2d gu = Eigen::Vector2d::Zero();
    Eigen::Vector2d gc = Eigen::Vector2d::Zero();
    for (int a = 0; a < 3; ++a) {
      gu += u_vertex[tri[a]] * g.grad.col(a);
      gc += chi.chi[tri[a]] * g.grad.col(a);
    }
    const double gu2 = gu.squaredNorm();
    const double gc2 = gc.squaredNorm();
    const double gugc = gu.dot(gc);

    for (const auto& q : kQ6) {
      const double l[3] = {q.l0, q.l1, q.l2};
      double u = 0.0;
      double c = 0.0;
      for (int a = 0; a < 3; ++a) {
        u += l[a] * u_vertex[tri[a]];
        c += l[a] * chi.chi[tri[a]];
      }
      const double w = q.w * g.area;
      grad_u2 += w * gu2;
      // grad((1-chi) u) = (1-chi) grad u - u grad chi, elementwise.
      const Eigen::Vector2d gcut = (1.0 - c) * gu - u * gc;
      grad_cut2 += w * gcut.squaredNorm();
      term1 -= w * gc2 * u * u;
      term2 += w * 2.0 * (1.0 - c) * u * gugc;
      term3 += w * c * (2.0 - c) * gu2;
    }
  }
  return {grad_u2 - grad_cut2, {term1, term2, term3}};
}

Vec restrict_outside_cutoff(const geom::Mesh& mesh, const Vec& u_vertex,
                            const CutoffField& chi) {
  chi.validate(mesh);
  if (u_vertex.size() != chi.chi.size()) {
    throw std::invalid_argument("restrict_outside_cutoff: size mismatch");
  }
  Vec out(u_vertex.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - chi.chi[i]) * u_vertex[i];
  }
  return out;
}

}  // namespace conelab::fem
