#ifndef CONELAB_GEOMETRY_HPP
#define CONELAB_GEOMETRY_HPP

/**
 * @file geometry.hpp
 * @brief Truncated-sector domains with angular bulge perturbations, the
 *        inverse-square potential with compact bumps removed, and structured
 *        graded triangle meshes in log-polar coordinates.
 */

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace conelab::geom {

/// Angular bulge attached to the lateral cone edge phi = theta over the
/// radial band (r_a, r_b), widening the opening by extra_angle there.
struct Bulge {
  double r_a;
  double r_b;
  double extra_angle;
};

/// Truncated planar sector of opening theta inside an ambient cone of
/// opening theta_X, with optional bulge perturbations.
struct DomainSpec {
  double theta{0.0};
  double theta_X{0.0};
  double r_min{0.0};
  double r_max{0.0};
  std::vector<Bulge> bulges;
};

/**
 * @brief Validates and normalizes a domain spec.
 *
 * Bulges are sorted by r_a; overlapping or touching radial bands are merged
 * to their hull (largest extra_angle). Throws std::invalid_argument with a
 * speaking message for: r_min >= r_max, theta outside (0, theta_X], a bulge
 * outside the truncation band, or a bulge exiting the ambient cone
 * (theta + extra_angle > theta_X).
 */
DomainSpec build_domain(DomainSpec spec);

/// Rectangular (in polar coordinates) well subtracted from the Hardy weight.
struct WBump {
  double amplitude{0.0};  ///< w0 >= 0
  double r_c{0.0};
  double r_d{0.0};
  double phi_lo{0.0};
  double phi_hi{0.0};
};

/// Weight V(x) = 1/|x|^2 (or 1 when hardy is unset) minus the bump sum.
/// Nonnegativity is enforced at assembly quadrature points, not here.
struct PotentialSpec {
  bool hardy{true};
  std::vector<WBump> w_bumps;

  double operator()(double x, double y) const;
};

struct Vertex {
  double x;
  double y;
  double r;
  double phi;
};

enum class RegionTag : std::uint8_t { cone = 0, bulge = 1 };

/// Snapped bulge band as realized in a structured mesh.
struct BulgeBand {
  int level_lo;
  int level_hi;
  double s_lo;     ///< log r of level_lo
  double s_hi;     ///< log r of level_hi
  double phi_lo;   ///< = theta
  double phi_hi;   ///< = theta + extra_angle
  int columns;     ///< extra angular columns across the bulge
};

struct Grading {
  int n_radial{0};
  int n_angular{0};
  double ratio{1.0};  ///< geometric ratio of consecutive radial layers
};

struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> dirichlet;  ///< 1 on every boundary vertex
  std::vector<RegionTag> tag;           ///< per triangle
  Grading grading;
  double theta{0.0};
  double r_min{0.0};
  double r_max{0.0};
  std::vector<BulgeBand> bands;
  /// True for generate_mesh output: vertices form the log-polar tensor grid
  /// and base_vertex() indexing is valid. Refinement clears it.
  bool structured{false};

  /// Structured grid index of the base-grid vertex at (radial level, column).
  int base_vertex(int level, int column) const;

  double signed_area(int t) const;
  double min_signed_area() const;
  int n_free() const;  ///< vertices not flagged Dirichlet
};

/**
 * @brief Structured triangle mesh of the (possibly bulged) truncated sector.
 *
 * Radial layers are geometric in r (uniform in log r), angular columns
 * uniform in phi; every cell is split into two triangles. Bulge bands are
 * snapped to the nearest radial levels and receive
 * max(1, round(extra_angle / dphi)) extra angular columns. The Dirichlet
 * mask is derived from boundary-edge detection, so it covers the whole
 * polygonal boundary by construction.
 *
 * Throws std::invalid_argument for n_radial or n_angular < 2 and for bulges
 * that collapse or collide after snapping ("degenerate resolution").
 */
Mesh generate_mesh(const DomainSpec& domain, int n_radial, int n_angular);

/// Uniform refinement: each triangle split into 4 by Cartesian edge
/// midpoints. Parent vertices keep their indices and exact coordinates, so
/// the coarse FE space is a subspace of the refined one.
Mesh refine_mesh(const Mesh& mesh);

/// Drops bulge-tagged triangles while keeping the vertex array (and hence
/// vector indexing) intact; the Dirichlet mask is recomputed and vertices
/// that lost all triangles are flagged as constrained.
Mesh cone_only(const Mesh& mesh);

/// Plain-text dump: "nv nt" header, vertex lines "x y r phi dirichlet",
/// triangle lines "i j k tag".
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace conelab::geom

#endif  // CONELAB_GEOMETRY_HPP
