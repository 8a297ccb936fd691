#ifndef CONELAB_FEM_HPP
#define CONELAB_FEM_HPP

/**
 * @file fem.hpp
 * @brief P1 assembly of the Dirichlet energy and the V-weighted mass form,
 *        plus quadrature-level cutoff algebra.
 */

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <iosfwd>
#include <vector>

#include "conelab/geometry.hpp"

namespace conelab::fem {

using Vec = Eigen::VectorXd;

/// Symmetric sparse matrix in compressed storage. Construction symmetrizes
/// structurally (A <- (A + A^T)/2), so the invariant cannot be violated by
/// assembly order.
class SparseSym {
 public:
  SparseSym() = default;

  static SparseSym from_triplets(
      int dim, const std::vector<Eigen::Triplet<double>>& triplets);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::SparseMatrix<double>& matrix() const { return mat_; }

  Vec apply(const Vec& x) const { return mat_ * x; }
  double quad(const Vec& x, const Vec& y) const { return x.dot(mat_ * y); }

  /// Coordinate-format dump, one "row col value" line per stored entry.
  void write_coordinate(std::ostream& os) const;

 private:
  Eigen::SparseMatrix<double> mat_;
};

/// Exact element integrals of grad(lambda_i) . grad(lambda_j).
/// Throws std::runtime_error for a degenerate triangle (area below 1e-14
/// relative to the squared longest edge).
Eigen::Matrix3d element_stiffness(const std::array<Eigen::Vector2d, 3>& xy);

/// Element integrals of V lambda_i lambda_j by the interior 3-point rule
/// (degree-2 exact, no vertex sampling). Throws std::runtime_error naming
/// the quadrature point if V is negative there.
Eigen::Matrix3d element_weighted_mass(const std::array<Eigen::Vector2d, 3>& xy,
                                      const geom::PotentialSpec& pot);

/// Stiffness over all vertices (no boundary conditions applied).
SparseSym assemble_stiffness_full(const geom::Mesh& mesh);
/// V-weighted mass over all vertices (no boundary conditions applied).
SparseSym assemble_weighted_mass_full(const geom::Mesh& mesh,
                                      const geom::PotentialSpec& pot);

/// Generalized eigenproblem data on the free (non-Dirichlet) DOFs.
struct AssembledSystem {
  SparseSym K;
  SparseSym M;
  std::vector<int> free_index;     ///< per vertex: free DOF index or -1
  std::vector<int> vertex_of_free;
  int quadrature_order{2};

  int n_free() const { return static_cast<int>(vertex_of_free.size()); }
  /// Free-DOF vector -> vertex field (zero on constrained vertices).
  Vec scatter(const Vec& u_free) const;
  /// Vertex field -> free-DOF vector.
  Vec gather(const Vec& u_vertex) const;

  /// Wraps already-built matrices (used by surrogate problems and tests).
  static AssembledSystem from_matrices(SparseSym K, SparseSym M);
};

/// Stiffness with Dirichlet rows/columns eliminated symmetrically.
SparseSym assemble_stiffness(const geom::Mesh& mesh);
/// V-weighted mass with Dirichlet rows/columns eliminated symmetrically.
SparseSym assemble_weighted_mass(const geom::Mesh& mesh,
                                 const geom::PotentialSpec& pot);
/// Both forms plus the DOF maps.
AssembledSystem assemble_system(const geom::Mesh& mesh,
                                const geom::PotentialSpec& pot);

/// u^T K u / u^T M u. Throws std::runtime_error("V-degenerate vector") when
/// the denominator is below 1e-300.
double rayleigh_quotient(const AssembledSystem& sys, const Vec& u_free);

/// Vertex field chi in [0,1], equal to 1 on the bulge closure and 0 outside
/// a collar of the given width (measured in (log r, phi) units).
struct CutoffField {
  Vec chi;
  double collar_width{0.0};

  /// Throws std::invalid_argument if the support invariants fail.
  void validate(const geom::Mesh& mesh) const;
};

CutoffField make_collar_cutoff(const geom::Mesh& mesh, double collar_width);

/// The four integrals of the cutoff energy identity; lhs equals the sum of
/// rhs_terms up to roundoff because the integrands agree pointwise.
struct CutoffSplit {
  double lhs;                         ///< int |grad u|^2 - int |grad((1-chi)u)|^2
  std::array<double, 3> rhs_terms;    ///< (-int |grad chi|^2 u^2,
                                      ///<  +2 int (1-chi) u grad chi . grad u,
                                      ///<  +int chi(2-chi) |grad u|^2)
  double sum_rhs() const {
    return rhs_terms[0] + rhs_terms[1] + rhs_terms[2];
  }
};

/// All terms evaluated with a degree-4 (6-point) rule on each triangle;
/// grad((1-chi)u) is expanded elementwise as (1-chi) grad u - u grad chi.
CutoffSplit cutoff_split_terms(const geom::Mesh& mesh, const Vec& u_vertex,
                               const CutoffField& chi);

/// Vertexwise product (1-chi) u. Requires chi = 1 on all bulge elements, so
/// the result vanishes on every bulge DOF and is admissible for the
/// cone-only system.
Vec restrict_outside_cutoff(const geom::Mesh& mesh, const Vec& u_vertex,
                            const CutoffField& chi);

}  // namespace conelab::fem

#endif  // CONELAB_FEM_HPP
