#pragma once

#include <Eigen/Dense>

#include "pgfv/mesh.hpp"

namespace pgfv {

/// Edge fluxes of the dual basis function of edge (S,N) across SN, EN, NW,
/// WS and SE respectively. These five numbers define one six-point gradient
/// stencil.
struct StencilCoefficients {
    double eta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

/// Resolved coordinates of the six-triangle frame around one interior edge:
/// vertex positions, cell centroids, gyration radii, and the oriented-edge
/// data of the central edge. Requires a complete neighborhood.
struct StencilFrame {
    Vec2 S, N, W, E, A, B, C, D;             // vertices
    Vec2 cK, cL, cM, cP, cQ, cR;             // centroids
    double rhoK, rhoL, rhoM, rhoP, rhoQ, rhoR; // gyration radii
    Vec2 n_sn;      // unit normal of SN, oriented K -> L
    double len_sn;  // |SN|
    Vec2 O;         // midpoint of SN
};

StencilFrame stencil_frame(const Mesh& mesh, const EdgeNeighborhood& nb);

/// The 3x5 flux-constraint system with unknown order (eta, alpha, beta,
/// gamma, delta): rows 1-2 are the vector constraint forcing affine
/// exactness, row 3 the second-moment constraint (no eta column).
struct ConstraintSystem {
    Eigen::Matrix<double, 3, 5> matrix;
    Eigen::Vector3d rhs;
    EdgeNeighborhood neighborhood;
    StencilFrame frame;
    double scale = 0.0; // |SN|
};

ConstraintSystem assemble_constraints(const Mesh& mesh, const EdgeNeighborhood& nb);

/// Closure rule selecting one member of the two-parameter solution family.
/// MIN_NORM is the minimum-Euclidean-norm solution of the non-dimensionalized
/// system; FIXED(t1,t2) adds t1*v1 + t2*v2 along an orthonormal null-space
/// basis (deterministic sign convention), so FIXED(0,0) == MIN_NORM.
struct Closure {
    enum class Kind { MinNorm, Fixed };
    Kind kind = Kind::MinNorm;
    double t1 = 0.0;
    double t2 = 0.0;

    static Closure min_norm() { return {}; }
    static Closure fixed(double t1, double t2) { return {Kind::Fixed, t1, t2}; }
};

/// Solves the underdetermined system under the given closure. Throws
/// StencilError when the row-equilibrated matrix has sigma_min/sigma_max
/// <= 1e-10 (degenerate neighborhood geometry).
StencilCoefficients solve_stencil(const ConstraintSystem& sys,
                                  const Closure& closure = {});

/// Residual of the vector constraint (2-vector) for given coefficients.
Vec2 residual_vector_constraint(const ConstraintSystem& sys,
                                const StencilCoefficients& c);
/// Residual of the second-moment constraint (scalar).
double residual_moment_constraint(const ConstraintSystem& sys,
                                  const StencilCoefficients& c);
/// Natural magnitude of the second-moment constraint: 3|SN|(|OL|+|OK|).
double moment_constraint_scale(const ConstraintSystem& sys);

/// Null-space dimension of the equilibrated matrix (2 for a full-rank
/// system).
int nullspace_dimension(const ConstraintSystem& sys);

/// Orthonormal null-space basis (5x2), same basis FIXED closures use.
Eigen::Matrix<double, 5, 2> nullspace_basis(const ConstraintSystem& sys);

/// The six-point normal-gradient formula:
/// eta (uL-uK) + alpha (uM-uL) + beta (uP-uK) + gamma (uQ-uK) + delta (uR-uL).
double gradient_six_point(const StencilCoefficients& c, double u_K, double u_L,
                          double u_M, double u_P, double u_Q, double u_R);

/// First-order momentum of the dual function along SN, evaluated from the L
/// side and from the K side. The two agree on solutions of the vector
/// constraint.
double eta1_from_L(const StencilFrame& f, const StencilCoefficients& c);
double eta1_from_K(const StencilFrame& f, const StencilCoefficients& c);

/// The four second-order momentum expressions; on coefficients satisfying
/// both constraints, from_L == from_K and tilde_from_L == tilde_from_K.
struct Eta2Pair {
    double from_L, tilde_from_L, from_K, tilde_from_K;
};
Eta2Pair eta2_pair(const StencilFrame& f, const StencilCoefficients& c);

/// Zeroth/first/second momenta of the dual function across one outer edge
/// (m2 uses the arclength origin at the edge's first vertex, m2_tilde at the
/// second).
struct SideMomenta {
    double m1, m1_tilde, m2, m2_tilde;
};
struct SideMomentaSet {
    SideMomenta M, P, Q, R;
};
SideMomentaSet side_momenta(const StencilFrame& f, const StencilCoefficients& c);

enum class DualSide { M, P, Q, R };

/// The vector integral of the dual basis function over one outer triangle
/// implied by the fluxes; always parallel to the outer edge normal.
Vec2 dual_cell_average(const StencilFrame& f, const StencilCoefficients& c,
                       DualSide side);

} // namespace pgfv
