#pragma once

#include <string>
#include <vector>

#include "pgfv/rt0.hpp"
#include "pgfv/stencil.hpp"

namespace pgfv {

enum class Scheme { Mixed, Tpfa, Petrov };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SolveStats {
    std::string method; // "sparse-lu", "cholesky" or "schur-cg"
    bool direct = true;
    int iterations = 0;
    double residual = 0.0; // relative linear-system residual
};

/// Per-cell scalar values u_K (cell means) plus per-edge normal fluxes p_a.
struct DiscreteSolution {
    std::vector<double> u;
    FluxVector p;
    Scheme scheme = Scheme::Mixed;
    SolveStats stats;
};

/// Blocks of the mixed saddle system: M is the E x E RT0 mass block, B the
/// F x E divergence block with entries +-1 for incident edges, rhs_f the
/// per-cell values of -integral of f (degree-3 quadrature). Homogeneous
/// Dirichlet data is natural: boundary-edge test functions stay in, which
/// imposes u = 0 weakly.
struct SaddleSystem {
    SparseMatrix M;
    SparseMatrix B;
    Eigen::VectorXd rhs_f;
};

SaddleSystem assemble_mixed(const Mesh& mesh, const ScalarField& f);

enum class SaddleMethod {
    Auto,    // sparse LU, falling back to the Schur iteration on failure
    Direct,  // sparse LU only
    SchurCg, // conjugate gradient on B M^-1 B^T with inner Cholesky solves
};

/// Solves [[M, B^T],[B, 0]] [p; u] = [0; rhs_f]. Sparse LU at desk scale
/// with a conjugate-gradient Schur-complement fallback (on B M^-1 B^T).
/// Final residual must satisfy |r| <= 1e-10 |rhs|.
DiscreteSolution solve_saddle(const SaddleSystem& sys,
                              SaddleMethod method = SaddleMethod::Auto);

/// Momentum recovery p = -M^-1 B^T u; on the saddle solution this reproduces
/// the p block to solver tolerance.
FluxVector recover_momentum(const SaddleSystem& sys, const Eigen::VectorXd& u);

/// Per-edge two-point coupling of the lumped scheme. t is |a|/d with d the
/// circumcenter distance (interior) or circumcenter-to-edge distance
/// (boundary). Edges with d = 0 (coincident circumcenters of two right
/// triangles on a common hypotenuse) carry infinite transmissibility: the
/// incident cells are merged into one unknown, and the edge flux is later
/// recovered from a cell balance.
struct EdgeCoupling {
    double t = 0.0;
    bool merged = false;
};

struct TpfaSystem {
    SparseMatrix A;              // condensed SPD system, positive diagonal
    Eigen::VectorXd rhs;         // integral of f per condensed unknown
    std::vector<int> cell_unknown; // cell -> condensed unknown; -1 = pinned to 0
    std::vector<EdgeCoupling> coupling;
};

/// Assembles the two-point scheme. Throws SolverError (naming the edge) on a
/// non-admissible mesh, i.e. a negative circumcenter distance.
TpfaSystem assemble_tpfa(const Mesh& mesh, const ScalarField& f);

/// Mass-lumped two-point finite volume solve.
DiscreteSolution solve_tpfa(const Mesh& mesh, const ScalarField& f);

/// Petrov-Galerkin six-point finite volume solve: interior edges with a
/// complete six-triangle neighborhood use the dual-basis flux stencil; the
/// rest fall back to the two-point flux (boundary ghost value 0).
DiscreteSolution solve_petrov_galerkin(const Mesh& mesh, const ScalarField& f,
                                       const Closure& closure = {});

/// Max over cells of |sum of signed edge fluxes + integral of f|.
double conservation_check(const Mesh& mesh, const DiscreteSolution& sol,
                          const ScalarField& f);

/// Degree-3 quadrature of f over cell c.
double integrate_cell(const Mesh& mesh, int c, const ScalarField& f);

} // namespace pgfv
