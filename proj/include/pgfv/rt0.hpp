#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "pgfv/mesh.hpp"

namespace pgfv {

/// One normal-flux coefficient q_a per edge of the mesh (field * length).
using FluxVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

/// Lowest-order Raviart-Thomas basis function of edge a at point x:
/// (x-W)/(2|K|) inside K, -(x-E)/(2|L|) inside L, zero elsewhere. Points on
/// shared edges are attributed to the cell listed first in the co-boundary
/// (barycentric tolerance 1e-12).
Vec2 eval_basis(const Mesh& mesh, int a, Vec2 x);

/// Same, restricted to the branch of cell c (no point location). Zero when c
/// is not in the co-boundary of a.
Vec2 eval_basis_in_cell(const Mesh& mesh, int a, int c, Vec2 x);

/// Divergence of the basis function of edge a on cell c: 1/|K|, -1/|L| or 0.
double div_basis(const Mesh& mesh, int a, int c);

/// Flux degree of freedom: integral over edge b of (sum_a q_a phi_a) . n_b,
/// by edge quadrature. Equals q_b up to quadrature error.
double flux_dof(const Mesh& mesh, int b, const FluxVector& q);

/// RT0 mass matrix M_{a,b} = (phi_a, phi_b), assembled cell by cell from 3x3
/// local blocks with degree-2 quadrature (exact: integrands are quadratic).
/// Symmetric positive definite.
SparseMatrix mass_matrix(const Mesh& mesh);

/// Per-edge normal fluxes of a smooth field, p_a = integral over a of w . n_a,
/// via degree-3 edge quadrature.
FluxVector interpolate_hdiv(const Mesh& mesh, const VectorField& w);

/// Evaluates the RT0 field sum_a q_a phi_a at x (zero outside the mesh).
Vec2 eval_field(const Mesh& mesh, const FluxVector& q, Vec2 x);

/// Same with the containing cell known.
Vec2 eval_field_in_cell(const Mesh& mesh, const FluxVector& q, int c, Vec2 x);

/// Cellwise-constant divergence of the RT0 field on cell c:
/// (signed flux sum)/|c|.
double field_cell_divergence(const Mesh& mesh, const FluxVector& q, int c);

/// First cell containing x (barycentric tolerance 1e-12), or -1. For points
/// on a shared edge this is the cell listed as the edge's K.
int locate_cell(const Mesh& mesh, Vec2 x);

} // namespace pgfv
