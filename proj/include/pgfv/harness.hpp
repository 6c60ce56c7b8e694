#pragma once

#include <string>
#include <vector>

#include "pgfv/solvers.hpp"

namespace pgfv {

/// An exact solution on the unit square with homogeneous Dirichlet data,
/// its gradient, and the matching source f = -laplacian(u).
struct ManufacturedCase {
    std::string name;
    ScalarField u_exact;
    VectorField p_exact;
    ScalarField f;
};

/// name in {"sinsin", "bubble"}:
///   sinsin: u = sin(pi x) sin(pi y),  f = 2 pi^2 u
///   bubble: u = x(1-x) y(1-y),        f = 2 [x(1-x) + y(1-y)]
ManufacturedCase mms_case(const std::string& name);

struct ErrorNorms {
    double e_u = 0.0;   // L2(u_exact - u_T), u_T cellwise constant
    double e_p = 0.0;   // L2(p_exact - RT0 reconstruction)
    double e_div = 0.0; // L2(-f - div p_T)
    double e_V = 0.0;   // sqrt of the sum of squares
};

/// Degree-5 quadrature throughout.
ErrorNorms error_norms(const Mesh& mesh, const DiscreteSolution& sol,
                       const ManufacturedCase& mms);

/// Discrete L2 distance of the cell values to the exact solution sampled at
/// the cell circumcenters (the two-point scheme's cell centers), the metric
/// in which that scheme superconverges on structured meshes.
double cell_center_error(const Mesh& mesh, const std::vector<double>& u,
                         const ScalarField& u_exact);

struct ConvergenceLevel {
    int n = 0;
    double h = 0.0;
    ErrorNorms err;
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::string scheme;
    std::string mms;
    std::vector<ConvergenceLevel> levels;
    ErrorNorms rates; // least-squares slopes of log(error) vs log(h)
};

/// Runs the scheme on build_structured(n) for each level. Levels must be
/// ascending with at least 3 entries. Solver failures are rethrown with the
/// failing level annotated. Rates exclude the coarsest level (per component)
/// when monotonicity fails there.
ConvergenceReport convergence_study(Scheme scheme, const ManufacturedCase& mms,
                                    const std::vector<int>& levels,
                                    const Closure& closure = {});

std::string report_to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const std::string& text);

/// Smallest generalized singular value of the saddle bilinear form with
/// respect to the graph-norm matrices, on the classical Galerkin pair
/// (V_T, V_T). Dense eigensolve; requires E + F <= 2000.
double estimate_infsup(const Mesh& mesh);

/// Least-squares slope of log(y) against log(x).
double fit_rate(const std::vector<double>& h, const std::vector<double>& e);

} // namespace pgfv
