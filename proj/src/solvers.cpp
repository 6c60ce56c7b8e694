#include "pgfv/solvers.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace pgfv {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Mixed: return "mixed";
        case Scheme::Tpfa: return "tpfa";
        case Scheme::Petrov: return "petrov";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "mixed") return Scheme::Mixed;
    if (name == "tpfa") return Scheme::Tpfa;
    if (name == "petrov") return Scheme::Petrov;
    throw Error("unknown scheme '" + name + "' (expected mixed|tpfa|petrov)");
}

double integrate_cell(const Mesh& mesh, int c, const ScalarField& f) {
    return quadrature_triangle(f, mesh.cell_geom(c), 3);
}

SaddleSystem assemble_mixed(const Mesh& mesh, const ScalarField& f) {
    SaddleSystem sys;
    sys.M = mass_matrix(mesh);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(3) * mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        for (int i = 0; i < 3; ++i)
            trips.emplace_back(c, cell.e[i], static_cast<double>(cell.sign[i]));
    }
    sys.B.resize(mesh.n_cells(), mesh.n_edges());
    sys.B.setFromTriplets(trips.begin(), trips.end());
    sys.B.makeCompressed();
    sys.rhs_f.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) sys.rhs_f(c) = -integrate_cell(mesh, c, f);
    return sys;
}

namespace {

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
    const double bn = b.norm();
    const double rn = (a * x - b).norm();
    return bn > 0.0 ? rn / bn : rn;
}

// Conjugate gradient on the Schur complement B M^-1 B^T with inner
// mass-matrix solves through a Cholesky factorization.
Eigen::VectorXd schur_cg(const SaddleSystem& sys,
                         const Eigen::SimplicialLLT<SparseMatrix>& mass_chol,
                         int& iterations) {
    const Eigen::VectorXd b = -sys.rhs_f;
    auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return sys.B * mass_chol.solve(sys.B.transpose() * v);
    };
    Eigen::VectorXd u = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    Eigen::VectorXd d = r;
    double rho = r.squaredNorm();
    const double stop = 1e-26 * std::max(rho, 1e-300);
    const int max_it = 20 * static_cast<int>(b.size()) + 100;
    iterations = 0;
    while (rho > stop && iterations < max_it) {
        const Eigen::VectorXd ad = apply(d);
        const double alpha = rho / d.dot(ad);
        u += alpha * d;
        r -= alpha * ad;
        const double rho_next = r.squaredNorm();
        d = r + (rho_next / rho) * d;
        rho = rho_next;
        ++iterations;
    }
    return u;
}

} // namespace

DiscreteSolution solve_saddle(const SaddleSystem& sys, SaddleMethod method) {
    const int ne = static_cast<int>(sys.M.rows());
    const int nf = static_cast<int>(sys.B.rows());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(sys.M.nonZeros() + 2 * sys.B.nonZeros());
    for (int k = 0; k < sys.M.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.M, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                               it.value());
    for (int k = 0; k < sys.B.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.B, k); it; ++it) {
            const int krow = static_cast<int>(it.row());
            const int acol = static_cast<int>(it.col());
            trips.emplace_back(acol, ne + krow, it.value()); // B^T block
            trips.emplace_back(ne + krow, acol, it.value()); // B block
        }
    SparseMatrix k(ne + nf, ne + nf);
    k.setFromTriplets(trips.begin(), trips.end());
    k.makeCompressed();

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ne + nf);
    rhs.tail(nf) = sys.rhs_f;

    DiscreteSolution sol;
    sol.scheme = Scheme::Mixed;
    Eigen::VectorXd x;

    bool solved = false;
    if (method != SaddleMethod::SchurCg) {
        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(k);
        if (lu.info() == Eigen::Success) {
            x = lu.solve(rhs);
            sol.stats.method = "sparse-lu";
            sol.stats.direct = true;
            solved = true;
        } else if (method == SaddleMethod::Direct) {
            throw SolverError("saddle factorization failed (singular system; this "
                              "signals an assembly bug)");
        }
    }
    if (!solved) {
        Eigen::SimplicialLLT<SparseMatrix> mass_chol;
        mass_chol.compute(sys.M);
        if (mass_chol.info() != Eigen::Success)
            throw SolverError("mass matrix factorization failed (singular system; "
                              "this signals an assembly bug)");
        int iters = 0;
        const Eigen::VectorXd u = schur_cg(sys, mass_chol, iters);
        const Eigen::VectorXd p = -mass_chol.solve(sys.B.transpose() * u);
        x.resize(ne + nf);
        x.head(ne) = p;
        x.tail(nf) = u;
        sol.stats.method = "schur-cg";
        sol.stats.direct = false;
        sol.stats.iterations = iters;
    }

    sol.stats.residual = relative_residual(k, x, rhs);
    if (!(sol.stats.residual <= 1e-10))
        throw SolverError("saddle solve residual " + std::to_string(sol.stats.residual) +
                          " exceeds 1e-10 (singular or near-singular system)");
    sol.p = x.head(ne);
    sol.u.assign(x.tail(nf).data(), x.tail(nf).data() + nf);
    return sol;
}

FluxVector recover_momentum(const SaddleSystem& sys, const Eigen::VectorXd& u) {
    Eigen::SimplicialLLT<SparseMatrix> chol;
    chol.compute(sys.M);
    if (chol.info() != Eigen::Success)
        throw SolverError("mass matrix factorization failed");
    return -chol.solve(sys.B.transpose() * u);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Classifies every edge by its two-point coupling and merges cells across
// zero-distance edges (ground node = mesh.n_cells() stands for the Dirichlet
// exterior). Shared by the TPFA scheme and the Petrov-Galerkin fallback.
struct TwoPointLayout {
    std::vector<EdgeCoupling> coupling;
    std::vector<int> cell_unknown; // -1 when pinned to the boundary value
    int n_unknowns = 0;
    UnionFind uf;

    explicit TwoPointLayout(const Mesh& mesh) : uf(mesh.n_cells() + 1) {}

    int unknown_of(int cell) { return cell_unknown[uf.find(cell)]; }
};

TwoPointLayout two_point_layout(const Mesh& mesh) {
    TwoPointLayout lay(mesh);
    lay.coupling.resize(mesh.n_edges());
    const int ground = mesh.n_cells();

    for (int a = 0; a < mesh.n_edges(); ++a) {
        const Edge& e = mesh.edges[a];
        const Vec2 n = mesh.edge_normal(a);
        const double len = mesh.edge_length(a);
        const double tol = 1e-12 * len;
        double d;
        if (!e.boundary())
            d = dot(n, mesh.cell_geom(e.l).circumcenter - mesh.cell_geom(e.k).circumcenter);
        else
            d = dot(n, mesh.edge_midpoint(a) - mesh.cell_geom(e.k).circumcenter);
        if (d < -tol)
            throw SolverError("non-admissible mesh: circumcenter distance " +
                              std::to_string(d) + " is negative at edge " +
                              std::to_string(a));
        if (d <= tol) {
            lay.coupling[a].merged = true;
            lay.uf.unite(e.k, e.boundary() ? ground : e.l);
        } else {
            lay.coupling[a].t = len / d;
        }
    }

    lay.cell_unknown.assign(mesh.n_cells() + 1, -2);
    lay.cell_unknown[lay.uf.find(ground)] = -1;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const int root = lay.uf.find(c);
        if (lay.cell_unknown[root] == -2) lay.cell_unknown[root] = lay.n_unknowns++;
    }
    return lay;
}

// Flux through each merged edge from the balance of its first co-boundary
// cell; a cell has at most one merged edge (a triangle has at most one right
// angle), so the remaining fluxes are already known.
void recover_merged_fluxes(const Mesh& mesh, const std::vector<EdgeCoupling>& coupling,
                           const ScalarField& f, FluxVector& p) {
    for (int a = 0; a < mesh.n_edges(); ++a) {
        if (!coupling[a].merged) continue;
        const int c = mesh.edges[a].k;
        const Cell& cell = mesh.cells[c];
        double rest = integrate_cell(mesh, c, f);
        int sign_a = 0;
        for (int i = 0; i < 3; ++i) {
            if (cell.e[i] == a)
                sign_a = cell.sign[i];
            else
                rest += cell.sign[i] * p[cell.e[i]];
        }
        p[a] = -rest * sign_a;
    }
}

} // namespace

TpfaSystem assemble_tpfa(const Mesh& mesh, const ScalarField& f) {
    TpfaSystem sys;
    TwoPointLayout lay = two_point_layout(mesh);

    std::vector<Eigen::Triplet<double>> trips;
    for (int a = 0; a < mesh.n_edges(); ++a) {
        if (lay.coupling[a].merged) continue;
        const Edge& e = mesh.edges[a];
        const double t = lay.coupling[a].t;
        const int uk = lay.unknown_of(e.k);
        const int ul = e.boundary() ? -1 : lay.unknown_of(e.l);
        if (uk >= 0) trips.emplace_back(uk, uk, t);
        if (ul >= 0) trips.emplace_back(ul, ul, t);
        if (uk >= 0 && ul >= 0) {
            trips.emplace_back(uk, ul, -t);
            trips.emplace_back(ul, uk, -t);
        }
    }
    sys.A.resize(lay.n_unknowns, lay.n_unknowns);
    sys.A.setFromTriplets(trips.begin(), trips.end());
    sys.A.makeCompressed();

    sys.rhs = Eigen::VectorXd::Zero(lay.n_unknowns);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const int u = lay.unknown_of(c);
        if (u >= 0) sys.rhs(u) += integrate_cell(mesh, c, f);
    }

    sys.cell_unknown.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) sys.cell_unknown[c] = lay.unknown_of(c);
    sys.coupling = std::move(lay.coupling);
    return sys;
}

DiscreteSolution solve_tpfa(const Mesh& mesh, const ScalarField& f) {
    TpfaSystem sys = assemble_tpfa(mesh, f);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.A.rows());
    DiscreteSolution sol;
    sol.scheme = Scheme::Tpfa;
    sol.stats.method = "cholesky";
    if (sys.A.rows() > 0) {
        Eigen::SimplicialLLT<SparseMatrix> chol;
        chol.compute(sys.A);
        if (chol.info() != Eigen::Success)
            throw SolverError("two-point system factorization failed");
        x = chol.solve(sys.rhs);
        sol.stats.residual = relative_residual(sys.A, x, sys.rhs);
        if (!(sol.stats.residual <= 1e-10))
            throw SolverError("two-point solve residual exceeds 1e-10");
    }

    sol.u.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c)
        sol.u[c] = sys.cell_unknown[c] >= 0 ? x(sys.cell_unknown[c]) : 0.0;

    sol.p.resize(mesh.n_edges());
    for (int a = 0; a < mesh.n_edges(); ++a) {
        if (sys.coupling[a].merged) continue;
        const Edge& e = mesh.edges[a];
        const double ul = e.boundary() ? 0.0 : sol.u[e.l];
        sol.p[a] = sys.coupling[a].t * (ul - sol.u[e.k]);
    }
    recover_merged_fluxes(mesh, sys.coupling, f, sol.p);
    return sol;
}

DiscreteSolution solve_petrov_galerkin(const Mesh& mesh, const ScalarField& f,
                                       const Closure& closure) {
    // Fallback two-point flux with centroid distances. The circumcenter
    // distances of the lumped scheme are matched to cell-center values and
    // are inconsistent against the cell means the six-point stencils are
    // built on (and they vanish on right-triangle pairs); the centroid
    // distance n.(c_L - c_K) is positive on every valid mesh.
    auto fallback_t = [&mesh](int a) {
        const Edge& e = mesh.edges[a];
        const Vec2 n = mesh.edge_normal(a);
        const double d = e.boundary()
                             ? dot(n, mesh.edge_midpoint(a) - mesh.cell_centroid(e.k))
                             : dot(n, mesh.cell_centroid(e.l) - mesh.cell_centroid(e.k));
        return mesh.edge_length(a) / d;
    };

    // flux rule per edge: p_a = sum of w_i * u(cell_i)
    struct Term {
        int cell;
        double w;
    };
    std::vector<std::vector<Term>> rule(mesh.n_edges());
    for (int a = 0; a < mesh.n_edges(); ++a) {
        const Edge& e = mesh.edges[a];
        if (!e.boundary()) {
            const EdgeNeighborhood nb = edge_neighborhood(mesh, a);
            if (nb.complete) {
                const StencilCoefficients c =
                    solve_stencil(assemble_constraints(mesh, nb), closure);
                rule[a] = {{nb.K, -(c.eta + c.beta + c.gamma)},
                           {nb.L, c.eta - c.alpha - c.delta},
                           {nb.M, c.alpha},
                           {nb.P, c.beta},
                           {nb.Q, c.gamma},
                           {nb.R, c.delta}};
                continue;
            }
        }
        const double t = fallback_t(a);
        rule[a].push_back({e.k, -t});
        if (!e.boundary()) rule[a].push_back({e.l, t});
    }

    // per-cell balances with the positive-diagonal sign convention
    const int nf = mesh.n_cells();
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs(nf);
    for (int c = 0; c < nf; ++c) {
        const Cell& cell = mesh.cells[c];
        for (int i = 0; i < 3; ++i)
            for (const Term& term : rule[cell.e[i]])
                trips.emplace_back(c, term.cell, -cell.sign[i] * term.w);
        rhs(c) = integrate_cell(mesh, c, f);
    }
    SparseMatrix a(nf, nf);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    DiscreteSolution sol;
    sol.scheme = Scheme::Petrov;
    sol.stats.method = "sparse-lu";
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("Petrov-Galerkin global system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);
    sol.stats.residual = relative_residual(a, x, rhs);
    if (!(sol.stats.residual <= 1e-10))
        throw SolverError("Petrov-Galerkin solve residual exceeds 1e-10");

    sol.u.assign(x.data(), x.data() + nf);
    sol.p.resize(mesh.n_edges());
    for (int a2 = 0; a2 < mesh.n_edges(); ++a2) {
        double flux = 0.0;
        for (const Term& term : rule[a2]) flux += term.w * sol.u[term.cell];
        sol.p[a2] = flux;
    }
    return sol;
}

double conservation_check(const Mesh& mesh, const DiscreteSolution& sol,
                          const ScalarField& f) {
    double worst = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        double balance = integrate_cell(mesh, c, f);
        for (int i = 0; i < 3; ++i) balance += cell.sign[i] * sol.p[cell.e[i]];
        worst = std::max(worst, std::abs(balance));
    }
    return worst;
}

} // namespace pgfv
