#include "pgfv/rt0.hpp"

#include <vector>

namespace pgfv {

namespace {

constexpr double kBaryTol = 1e-12;

bool cell_contains(const Mesh& mesh, int c, Vec2 x) {
    const Cell& cell = mesh.cells[c];
    const Vec2 p0 = mesh.vertices[cell.v[0]];
    const Vec2 p1 = mesh.vertices[cell.v[1]];
    const Vec2 p2 = mesh.vertices[cell.v[2]];
    const double a2 = 2.0 * mesh.cell_area(c);
    const double b0 = cross(p1 - x, p2 - x) / a2;
    const double b1 = cross(p2 - x, p0 - x) / a2;
    const double b2 = cross(p0 - x, p1 - x) / a2;
    return b0 >= -kBaryTol && b1 >= -kBaryTol && b2 >= -kBaryTol;
}

} // namespace

int locate_cell(const Mesh& mesh, Vec2 x) {
    for (int c = 0; c < mesh.n_cells(); ++c)
        if (cell_contains(mesh, c, x)) return c;
    return -1;
}

Vec2 eval_basis_in_cell(const Mesh& mesh, int a, int c, Vec2 x) {
    const Edge& e = mesh.edges[a];
    if (c == e.k) {
        const Vec2 w = mesh.vertices[mesh.opposite_vertex(e.k, a)];
        return (x - w) / (2.0 * mesh.cell_area(e.k));
    }
    if (c == e.l) {
        const Vec2 opp = mesh.vertices[mesh.opposite_vertex(e.l, a)];
        return -(x - opp) / (2.0 * mesh.cell_area(e.l));
    }
    return {};
}

Vec2 eval_basis(const Mesh& mesh, int a, Vec2 x) {
    const Edge& e = mesh.edges[a];
    if (cell_contains(mesh, e.k, x)) return eval_basis_in_cell(mesh, a, e.k, x);
    if (!e.boundary() && cell_contains(mesh, e.l, x))
        return eval_basis_in_cell(mesh, a, e.l, x);
    return {};
}

double div_basis(const Mesh& mesh, int a, int c) {
    const Edge& e = mesh.edges[a];
    if (c == e.k) return 1.0 / mesh.cell_area(e.k);
    if (c == e.l) return -1.0 / mesh.cell_area(e.l);
    return 0.0;
}

double flux_dof(const Mesh& mesh, int b, const FluxVector& q) {
    const Vec2 n = mesh.edge_normal(b);
    const Vec2 ps = mesh.vertices[mesh.edges[b].s];
    const Vec2 pn = mesh.vertices[mesh.edges[b].n];
    return quadrature_edge([&](Vec2 x) { return dot(eval_field(mesh, q, x), n); }, ps,
                           pn, 3);
}

SparseMatrix mass_matrix(const Mesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(9) * mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        const TriGeom& geom = mesh.cell_geom(c);
        // local basis on this cell: sign_i * (x - opp_i) / (2|c|)
        Vec2 opp[3];
        for (int i = 0; i < 3; ++i) opp[i] = mesh.vertices[cell.v[(i + 2) % 3]];
        const double inv2a = 1.0 / (2.0 * geom.area);
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const double mij =
                    cell.sign[i] * cell.sign[j] * inv2a * inv2a *
                    quadrature_triangle(
                        [&](Vec2 x) { return dot(x - opp[i], x - opp[j]); }, geom, 2);
                trips.emplace_back(cell.e[i], cell.e[j], mij);
                if (i != j) trips.emplace_back(cell.e[j], cell.e[i], mij);
            }
        }
    }
    SparseMatrix m(mesh.n_edges(), mesh.n_edges());
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

FluxVector interpolate_hdiv(const Mesh& mesh, const VectorField& w) {
    FluxVector p(mesh.n_edges());
    for (int a = 0; a < mesh.n_edges(); ++a) {
        const Vec2 n = mesh.edge_normal(a);
        const Vec2 ps = mesh.vertices[mesh.edges[a].s];
        const Vec2 pn = mesh.vertices[mesh.edges[a].n];
        p[a] = quadrature_edge([&](Vec2 x) { return dot(w(x), n); }, ps, pn, 3);
    }
    return p;
}

Vec2 eval_field_in_cell(const Mesh& mesh, const FluxVector& q, int c, Vec2 x) {
    const Cell& cell = mesh.cells[c];
    Vec2 val;
    for (int i = 0; i < 3; ++i)
        val += q[cell.e[i]] * eval_basis_in_cell(mesh, cell.e[i], c, x);
    return val;
}

Vec2 eval_field(const Mesh& mesh, const FluxVector& q, Vec2 x) {
    const int c = locate_cell(mesh, x);
    if (c < 0) return {};
    return eval_field_in_cell(mesh, q, c, x);
}

double field_cell_divergence(const Mesh& mesh, const FluxVector& q, int c) {
    const Cell& cell = mesh.cells[c];
    double signed_flux = 0.0;
    for (int i = 0; i < 3; ++i) signed_flux += cell.sign[i] * q[cell.e[i]];
    return signed_flux / mesh.cell_area(c);
}

} // namespace pgfv
