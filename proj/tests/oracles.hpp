// Independent oracles used by the test suites: closed-form monomial
// integrals, brute-force mesh adjacency, and seeded random generators. None
// of these share code paths with the library routines they check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "pgfv/mesh.hpp"

namespace oracles {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// integral over the triangle of b0^p b1^q b2^r in barycentric coordinates
inline double bary_moment(double area, int p, int q, int r) {
    return 2.0 * area * factorial(p) * factorial(q) * factorial(r) /
           factorial(p + q + r + 2);
}

// exact integral of x^i y^j over a triangle via trinomial expansion of the
// barycentric parametrization (independent of any quadrature rule)
inline double triangle_monomial(const pgfv::TriGeom& t, int i, int j) {
    double total = 0.0;
    for (int p1 = 0; p1 <= i; ++p1)
        for (int q1 = 0; p1 + q1 <= i; ++q1) {
            const int r1 = i - p1 - q1;
            const double cx = factorial(i) / (factorial(p1) * factorial(q1) * factorial(r1)) *
                              std::pow(t.v[0].x, p1) * std::pow(t.v[1].x, q1) *
                              std::pow(t.v[2].x, r1);
            for (int p2 = 0; p2 <= j; ++p2)
                for (int q2 = 0; p2 + q2 <= j; ++q2) {
                    const int r2 = j - p2 - q2;
                    const double cy = factorial(j) /
                                      (factorial(p2) * factorial(q2) * factorial(r2)) *
                                      std::pow(t.v[0].y, p2) * std::pow(t.v[1].y, q2) *
                                      std::pow(t.v[2].y, r2);
                    total += cx * cy * bary_moment(t.area, p1 + p2, q1 + q2, r1 + r2);
                }
        }
    return total;
}

// integral of the arclength monomial s^k along a segment of length len
inline double segment_monomial(double len, int k) {
    return std::pow(len, k + 1) / (k + 1);
}

inline pgfv::TriGeom random_triangle(std::mt19937& rng, double lo = 0.1, double hi = 2.1) {
    std::uniform_real_distribution<double> coord(lo, hi);
    for (;;) {
        const pgfv::Vec2 a{coord(rng), coord(rng)};
        const pgfv::Vec2 b{coord(rng), coord(rng)};
        const pgfv::Vec2 c{coord(rng), coord(rng)};
        const double d = std::max({pgfv::norm(b - a), pgfv::norm(c - b), pgfv::norm(a - c)});
        if (std::abs(0.5 * pgfv::cross(b - a, c - a)) > 1e-3 * d * d)
            return pgfv::tri_geom(a, b, c);
    }
}

// co-boundary of a vertex pair recomputed from scratch by scanning all cells
inline std::vector<int> brute_coboundary(const pgfv::Mesh& mesh, int u, int v) {
    std::vector<int> cells;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const auto& cv = mesh.cells[c].v;
        const bool has_u = cv[0] == u || cv[1] == u || cv[2] == u;
        const bool has_v = cv[0] == v || cv[1] == v || cv[2] == v;
        if (has_u && has_v) cells.push_back(c);
    }
    return cells;
}

// Fig-3 frame recomputed from scratch (only vertex coordinates and cell
// vertex lists are consulted)
struct BruteFrame {
    int K = -1, L = -1, M = -1, P = -1, Q = -1, R = -1;
    int W = -1, E = -1, A = -1, B = -1, C = -1, D = -1;
    bool complete = false;
};

inline int brute_third_vertex(const pgfv::Mesh& mesh, int c, int u, int v) {
    if (c < 0) return -1;
    for (int w : mesh.cells[c].v)
        if (w != u && w != v) return w;
    return -1;
}

inline BruteFrame brute_frame(const pgfv::Mesh& mesh, int s, int n) {
    BruteFrame f;
    const auto kl = brute_coboundary(mesh, s, n);
    if (kl.size() != 2) return f;
    // K is the cell the derived normal points away from
    const pgfv::Vec2 nrm =
        pgfv::perp_cw(mesh.vertices[n] - mesh.vertices[s]);
    const pgfv::Vec2 mid = 0.5 * (mesh.vertices[s] + mesh.vertices[n]);
    auto centroid = [&](int c) {
        const auto& cv = mesh.cells[c].v;
        return (mesh.vertices[cv[0]] + mesh.vertices[cv[1]] + mesh.vertices[cv[2]]) / 3.0;
    };
    if (pgfv::dot(nrm, centroid(kl[0]) - mid) < 0.0) {
        f.K = kl[0];
        f.L = kl[1];
    } else {
        f.K = kl[1];
        f.L = kl[0];
    }
    f.W = brute_third_vertex(mesh, f.K, s, n);
    f.E = brute_third_vertex(mesh, f.L, s, n);
    auto across = [&](int u, int v, int inner) {
        for (int c : brute_coboundary(mesh, u, v))
            if (c != inner) return c;
        return -1;
    };
    f.M = across(f.E, n, f.L);
    f.P = across(n, f.W, f.K);
    f.Q = across(f.W, s, f.K);
    f.R = across(s, f.E, f.L);
    f.A = brute_third_vertex(mesh, f.M, f.E, n);
    f.B = brute_third_vertex(mesh, f.P, f.W, n);
    f.C = brute_third_vertex(mesh, f.Q, s, f.W);
    f.D = brute_third_vertex(mesh, f.R, s, f.E);
    f.complete = f.M >= 0 && f.P >= 0 && f.Q >= 0 && f.R >= 0;
    return f;
}

// structured mesh with interior vertices jiggled deterministically; breaks
// every symmetry while keeping all cells valid
inline pgfv::Mesh perturbed_mesh(int n, unsigned seed = 1234) {
    pgfv::Mesh base = pgfv::build_structured(n);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jig(-0.18 / n, 0.18 / n);
    std::vector<pgfv::Vec2> verts = base.vertices;
    for (pgfv::Vec2& v : verts) {
        const bool on_boundary = v.x < 1e-12 || v.x > 1.0 - 1e-12 || v.y < 1e-12 ||
                                 v.y > 1.0 - 1e-12;
        if (!on_boundary) {
            v.x += jig(rng);
            v.y += jig(rng);
        }
    }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(base.n_cells());
    for (const auto& cell : base.cells) tris.push_back(cell.v);
    return pgfv::mesh_from_cells(std::move(verts), tris);
}

// vertex renumbering: returns the rebuilt mesh and the permutation used
// (new_vertex_id = perm[old_vertex_id]); cell order is preserved
inline pgfv::Mesh permute_vertices(const pgfv::Mesh& mesh, std::mt19937& rng,
                                   std::vector<int>& perm) {
    perm.resize(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<pgfv::Vec2> verts(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) verts[perm[i]] = mesh.vertices[i];
    std::vector<std::array<int, 3>> tris;
    tris.reserve(mesh.n_cells());
    for (const auto& cell : mesh.cells)
        tris.push_back({perm[cell.v[0]], perm[cell.v[1]], perm[cell.v[2]]});
    return pgfv::mesh_from_cells(std::move(verts), tris);
}

} // namespace oracles
