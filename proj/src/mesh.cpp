#include "pgfv/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace pgfv {

namespace {

std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

} // namespace

int Mesh::opposite_vertex(int c, int a) const {
    const Cell& cell = cells[c];
    for (int i = 0; i < 3; ++i)
        if (cell.e[i] == a) return cell.v[(i + 2) % 3];
    throw TopologyError("edge " + std::to_string(a) + " is not an edge of cell " +
                        std::to_string(c));
}

int Mesh::edge_between(int u, int v) const {
    auto it = edge_of_pair_.find(pair_key(u, v));
    return it == edge_of_pair_.end() ? -1 : it->second;
}

void Mesh::finalize() {
    const int nv = n_vertices();
    edges.clear();
    edge_of_pair_.clear();
    cell_geoms_.clear();
    cell_geoms_.reserve(cells.size());

    for (std::size_t c = 0; c < cells.size(); ++c) {
        Cell& cell = cells[c];
        for (int i = 0; i < 3; ++i) {
            if (cell.v[i] < 0 || cell.v[i] >= nv)
                throw TopologyError("cell " + std::to_string(c) +
                                    " references vertex " + std::to_string(cell.v[i]) +
                                    " outside [0," + std::to_string(nv) + ")");
        }
        if (cell.v[0] == cell.v[1] || cell.v[1] == cell.v[2] || cell.v[0] == cell.v[2])
            throw TopologyError("degenerate cell " + std::to_string(c) +
                                " (repeated vertex index)");

        const Vec2 p0 = vertices[cell.v[0]];
        const Vec2 p1 = vertices[cell.v[1]];
        const Vec2 p2 = vertices[cell.v[2]];
        if (cross(p1 - p0, p2 - p0) < 0.0) std::swap(cell.v[1], cell.v[2]);
        try {
            cell_geoms_.push_back(tri_geom(vertices[cell.v[0]], vertices[cell.v[1]],
                                           vertices[cell.v[2]]));
        } catch (const GeometryError&) {
            throw TopologyError("degenerate cell " + std::to_string(c) +
                                " (zero signed area)");
        }
    }

    // Synthesize oriented edges. The first cell to visit a vertex pair fixes
    // (S,N) as its own counterclockwise traversal, which makes the derived
    // normal outward for that cell: it becomes K.
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Cell& cell = cells[c];
        for (int i = 0; i < 3; ++i) {
            const int u = cell.v[i];
            const int v = cell.v[(i + 1) % 3];
            const std::uint64_t key = pair_key(u, v);
            auto it = edge_of_pair_.find(key);
            if (it == edge_of_pair_.end()) {
                Edge e;
                e.s = u;
                e.n = v;
                e.k = static_cast<int>(c);
                edge_of_pair_.emplace(key, static_cast<int>(edges.size()));
                cell.e[i] = static_cast<int>(edges.size());
                cell.sign[i] = 1;
                edges.push_back(e);
            } else {
                Edge& e = edges[it->second];
                if (e.l >= 0)
                    throw TopologyError("edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ") has more than two incident cells");
                if (e.s == u)
                    throw TopologyError("cells " + std::to_string(e.k) + " and " +
                                        std::to_string(c) + " traverse edge (" +
                                        std::to_string(u) + "," + std::to_string(v) +
                                        ") in the same direction");
                e.l = static_cast<int>(c);
                cell.e[i] = it->second;
                cell.sign[i] = -1;
            }
        }
    }
}

Mesh build_structured(int n, Diagonal split) {
    if (n < 1) throw Error("build_structured requires n >= 1");
    Mesh m;
    const double h = 1.0 / n;
    m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.vertices.push_back({i * h, j * h});

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    m.cells.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int sw = vid(i, j), se = vid(i + 1, j);
            const int nw = vid(i, j + 1), ne = vid(i + 1, j + 1);
            Cell lower, upper;
            if (split == Diagonal::Slash) {
                lower.v = {sw, se, ne};
                upper.v = {sw, ne, nw};
            } else {
                lower.v = {sw, se, nw};
                upper.v = {se, ne, nw};
            }
            m.cells.push_back(lower);
            m.cells.push_back(upper);
        }
    }
    m.finalize();
    return m;
}

Mesh mesh_from_cells(std::vector<Vec2> vertices,
                     const std::vector<std::array<int, 3>>& tris) {
    Mesh m;
    m.vertices = std::move(vertices);
    m.cells.reserve(tris.size());
    for (const auto& t : tris) {
        Cell c;
        c.v = t;
        m.cells.push_back(c);
    }
    m.finalize();
    return m;
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    explicit LineReader(const std::string& text) : in(text) {}

    // next non-blank, non-comment line
    bool next(std::istringstream& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            out = std::istringstream(line);
            return true;
        }
        return false;
    }
};

long read_int(std::istringstream& s, LineReader& r, const char* what) {
    long v;
    if (!(s >> v)) throw ParseError(std::string("expected ") + what, r.line_no);
    return v;
}

double read_double(std::istringstream& s, LineReader& r, const char* what) {
    double v;
    if (!(s >> v)) throw ParseError(std::string("expected ") + what, r.line_no);
    return v;
}

} // namespace

Mesh load_mesh(const std::string& node_text, const std::string& ele_text) {
    std::vector<Vec2> vertices;
    {
        LineReader r(node_text);
        std::istringstream line;
        if (!r.next(line)) throw ParseError("empty .node input", r.line_no);
        const long nv = read_int(line, r, "vertex count");
        const long dim = read_int(line, r, "dimension");
        if (nv <= 0 || dim != 2)
            throw ParseError(".node header must be \"V 2 0 0\" with V > 0", r.line_no);
        vertices.resize(nv);
        std::vector<bool> seen(nv, false);
        for (long i = 0; i < nv; ++i) {
            if (!r.next(line))
                throw ParseError("expected " + std::to_string(nv) + " vertex lines",
                                 r.line_no);
            const long idx = read_int(line, r, "vertex index");
            if (idx < 1 || idx > nv)
                throw ParseError("vertex index " + std::to_string(idx) + " out of range",
                                 r.line_no);
            if (seen[idx - 1])
                throw ParseError("duplicate vertex index " + std::to_string(idx),
                                 r.line_no);
            seen[idx - 1] = true;
            vertices[idx - 1].x = read_double(line, r, "x coordinate");
            vertices[idx - 1].y = read_double(line, r, "y coordinate");
        }
    }

    std::vector<std::array<int, 3>> tris;
    {
        LineReader r(ele_text);
        std::istringstream line;
        if (!r.next(line)) throw ParseError("empty .ele input", r.line_no);
        const long nf = read_int(line, r, "cell count");
        const long per = read_int(line, r, "nodes per cell");
        if (nf <= 0 || per != 3)
            throw ParseError(".ele header must be \"F 3 0\" with F > 0", r.line_no);
        tris.resize(nf);
        std::vector<bool> seen(nf, false);
        for (long i = 0; i < nf; ++i) {
            if (!r.next(line))
                throw ParseError("expected " + std::to_string(nf) + " cell lines",
                                 r.line_no);
            const long idx = read_int(line, r, "cell index");
            if (idx < 1 || idx > nf)
                throw ParseError("cell index " + std::to_string(idx) + " out of range",
                                 r.line_no);
            if (seen[idx - 1])
                throw ParseError("duplicate cell index " + std::to_string(idx), r.line_no);
            seen[idx - 1] = true;
            for (int k = 0; k < 3; ++k) {
                const long v = read_int(line, r, "vertex index");
                if (v < 1 || v > static_cast<long>(vertices.size()))
                    throw ParseError("cell references vertex " + std::to_string(v) +
                                         " beyond the node count",
                                     r.line_no);
                tris[idx - 1][k] = static_cast<int>(v - 1);
            }
        }
    }

    Mesh m = mesh_from_cells(std::move(vertices), tris);
    const auto issues = validate(m);
    if (!issues.empty())
        throw TopologyError("loaded mesh violates invariants: " + issues.front().message);
    return m;
}

std::pair<std::string, std::string> save_mesh(const Mesh& mesh) {
    std::string node, ele;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d 2 0 0\n", mesh.n_vertices());
    node += buf;
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", i + 1, mesh.vertices[i].x,
                      mesh.vertices[i].y);
        node += buf;
    }
    std::snprintf(buf, sizeof buf, "%d 3 0\n", mesh.n_cells());
    ele += buf;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        std::snprintf(buf, sizeof buf, "%d %d %d %d\n", c + 1, cell.v[0] + 1,
                      cell.v[1] + 1, cell.v[2] + 1);
        ele += buf;
    }
    return {node, ele};
}

std::vector<ValidationIssue> validate(const Mesh& mesh) {
    using Code = ValidationIssue::Code;
    std::vector<ValidationIssue> issues;
    auto report = [&issues](Code code, std::string msg) {
        issues.push_back({code, std::move(msg)});
    };

    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        const Vec2 p0 = mesh.vertices[cell.v[0]];
        const Vec2 p1 = mesh.vertices[cell.v[1]];
        const Vec2 p2 = mesh.vertices[cell.v[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        const double d = std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)});
        if (std::abs(a2) < 2e-14 * d * d) {
            report(Code::DegenerateCell, "cell " + std::to_string(c) + " has zero area");
            continue;
        }
        if (a2 < 0.0)
            report(Code::CellOrientation,
                   "cell " + std::to_string(c) + " vertices are not counterclockwise");
    }

    for (int a = 0; a < mesh.n_edges(); ++a) {
        const Edge& e = mesh.edges[a];
        const std::string id = "edge " + std::to_string(a);
        if (e.k < 0 || e.k >= mesh.n_cells() || e.k == e.l) {
            report(Code::CoBoundary, id + " co-boundary is malformed");
            continue;
        }
        const Vec2 n = mesh.edge_normal(a);
        // det[n | N-S] > 0 holds by construction for the derived normal; the
        // stored co-boundary order must agree with it.
        if (!e.boundary()) {
            if (e.l >= mesh.n_cells()) {
                report(Code::CoBoundary, id + " co-boundary is malformed");
                continue;
            }
            if (dot(n, mesh.cell_centroid(e.l) - mesh.cell_centroid(e.k)) <= 0.0)
                report(Code::DirectNormalPair,
                       id + ": normal derived from (S,N) does not point from K to L"
                            " ((n_a, SN) direct-pair convention broken)");
        } else {
            if (dot(n, mesh.cell_centroid(e.k) - mesh.edge_midpoint(a)) >= 0.0)
                report(Code::BoundaryNormal, id + ": boundary normal is not outward");
        }
    }

    // incidence closure, both directions
    std::vector<int> coboundary_hits(mesh.n_edges(), 0);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Cell& cell = mesh.cells[c];
        for (int i = 0; i < 3; ++i) {
            const int a = cell.e[i];
            if (a < 0 || a >= mesh.n_edges()) {
                report(Code::IncidenceClosure,
                       "cell " + std::to_string(c) + " references a missing edge");
                continue;
            }
            const Edge& e = mesh.edges[a];
            const bool endpoints_ok =
                (e.s == cell.v[i] && e.n == cell.v[(i + 1) % 3]) ||
                (e.n == cell.v[i] && e.s == cell.v[(i + 1) % 3]);
            if (!endpoints_ok)
                report(Code::IncidenceClosure,
                       "cell " + std::to_string(c) + " edge " + std::to_string(a) +
                           " endpoints are not consecutive cell vertices");
            const bool is_k = (e.k == c);
            const bool is_l = (e.l == c);
            if (!is_k && !is_l)
                report(Code::IncidenceClosure,
                       "cell " + std::to_string(c) + " missing from co-boundary of edge " +
                           std::to_string(a));
            else if (cell.sign[i] != (is_k ? 1 : -1))
                report(Code::IncidenceClosure,
                       "cell " + std::to_string(c) + " orientation sign disagrees with "
                                                     "co-boundary order of edge " +
                           std::to_string(a));
            ++coboundary_hits[a];
        }
    }
    for (int a = 0; a < mesh.n_edges(); ++a) {
        const int expected = mesh.edges[a].boundary() ? 1 : 2;
        if (coboundary_hits[a] != expected)
            report(Code::IncidenceClosure,
                   "edge " + std::to_string(a) + " appears in " +
                       std::to_string(coboundary_hits[a]) + " cells, expected " +
                       std::to_string(expected));
    }

    if (mesh.n_vertices() - mesh.n_edges() + mesh.n_cells() != 1)
        report(Code::EulerRelation,
               "V - E + F = " + std::to_string(mesh.n_vertices() - mesh.n_edges() +
                                               mesh.n_cells()) +
                   ", expected 1");
    return issues;
}

EdgeNeighborhood edge_neighborhood(const Mesh& mesh, int a) {
    const Edge& e = mesh.edges[a];
    if (e.boundary())
        throw TopologyError("edge " + std::to_string(a) +
                            " is a boundary edge; neighborhoods exist for internal edges only");

    EdgeNeighborhood nb;
    nb.edge = a;
    nb.S = e.s;
    nb.N = e.n;
    nb.K = e.k;
    nb.L = e.l;
    nb.W = mesh.opposite_vertex(nb.K, a);
    nb.E = mesh.opposite_vertex(nb.L, a);

    // outer cell across edge (u,v), seen from `inner`; -1 when (u,v) is a
    // boundary edge
    auto across = [&mesh](int u, int v, int inner) {
        const int b = mesh.edge_between(u, v);
        if (b < 0)
            throw TopologyError("missing edge between vertices " + std::to_string(u) +
                                " and " + std::to_string(v));
        const Edge& be = mesh.edges[b];
        if (be.k != inner && be.l != inner)
            throw TopologyError("co-boundary of edge " + std::to_string(b) +
                                " does not contain the expected inner cell");
        return be.k == inner ? be.l : be.k;
    };
    auto third_vertex = [&mesh](int c, int u, int v) {
        if (c < 0) return -1;
        for (int w : mesh.cells[c].v)
            if (w != u && w != v) return w;
        return -1;
    };

    nb.M = across(nb.E, nb.N, nb.L);
    nb.P = across(nb.N, nb.W, nb.K);
    nb.Q = across(nb.W, nb.S, nb.K);
    nb.R = across(nb.S, nb.E, nb.L);
    nb.A = third_vertex(nb.M, nb.E, nb.N);
    nb.B = third_vertex(nb.P, nb.W, nb.N);
    nb.C = third_vertex(nb.Q, nb.S, nb.W);
    nb.D = third_vertex(nb.R, nb.S, nb.E);
    nb.complete = nb.M >= 0 && nb.P >= 0 && nb.Q >= 0 && nb.R >= 0;

    const std::array<int, 6> tris = {nb.K, nb.L, nb.M, nb.P, nb.Q, nb.R};
    for (std::size_t i = 0; i < tris.size(); ++i)
        for (std::size_t j = i + 1; j < tris.size(); ++j)
            if (tris[i] >= 0 && tris[i] == tris[j])
                throw TopologyError("edge " + std::to_string(a) +
                                    " neighborhood triangles are not pairwise distinct");
    return nb;
}

} // namespace pgfv
