#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pgfv/geometry.hpp"

namespace pgfv {

/// Oriented edge record. The unit normal is derived from the vertex order,
/// n_a = perp_cw(unit(N - S)), so that (n_a, SN) is a direct pair; it points
/// from cell k towards cell l (outward from the domain when l is absent).
struct Edge {
    int s = -1;
    int n = -1;
    int k = -1;
    int l = -1; // -1 on boundary edges
    bool boundary() const { return l < 0; }
};

/// Triangle record. v is counterclockwise; e[i] joins v[i] and v[(i+1)%3];
/// sign[i] is +1 when the cell is edge e[i]'s first co-boundary cell (its
/// normal is outward for this cell) and -1 otherwise.
struct Cell {
    std::array<int, 3> v{};
    std::array<int, 3> e{};
    std::array<int, 3> sign{};
};

/// Conforming triangulation stored as a bidimensional cellular complex with
/// full incidence and co-boundary maps. Immutable after construction; safe
/// for concurrent reads.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<Edge> edges;
    std::vector<Cell> cells;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }

    Vec2 edge_vector(int a) const { return vertices[edges[a].n] - vertices[edges[a].s]; }
    double edge_length(int a) const { return norm(edge_vector(a)); }
    Vec2 edge_normal(int a) const { return perp_cw(edge_vector(a) / edge_length(a)); }
    Vec2 edge_midpoint(int a) const {
        return 0.5 * (vertices[edges[a].s] + vertices[edges[a].n]);
    }

    const TriGeom& cell_geom(int c) const { return cell_geoms_[c]; }
    const TriGeom& cell_geom(const Cell& c) const {
        return cell_geoms_[static_cast<int>(&c - cells.data())];
    }
    double cell_area(int c) const { return cell_geoms_[c].area; }
    Vec2 cell_centroid(int c) const { return cell_geoms_[c].centroid; }

    /// Vertex of cell c not on edge a; a must be an edge of c.
    int opposite_vertex(int c, int a) const;

    /// Edge index joining vertices u and v, or -1.
    int edge_between(int u, int v) const;

    /// Called by the factory functions below; synthesizes edges from cells,
    /// fixes orientations, precomputes incidence and geometry caches.
    void finalize();

private:
    std::vector<TriGeom> cell_geoms_;
    std::unordered_map<std::uint64_t, int> edge_of_pair_;
};

/// The S,N,W,E,A,B,C,D vertex frame and K,L,M,P,Q,R triangle frame around
/// one interior edge. Outer entries are -1 when the corresponding outer edge
/// lies on the boundary; complete is true iff all four outer triangles exist.
struct EdgeNeighborhood {
    int edge = -1;
    int S = -1, N = -1, W = -1, E = -1;
    int A = -1, B = -1, C = -1, D = -1;
    int K = -1, L = -1, M = -1, P = -1, Q = -1, R = -1;
    bool complete = false;
};

enum class Diagonal {
    Slash,     // (i,j) -- (i+1,j+1)
    Backslash, // (i+1,j) -- (i,j+1)
};

/// Uniform triangulation of the unit square with (n+1)^2 vertices, each grid
/// square split by the chosen diagonal.
Mesh build_structured(int n, Diagonal split = Diagonal::Slash);

/// Builds a mesh from raw vertex coordinates and triangles (any vertex
/// orientation; clockwise cells are flipped). Throws TopologyError on
/// degenerate cells, out-of-range indices or edges with >2 incident cells.
Mesh mesh_from_cells(std::vector<Vec2> vertices,
                     const std::vector<std::array<int, 3>>& tris);

/// Parses the ASCII .node/.ele pair (1-based indices in the files). Throws
/// ParseError with the offending line, or TopologyError.
Mesh load_mesh(const std::string& node_text, const std::string& ele_text);

/// Writes the mesh back in the .node/.ele format, coordinates at 17
/// significant digits. Returns {node_text, ele_text}.
std::pair<std::string, std::string> save_mesh(const Mesh& mesh);

struct ValidationIssue {
    enum class Code {
        CoBoundary,        // interior edge without two distinct cells, etc.
        DirectNormalPair,  // n_a not pointing K -> L / (n_a, SN) not direct
        BoundaryNormal,    // boundary normal not outward
        CellOrientation,   // cell vertices not strictly counterclockwise
        IncidenceClosure,  // cell/edge incidence maps disagree
        EulerRelation,     // V - E + F != 1
        DegenerateCell,
    };
    Code code;
    std::string message;
};

/// Checks every Mesh invariant; returns one issue per violation (empty for
/// a valid mesh). Violations are data, not errors.
std::vector<ValidationIssue> validate(const Mesh& mesh);

/// Resolves the Fig-3 frame around interior edge a. Partial neighborhoods
/// (complete=false) are returned rather than rejected; a boundary edge is an
/// error.
EdgeNeighborhood edge_neighborhood(const Mesh& mesh, int a);

} // namespace pgfv
