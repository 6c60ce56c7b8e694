#pragma once

#include <stdexcept>
#include <string>

namespace pgfv {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate triangles, unsupported quadrature degrees, bad point data.
struct GeometryError : Error {
    using Error::Error;
};

/// Malformed .node/.ele input; carries the 1-based offending line number.
struct ParseError : Error {
    int line;
    ParseError(const std::string& what, int line_no)
        : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

/// Inconsistent mesh connectivity (edge with >2 cells, degenerate cell, ...).
struct TopologyError : Error {
    using Error::Error;
};

/// Stencil construction failures; carries the offending edge index.
struct StencilError : Error {
    int edge;
    StencilError(const std::string& what, int edge_id)
        : Error(what + " (edge " + std::to_string(edge_id) + ")"), edge(edge_id) {}
};

/// Linear solver failures, non-admissible meshes, size limits.
struct SolverError : Error {
    using Error::Error;
};

} // namespace pgfv
