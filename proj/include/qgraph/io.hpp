#pragma once

#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"

#include <string>
#include <vector>

namespace qgraph {

/// Per-vertex boundary block as written in a graph document.
struct VertexBcSpec {
    enum class Kind { Delta, DeltaPrime, Dirichlet, Neumann, General };
    Kind kind = Kind::Delta;
    double param = 0.0; // lambda or mu
    // General: m rows each for C and D, m the vertex valency
    std::vector<std::vector<cplx>> c_rows, d_rows;
};

/// Parsed graph document: the metric graph plus its boundary conditions.
struct GraphDocument {
    GraphSpec graph;
    std::vector<VertexBcSpec> bc; // aligned with graph.vertices
};

/// Parses the version-tagged text format:
///
///   format: 1
///   vertex NAME [delta L | delta_prime M | dirichlet | neumann | general]
///   crow <m entries>        (general only; then m drow lines)
///   drow <m entries>
///   bond NAME FROM TO length L [flux T]
///        [potential zero | const V | piecewise x:V x:V ... | poly c0 c1 ...]
///
/// '#' starts a comment; entries may be complex, written (re,im).
GraphDocument parse_graph(const std::string& text);

GraphDocument load_graph_file(const std::string& path);

/// Canonical form; parse(emit(doc)) reproduces doc exactly.
std::string emit_graph(const GraphDocument& doc);

/// Boundary matrices from the document blocks (delta/delta' builders when
/// the whole document stays within one family, general blocks otherwise).
BoundaryConditions document_bc(const MetricGraph& g, const GraphDocument& doc);

/// RFC-4180 field quoting.
std::string csv_escape(const std::string& field);

std::string format_number(double v, int precision);

} // namespace qgraph
