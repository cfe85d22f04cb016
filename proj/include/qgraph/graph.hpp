#pragma once

#include "qgraph/potential.hpp"

#include <array>
#include <string>
#include <vector>

namespace qgraph {

/// Directed bond. `forward` marks the reference orientation of the bond
/// (coordinates and potentials are stated in that orientation).
struct Arc {
    int tail = -1;
    int head = -1;
    int bond = -1;
    bool forward = true;
};

/// Declarative graph description; parsed from text by io, or built in code.
struct GraphSpec {
    struct Bond {
        std::string name;
        std::string from, to;
        double length = 1.0;
        double flux = 0.0; // theta on the forward arc, radians
        PotentialSpec potential;
    };
    std::vector<std::string> vertices;
    std::vector<Bond> bonds;
};

/// Immutable metric graph. Arcs are in canonical order: grouped by tail
/// vertex, stable by bond id; the two arcs of a loop sit in the same group.
class MetricGraph {
public:
    int vertex_count() const { return V_; }
    int bond_count() const { return B_; }
    int arc_count() const { return 2 * B_; }

    const std::vector<Arc>& arcs() const { return arcs_; }
    const Arc& arc(int a) const { return arcs_[std::size_t(a)]; }
    int reversal(int a) const { return reversal_[std::size_t(a)]; }
    /// The two canonical arc ids of bond b: [0] forward, [1] reversed.
    const std::array<int, 2>& bond_arcs(int b) const { return bond_arcs_[std::size_t(b)]; }

    double length(int bond) const { return lengths_[std::size_t(bond)]; }
    double total_length() const { return total_length_; }
    double flux(int a) const { return flux_[std::size_t(a)]; }
    const PotentialSpec& potential(int bond) const { return potentials_[std::size_t(bond)]; }

    int valency(int vertex) const { return valency_[std::size_t(vertex)]; }
    /// First arc index of the vertex's canonical block; the block spans
    /// [block_offset(v), block_offset(v) + valency(v)).
    int block_offset(int vertex) const { return block_offset_[std::size_t(vertex)]; }

    const std::string& vertex_name(int v) const { return vertex_names_[std::size_t(v)]; }
    const std::string& bond_name(int b) const { return bond_names_[std::size_t(b)]; }
    int vertex_index(const std::string& name) const;

    /// Fluxes redistributed: overrides theta per forward arc (reversed arcs
    /// get the opposite sign). Used for gauge-invariance checks.
    MetricGraph with_fluxes(const std::vector<double>& per_bond_theta) const;

    friend MetricGraph build_graph(const GraphSpec& spec);

private:
    int V_ = 0, B_ = 0;
    std::vector<Arc> arcs_;
    std::vector<int> reversal_;
    std::vector<std::array<int, 2>> bond_arcs_;
    std::vector<double> lengths_;
    std::vector<double> flux_;
    std::vector<PotentialSpec> potentials_;
    std::vector<int> valency_;
    std::vector<int> block_offset_;
    std::vector<std::string> vertex_names_, bond_names_;
    double total_length_ = 0.0;
};

MetricGraph build_graph(const GraphSpec& spec);

// Ready-made paper instances.
GraphSpec make_wire_spec(double L = 1.0);
GraphSpec make_ring_spec(double L = 1.0, double theta = 0.0);
GraphSpec make_star_spec(const std::vector<double>& arm_lengths);
GraphSpec make_triangle_spec(double l = 1.0);
GraphSpec make_complete_graph_spec(int n, double l = 1.0);

} // namespace qgraph
