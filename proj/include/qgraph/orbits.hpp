#pragma once

#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/spectral_param.hpp"

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace qgraph {

/// A primitive periodic orbit: cyclic arc sequence in canonical form
/// (lexicographically minimal rotation). Reversed orbits are distinct.
struct Orbit {
    std::vector<int> arcs;
    double length = 0.0;  // sum of bond lengths
    double flux = 0.0;    // sum of arc fluxes
    int reflections = 0;  // positions with a_{i+1} = reversed(a_i)
};

struct OrbitEnumOptions {
    int max_arcs = std::numeric_limits<int>::max();
    double max_length = std::numeric_limits<double>::infinity();
    std::size_t step_cap = 20'000'000; // DFS step guard
};

/// Every primitive orbit with at most max_arcs arcs (and metric length at
/// most max_length), each in canonical form, no duplicates.
std::vector<Orbit> enumerate_primitive_orbits(const MetricGraph& g, const OrbitEnumOptions& opts);

inline std::vector<Orbit> enumerate_primitive_orbits(const MetricGraph& g, int max_arcs) {
    OrbitEnumOptions o;
    o.max_arcs = max_arcs;
    return enumerate_primitive_orbits(g, o);
}

/// Vertex part of the orbit weight: product of Q entries at each passage,
/// Q(a_{i+1}, reversed(a_i)).
cplx orbit_vertex_weight(const Orbit& orbit, const MetricGraph& g, const Eigen::MatrixXcd& Q);

/// Product of X entries along the orbit in trace order, X(a_{i+1}, a_i).
/// With X = QR and V = 0 this is the full orbit weight v(C) b(C).
cplx orbit_matrix_weight(const Orbit& orbit, const Eigen::MatrixXcd& X);

enum class TraceFamily {
    Continuous, // delta-coupling, lambda = 0 (weights alpha)
    Derivative  // delta'_s-coupling, mu = 0 (weights beta)
};

/// Gamma-independent vertex scattering matrix of the family (Roth weights).
Eigen::MatrixXcd roth_Q(const MetricGraph& g, TraceFamily family);

struct HeatTraceResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    std::size_t orbit_terms = 0;
};

/// Heat trace from the periodic-orbit expansion: Weyl terms plus the sum
/// over all orbits (primitives and repetitions) of length <= cutoff.
HeatTraceResult roth_heat_trace(const MetricGraph& g, double t, TraceFamily family,
                                double orbit_cutoff);

struct OrbitProductResult {
    cplx value;
    double truncation_bound = 0.0;
    std::size_t primitive_count = 0;
};

/// Zeta determinant as a truncated product over primitive orbits:
/// gamma^{+-(V-B)/2} e^{sqrt(gamma) L} prod(1 - w e^{-sqrt(gamma) l + i theta}).
OrbitProductResult zeta_det_orbit_product(const MetricGraph& g, TraceFamily family,
                                          const SpectralParameter& sp, double orbit_cutoff);

} // namespace qgraph
