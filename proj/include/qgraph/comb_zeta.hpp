#pragma once

#include "qgraph/graph.hpp"
#include "qgraph/spectral_param.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace qgraph {

using Rational = boost::multiprecision::cpp_rational;

/// Combinatorial shadow of a metric graph: adjacency/valency matrices and
/// the arc transfer structure. Lengths, fluxes and potentials are ignored.
struct CombGraph {
    int V = 0, B = 0;
    Eigen::MatrixXd A;  // V x V adjacency counts (loops count twice on the diagonal)
    Eigen::MatrixXd Y;  // diagonal valencies
    Eigen::MatrixXd Bm; // 2B x 2B, Bm(i, j) = 1 iff head(j) = tail(i)
    Eigen::MatrixXd J;  // 2B x 2B, couples reversed arcs
    bool has_loops = false;
    MetricGraph metric; // kept for orbit enumeration
};

CombGraph comb_graph(const MetricGraph& g);

/// Z(u, w)^{-1} = det(1_2B - u (B - w J)).
cplx bartholdi_arc(const CombGraph& cg, cplx u, cplx w);

/// Z(u, w)^{-1} = (1-(uw)^2)^{B-V} det(1_V (1-(uw)^2) - u A + w u^2 Y).
/// Identical to the arc form on loopless graphs.
cplx bartholdi_vertex(const CombGraph& cg, cplx u, cplx w);

/// Coefficients of u^0..u^max_order of the arc determinant, exact in u
/// (the determinant is a polynomial of degree <= 2B).
std::vector<cplx> bartholdi_arc_series(const CombGraph& cg, cplx w, int max_order);

/// Series of the vertex form, via circle sampling (handles B < V, where the
/// prefactor alone is an infinite series).
std::vector<cplx> bartholdi_vertex_series(const CombGraph& cg, cplx w, int max_order);

/// Series of prod over primitive orbits of (1 - (1-w)^{n_R} u^{#arcs}),
/// truncated at max_order, by explicit enumeration.
std::vector<cplx> bartholdi_bruteforce(const CombGraph& cg, cplx w, int max_order);

/// Exact rational versions of the arc series (Faddeev-LeVerrier) and the
/// brute-force product.
std::vector<Rational> bartholdi_arc_series_exact(const CombGraph& cg, const Rational& w,
                                                 int max_order);
std::vector<Rational> bartholdi_bruteforce_exact(const CombGraph& cg, const Rational& w,
                                                 int max_order);

/// Metric <-> combinatorial dictionary at e^{-sqrt(gamma) l} = w u with
/// lambda_alpha = (2w - m_alpha) sqrt(gamma): compares det(1 - QR) with the
/// combinatorial arc determinant and the vertex matrix with its quoted
/// closed form.
struct BridgeReport {
    cplx det_qr_metric;
    cplx det_arc_comb;
    double residual_det = 0.0;
    double residual_vertex = 0.0; // vertex matrix vs combinatorial closed form
    double max_residual = 0.0;
};

BridgeReport metric_to_comb_bridge(const MetricGraph& g, double u, double w);

} // namespace qgraph
