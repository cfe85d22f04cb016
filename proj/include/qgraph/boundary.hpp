#pragma once

#include "qgraph/graph.hpp"
#include "qgraph/spectral_param.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace qgraph {

/// Real coupling parameter per vertex, with an explicit marker for the
/// infinite limit (Dirichlet for delta, Neumann for delta') so that no large
/// floats enter the matrices.
struct VertexParam {
    double value = 0.0;
    bool infinite = false;

    static VertexParam finite(double v) { return {v, false}; }
    static VertexParam inf() { return {0.0, true}; }
};

/// Self-adjoint boundary conditions C psi(0) + D psi'(0) = 0. The matrices
/// are block-diagonal in the graph's canonical (vertex-grouped) arc order.
struct BoundaryConditions {
    enum class Family { Delta, DeltaPrime, General };

    Eigen::MatrixXcd C, D;
    Family family = Family::General;
    std::vector<VertexParam> params; // lambda or mu per vertex for the builders
    std::vector<int> block_offsets;
    std::vector<int> block_sizes;

    int size() const { return int(C.rows()); }
};

BoundaryConditions delta_coupling_bc(const MetricGraph& g, const std::vector<VertexParam>& lambda);
BoundaryConditions delta_prime_bc(const MetricGraph& g, const std::vector<VertexParam>& mu);
BoundaryConditions general_bc(const MetricGraph& g, const std::vector<Eigen::MatrixXcd>& c_blocks,
                              const std::vector<Eigen::MatrixXcd>& d_blocks);

// Convenience: uniform finite parameters.
BoundaryConditions delta_coupling_bc(const MetricGraph& g, double lambda_all = 0.0);
BoundaryConditions delta_prime_bc(const MetricGraph& g, double mu_all);

struct BcReport {
    bool hermiticity_ok = false;
    bool rank_ok = false;
    double hermiticity_residual = 0.0; // ||C D^H - D C^H||
    int rank_defect = 0;               // 2B - rank(C, D)
    std::string message;

    bool pass() const { return hermiticity_ok && rank_ok; }
};

BcReport validate_bc(const BoundaryConditions& bc);

/// det(C - sqrt(gamma) D), evaluated blockwise.
cplx det_C_minus_sqrtgamma_D(const BoundaryConditions& bc, const SpectralParameter& sp);

} // namespace qgraph
