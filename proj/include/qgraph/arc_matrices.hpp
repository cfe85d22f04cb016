#pragma once

#include "qgraph/bond_basis.hpp"
#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"

#include <Eigen/Dense>

namespace qgraph {

/// The 2B x 2B arc matrices at gamma, in the canonical arc ordering.
struct ArcMatrices {
    Eigen::MatrixXcd M, N, R, Q;
    SpectralParameter sp;
};

Eigen::MatrixXcd assemble_M(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp);
Eigen::MatrixXcd assemble_N(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp);
/// Assembled from the r, t amplitudes directly; the Cayley relation
/// R = (sqrt(g) + M)(sqrt(g) - M)^{-1} is checked in tests only.
Eigen::MatrixXcd assemble_R(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp);
Eigen::MatrixXcd assemble_Q(const BoundaryConditions& bc, const SpectralParameter& sp);

ArcMatrices assemble_all(const MetricGraph& g, const BoundaryConditions& bc,
                         const std::vector<BondBasisData>& basis, const SpectralParameter& sp);

/// d/dgamma of M, entrywise (analytic for V = 0, finite difference otherwise).
Eigen::MatrixXcd assemble_dM(const MetricGraph& g, const SpectralParameter& sp);

} // namespace qgraph
