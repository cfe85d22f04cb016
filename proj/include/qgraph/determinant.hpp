#pragma once

#include "qgraph/arc_matrices.hpp"
#include "qgraph/bond_basis.hpp"
#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"

#include <Eigen/Dense>

namespace qgraph {

// All representations return the same S(gamma); prefactors are the matched
// ones, so cross-representation equality is exact up to rounding.

/// S(gamma) from the f-basis arc determinant. Evaluated in a column-scaled
/// form in which the per-bond singular factors cancel algebraically, so the
/// value stays accurate across bond Dirichlet resonances.
cplx spectral_det_arc_f(const MetricGraph& g, const BoundaryConditions& bc,
                        const std::vector<BondBasisData>& basis, const SpectralParameter& sp);

/// S(gamma) from the g-basis arc determinant (dual form).
cplx spectral_det_arc_g(const MetricGraph& g, const BoundaryConditions& bc,
                        const std::vector<BondBasisData>& basis, const SpectralParameter& sp);

/// S(gamma) from the scattering form det(C - sqrt(g) D) det(1 - QR) / det(1 + R).
cplx spectral_det_scattering(const MetricGraph& g, const BoundaryConditions& bc,
                             const std::vector<BondBasisData>& basis, const SpectralParameter& sp);

/// V x V vertex matrix for delta-coupling (continuous functions).
Eigen::MatrixXcd vertex_matrix_continuous(const MetricGraph& g,
                                          const std::vector<BondBasisData>& basis,
                                          const std::vector<double>& lambda,
                                          const SpectralParameter& sp);

/// V x V vertex matrix for delta'_s-coupling (continuous derivatives).
Eigen::MatrixXcd vertex_matrix_derivative(const MetricGraph& g,
                                          const std::vector<BondBasisData>& basis,
                                          const std::vector<double>& mu,
                                          const SpectralParameter& sp);

cplx spectral_det_vertex_continuous(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                                    const std::vector<double>& lambda, const SpectralParameter& sp);

cplx spectral_det_vertex_derivative(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                                    const std::vector<double>& mu, const SpectralParameter& sp);

/// Zeta-regularised determinant for delta-coupling: 2^B / (prod m) * S.
cplx zeta_det_continuous(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                         const std::vector<double>& lambda, const SpectralParameter& sp);

/// Zeta-regularised determinant for delta'_s-coupling.
cplx zeta_det_derivative(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                         const std::vector<double>& mu, const SpectralParameter& sp);

/// Conjectured zeta determinant for general boundary conditions, both forms.
struct ZetaGeneralResult {
    cplx f_form;          // (-1)^V / prod(m) * prod(-2/f'(l)) * det(C + DM)
    cplx scattering_form; // det(g^{-1/4} C - g^{1/4} D) / (prod(-m) sqrt(prod R_{a,abar})) det(1-QR)
    double residual;      // relative difference between the two
};

ZetaGeneralResult zeta_det_general(const MetricGraph& g, const BoundaryConditions& bc,
                                   const std::vector<BondBasisData>& basis,
                                   const SpectralParameter& sp);

/// Green-function regularisation S(gamma)/S(gamma0).
cplx gf_ratio(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp,
              const SpectralParameter& sp0);

/// (-1)^V 2^{-B} gamma^{-B/2} e^{sqrt(gamma) L} det(C - sqrt(gamma) D).
cplx large_gamma_asymptote(const MetricGraph& g, const BoundaryConditions& bc,
                           const SpectralParameter& sp);

/// True when a bond sits numerically on a zero of one of the per-bond
/// scaling factors (f'(l) or g(l)); there the column-scaled determinants
/// lose every significant digit to cancellation and the spectral parameter
/// must be stepped off the coincidence before evaluating.
bool resonance_coincident(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                          const SpectralParameter& sp);

// Convenience overloads computing the basis internally. These step the
// spectral parameter off exact bond-resonance coincidences (relative shift
// ~4e-9, far below the accuracy of any surrounding computation).
cplx spectral_det_arc_f(const MetricGraph& g, const BoundaryConditions& bc,
                        const SpectralParameter& sp);
cplx spectral_det_arc_g(const MetricGraph& g, const BoundaryConditions& bc,
                        const SpectralParameter& sp);
cplx spectral_det_scattering(const MetricGraph& g, const BoundaryConditions& bc,
                             const SpectralParameter& sp);

/// The column-scaled matrix C diag(s) + D Msc with s_a = -1/f'_a(l); all
/// entries finite at bond resonances, singular exactly at eigenvalues.
Eigen::MatrixXcd scaled_secular_matrix(const MetricGraph& g, const BoundaryConditions& bc,
                                       const std::vector<BondBasisData>& basis);

/// prod over bonds of (1 + r_fwd)(1 + r_rev) - t^2, i.e. det(1 + R) computed
/// blockwise (fluxes cancel within a bond block).
cplx det_one_plus_R(const MetricGraph& g, const std::vector<BondBasisData>& basis);

/// Finite lambda/mu values from builder parameters; throws on infinite markers.
std::vector<double> finite_params(const BoundaryConditions& bc);

} // namespace qgraph
