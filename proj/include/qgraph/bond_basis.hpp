#pragma once

#include "qgraph/graph.hpp"
#include "qgraph/spectral_param.hpp"

#include <vector>

namespace qgraph {

/// Boundary data of the solution bases f and g on one bond at spectral
/// parameter gamma, plus the analytically continued scattering amplitudes.
///
/// Everything derives from the fundamental system (u1, u2) at x = l:
///   f'_a(0) = -u1(l)/u2(l)      f'_abar(0) = -u2'(l)/u2(l)   f'(l) = -1/u2(l)
///   g_a(0)  = -u2'(l)/u1'(l)    g_abar(0)  = -u1(l)/u1'(l)   g(l)  = -1/u1'(l)
/// The shared values f'(l) and g(l) encode the Wronskians W = -f'(l),
/// W^g = -g(l).
struct BondBasisData {
    double length = 0.0;
    SpectralParameter sp;

    // fundamental system at x = l (Wronskian u1 u2' - u1' u2 = 1)
    cplx u1l, u2l, u1pl, u2pl;

    cplx r_fwd, r_rev, t; // t_a = t_abar

    bool dirichlet_resonant = false; // |u2(l)| below tolerance, f ill-defined
    bool neumann_resonant = false;   // |u1'(l)| below tolerance, g ill-defined

    cplx fp0(bool forward) const { return forward ? -u1l / u2l : -u2pl / u2l; }
    cplx fpl() const { return -1.0 / u2l; }
    cplx g0(bool forward) const { return forward ? -u2pl / u1pl : -u1l / u1pl; }
    cplx gl() const { return -1.0 / u1pl; }
    cplx r(bool forward) const { return forward ? r_fwd : r_rev; }

    // Resonance-safe scaled entries: -f'_a(0)/f'_a(l) and -g_a(0)/g_a(l).
    cplx fp0_over_negfpl(bool forward) const { return forward ? -u1l : -u2pl; }
    cplx g0_over_neggl(bool forward) const { return forward ? -u2pl : -u1l; }
};

BondBasisData bond_basis_data(double length, const PotentialSpec& pot, const SpectralParameter& sp);

/// Basis data for every bond of the graph at gamma.
std::vector<BondBasisData> graph_basis(const MetricGraph& g, const SpectralParameter& sp);

/// Entrywise d/dgamma of the basis boundary data. Analytic for V = 0,
/// central finite difference with step max(1e-6, 1e-6 |gamma|) otherwise.
struct BondBasisDerivative {
    cplx dfp0_fwd, dfp0_rev, dfpl;
    cplx dg0_fwd, dg0_rev, dgl;
    cplx dlog_neg_fpl; // d/dgamma ln(-f'(l))
    cplx dlog_neg_gl;
};

BondBasisDerivative bond_basis_gamma_derivative(double length, const PotentialSpec& pot,
                                                const SpectralParameter& sp);

/// Interior values of the bases at forward coordinate x.
struct BasisPointValues {
    cplx f_fwd;  // f_a(x)
    cplx f_rev;  // f_abar evaluated at the same physical point, f_abar(l - x)
    cplx g_fwd;
    cplx g_rev;
};

BasisPointValues basis_point_values(double length, const PotentialSpec& pot,
                                    const SpectralParameter& sp, const BondBasisData& data, double x);

/// Quadrature integrals of the bases against themselves, paired with the
/// derivative sum rules they must reproduce.
struct BasisIntegrals {
    cplx int_f2, int_ffbar, int_g2, int_ggbar;            // Gauss-Legendre quadrature
    cplx rule_f2, rule_ffbar, rule_g2, rule_ggbar;        // -d_gamma f'(0), +d_gamma f'(l), ...
    double max_residual = 0.0;
};

BasisIntegrals basis_integrals(double length, const PotentialSpec& pot, const SpectralParameter& sp);

/// Residuals of the cross-basis identities (f' in terms of r and t, g in
/// terms of f', det M_(a) = f'(l)/g(l), N_(a) = M_(a)^{-1}, the 2 sqrt(gamma) t
/// relation).
struct BasisConversionReport {
    double fp_from_rt = 0.0;
    double fpl_from_rt = 0.0;
    double g_from_f = 0.0;
    double useful_relation = 0.0; // -f'(l) det(1 + R_(a)) = 2 sqrt(gamma) t
    double detM_block = 0.0;      // det M_(a) = f'(l)/g(l)
    double N_inverse = 0.0;       // N_(a) M_(a) = 1
    double max_residual = 0.0;
};

BasisConversionReport basis_conversions_check(double length, const PotentialSpec& pot,
                                              const SpectralParameter& sp);

/// Max drift of the numerically propagated Wronskian along the bond,
/// relative to 1. A conservation check on the integrator.
double wronskian_drift(double length, const PotentialSpec& pot, const SpectralParameter& sp,
                       int samples = 16);

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace qgraph
