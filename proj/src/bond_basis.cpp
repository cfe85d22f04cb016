#include "qgraph/bond_basis.hpp"

#include "qgraph/error.hpp"

#include <algorithm>
#include <cmath>

namespace qgraph {

BondBasisData bond_basis_data(double length, const PotentialSpec& pot, const SpectralParameter& sp) {
    BondBasisData d;
    d.length = length;
    d.sp = sp;

    Eigen::Matrix2cd T = fundamental_matrix(pot, length, sp.gamma);
    d.u1l = T(0, 0);
    d.u2l = T(0, 1);
    d.u1pl = T(1, 0);
    d.u2pl = T(1, 1);

    cplx s = sp.sqrt_gamma;
    double grow = std::exp(std::abs(s.real()) * length);
    d.dirichlet_resonant = std::abs(d.u2l) < 1e-12 * std::max(1.0, grow / std::max(std::abs(s), 1e-6));
    d.neumann_resonant = std::abs(d.u1pl) < 1e-12 * std::max(1.0, std::abs(s) * grow);

    // r, t from the Cayley transform of the flux-free bond block of M,
    // reduced to the fundamental-system entries (pole-free at bond
    // Dirichlet/Neumann resonances).
    cplx delta = sp.gamma * d.u2l + s * (d.u1l + d.u2pl) + d.u1pl;
    d.t = 2.0 * s / delta;
    d.r_fwd = (sp.gamma * d.u2l + s * (d.u2pl - d.u1l) - d.u1pl) / delta;
    d.r_rev = (sp.gamma * d.u2l + s * (d.u1l - d.u2pl) - d.u1pl) / delta;
    return d;
}

std::vector<BondBasisData> graph_basis(const MetricGraph& g, const SpectralParameter& sp) {
    std::vector<BondBasisData> out;
    out.reserve(std::size_t(g.bond_count()));
    for (int b = 0; b < g.bond_count(); ++b)
        out.push_back(bond_basis_data(g.length(b), g.potential(b), sp));
    return out;
}

BondBasisDerivative bond_basis_gamma_derivative(double length, const PotentialSpec& pot,
                                                const SpectralParameter& sp) {
    BondBasisDerivative d;
    if (pot.is_zero()) {
        cplx s = sp.sqrt_gamma;
        double l = length;
        cplx sh = std::sinh(s * l), ch = std::cosh(s * l);
        cplx cth = ch / sh, csch = 1.0 / sh;
        // f'(0) = -s coth(sl),  f'(l) = -s/sinh(sl),  g(0) = -coth(sl)/s,
        // g(l) = -1/(s sinh(sl));  d/dgamma = (1/2s) d/ds
        cplx inv2s = 1.0 / (2.0 * s);
        d.dfp0_fwd = inv2s * (-cth + s * l * csch * csch);
        d.dfp0_rev = d.dfp0_fwd;
        d.dfpl = inv2s * (-csch + s * l * cth * csch);
        d.dg0_fwd = inv2s * (cth / (s * s) + l * csch * csch / s);
        d.dg0_rev = d.dg0_fwd;
        d.dgl = inv2s * (csch / (s * s) + l * cth * csch / s);
        d.dlog_neg_fpl = inv2s * (1.0 / s - l * cth);
        d.dlog_neg_gl = inv2s * (-1.0 / s - l * cth);
        return d;
    }
    double h = std::max(1e-6, 1e-6 * std::abs(sp.gamma));
    BondBasisData p = bond_basis_data(length, pot, SpectralParameter(sp.gamma + h));
    BondBasisData m = bond_basis_data(length, pot, SpectralParameter(sp.gamma - h));
    BondBasisData c = bond_basis_data(length, pot, sp);
    auto fd = [&](cplx a, cplx b) { return (a - b) / (2.0 * h); };
    d.dfp0_fwd = fd(p.fp0(true), m.fp0(true));
    d.dfp0_rev = fd(p.fp0(false), m.fp0(false));
    d.dfpl = fd(p.fpl(), m.fpl());
    d.dg0_fwd = fd(p.g0(true), m.g0(true));
    d.dg0_rev = fd(p.g0(false), m.g0(false));
    d.dgl = fd(p.gl(), m.gl());
    d.dlog_neg_fpl = d.dfpl / c.fpl();
    d.dlog_neg_gl = d.dgl / c.gl();
    return d;
}

BasisPointValues basis_point_values(double length, const PotentialSpec& pot,
                                    const SpectralParameter& sp, const BondBasisData& data,
                                    double x) {
    Eigen::Matrix2cd T = fundamental_matrix(pot, length, sp.gamma, x);
    cplx u1 = T(0, 0), u2 = T(0, 1);
    BasisPointValues v;
    if (data.dirichlet_resonant)
        throw DirichletResonance("f basis ill-defined at this gamma (bond Dirichlet eigenvalue)");
    if (data.neumann_resonant)
        throw NeumannResonance("g basis ill-defined at this gamma (bond Neumann eigenvalue)");
    v.f_fwd = u1 + data.fp0(true) * u2; // f(0)=1, f(l)=0
    v.f_rev = u2 / data.u2l;            // f_abar(l-x)
    v.g_fwd = data.g0(true) * u1 + u2;  // g'(0)=1, g'(l)=0
    v.g_rev = -u1 / data.u1pl;          // g_abar(l-x)
    return v;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(std::size_t(n));
    weights.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        // Newton on P_n for the i-th root, Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[std::size_t(i)] = 0.5 * (1.0 - x); // roots come in descending order of x
        weights[std::size_t(i)] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
}

BasisIntegrals basis_integrals(double length, const PotentialSpec& pot, const SpectralParameter& sp) {
    BondBasisData data = bond_basis_data(length, pot, sp);
    if (data.dirichlet_resonant)
        throw DirichletResonance("basis_integrals at bond Dirichlet eigenvalue");
    if (data.neumann_resonant)
        throw NeumannResonance("basis_integrals at bond Neumann eigenvalue");

    std::vector<double> xs, ws;
    gauss_legendre_01(64, xs, ws);
    BasisIntegrals out{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double x = xs[i] * length, w = ws[i] * length;
        BasisPointValues v = basis_point_values(length, pot, sp, data, x);
        out.int_f2 += w * v.f_fwd * v.f_fwd;
        out.int_ffbar += w * v.f_fwd * v.f_rev;
        out.int_g2 += w * v.g_fwd * v.g_fwd;
        out.int_ggbar += w * v.g_fwd * v.g_rev;
    }

    BondBasisDerivative d = bond_basis_gamma_derivative(length, pot, sp);
    out.rule_f2 = -d.dfp0_fwd;
    out.rule_ffbar = d.dfpl;
    out.rule_g2 = d.dg0_fwd;
    out.rule_ggbar = d.dgl;

    auto rel = [](cplx a, cplx b) {
        return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    out.max_residual = std::max({rel(out.int_f2, out.rule_f2), rel(out.int_ffbar, out.rule_ffbar),
                                 rel(out.int_g2, out.rule_g2), rel(out.int_ggbar, out.rule_ggbar)});
    return out;
}

BasisConversionReport basis_conversions_check(double length, const PotentialSpec& pot,
                                              const SpectralParameter& sp) {
    BondBasisData d = bond_basis_data(length, pot, sp);
    BasisConversionReport rep;
    cplx s = sp.sqrt_gamma;
    auto rel = [](cplx a, cplx b) {
        return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };

    cplx den = (1.0 + d.r_fwd) * (1.0 + d.r_rev) - d.t * d.t;
    rep.fp_from_rt =
        std::max(rel(d.fp0(true), -s * ((1.0 - d.r_fwd) * (1.0 + d.r_rev) + d.t * d.t) / den),
                 rel(d.fp0(false), -s * ((1.0 - d.r_rev) * (1.0 + d.r_fwd) + d.t * d.t) / den));
    rep.fpl_from_rt = rel(d.fpl(), -s * 2.0 * d.t / den);

    cplx detf = d.fp0(true) * d.fp0(false) - d.fpl() * d.fpl();
    rep.g_from_f = std::max({rel(d.g0(true), d.fp0(false) / detf),
                             rel(d.g0(false), d.fp0(true) / detf), rel(d.gl(), d.fpl() / detf)});

    cplx det1pR = (1.0 + d.r_fwd) * (1.0 + d.r_rev) - d.t * d.t;
    rep.useful_relation = rel(-d.fpl() * det1pR, 2.0 * s * d.t);

    rep.detM_block = rel(detf, d.fpl() / d.gl());

    Eigen::Matrix2cd M0, N0;
    M0 << d.fp0(true), -d.fpl(), -d.fpl(), d.fp0(false);
    N0 << d.g0(true), d.gl(), d.gl(), d.g0(false);
    rep.N_inverse = (N0 * M0 - Eigen::Matrix2cd::Identity()).norm();

    rep.max_residual = std::max({rep.fp_from_rt, rep.fpl_from_rt, rep.g_from_f,
                                 rep.useful_relation, rep.detM_block, rep.N_inverse});
    return rep;
}

double wronskian_drift(double length, const PotentialSpec& pot, const SpectralParameter& sp,
                       int samples) {
    double worst = 0.0;
    for (int i = 1; i <= samples; ++i) {
        double x = length * double(i) / double(samples);
        Eigen::Matrix2cd T = fundamental_matrix(pot, length, sp.gamma, x);
        cplx w = T(0, 0) * T(1, 1) - T(1, 0) * T(0, 1);
        worst = std::max(worst, std::abs(w - 1.0));
    }
    return worst;
}

} // namespace qgraph
