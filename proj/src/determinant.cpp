#include "qgraph/determinant.hpp"

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

cplx phase(double theta) { return std::polar(1.0, theta); }

double parity_sign(int v) { return (v % 2) ? -1.0 : 1.0; }

} // namespace

std::vector<double> finite_params(const BoundaryConditions& bc) {
    std::vector<double> out;
    for (const auto& p : bc.params) {
        if (p.infinite)
            throw InputError("vertex representation requires finite coupling parameters");
        out.push_back(p.value);
    }
    return out;
}

Eigen::MatrixXcd scaled_secular_matrix(const MetricGraph& g, const BoundaryConditions& bc,
                                       const std::vector<BondBasisData>& basis) {
    int n = g.arc_count();
    // Columns of C + DM scaled by s_a = -1/f'_a(l_a): the scaled M entries are
    // finite at bond Dirichlet resonances and S = (-1)^V det(...) / prod_b s_b.
    Eigen::VectorXcd s(n);
    Eigen::MatrixXcd Msc = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        s(a) = d.u2l; // -1/f'(l)
        Msc(a, a) = d.fp0_over_negfpl(arc.forward);
        Msc(a, g.reversal(a)) = phase(g.flux(g.reversal(a)));
    }
    return bc.C * s.asDiagonal() + bc.D * Msc;
}

cplx spectral_det_arc_f(const MetricGraph& g, const BoundaryConditions& bc,
                        const std::vector<BondBasisData>& basis, const SpectralParameter& sp) {
    (void)sp;
    Eigen::MatrixXcd A = scaled_secular_matrix(g, bc, basis);
    cplx prod_s = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) prod_s *= basis[std::size_t(b)].u2l;
    cplx det = A.partialPivLu().determinant();
    return parity_sign(g.vertex_count()) * det / prod_s;
}

cplx spectral_det_arc_g(const MetricGraph& g, const BoundaryConditions& bc,
                        const std::vector<BondBasisData>& basis, const SpectralParameter& sp) {
    (void)sp;
    int n = g.arc_count();
    Eigen::VectorXcd s(n);
    Eigen::MatrixXcd Nsc = Eigen::MatrixXcd::Zero(n, n);
    cplx prod_s = 1.0;
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        s(a) = d.u1pl; // -1/g(l)
        Nsc(a, a) = d.g0_over_neggl(arc.forward);
        Nsc(a, g.reversal(a)) = -phase(g.flux(g.reversal(a)));
        if (arc.forward) prod_s *= d.u1pl;
    }
    // (C N + D) diag(s) = C (N diag(s)) + D diag(s); Nsc is N diag(s)
    Eigen::MatrixXcd A = bc.C * Nsc + bc.D * s.asDiagonal();
    cplx det = A.partialPivLu().determinant();
    return parity_sign(g.vertex_count()) * det / prod_s;
}

cplx det_one_plus_R(const MetricGraph& g, const std::vector<BondBasisData>& basis) {
    cplx det = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) {
        const BondBasisData& d = basis[std::size_t(b)];
        det *= (1.0 + d.r_fwd) * (1.0 + d.r_rev) - d.t * d.t;
    }
    return det;
}

cplx spectral_det_scattering(const MetricGraph& g, const BoundaryConditions& bc,
                             const std::vector<BondBasisData>& basis, const SpectralParameter& sp) {
    Eigen::MatrixXcd Q = assemble_Q(bc, sp);
    Eigen::MatrixXcd R = assemble_R(g, basis, sp);
    int n = g.arc_count();
    Eigen::MatrixXcd one_minus_QR = Eigen::MatrixXcd::Identity(n, n) - Q * R;
    cplx det_qr = one_minus_QR.partialPivLu().determinant();
    cplx det_cd = det_C_minus_sqrtgamma_D(bc, sp);
    cplx det_1pR = det_one_plus_R(g, basis);
    if (std::abs(det_1pR) < 1e-300)
        throw NumericalError("spectral_det_scattering: det(1 + R) vanishes at this gamma");
    cplx prefactor = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) prefactor *= basis[std::size_t(b)].u2l; // -1/f'(l)
    return parity_sign(g.vertex_count()) * prefactor * det_cd * det_qr / det_1pR;
}

Eigen::MatrixXcd vertex_matrix_continuous(const MetricGraph& g,
                                          const std::vector<BondBasisData>& basis,
                                          const std::vector<double>& lambda,
                                          const SpectralParameter& sp) {
    (void)sp;
    if (int(lambda.size()) != g.vertex_count())
        throw InputError("vertex_matrix_continuous: one lambda per vertex required");
    int V = g.vertex_count();
    Eigen::MatrixXcd Mv = Eigen::MatrixXcd::Zero(V, V);
    for (int v = 0; v < V; ++v) Mv(v, v) = lambda[std::size_t(v)];
    for (int a = 0; a < g.arc_count(); ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        if (d.dirichlet_resonant)
            throw DirichletResonance("vertex matrix at Dirichlet resonance of bond " +
                                     g.bond_name(arc.bond));
        Mv(arc.tail, arc.tail) -= d.fp0(arc.forward);
        Mv(arc.tail, arc.head) += d.fpl() * phase(-g.flux(a));
    }
    return Mv;
}

Eigen::MatrixXcd vertex_matrix_derivative(const MetricGraph& g,
                                          const std::vector<BondBasisData>& basis,
                                          const std::vector<double>& mu,
                                          const SpectralParameter& sp) {
    (void)sp;
    if (int(mu.size()) != g.vertex_count())
        throw InputError("vertex_matrix_derivative: one mu per vertex required");
    int V = g.vertex_count();
    Eigen::MatrixXcd Nv = Eigen::MatrixXcd::Zero(V, V);
    for (int v = 0; v < V; ++v) Nv(v, v) = mu[std::size_t(v)];
    for (int a = 0; a < g.arc_count(); ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        if (d.neumann_resonant)
            throw NeumannResonance("vertex matrix at Neumann resonance of bond " +
                                   g.bond_name(arc.bond));
        Nv(arc.tail, arc.tail) -= d.g0(arc.forward);
        Nv(arc.tail, arc.head) -= d.gl() * phase(-g.flux(a));
    }
    return Nv;
}

cplx spectral_det_vertex_continuous(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                                    const std::vector<double>& lambda, const SpectralParameter& sp) {
    Eigen::MatrixXcd Mv = vertex_matrix_continuous(g, basis, lambda, sp);
    cplx prefactor = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) prefactor *= basis[std::size_t(b)].u2l; // 1/(-f'(l))
    return prefactor * Mv.partialPivLu().determinant();
}

cplx spectral_det_vertex_derivative(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                                    const std::vector<double>& mu, const SpectralParameter& sp) {
    Eigen::MatrixXcd Nv = vertex_matrix_derivative(g, basis, mu, sp);
    cplx prefactor = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) prefactor *= basis[std::size_t(b)].u1pl; // 1/(-g(l))
    return prefactor * Nv.partialPivLu().determinant();
}

namespace {

cplx zeta_normalisation(const MetricGraph& g) {
    double prod_m = 1.0;
    for (int v = 0; v < g.vertex_count(); ++v) prod_m *= double(g.valency(v));
    return std::pow(2.0, double(g.bond_count())) / prod_m;
}

} // namespace

cplx zeta_det_continuous(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                         const std::vector<double>& lambda, const SpectralParameter& sp) {
    return zeta_normalisation(g) * spectral_det_vertex_continuous(g, basis, lambda, sp);
}

cplx zeta_det_derivative(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                         const std::vector<double>& mu, const SpectralParameter& sp) {
    return zeta_normalisation(g) * spectral_det_vertex_derivative(g, basis, mu, sp);
}

ZetaGeneralResult zeta_det_general(const MetricGraph& g, const BoundaryConditions& bc,
                                   const std::vector<BondBasisData>& basis,
                                   const SpectralParameter& sp) {
    ZetaGeneralResult out{};
    out.f_form = zeta_normalisation(g) * spectral_det_arc_f(g, bc, basis, sp);

    // second form: the sqrt over prod_a R_{a,abar} collapses to prod_b t_b,
    // the branch that matches the f form at large real gamma
    cplx g4 = std::sqrt(sp.sqrt_gamma);
    cplx det_cd = 1.0;
    for (std::size_t i = 0; i < bc.block_offsets.size(); ++i) {
        int o = bc.block_offsets[i], m = bc.block_sizes[i];
        Eigen::MatrixXcd blk = bc.C.block(o, o, m, m) / g4 - g4 * bc.D.block(o, o, m, m);
        det_cd *= blk.partialPivLu().determinant();
    }
    cplx prod_t = 1.0;
    for (int b = 0; b < g.bond_count(); ++b) prod_t *= basis[std::size_t(b)].t;
    double prod_neg_m = 1.0;
    for (int v = 0; v < g.vertex_count(); ++v) prod_neg_m *= -double(g.valency(v));

    Eigen::MatrixXcd Q = assemble_Q(bc, sp);
    Eigen::MatrixXcd R = assemble_R(g, basis, sp);
    int n = g.arc_count();
    cplx det_qr =
        (Eigen::MatrixXcd::Identity(n, n) - Q * R).partialPivLu().determinant();

    out.scattering_form = det_cd / (prod_neg_m * prod_t) * det_qr;
    out.residual = std::abs(out.f_form - out.scattering_form) /
                   std::max({1e-300, std::abs(out.f_form), std::abs(out.scattering_form)});
    return out;
}

cplx gf_ratio(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp,
              const SpectralParameter& sp0) {
    return spectral_det_arc_f(g, bc, graph_basis(g, sp), sp) /
           spectral_det_arc_f(g, bc, graph_basis(g, sp0), sp0);
}

cplx large_gamma_asymptote(const MetricGraph& g, const BoundaryConditions& bc,
                           const SpectralParameter& sp) {
    cplx det_cd = det_C_minus_sqrtgamma_D(bc, sp);
    double B = double(g.bond_count());
    return parity_sign(g.vertex_count()) * std::pow(2.0, -B) * std::pow(sp.gamma, -B / 2.0) *
           std::exp(sp.sqrt_gamma * g.total_length()) * det_cd;
}

bool resonance_coincident(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                          const SpectralParameter& sp) {
    for (int b = 0; b < g.bond_count(); ++b) {
        const BondBasisData& d = basis[std::size_t(b)];
        double l = g.length(b);
        // f-form scaling factor u2(l): compare against the bond's natural scale
        if (std::abs(d.u2l) < 1e-10 * (l * std::abs(d.u1l) + std::abs(d.u2l))) return true;
        // g-form scaling factor u1'(l)
        double gscale = l * std::abs(sp.gamma) * std::abs(d.u2l) + std::abs(d.u1pl);
        if (std::abs(d.u1pl) < 1e-10 * gscale) return true;
    }
    return false;
}

namespace {

SpectralParameter off_resonance(const MetricGraph& g, SpectralParameter sp,
                                std::vector<BondBasisData>& basis) {
    basis = graph_basis(g, sp);
    for (int attempt = 0; attempt < 3 && resonance_coincident(g, basis, sp); ++attempt) {
        double shift = 4e-9 * std::max(1.0, std::abs(sp.gamma));
        sp = SpectralParameter(sp.gamma + shift);
        basis = graph_basis(g, sp);
    }
    return sp;
}

} // namespace

cplx spectral_det_arc_f(const MetricGraph& g, const BoundaryConditions& bc,
                        const SpectralParameter& sp) {
    std::vector<BondBasisData> basis;
    SpectralParameter sp2 = off_resonance(g, sp, basis);
    return spectral_det_arc_f(g, bc, basis, sp2);
}

cplx spectral_det_arc_g(const MetricGraph& g, const BoundaryConditions& bc,
                        const SpectralParameter& sp) {
    std::vector<BondBasisData> basis;
    SpectralParameter sp2 = off_resonance(g, sp, basis);
    return spectral_det_arc_g(g, bc, basis, sp2);
}

cplx spectral_det_scattering(const MetricGraph& g, const BoundaryConditions& bc,
                             const SpectralParameter& sp) {
    return spectral_det_scattering(g, bc, graph_basis(g, sp), sp);
}

} // namespace qgraph
