#include "qgraph/arc_matrices.hpp"

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

cplx phase(double theta) { return std::polar(1.0, theta); }

} // namespace

Eigen::MatrixXcd assemble_M(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp) {
    (void)sp;
    int n = g.arc_count();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        if (d.dirichlet_resonant)
            throw DirichletResonance("assemble_M at Dirichlet resonance of bond " +
                                     g.bond_name(arc.bond));
        int ab = g.reversal(a);
        // M_{a,abar} = -f'_abar(l_a) e^{i theta_abar}; f'(l) is shared
        M(a, a) = d.fp0(arc.forward);
        M(a, ab) = -d.fpl() * phase(g.flux(ab));
    }
    return M;
}

Eigen::MatrixXcd assemble_N(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp) {
    (void)sp;
    int n = g.arc_count();
    Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        if (d.neumann_resonant)
            throw NeumannResonance("assemble_N at Neumann resonance of bond " +
                                   g.bond_name(arc.bond));
        int ab = g.reversal(a);
        N(a, a) = d.g0(arc.forward);
        N(a, ab) = d.gl() * phase(g.flux(ab));
    }
    return N;
}

Eigen::MatrixXcd assemble_R(const MetricGraph& g, const std::vector<BondBasisData>& basis,
                            const SpectralParameter& sp) {
    (void)sp;
    int n = g.arc_count();
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        const BondBasisData& d = basis[std::size_t(arc.bond)];
        int ab = g.reversal(a);
        R(a, a) = d.r(arc.forward);
        R(a, ab) = d.t * phase(g.flux(ab)); // t_abar = t_a
    }
    return R;
}

Eigen::MatrixXcd assemble_Q(const BoundaryConditions& bc, const SpectralParameter& sp) {
    int n = bc.size();
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < bc.block_offsets.size(); ++i) {
        int o = bc.block_offsets[i], m = bc.block_sizes[i];
        Eigen::MatrixXcd A = -bc.C.block(o, o, m, m) + sp.sqrt_gamma * bc.D.block(o, o, m, m);
        Eigen::MatrixXcd B = bc.C.block(o, o, m, m) + sp.sqrt_gamma * bc.D.block(o, o, m, m);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        if (std::abs(lu.determinant()) < 1e-300)
            throw NumericalError("assemble_Q: singular (-C + sqrt(gamma) D) block at vertex " +
                                 std::to_string(i));
        Q.block(o, o, m, m) = lu.solve(B);
    }
    return Q;
}

ArcMatrices assemble_all(const MetricGraph& g, const BoundaryConditions& bc,
                         const std::vector<BondBasisData>& basis, const SpectralParameter& sp) {
    ArcMatrices am;
    am.sp = sp;
    am.M = assemble_M(g, basis, sp);
    am.N = assemble_N(g, basis, sp);
    am.R = assemble_R(g, basis, sp);
    am.Q = assemble_Q(bc, sp);
    return am;
}

Eigen::MatrixXcd assemble_dM(const MetricGraph& g, const SpectralParameter& sp) {
    int n = g.arc_count();
    Eigen::MatrixXcd dM = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        BondBasisDerivative d =
            bond_basis_gamma_derivative(g.length(arc.bond), g.potential(arc.bond), sp);
        int ab = g.reversal(a);
        dM(a, a) = arc.forward ? d.dfp0_fwd : d.dfp0_rev;
        dM(a, ab) = -d.dfpl * phase(g.flux(ab));
    }
    return dM;
}

} // namespace qgraph
