#include "qgraph/boundary.hpp"

#include "qgraph/error.hpp"

#include <Eigen/SVD>

namespace qgraph {

namespace {

BoundaryConditions make_empty(const MetricGraph& g, BoundaryConditions::Family fam) {
    BoundaryConditions bc;
    int n = g.arc_count();
    bc.C = Eigen::MatrixXcd::Zero(n, n);
    bc.D = Eigen::MatrixXcd::Zero(n, n);
    bc.family = fam;
    for (int v = 0; v < g.vertex_count(); ++v) {
        bc.block_offsets.push_back(g.block_offset(v));
        bc.block_sizes.push_back(g.valency(v));
    }
    return bc;
}

} // namespace

BoundaryConditions delta_coupling_bc(const MetricGraph& g, const std::vector<VertexParam>& lambda) {
    if (int(lambda.size()) != g.vertex_count())
        throw InputError("delta_coupling_bc: one lambda per vertex required");
    BoundaryConditions bc = make_empty(g, BoundaryConditions::Family::Delta);
    bc.params = lambda;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int o = g.block_offset(v), m = g.valency(v);
        // first block row: -lambda psi_1 + sum psi'_i = 0, or psi_1 = 0 at
        // lambda = infinity (row moved from D to C)
        if (lambda[std::size_t(v)].infinite) {
            bc.C(o, o) = -1.0;
        } else {
            bc.C(o, o) = -lambda[std::size_t(v)].value;
            for (int j = 0; j < m; ++j) bc.D(o, o + j) = 1.0;
        }
        for (int i = 1; i < m; ++i) {
            bc.C(o + i, o) = -1.0;
            bc.C(o + i, o + i) = 1.0;
        }
    }
    return bc;
}

BoundaryConditions delta_prime_bc(const MetricGraph& g, const std::vector<VertexParam>& mu) {
    if (int(mu.size()) != g.vertex_count())
        throw InputError("delta_prime_bc: one mu per vertex required");
    BoundaryConditions bc = make_empty(g, BoundaryConditions::Family::DeltaPrime);
    bc.params = mu;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int o = g.block_offset(v), m = g.valency(v);
        if (mu[std::size_t(v)].infinite) {
            bc.D(o, o) = -1.0;
        } else {
            bc.D(o, o) = -mu[std::size_t(v)].value;
            for (int j = 0; j < m; ++j) bc.C(o, o + j) = 1.0;
        }
        for (int i = 1; i < m; ++i) {
            bc.D(o + i, o) = -1.0;
            bc.D(o + i, o + i) = 1.0;
        }
    }
    return bc;
}

BoundaryConditions general_bc(const MetricGraph& g, const std::vector<Eigen::MatrixXcd>& c_blocks,
                              const std::vector<Eigen::MatrixXcd>& d_blocks) {
    if (int(c_blocks.size()) != g.vertex_count() || int(d_blocks.size()) != g.vertex_count())
        throw InputError("general_bc: one (C, D) block pair per vertex required");
    BoundaryConditions bc = make_empty(g, BoundaryConditions::Family::General);
    for (int v = 0; v < g.vertex_count(); ++v) {
        int o = g.block_offset(v), m = g.valency(v);
        const auto& cb = c_blocks[std::size_t(v)];
        const auto& db = d_blocks[std::size_t(v)];
        if (cb.rows() != m || cb.cols() != m || db.rows() != m || db.cols() != m)
            throw InputError("general_bc: block size mismatch at vertex " + g.vertex_name(v) +
                             " (valency " + std::to_string(m) + ")");
        bc.C.block(o, o, m, m) = cb;
        bc.D.block(o, o, m, m) = db;
    }
    return bc;
}

BoundaryConditions delta_coupling_bc(const MetricGraph& g, double lambda_all) {
    return delta_coupling_bc(
        g, std::vector<VertexParam>(std::size_t(g.vertex_count()), VertexParam::finite(lambda_all)));
}

BoundaryConditions delta_prime_bc(const MetricGraph& g, double mu_all) {
    return delta_prime_bc(
        g, std::vector<VertexParam>(std::size_t(g.vertex_count()), VertexParam::finite(mu_all)));
}

BcReport validate_bc(const BoundaryConditions& bc) {
    BcReport rep;
    if (bc.C.rows() != bc.C.cols() || bc.D.rows() != bc.D.cols() || bc.C.rows() != bc.D.rows()) {
        rep.message = "dimension mismatch";
        return rep;
    }
    int n = bc.size();
    Eigen::MatrixXcd herm = bc.C * bc.D.adjoint() - bc.D * bc.C.adjoint();
    double scale = std::max(1.0, bc.C.norm() * bc.D.norm());
    rep.hermiticity_residual = herm.norm();
    rep.hermiticity_ok = rep.hermiticity_residual < 1e-12 * scale;

    Eigen::MatrixXcd cd(n, 2 * n);
    cd << bc.C, bc.D;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cd);
    double smax = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < n; ++i)
        if (svd.singularValues()(i) > 1e-12 * std::max(smax, 1.0)) ++rank;
    rep.rank_defect = n - rank;
    rep.rank_ok = rep.rank_defect == 0;

    rep.message = rep.pass() ? "ok"
                             : (!rep.hermiticity_ok ? "C D^H != D C^H" : "rank deficient (C, D)");
    return rep;
}

cplx det_C_minus_sqrtgamma_D(const BoundaryConditions& bc, const SpectralParameter& sp) {
    cplx det = 1.0;
    for (std::size_t i = 0; i < bc.block_offsets.size(); ++i) {
        int o = bc.block_offsets[i], m = bc.block_sizes[i];
        Eigen::MatrixXcd blk =
            bc.C.block(o, o, m, m) - sp.sqrt_gamma * bc.D.block(o, o, m, m);
        det *= blk.partialPivLu().determinant();
    }
    return det;
}

} // namespace qgraph
