#include "qgraph/arc_matrices.hpp"
#include "qgraph/determinant.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <random>

using namespace qgraph;
using Eigen::MatrixXcd;

TEST_CASE("N is the inverse of M and det M factorises over bonds") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        MetricGraph g = qtest::random_connected_graph(rng);
        SpectralParameter sp(std::uniform_real_distribution<double>(0.3, 9.0)(rng));
        std::vector<BondBasisData> basis = graph_basis(g, sp);
        MatrixXcd M = assemble_M(g, basis, sp);
        MatrixXcd N = assemble_N(g, basis, sp);
        double scale = M.norm() * N.norm();
        CHECK((N * M - MatrixXcd::Identity(M.rows(), M.cols())).norm() < 1e-10 * scale);

        cplx prod = 1.0;
        for (int b = 0; b < g.bond_count(); ++b) prod *= basis[std::size_t(b)].fpl() / basis[std::size_t(b)].gl();
        CHECK(qtest::rel_err(M.partialPivLu().determinant(), prod) < 1e-10);
    }
}

TEST_CASE("R obeys the Cayley transform of M") {
    std::mt19937 rng(22);
    MetricGraph g = qtest::random_connected_graph(rng);
    SpectralParameter sp(2.6);
    std::vector<BondBasisData> basis = graph_basis(g, sp);
    MatrixXcd M = assemble_M(g, basis, sp);
    MatrixXcd R = assemble_R(g, basis, sp);
    int n = g.arc_count();
    MatrixXcd I = MatrixXcd::Identity(n, n);
    MatrixXcd cayley = (sp.sqrt_gamma * I + M) * (sp.sqrt_gamma * I - M).partialPivLu().inverse();
    CHECK((R - cayley).norm() < 1e-10 * std::max(1.0, R.norm()));
}

TEST_CASE("Q is unitary on the wavenumber axis for self-adjoint conditions") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        MetricGraph g = qtest::random_connected_graph(rng);
        SpectralParameter sp = SpectralParameter::from_wavenumber(1.3);
        for (const BoundaryConditions& bc :
             {delta_coupling_bc(g, qtest::random_params(g, rng)),
              delta_prime_bc(g, qtest::random_params(g, rng)), qtest::random_general_bc(g, rng)}) {
            CHECK(validate_bc(bc).pass());
            MatrixXcd Q = assemble_Q(bc, sp);
            int n = Q.rows();
            CHECK((Q * Q.adjoint() - MatrixXcd::Identity(n, n)).norm() < 1e-10 * n);
        }
    }
}

TEST_CASE("Q stays block-diagonal in the vertex grouping") {
    MetricGraph g = build_graph(make_star_spec({0.7, 1.0, 1.3}));
    BoundaryConditions bc = delta_coupling_bc(g, 0.8);
    MatrixXcd Q = assemble_Q(bc, SpectralParameter(2.0));
    for (int v = 0; v < g.vertex_count(); ++v) {
        int off = g.block_offset(v), m = g.valency(v);
        for (int i = 0; i < Q.rows(); ++i)
            for (int j = 0; j < Q.cols(); ++j) {
                bool in_block = i >= off && i < off + m && j >= off && j < off + m;
                if (!in_block && (i >= off && i < off + m))
                    CHECK(std::abs(Q(i, j)) < 1e-14);
            }
    }
}

TEST_CASE("blockwise det(1 + R) matches the dense determinant") {
    std::mt19937 rng(24);
    MetricGraph g = qtest::random_connected_graph(rng);
    SpectralParameter sp(1.8);
    std::vector<BondBasisData> basis = graph_basis(g, sp);
    MatrixXcd R = assemble_R(g, basis, sp);
    int n = g.arc_count();
    cplx dense = (MatrixXcd::Identity(n, n) + R).partialPivLu().determinant();
    CHECK(qtest::rel_err(dense, det_one_plus_R(g, basis)) < 1e-10);
}

TEST_CASE("dM matches a finite difference of M") {
    MetricGraph g = build_graph(make_star_spec({0.6, 1.1}));
    double gamma = 2.2, h = 1e-6;
    MatrixXcd dM = assemble_dM(g, SpectralParameter(gamma));
    MatrixXcd Mp = assemble_M(g, graph_basis(g, SpectralParameter(gamma + h)), SpectralParameter(gamma + h));
    MatrixXcd Mm = assemble_M(g, graph_basis(g, SpectralParameter(gamma - h)), SpectralParameter(gamma - h));
    CHECK((dM - (Mp - Mm) / (2 * h)).norm() < 1e-4 * std::max(1.0, dM.norm()));
}

TEST_CASE("scattering and vertex determinant forms agree through det(1 - QR)") {
    MetricGraph g = build_graph(make_triangle_spec());
    BoundaryConditions bc = delta_coupling_bc(g, 0.4);
    SpectralParameter sp(3.3);
    std::vector<BondBasisData> basis = graph_basis(g, sp);
    ArcMatrices am = assemble_all(g, bc, basis, sp);
    int n = g.arc_count();
    cplx lhs = double((g.vertex_count() % 2) ? -1 : 1) *
               det_C_minus_sqrtgamma_D(bc, sp) *
               (MatrixXcd::Identity(n, n) - am.Q * am.R).partialPivLu().determinant() /
               det_one_plus_R(g, basis);
    cplx rhs = vertex_matrix_continuous(g, basis, finite_params(bc), sp).partialPivLu().determinant();
    CHECK(qtest::rel_err(lhs, rhs) < 1e-10);
}
