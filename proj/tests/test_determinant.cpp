#include "qgraph/determinant.hpp"
#include "qgraph/error.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qgraph;

namespace {

cplx wire_zeta(double L, double l1, double l2, double gamma) {
    double s = std::sqrt(gamma);
    return 2 * s * std::sinh(s * L) + 2 * (l1 + l2) * std::cosh(s * L) +
           2 * l1 * l2 * std::sinh(s * L) / s;
}

cplx ring_zeta(double L, double theta, double lambda, double gamma) {
    double s = std::sqrt(gamma);
    return 2 * (std::cosh(s * L) - std::cos(theta)) + lambda * std::sinh(s * L) / s;
}

cplx star_zeta(const std::vector<double>& arms, double lambda, double gamma) {
    double s = std::sqrt(gamma);
    int B = int(arms.size());
    cplx prod = std::pow(2.0, B) / double(B);
    double tan_sum = 0.0;
    for (double l : arms) {
        prod *= std::cosh(s * l);
        tan_sum += std::tanh(s * l);
    }
    return prod * (lambda + s * tan_sum);
}

} // namespace

TEST_CASE("zeta determinant closed forms: wire, ring, star") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> glen(0.5, 2.0), lam(-2.0, 2.0), gam(0.2, 20.0),
        ang(0.0, 2 * M_PI);
    for (int i = 0; i < 8; ++i) {
        double gamma = gam(rng);
        SpectralParameter sp(gamma);

        double L = glen(rng), l1 = lam(rng), l2 = lam(rng);
        MetricGraph wire = build_graph(make_wire_spec(L));
        cplx zw = zeta_det_continuous(wire, graph_basis(wire, sp), {l1, l2}, sp);
        CHECK(qtest::rel_err(zw, wire_zeta(L, l1, l2, gamma)) < 1e-10);

        double theta = ang(rng), lr = lam(rng);
        MetricGraph ring = build_graph(make_ring_spec(L, theta));
        cplx zr = zeta_det_continuous(ring, graph_basis(ring, sp), {lr}, sp);
        CHECK(qtest::rel_err(zr, ring_zeta(L, theta, lr, gamma)) < 1e-10);

        std::vector<double> arms = {glen(rng), glen(rng), glen(rng), glen(rng)};
        double lc = lam(rng);
        MetricGraph star = build_graph(make_star_spec(arms));
        std::vector<double> params(arms.size() + 1, 0.0);
        params[0] = lc;
        cplx zs = zeta_det_continuous(star, graph_basis(star, sp), params, sp);
        CHECK(qtest::rel_err(zs, star_zeta(arms, lc, gamma)) < 1e-10);
    }
}

TEST_CASE("zero-mode limit of the star zeta determinant") {
    std::vector<double> arms = {0.6, 0.8, 1.0, 1.2, 1.4};
    MetricGraph star = build_graph(make_star_spec(arms));
    SpectralParameter sp(1e-6);
    std::vector<double> params(arms.size() + 1, 0.0);
    cplx z = zeta_det_continuous(star, graph_basis(star, sp), params, sp);
    double expected = std::pow(2.0, 5) * star.total_length() / 5.0;
    CHECK(std::abs(z / 1e-6 - expected) < 1e-4 * expected);
}

TEST_CASE("all representations of S agree on random graphs") {
    std::mt19937 rng(32);
    std::uniform_real_distribution<double> gam(0.2, 20.0);
    for (int trial = 0; trial < 12; ++trial) {
        MetricGraph g = qtest::random_connected_graph(rng);
        SpectralParameter sp(gam(rng));
        std::vector<BondBasisData> basis = graph_basis(g, sp);

        BoundaryConditions bcd = delta_coupling_bc(g, qtest::random_params(g, rng));
        cplx f = spectral_det_arc_f(g, bcd, basis, sp);
        CHECK(qtest::rel_err(f, spectral_det_arc_g(g, bcd, basis, sp)) < 1e-10);
        CHECK(qtest::rel_err(f, spectral_det_scattering(g, bcd, basis, sp)) < 1e-10);
        CHECK(qtest::rel_err(f, spectral_det_vertex_continuous(g, basis, finite_params(bcd), sp)) <
              1e-10);

        BoundaryConditions bcp = delta_prime_bc(g, qtest::random_params(g, rng));
        cplx fp = spectral_det_arc_f(g, bcp, basis, sp);
        CHECK(qtest::rel_err(fp, spectral_det_arc_g(g, bcp, basis, sp)) < 1e-10);
        CHECK(qtest::rel_err(fp, spectral_det_scattering(g, bcp, basis, sp)) < 1e-10);
        CHECK(qtest::rel_err(fp, spectral_det_vertex_derivative(g, basis, finite_params(bcp), sp)) <
              1e-10);

        BoundaryConditions bcg = qtest::random_general_bc(g, rng);
        CHECK(validate_bc(bcg).pass());
        cplx fg = spectral_det_arc_f(g, bcg, basis, sp);
        CHECK(qtest::rel_err(fg, spectral_det_arc_g(g, bcg, basis, sp)) < 1e-10);
        CHECK(qtest::rel_err(fg, spectral_det_scattering(g, bcg, basis, sp)) < 1e-10);
    }
}

TEST_CASE("general zeta determinant reduces to the family forms") {
    std::mt19937 rng(33);
    for (int trial = 0; trial < 8; ++trial) {
        MetricGraph g = qtest::random_connected_graph(rng);
        SpectralParameter sp(std::uniform_real_distribution<double>(0.2, 20.0)(rng));
        std::vector<BondBasisData> basis = graph_basis(g, sp);

        BoundaryConditions bcd = delta_coupling_bc(g, qtest::random_params(g, rng));
        ZetaGeneralResult zg = zeta_det_general(g, bcd, basis, sp);
        CHECK(zg.residual < 1e-8);
        CHECK(qtest::rel_err(zg.f_form,
                             zeta_det_continuous(g, basis, finite_params(bcd), sp)) < 1e-10);

        BoundaryConditions bcp = delta_prime_bc(g, qtest::random_params(g, rng));
        ZetaGeneralResult zp = zeta_det_general(g, bcp, basis, sp);
        CHECK(zp.residual < 1e-8);
        CHECK(qtest::rel_err(zp.f_form,
                             zeta_det_derivative(g, basis, finite_params(bcp), sp)) < 1e-10);
    }
}

TEST_CASE("magnetic flux enters only through cycle holonomies") {
    MetricGraph g = build_graph(make_triangle_spec());
    BoundaryConditions bc = delta_coupling_bc(g, 0.3);
    SpectralParameter sp(2.1);
    // bonds are oriented around the cycle, so only the total flux matters
    cplx a = spectral_det_arc_f(g.with_fluxes({0.7, 0.0, 0.0}), bc, sp);
    cplx b = spectral_det_arc_f(g.with_fluxes({0.2, 0.3, 0.2}), bc, sp);
    cplx c = spectral_det_arc_f(g.with_fluxes({0.7, 0.4, -0.4}), bc, sp);
    CHECK(qtest::rel_err(a, b) < 1e-12);
    CHECK(qtest::rel_err(a, c) < 1e-12);
    cplx d = spectral_det_arc_f(g.with_fluxes({0.8, 0.0, 0.0}), bc, sp);
    CHECK(std::abs(a - d) > 1e-6 * std::abs(a));
}

TEST_CASE("S stays finite and continuous across a bond resonance") {
    MetricGraph g = build_graph(make_wire_spec(1.0));
    BoundaryConditions bc = delta_coupling_bc(g, 1.0);
    auto S = [&](double k) {
        return spectral_det_arc_f(g, bc, SpectralParameter::from_wavenumber(k));
    };
    // k = pi is a Dirichlet resonance of the bond but not an eigenvalue here
    cplx at = S(M_PI);
    CHECK(std::isfinite(std::abs(at)));
    CHECK(std::abs(at) > 1e-6);
    CHECK(std::abs(S(M_PI + 1e-6) - at) < 1e-4 * std::abs(at));
    CHECK(std::abs(S(M_PI - 1e-6) - at) < 1e-4 * std::abs(at));
}

TEST_CASE("Dirichlet wire via the infinite-coupling marker") {
    MetricGraph g = build_graph(make_wire_spec(1.0));
    BoundaryConditions bc = delta_coupling_bc(g, {VertexParam::inf(), VertexParam::inf()});
    CHECK(validate_bc(bc).pass());
    double g1 = 1.3, g2 = 4.7;
    cplx s1 = spectral_det_arc_f(g, bc, SpectralParameter(g1));
    cplx s2 = spectral_det_arc_f(g, bc, SpectralParameter(g2));
    // S proportional to sinh(sqrt(gamma))/sqrt(gamma): compare the ratio
    cplx expect = (std::sinh(std::sqrt(g1)) / std::sqrt(g1)) /
                  (std::sinh(std::sqrt(g2)) / std::sqrt(g2));
    CHECK(qtest::rel_err(s1 / s2, expect) < 1e-10);
    CHECK_THROWS_AS(finite_params(bc), Error);
}

TEST_CASE("gf_ratio and the large-gamma asymptote") {
    MetricGraph g = build_graph(make_star_spec({0.8, 1.0, 1.2}));
    BoundaryConditions bc = delta_coupling_bc(g, 0.6);
    SpectralParameter sp(5.0), sp0(2.0);
    cplx ratio = gf_ratio(g, bc, sp, sp0);
    cplx direct = spectral_det_arc_f(g, bc, sp) / spectral_det_arc_f(g, bc, sp0);
    CHECK(qtest::rel_err(ratio, direct) < 1e-12);

    SpectralParameter big(900.0);
    cplx s = spectral_det_arc_f(g, bc, big);
    cplx asym = large_gamma_asymptote(g, bc, big);
    CHECK(qtest::rel_err(s, asym) < 1e-8);
}
