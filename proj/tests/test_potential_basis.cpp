#include "qgraph/bond_basis.hpp"
#include "qgraph/potential.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <complex>

using namespace qgraph;

namespace {
const PotentialSpec kPiecewise = PotentialSpec::piecewise({0.0, 0.4, 0.9}, {1.5, -0.8, 2.2});
const PotentialSpec kPoly = PotentialSpec::polynomial({0.5, 1.0, -0.3});
} // namespace

TEST_CASE("zero potential has the hyperbolic fundamental system") {
    double l = 1.3;
    cplx gamma = 2.3;
    cplx sq = std::sqrt(gamma);
    BondBasisData d = bond_basis_data(l, PotentialSpec::zero(), SpectralParameter(gamma));
    CHECK(std::abs(d.u1l - std::cosh(sq * l)) < 1e-12);
    CHECK(std::abs(d.u2l - std::sinh(sq * l) / sq) < 1e-12);
    CHECK(std::abs(d.u1pl - sq * std::sinh(sq * l)) < 1e-12);
    CHECK(std::abs(d.u2pl - std::cosh(sq * l)) < 1e-12);
    // free bond: no reflection, transmission e^{-sqrt(gamma) l}
    CHECK(std::abs(d.r_fwd) < 1e-12);
    CHECK(std::abs(d.r_rev) < 1e-12);
    CHECK(std::abs(d.t - std::exp(-sq * l)) < 1e-12);
}

TEST_CASE("Wronskian of the fundamental system stays at 1 along the bond") {
    CHECK(wronskian_drift(1.2, kPoly, SpectralParameter(1.7)) < 1e-10);
    CHECK(wronskian_drift(1.0, kPiecewise, SpectralParameter(cplx(0.5, 1.0))) < 1e-10);
    CHECK(wronskian_drift(2.0, PotentialSpec::zero(), SpectralParameter(10.0)) < 1e-10);
}

TEST_CASE("constant shift of the potential shifts gamma") {
    double l = 0.9, c = 1.4;
    SpectralParameter sp(2.0);
    SpectralParameter sp_shift(2.0 + c);
    BondBasisData a = bond_basis_data(l, kPiecewise.shifted(c), sp);
    BondBasisData b = bond_basis_data(l, kPiecewise, sp_shift);
    CHECK(std::abs(a.u1l - b.u1l) < 1e-10);
    CHECK(std::abs(a.u2l - b.u2l) < 1e-10);
    CHECK(std::abs(a.u1pl - b.u1pl) < 1e-10);
    CHECK(std::abs(a.u2pl - b.u2pl) < 1e-10);
}

TEST_CASE("mirrored potential swaps the two arc directions") {
    double l = 1.1;
    SpectralParameter sp(3.1);
    BondBasisData d = bond_basis_data(l, kPoly, sp);
    BondBasisData m = bond_basis_data(l, kPoly.mirrored(l), sp);
    CHECK(std::abs(m.fp0(true) - d.fp0(false)) < 1e-10);
    CHECK(std::abs(m.fp0(false) - d.fp0(true)) < 1e-10);
    CHECK(std::abs(m.g0(true) - d.g0(false)) < 1e-10);
    CHECK(std::abs(m.r_fwd - d.r_rev) < 1e-10);
    CHECK(std::abs(m.t - d.t) < 1e-10); // transmission is direction-independent
    CHECK(std::abs(m.fpl() - d.fpl()) < 1e-10);
}

TEST_CASE("quadrature of f and g squares matches the derivative sum rules") {
    BasisIntegrals bi = basis_integrals(1.0, kPiecewise, SpectralParameter(1.9));
    CHECK(bi.max_residual < 1e-6);
    CHECK(std::abs(bi.int_f2 - bi.rule_f2) < 1e-6 * std::max(1.0, std::abs(bi.int_f2)));
    CHECK(std::abs(bi.int_ggbar - bi.rule_ggbar) < 1e-6 * std::max(1.0, std::abs(bi.int_ggbar)));

    BasisIntegrals free = basis_integrals(1.4, PotentialSpec::zero(), SpectralParameter(4.0));
    CHECK(free.max_residual < 1e-8);
}

TEST_CASE("cross-basis conversion identities") {
    for (const PotentialSpec& pot : {PotentialSpec::zero(), kPiecewise, kPoly}) {
        BasisConversionReport rep = basis_conversions_check(1.2, pot, SpectralParameter(2.7));
        CHECK(rep.max_residual < 1e-10);
        CHECK(rep.N_inverse < 1e-10);
        CHECK(rep.detM_block < 1e-10);
        CHECK(rep.useful_relation < 1e-10);
    }
}

TEST_CASE("resonance flags fire exactly at bond eigenvalues") {
    // gamma = -k^2 with k l = pi: sin(kl) = 0 makes both u2(l) and u1'(l) vanish
    BondBasisData res = bond_basis_data(1.0, {}, SpectralParameter::from_wavenumber(M_PI));
    CHECK(res.dirichlet_resonant);
    CHECK(res.neumann_resonant);
    BondBasisData off = bond_basis_data(1.0, {}, SpectralParameter::from_wavenumber(1.0));
    CHECK_FALSE(off.dirichlet_resonant);
    CHECK_FALSE(off.neumann_resonant);
    // scaled entries stay finite at the resonance
    CHECK(std::isfinite(std::abs(res.fp0_over_negfpl(true))));
    CHECK(std::abs(res.fp0_over_negfpl(true) - cplx(1.0)) < 1e-12); // -cos(pi)
}

TEST_CASE("gamma derivative of the basis data matches finite differences") {
    double l = 1.1, h = 1e-6;
    SpectralParameter sp(2.4);
    BondBasisDerivative d = bond_basis_gamma_derivative(l, kPoly, sp);
    BondBasisData p = bond_basis_data(l, kPoly, SpectralParameter(2.4 + h));
    BondBasisData m = bond_basis_data(l, kPoly, SpectralParameter(2.4 - h));
    CHECK(std::abs(d.dfp0_fwd - (p.fp0(true) - m.fp0(true)) / (2 * h)) < 1e-4);
    CHECK(std::abs(d.dlog_neg_fpl - (std::log(-p.fpl()) - std::log(-m.fpl())) / (2 * h)) < 1e-4);
}

TEST_CASE("basis_point_values agree with the endpoint data") {
    double l = 1.3;
    SpectralParameter sp(1.6);
    BondBasisData d = bond_basis_data(l, kPiecewise, sp);
    BasisPointValues at0 = basis_point_values(l, kPiecewise, sp, d, 0.0);
    BasisPointValues atl = basis_point_values(l, kPiecewise, sp, d, l);
    CHECK(std::abs(at0.f_fwd - cplx(1.0)) < 1e-9);  // f_a(0) = 1
    CHECK(std::abs(atl.f_fwd) < 1e-9);              // f_a(l) = 0
    CHECK(std::abs(atl.f_rev - cplx(1.0)) < 1e-9);  // f_abar(0) = 1 at x = l
    CHECK(std::abs(at0.f_rev) < 1e-9);
}

TEST_CASE("Gauss-Legendre nodes on [0,1] integrate polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre_01(8, x, w);
    double sum = 0.0, x7 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += w[i];
        x7 += w[i] * std::pow(x[i], 7);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x7 == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}
