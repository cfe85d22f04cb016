#pragma once

#include <cmath>
#include <complex>

namespace qgraph {

using cplx = std::complex<double>;

/// Spectral parameter gamma together with the square root branch used by every
/// module. Off the negative real axis the principal branch is taken
/// (Re sqrt >= 0); on the negative real axis gamma = -k^2 the root is
/// continued from below, sqrt(-k^2 - i0) = -ik.
struct SpectralParameter {
    cplx gamma;
    cplx sqrt_gamma;

    SpectralParameter() : gamma(0.0), sqrt_gamma(0.0) {}

    explicit SpectralParameter(cplx g) : gamma(g) {
        if (g.imag() == 0.0 && g.real() < 0.0) {
            sqrt_gamma = cplx(0.0, -std::sqrt(-g.real()));
        } else {
            sqrt_gamma = std::sqrt(g);
        }
    }

    static SpectralParameter from_wavenumber(double k) {
        SpectralParameter sp;
        sp.gamma = cplx(-k * k, 0.0);
        sp.sqrt_gamma = cplx(0.0, -k);
        return sp;
    }
};

} // namespace qgraph
