#include "qgraph/spectrum.hpp"

#include "qgraph/arc_matrices.hpp"
#include "qgraph/bond_basis.hpp"
#include "qgraph/determinant.hpp"
#include "qgraph/error.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgraph {

cplx green_diagonal(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp,
                    int arc, double x) {
    if (arc < 0 || arc >= g.arc_count()) throw InputError("green_diagonal: arc id out of range");
    const Arc& a = g.arc(arc);
    double l = g.length(a.bond);
    if (x < 0.0 || x > l) throw InputError("green_diagonal: position outside the bond");

    std::vector<BondBasisData> basis = graph_basis(g, sp);
    Eigen::MatrixXcd M = assemble_M(g, basis, sp);
    Eigen::MatrixXcd K = (bc.C + bc.D * M).partialPivLu().solve(bc.D); // (C+DM)^{-1} D

    const BondBasisData& d = basis[std::size_t(a.bond)];
    double x_fwd = a.forward ? x : l - x;
    BasisPointValues bp = basis_point_values(l, g.potential(a.bond), sp, d, x_fwd);
    cplx fa = a.forward ? bp.f_fwd : bp.f_rev;
    cplx fab = a.forward ? bp.f_rev : bp.f_fwd;

    int ab = g.reversal(arc);
    cplx pa = std::polar(1.0, g.flux(arc));
    cplx pab = std::polar(1.0, g.flux(ab));
    // W_a = -f'_a(l_a) = 1/u2(l)
    return -K(arc, arc) * fa * fa - K(arc, ab) * fa * fab * pa - K(ab, arc) * fa * fab * pab -
           K(ab, ab) * fab * fab + fa * fab * d.u2l;
}

cplx green_trace(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp) {
    std::vector<BondBasisData> basis = graph_basis(g, sp);
    Eigen::MatrixXcd M = assemble_M(g, basis, sp);
    Eigen::MatrixXcd K = (bc.C + bc.D * M).partialPivLu().solve(bc.D);
    Eigen::MatrixXcd dM = assemble_dM(g, sp);
    cplx tr = (K * dM).trace();
    for (int b = 0; b < g.bond_count(); ++b)
        tr -= bond_basis_gamma_derivative(g.length(b), g.potential(b), sp).dlog_neg_fpl;
    return tr;
}

namespace {

double parity_sign(int v) { return (v % 2) ? -1.0 : 1.0; }

cplx secular_complex(const MetricGraph& g, const BoundaryConditions& bc, double k) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        SpectralParameter sp = SpectralParameter::from_wavenumber(k);
        std::vector<BondBasisData> basis = graph_basis(g, sp);
        cplx prod_s = 1.0;
        for (int b = 0; b < g.bond_count(); ++b) prod_s *= basis[std::size_t(b)].u2l;
        if (std::abs(prod_s) < 1e-250 || resonance_coincident(g, basis, sp)) {
            k += 1e-9 * std::max(1.0, std::abs(k)); // sits exactly on a bond resonance
            continue;
        }
        Eigen::MatrixXcd A = scaled_secular_matrix(g, bc, basis);
        cplx det = A.partialPivLu().determinant();
        return parity_sign(g.vertex_count()) * det / prod_s;
    }
    throw NumericalError("secular function: persistent bond resonance at k");
}

// Least-squares quartic fit of the secular function on 9 nodes around k0.
// Degree 4 keeps the stationary-point estimate unbiased to O(h^3) even for
// roots sitting on bond resonances, where the secular function is skewed.
struct PolyFit {
    std::array<double, 5> c;
    double h;

    double value(double x) const {
        return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
    }
    double deriv(double x) const {
        return c[1] + x * (2.0 * c[2] + x * (3.0 * c[3] + x * 4.0 * c[4]));
    }
    double deriv2(double x) const { return 2.0 * c[2] + x * (6.0 * c[3] + x * 12.0 * c[4]); }
};

PolyFit fit_poly(const MetricGraph& g, const BoundaryConditions& bc, double k0, double h) {
    Eigen::MatrixXd X(9, 5);
    Eigen::VectorXd y(9);
    for (int j = -4; j <= 4; ++j) {
        double x = h * double(j) / 4.0;
        double kk = k0 + x;
        if (kk <= 0.0) kk = k0 + h * (double(j) + 4.5) / 9.0; // keep nodes positive
        x = kk - k0;
        for (int p = 0; p < 5; ++p) X(j + 4, p) = std::pow(x, p);
        y(j + 4) = secular_complex(g, bc, kk).real();
    }
    PolyFit f;
    Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
    for (int p = 0; p < 5; ++p) f.c[std::size_t(p)] = c(p);
    f.h = h;
    return f;
}

// Root of the fitted polynomial nearest 0, by damped Newton; 0 on failure.
double poly_root_near_zero(const PolyFit& f) {
    double x = 0.0;
    for (int it = 0; it < 80; ++it) {
        double dv = f.deriv(x);
        if (std::abs(dv) < 1e-300) break;
        double nx = x - f.value(x) / dv;
        nx = x + std::clamp(nx - x, -f.h, f.h);
        if (std::abs(nx - x) < 1e-16 * std::max(1.0, std::abs(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    if (!std::isfinite(x) || std::abs(x) > f.h) return 0.0;
    return x;
}

// Stationary point of the fitted polynomial nearest 0 (even-order roots).
double poly_stationary_near_zero(const PolyFit& f) {
    double x = 0.0;
    for (int it = 0; it < 80; ++it) {
        double d2 = f.deriv2(x);
        if (std::abs(d2) < 1e-300) break;
        double nx = x - f.deriv(x) / d2;
        nx = x + std::clamp(nx - x, -f.h, f.h);
        if (std::abs(nx - x) < 1e-16 * std::max(1.0, std::abs(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    if (!std::isfinite(x) || std::abs(x) > f.h) return 0.0;
    return x;
}

double bisect_root(const MetricGraph& g, const BoundaryConditions& bc, double lo, double hi,
                   double s_lo, double tol) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double sm = secular_complex(g, bc, mid).real();
        if (sm == 0.0) return mid;
        if ((sm > 0) == (s_lo > 0)) {
            lo = mid;
            s_lo = sm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double fd_secular_derivative(const MetricGraph& g, const BoundaryConditions& bc, double k) {
    double d = 1e-7 * std::max(1.0, std::abs(k));
    return (secular_complex(g, bc, k + d).real() - secular_complex(g, bc, k - d).real()) /
           (2.0 * d);
}

// Order of the zero of the secular function at k, from the decay of |S| on
// a shrinking symmetric stencil. The spectral multiplicity equals this order;
// unlike the matrix nullity it is immune to bond resonances coinciding with
// the root (which can null extra columns of the scaled matrix).
int vanishing_order(const MetricGraph& g, const BoundaryConditions& bc, double k) {
    double h = 2.5e-4;
    double p1 = std::abs(secular_complex(g, bc, k + h)) + std::abs(secular_complex(g, bc, k - h));
    double p2 = std::abs(secular_complex(g, bc, k + h / 2)) +
                std::abs(secular_complex(g, bc, k - h / 2));
    if (!(p1 > 0.0) || !(p2 > 0.0)) return 8;
    return std::clamp(int(std::lround(std::log(p1 / p2) / std::log(2.0))), 0, 8);
}

int root_multiplicity(const MetricGraph& g, const BoundaryConditions& bc, double k) {
    return std::max(1, std::min(secular_nullity(g, bc, k), vanishing_order(g, bc, k)));
}

struct Root {
    double k;
    int mult;
};

Spectrum find_spectrum_core(const MetricGraph& g, const BoundaryConditions& bc, double k_max,
                            const SpectrumOptions& opts, bool parallel) {
    if (k_max <= 0.0) throw InputError("find_spectrum: k_max must be positive");
    Spectrum out;

    double lmax = 0.0;
    for (int b = 0; b < g.bond_count(); ++b) lmax = std::max(lmax, g.length(b));
    double step = opts.grid_step > 0.0 ? opts.grid_step : M_PI / (4.0 * lmax);
    step = std::min(step, k_max / 8.0);

    std::vector<double> ks;
    ks.push_back(step * 1e-6);
    for (int i = 1; double(i) * step < k_max + step; ++i) ks.push_back(double(i) * step);
    std::vector<double> s = secular_scan(g, bc, ks, parallel);

    // A grid point can coincide exactly with a bond resonance (e.g. k = n*pi
    // with unit bond lengths and step pi/4), where cancellation collapses the
    // scaled determinant to an exact 0.0 even though S is O(1) nearby. Nudge
    // such points off the coincidence and re-evaluate, so bracketing sees the
    // true sign structure instead of a fabricated zero.
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (s[i] == 0.0) {
            ks[i] += step * 1e-7;
            s[i] = secular_complex(g, bc, ks[i]).real();
        }
    }

    // a markedly complex secular value means the representation lost
    // realness; flag it (roots are still located via the real part)
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < ks.size(); i += 16) {
        cplx z = secular_complex(g, bc, ks[i]);
        if (std::abs(z) > 0) worst_imag = std::max(worst_imag, std::abs(z.imag()) / std::abs(z));
    }
    if (worst_imag > 1e-6)
        out.warnings.push_back("secular function has a non-negligible imaginary part; "
                               "root bracketing uses its real part only");

    std::vector<Root> roots;
    auto add_root = [&](double k, int mult) {
        if (k <= 0.0 || k > k_max + 1e-9) return;
        for (Root& r : roots)
            if (std::abs(r.k - k) < 1e-6 * std::max(1.0, k)) {
                r.mult = std::max(r.mult, mult);
                return;
            }
        roots.push_back({k, mult});
    };

    double polish_h = std::min(step / 4.0, 1e-3);

    // sign-change brackets: odd-order roots
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        if (s[i] == 0.0) {
            add_root(ks[i], root_multiplicity(g, bc, ks[i]));
            continue;
        }
        if ((s[i] > 0) != (s[i + 1] > 0)) {
            double k = bisect_root(g, bc, ks[i], ks[i + 1], s[i], opts.k_tol);
            for (int pass = 0; pass < 2; ++pass) {
                PolyFit f = fit_poly(g, bc, k, polish_h);
                k += poly_root_near_zero(f);
            }
            add_root(k, root_multiplicity(g, bc, k));
        }
    }

    // local minima of |s| with no sign change: even-order roots (or misses)
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        if ((s[i] > 0) != (s[i - 1] > 0) || (s[i] > 0) != (s[i + 1] > 0)) continue;
        if (std::abs(s[i]) >= std::abs(s[i - 1]) || std::abs(s[i]) >= std::abs(s[i + 1])) continue;
        double scale = 0.0;
        for (std::size_t j = (i >= 8 ? i - 8 : 0); j < std::min(ks.size(), i + 9); ++j)
            scale = std::max(scale, std::abs(s[j]));
        double k = ks[i];
        double dlo = fd_secular_derivative(g, bc, ks[i - 1]);
        double dhi = fd_secular_derivative(g, bc, ks[i + 1]);
        if ((dlo > 0) != (dhi > 0)) {
            // bisect on the derivative to land on the extremum
            double lo = ks[i - 1], hi = ks[i + 1];
            for (int it = 0; it < 200 && hi - lo > opts.k_tol; ++it) {
                double mid = 0.5 * (lo + hi);
                double dm = fd_secular_derivative(g, bc, mid);
                if ((dm > 0) == (dlo > 0))
                    lo = mid;
                else
                    hi = mid;
            }
            k = 0.5 * (lo + hi);
        }
        double smin = secular_complex(g, bc, k).real();
        if (smin != 0.0 && (smin > 0) != (s[i - 1] > 0)) {
            // the dip crosses zero twice between grid points: two simple roots
            double k1 = bisect_root(g, bc, ks[i - 1], k, s[i - 1], opts.k_tol);
            double k2 = bisect_root(g, bc, k, ks[i + 1], smin, opts.k_tol);
            add_root(k1, root_multiplicity(g, bc, k1));
            add_root(k2, root_multiplicity(g, bc, k2));
            continue;
        }
        for (int pass = 0; pass < 2; ++pass) {
            PolyFit f = fit_poly(g, bc, k, polish_h);
            k += poly_stationary_near_zero(f);
        }
        if (std::abs(secular_complex(g, bc, k).real()) > 1e-6 * std::max(scale, 1e-300)) continue;
        if (secular_nullity(g, bc, k) >= 1) add_root(k, root_multiplicity(g, bc, k));
    }

    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.k < b.k; });

    // zero modes: S(gamma) ~ c gamma^q as gamma -> 0+
    if (opts.include_zero_modes) {
        double s_ref = std::abs(spectral_det_arc_f(g, bc, SpectralParameter(1.0)));
        double s1 = std::abs(spectral_det_arc_f(g, bc, SpectralParameter(1e-8)));
        double s2 = std::abs(spectral_det_arc_f(g, bc, SpectralParameter(1e-6)));
        if (s_ref > 0 && s2 < 1e-4 * s_ref && s1 > 0) {
            int q = int(std::lround(std::log(s2 / s1) / std::log(100.0)));
            q = std::clamp(q, 0, g.vertex_count());
            if (q >= 1) {
                out.eigenvalues.push_back(0.0);
                out.multiplicities.push_back(q);
                out.k_values.push_back(0.0);
            }
        }
    }

    for (const Root& r : roots) {
        if (r.k > k_max) break;
        out.k_values.push_back(r.k);
        out.eigenvalues.push_back(r.k * r.k);
        out.multiplicities.push_back(r.mult);
        out.total_count += r.mult;
    }

    out.weyl_estimate = g.total_length() * k_max / M_PI;
    double dev = std::abs(double(out.total_count) - out.weyl_estimate);
    if (dev > std::max(2.0, 0.05 * out.weyl_estimate + 2.0))
        out.warnings.push_back("eigenvalue count deviates from the Weyl estimate by " +
                               std::to_string(dev) + "; states may be missing or spurious");

    // equal bond lengths admit eigenstates vanishing at every vertex, which
    // the secular determinant can miss
    bool commensurate = false;
    for (int b1 = 0; b1 < g.bond_count() && !commensurate; ++b1)
        for (int b2 = b1 + 1; b2 < g.bond_count(); ++b2)
            if (std::abs(g.length(b1) - g.length(b2)) < 1e-9 * g.length(b1)) {
                commensurate = true;
                break;
            }
    if (commensurate)
        out.warnings.push_back("bonds of equal length present: eigenstates vanishing at all "
                               "vertices (k = n pi / l) may be missed or under-counted");

    return out;
}

} // namespace

double secular_function(const MetricGraph& g, const BoundaryConditions& bc, double k) {
    return secular_complex(g, bc, k).real();
}

std::vector<double> secular_scan(const MetricGraph& g, const BoundaryConditions& bc,
                                 const std::vector<double>& ks, bool parallel) {
    std::vector<double> out(ks.size());
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < long(ks.size()); ++i)
            out[std::size_t(i)] = secular_complex(g, bc, ks[std::size_t(i)]).real();
        return out;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < ks.size(); ++i) out[i] = secular_complex(g, bc, ks[i]).real();
    return out;
}

Spectrum find_spectrum(const MetricGraph& g, const BoundaryConditions& bc, double k_max,
                       const SpectrumOptions& opts) {
    return find_spectrum_core(g, bc, k_max, opts, opts.parallel);
}

Spectrum find_spectrum_serial(const MetricGraph& g, const BoundaryConditions& bc, double k_max,
                              SpectrumOptions opts) {
    opts.parallel = false;
    return find_spectrum_core(g, bc, k_max, opts, false);
}

HeatTraceExact heat_trace_exact(const Spectrum& spec, double t, double k_max,
                                double total_length) {
    if (t <= 0.0) throw InputError("heat_trace_exact: t must be positive");
    HeatTraceExact out;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
        out.value += double(spec.multiplicities[i]) * std::exp(-t * spec.eigenvalues[i]);
    // Weyl tail: integral of (L/pi) e^{-t k^2} beyond k_max
    out.truncation_bound = total_length / (2.0 * std::sqrt(M_PI * t)) * std::erfc(k_max * std::sqrt(t));
    return out;
}

int secular_nullity(const MetricGraph& g, const BoundaryConditions& bc, double k, double sv_tol) {
    SpectralParameter sp = SpectralParameter::from_wavenumber(k);
    Eigen::MatrixXcd A = scaled_secular_matrix(g, bc, graph_basis(g, sp));
    // reference norm away from the root: near bond resonances the whole
    // matrix shrinks, so the local norm alone would misjudge the kernel
    double k_ref = k + 0.11;
    Eigen::MatrixXcd A_ref =
        scaled_secular_matrix(g, bc, graph_basis(g, SpectralParameter::from_wavenumber(k_ref)));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    double scale = std::max(svd.singularValues()(0), A_ref.operatorNorm());
    int nullity = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) < sv_tol * scale) ++nullity;
    return nullity;
}

} // namespace qgraph
