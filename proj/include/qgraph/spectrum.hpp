#pragma once

#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/spectral_param.hpp"

#include <string>
#include <vector>

namespace qgraph {

/// Diagonal Green function G_{a,a}(x, x); x is the coordinate along arc
/// `arc` measured from its tail, 0 <= x <= l.
cplx green_diagonal(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp,
                    int arc, double x);

/// Integrated diagonal Green function G(gamma) = sum_n 1/(gamma + E_n),
/// computed as tr[(C+DM)^{-1} D dM/dgamma] - sum_b d/dgamma ln(-f'(l)).
cplx green_trace(const MetricGraph& g, const BoundaryConditions& bc, const SpectralParameter& sp);

/// Real secular function of the wavenumber: S(-k^2) in the column-scaled
/// form, finite across bond resonances. Zeros on the k-axis are the k_n.
double secular_function(const MetricGraph& g, const BoundaryConditions& bc, double k);

/// Secular function on a grid of k values; parallel=true uses OpenMP.
std::vector<double> secular_scan(const MetricGraph& g, const BoundaryConditions& bc,
                                 const std::vector<double>& ks, bool parallel);

struct Spectrum {
    std::vector<double> eigenvalues; // ascending, E_n = k_n^2 (or 0)
    std::vector<int> multiplicities;
    std::vector<double> k_values; // sqrt(E_n)
    std::vector<std::string> warnings;
    double weyl_estimate = 0.0; // L k_max / pi
    int total_count = 0;        // sum of multiplicities (excluding zero modes)
};

struct SpectrumOptions {
    double grid_step = 0.0; // 0 = automatic, min(pi / (4 max l), ...)
    double k_tol = 1e-12;   // bisection tolerance in k
    bool include_zero_modes = true;
    bool parallel = true;
};

Spectrum find_spectrum(const MetricGraph& g, const BoundaryConditions& bc, double k_max,
                       const SpectrumOptions& opts = {});

/// Serial reference implementation (identical result, no OpenMP).
Spectrum find_spectrum_serial(const MetricGraph& g, const BoundaryConditions& bc, double k_max,
                              SpectrumOptions opts = {});

struct HeatTraceExact {
    double value = 0.0;
    double truncation_bound = 0.0; // Weyl tail beyond k_max
};

/// Z(t) = sum_n mult_n e^{-t E_n} from a computed spectrum; the tail beyond
/// the spectrum's k_max is bounded by the Weyl density.
HeatTraceExact heat_trace_exact(const Spectrum& spec, double t, double k_max,
                                double total_length);

/// Dimension of the kernel of the scaled secular matrix at gamma = -k^2;
/// the eigenvalue multiplicity at a root. Singular values are measured
/// against the matrix norm at a nearby off-root reference k.
int secular_nullity(const MetricGraph& g, const BoundaryConditions& bc, double k,
                    double sv_tol = 1e-8);

} // namespace qgraph
