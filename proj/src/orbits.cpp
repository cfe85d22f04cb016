#include "qgraph/orbits.hpp"

#include "qgraph/arc_matrices.hpp"
#include "qgraph/error.hpp"

#include <algorithm>
#include <cmath>

namespace qgraph {

namespace {

// Lexicographic comparison of the rotation of seq starting at i against seq.
// Returns <0, 0, >0.
int compare_rotation(const std::vector<int>& seq, std::size_t i) {
    std::size_t n = seq.size();
    for (std::size_t j = 0; j < n; ++j) {
        int a = seq[(i + j) % n];
        int b = seq[j];
        if (a != b) return a < b ? -1 : 1;
    }
    return 0;
}

struct Enumerator {
    const MetricGraph& g;
    const OrbitEnumOptions& opts;
    std::vector<Orbit> out;
    std::vector<int> seq;
    double cum_length = 0.0;
    std::size_t steps = 0;
    int root = 0;

    void emit() {
        // canonical iff no rotation is lexicographically smaller; a rotation
        // equal to seq means the orbit repeats a shorter one
        for (std::size_t i = 1; i < seq.size(); ++i) {
            if (seq[i] != root) continue;
            int c = compare_rotation(seq, i);
            if (c <= 0) return;
        }
        Orbit o;
        o.arcs = seq;
        o.length = cum_length;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            o.flux += g.flux(seq[i]);
            if (seq[(i + 1) % seq.size()] == g.reversal(seq[i])) ++o.reflections;
        }
        out.push_back(std::move(o));
    }

    void dfs(int head) {
        if (++steps > opts.step_cap)
            throw NumericalError("orbit enumeration exceeded the step cap; tighten the cutoff");
        if (head == g.arc(root).tail && !seq.empty()) emit();
        if (int(seq.size()) >= opts.max_arcs) return;
        int off = g.block_offset(head), m = g.valency(head);
        for (int a = off; a < off + m; ++a) {
            if (a < root) continue; // cycles through smaller arcs belong to their own root
            double dl = g.length(g.arc(a).bond);
            if (cum_length + dl > opts.max_length) continue;
            seq.push_back(a);
            cum_length += dl;
            dfs(g.arc(a).head);
            cum_length -= dl;
            seq.pop_back();
        }
    }
};

} // namespace

std::vector<Orbit> enumerate_primitive_orbits(const MetricGraph& g, const OrbitEnumOptions& opts) {
    if (opts.max_arcs < 1) throw InputError("enumerate_primitive_orbits: max_arcs must be >= 1");
    Enumerator e{g, opts, {}, {}, 0.0, 0, 0};
    for (int a0 = 0; a0 < g.arc_count(); ++a0) {
        e.root = a0;
        double dl = g.length(g.arc(a0).bond);
        if (dl > opts.max_length) continue;
        e.seq.push_back(a0);
        e.cum_length = dl;
        e.dfs(g.arc(a0).head);
        e.seq.pop_back();
        e.cum_length = 0.0;
    }
    std::sort(e.out.begin(), e.out.end(), [](const Orbit& a, const Orbit& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.arcs.size() != b.arcs.size()) return a.arcs.size() < b.arcs.size();
        return a.arcs < b.arcs;
    });
    return e.out;
}

cplx orbit_vertex_weight(const Orbit& orbit, const MetricGraph& g, const Eigen::MatrixXcd& Q) {
    cplx w = 1.0;
    std::size_t n = orbit.arcs.size();
    for (std::size_t i = 0; i < n; ++i)
        w *= Q(orbit.arcs[(i + 1) % n], g.reversal(orbit.arcs[i]));
    return w;
}

cplx orbit_matrix_weight(const Orbit& orbit, const Eigen::MatrixXcd& X) {
    cplx w = 1.0;
    std::size_t n = orbit.arcs.size();
    for (std::size_t i = 0; i < n; ++i) w *= X(orbit.arcs[(i + 1) % n], orbit.arcs[i]);
    return w;
}

Eigen::MatrixXcd roth_Q(const MetricGraph& g, TraceFamily family) {
    BoundaryConditions bc = (family == TraceFamily::Continuous) ? delta_coupling_bc(g, 0.0)
                                                                : delta_prime_bc(g, 0.0);
    // at lambda = 0 (resp. mu = 0) the matrix is gamma-independent
    return assemble_Q(bc, SpectralParameter(cplx(1.0, 0.0)));
}

namespace {

double min_bond_length(const MetricGraph& g) {
    double m = g.length(0);
    for (int b = 1; b < g.bond_count(); ++b) m = std::min(m, g.length(b));
    return m;
}

std::vector<Orbit> orbits_up_to_length(const MetricGraph& g, double cutoff) {
    OrbitEnumOptions opts;
    opts.max_length = cutoff;
    opts.max_arcs = int(cutoff / min_bond_length(g)) + 1;
    return enumerate_primitive_orbits(g, opts);
}

} // namespace

HeatTraceResult roth_heat_trace(const MetricGraph& g, double t, TraceFamily family,
                                double orbit_cutoff) {
    if (t <= 0.0) throw InputError("roth_heat_trace: t must be positive");
    HeatTraceResult out;
    double pref = 1.0 / (2.0 * std::sqrt(M_PI * t));
    double c0 = 0.5 * double(g.vertex_count() - g.bond_count());
    if (family == TraceFamily::Derivative) c0 = -c0;

    Eigen::MatrixXcd Q = roth_Q(g, family);
    std::vector<Orbit> prim = orbits_up_to_length(g, orbit_cutoff);

    cplx orbit_sum = 0.0;
    for (const Orbit& p : prim) {
        cplx w = orbit_vertex_weight(p, g, Q);
        cplx ph = std::polar(1.0, p.flux);
        cplx wp = w * ph; // repetitions exponentiate length, flux and weight
        cplx acc = wp;
        for (int n = 1; double(n) * p.length <= orbit_cutoff; ++n, acc *= wp) {
            double ln = double(n) * p.length;
            orbit_sum += p.length * acc * std::exp(-ln * ln / (4.0 * t));
            ++out.orbit_terms;
        }
    }
    out.value = g.total_length() * pref + c0 + pref * orbit_sum.real();
    out.truncation_bound =
        pref * (1.0 + g.total_length()) * std::exp(-orbit_cutoff * orbit_cutoff / (4.0 * t));
    return out;
}

OrbitProductResult zeta_det_orbit_product(const MetricGraph& g, TraceFamily family,
                                          const SpectralParameter& sp, double orbit_cutoff) {
    if (sp.gamma.imag() != 0.0 || sp.gamma.real() <= 0.0)
        throw InputError("zeta_det_orbit_product: gamma must be real positive");
    OrbitProductResult out;
    double expo = 0.5 * double(g.vertex_count() - g.bond_count());
    if (family == TraceFamily::Derivative) expo = -expo;

    Eigen::MatrixXcd Q = roth_Q(g, family);
    std::vector<Orbit> prim = orbits_up_to_length(g, orbit_cutoff);
    out.primitive_count = prim.size();

    cplx prod = 1.0;
    for (const Orbit& p : prim) {
        cplx w = orbit_vertex_weight(p, g, Q) * std::polar(1.0, p.flux);
        prod *= 1.0 - w * std::exp(-sp.sqrt_gamma * p.length);
    }
    out.value = std::pow(sp.gamma, expo) * std::exp(sp.sqrt_gamma * g.total_length()) * prod;
    out.truncation_bound = std::exp(-(sp.sqrt_gamma * orbit_cutoff).real());
    return out;
}

} // namespace qgraph
