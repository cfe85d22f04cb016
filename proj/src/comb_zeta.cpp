#include "qgraph/comb_zeta.hpp"

#include "qgraph/arc_matrices.hpp"
#include "qgraph/bond_basis.hpp"
#include "qgraph/boundary.hpp"
#include "qgraph/determinant.hpp"
#include "qgraph/error.hpp"
#include "qgraph/orbits.hpp"

#include <cmath>

namespace qgraph {

CombGraph comb_graph(const MetricGraph& g) {
    CombGraph cg;
    cg.V = g.vertex_count();
    cg.B = g.bond_count();
    cg.metric = g;
    cg.A = Eigen::MatrixXd::Zero(cg.V, cg.V);
    cg.Y = Eigen::MatrixXd::Zero(cg.V, cg.V);
    int n = g.arc_count();
    cg.Bm = Eigen::MatrixXd::Zero(n, n);
    cg.J = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Arc& arc = g.arc(a);
        cg.A(arc.tail, arc.head) += 1.0; // each arc contributes one walk direction
        if (arc.tail == arc.head) cg.has_loops = true;
        cg.J(a, g.reversal(a)) = 1.0;
        for (int b = 0; b < n; ++b)
            if (g.arc(b).head == arc.tail) cg.Bm(a, b) = 1.0;
    }
    for (int v = 0; v < cg.V; ++v) cg.Y(v, v) = double(g.valency(v));
    return cg;
}

cplx bartholdi_arc(const CombGraph& cg, cplx u, cplx w) {
    int n = 2 * cg.B;
    Eigen::MatrixXcd X = cg.Bm.cast<cplx>() - w * cg.J.cast<cplx>();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - u * X;
    return A.partialPivLu().determinant();
}

cplx bartholdi_vertex(const CombGraph& cg, cplx u, cplx w) {
    cplx uw2 = u * u * w * w;
    Eigen::MatrixXcd A = (1.0 - uw2) * Eigen::MatrixXcd::Identity(cg.V, cg.V) -
                         u * cg.A.cast<cplx>() + w * u * u * cg.Y.cast<cplx>();
    return std::pow(1.0 - uw2, double(cg.B - cg.V)) * A.partialPivLu().determinant();
}

std::vector<cplx> bartholdi_arc_series(const CombGraph& cg, cplx w, int max_order) {
    int n = 2 * cg.B;
    Eigen::MatrixXcd X = cg.Bm.cast<cplx>() - w * cg.J.cast<cplx>();
    // Faddeev-LeVerrier: det(1 - uX) = sum_k c_k u^k, c_k the char-poly
    // coefficients of X
    std::vector<cplx> c(std::size_t(max_order) + 1, 0.0);
    c[0] = 1.0;
    Eigen::MatrixXcd M = X;
    cplx ck = -M.trace();
    if (max_order >= 1) c[1] = ck;
    for (int k = 2; k <= n; ++k) {
        M = X * (M + ck * Eigen::MatrixXcd::Identity(n, n));
        ck = -M.trace() / double(k);
        if (k <= max_order) c[std::size_t(k)] = ck;
    }
    return c;
}

std::vector<cplx> bartholdi_vertex_series(const CombGraph& cg, cplx w, int max_order) {
    // circle sampling: the vertex form may be a genuine series when B < V
    const int M = 256;
    const double r = 0.7;
    std::vector<cplx> f(M);
    for (int j = 0; j < M; ++j)
        f[std::size_t(j)] = bartholdi_vertex(cg, std::polar(r, 2.0 * M_PI * j / M), w);
    std::vector<cplx> c(std::size_t(max_order) + 1, 0.0);
    for (int k = 0; k <= max_order; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < M; ++j)
            acc += f[std::size_t(j)] * std::polar(1.0, -2.0 * M_PI * j * k / M);
        c[std::size_t(k)] = acc / (double(M) * std::pow(r, k));
    }
    return c;
}

namespace {

template <class T>
void multiply_factor(std::vector<T>& poly, const T& coeff, int power) {
    // poly *= (1 - coeff * u^power), truncated
    if (power >= int(poly.size())) return;
    for (int k = int(poly.size()) - 1; k >= power; --k)
        poly[std::size_t(k)] -= coeff * poly[std::size_t(k - power)];
}

template <class T> T int_pow(const T& x, int e) {
    T out(1);
    for (int i = 0; i < e; ++i) out = out * x;
    return out;
}

} // namespace

std::vector<cplx> bartholdi_bruteforce(const CombGraph& cg, cplx w, int max_order) {
    std::vector<Orbit> prim = enumerate_primitive_orbits(cg.metric, max_order);
    std::vector<cplx> poly(std::size_t(max_order) + 1, 0.0);
    poly[0] = 1.0;
    for (const Orbit& p : prim)
        multiply_factor(poly, int_pow(cplx(1.0) - w, p.reflections), int(p.arcs.size()));
    return poly;
}

std::vector<Rational> bartholdi_arc_series_exact(const CombGraph& cg, const Rational& w,
                                                 int max_order) {
    int n = 2 * cg.B;
    if (n > 24) throw InputError("exact series limited to graphs with at most 12 bonds");
    auto at = [n](std::vector<Rational>& m, int i, int j) -> Rational& {
        return m[std::size_t(i * n + j)];
    };
    std::vector<Rational> X(std::size_t(n) * std::size_t(n), Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            at(X, i, j) = Rational(int(cg.Bm(i, j))) - w * Rational(int(cg.J(i, j)));

    std::vector<Rational> c(std::size_t(max_order) + 1, Rational(0));
    c[0] = 1;
    std::vector<Rational> M = X;
    Rational ck(0);
    for (int i = 0; i < n; ++i) ck -= at(M, i, i);
    if (max_order >= 1) c[1] = ck;
    std::vector<Rational> tmp(M.size());
    for (int k = 2; k <= n; ++k) {
        for (int i = 0; i < n; ++i) at(M, i, i) += ck;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational acc(0);
                for (int s = 0; s < n; ++s) acc += at(X, i, s) * at(M, s, j);
                at(tmp, i, j) = acc;
            }
        M.swap(tmp);
        ck = 0;
        for (int i = 0; i < n; ++i) ck -= at(M, i, i);
        ck /= k;
        if (k <= max_order) c[std::size_t(k)] = ck;
    }
    return c;
}

std::vector<Rational> bartholdi_bruteforce_exact(const CombGraph& cg, const Rational& w,
                                                 int max_order) {
    std::vector<Orbit> prim = enumerate_primitive_orbits(cg.metric, max_order);
    std::vector<Rational> poly(std::size_t(max_order) + 1, Rational(0));
    poly[0] = 1;
    for (const Orbit& p : prim)
        multiply_factor(poly, int_pow(Rational(1) - w, p.reflections), int(p.arcs.size()));
    return poly;
}

BridgeReport metric_to_comb_bridge(const MetricGraph& g, double u, double w) {
    double l = g.length(0);
    for (int b = 1; b < g.bond_count(); ++b)
        if (std::abs(g.length(b) - l) > 1e-12 * l)
            throw InputError("bridge requires all bond lengths equal");
    for (int b = 0; b < g.bond_count(); ++b)
        if (!g.potential(b).is_zero()) throw InputError("bridge requires zero potentials");
    for (int a = 0; a < g.arc_count(); ++a)
        if (g.flux(a) != 0.0) throw InputError("bridge requires zero fluxes");
    double wu = w * u;
    if (!(wu > 0.0 && wu < 1.0))
        throw InputError("bridge requires 0 < w*u < 1 (so that gamma is real positive)");

    double sg = -std::log(wu) / l; // e^{-sqrt(gamma) l} = w u
    SpectralParameter sp(cplx(sg * sg, 0.0));
    std::vector<VertexParam> lambda;
    std::vector<double> lambda_vals;
    for (int v = 0; v < g.vertex_count(); ++v) {
        double lv = (2.0 * w - double(g.valency(v))) * sg; // m + lambda/sqrt(gamma) = 2w
        lambda.push_back(VertexParam::finite(lv));
        lambda_vals.push_back(lv);
    }
    BoundaryConditions bc = delta_coupling_bc(g, lambda);
    std::vector<BondBasisData> basis = graph_basis(g, sp);

    BridgeReport rep;
    int n = g.arc_count();
    Eigen::MatrixXcd QR = assemble_Q(bc, sp) * assemble_R(g, basis, sp);
    rep.det_qr_metric =
        (Eigen::MatrixXcd::Identity(n, n) - QR).partialPivLu().determinant();
    CombGraph cg = comb_graph(g);
    rep.det_arc_comb = bartholdi_arc(cg, u, w);
    rep.residual_det = std::abs(rep.det_qr_metric - rep.det_arc_comb) /
                       std::max(1e-300, std::abs(rep.det_arc_comb));

    Eigen::MatrixXcd Mv = vertex_matrix_continuous(g, basis, lambda_vals, sp);
    double uw2 = wu * wu;
    Eigen::MatrixXcd Mcomb(cg.V, cg.V);
    for (int a = 0; a < cg.V; ++a)
        for (int b = 0; b < cg.V; ++b) {
            double diag = (a == b) ? w + (double(g.valency(a)) - w) * uw2 : 0.0;
            Mcomb(a, b) = 2.0 * sg / (1.0 - uw2) * (diag - u * w * cg.A(a, b));
        }
    rep.residual_vertex = (Mv - Mcomb).norm() / std::max(1e-300, Mcomb.norm());
    rep.max_residual = std::max(rep.residual_det, rep.residual_vertex);
    return rep;
}

} // namespace qgraph
