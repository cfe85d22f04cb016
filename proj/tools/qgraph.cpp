#include "qgraph/boundary.hpp"
#include "qgraph/comb_zeta.hpp"
#include "qgraph/determinant.hpp"
#include "qgraph/error.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/io.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/spectrum.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace qgraph;

struct Loaded {
    MetricGraph graph;
    GraphDocument doc;
    BoundaryConditions bc;
};

Loaded load(const std::string& path) {
    Loaded l;
    l.doc = load_graph_file(path);
    l.graph = build_graph(l.doc.graph);
    l.bc = document_bc(l.graph, l.doc);
    return l;
}

std::string fnum(double v, int prec) { return format_number(v, prec); }

void print_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i)
        std::cout << (i ? "," : "") << csv_escape(fields[i]);
    std::cout << "\n";
}

std::vector<double> gamma_list(const std::vector<double>& gammas,
                               const std::vector<double>& grid) {
    std::vector<double> out = gammas;
    if (!grid.empty()) {
        if (grid.size() != 3 || grid[2] < 1)
            throw InputError("--gamma-grid needs MIN MAX STEPS with STEPS >= 1");
        int n = int(grid[2]);
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? grid[0] : grid[0] + (grid[1] - grid[0]) * i / double(n - 1));
    }
    if (out.empty()) throw InputError("no gamma given (use --gamma or --gamma-grid)");
    return out;
}

double rel_spread(const std::vector<cplx>& vals) {
    double worst = 0.0, scale = 0.0;
    for (const cplx& v : vals) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            worst = std::max(worst, std::abs(vals[i] - vals[j]));
    return scale > 0 ? worst / scale : 0.0;
}

int run(int argc, char** argv) {
    CLI::App app{"spectral determinants, spectra and zeta functions of metric graphs"};
    app.require_subcommand(1);

    std::string graph_path;
    int precision = 12;
    app.add_option("-g,--graph", graph_path, "graph document")->required();
    app.add_option("--precision", precision, "output digits")->capture_default_str();

    auto* det = app.add_subcommand("det", "spectral determinant S(gamma)");
    std::vector<double> gammas, ggrid;
    std::string formula = "arc-f";
    det->add_option("--gamma", gammas, "evaluation points");
    det->add_option("--gamma-grid", ggrid, "MIN MAX STEPS")->expected(3);
    det->add_option("--formula", formula)
        ->check(CLI::IsMember(
            {"arc-f", "arc-g", "scattering", "vertex", "zeta", "zeta-conjecture", "all"}));

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues up to k_max");
    double kmax = 10.0, grid_step = 0.0;
    bool serial = false;
    spectrum->add_option("--kmax", kmax)->required();
    spectrum->add_option("--grid-step", grid_step, "scan step (0 = automatic)");
    spectrum->add_flag("--serial", serial, "disable the parallel scan");

    auto* heat = app.add_subcommand("heat", "heat trace Z(t)");
    std::vector<double> ts;
    std::string method = "exact";
    double cutoff = 10.0, heat_kmax = 40.0;
    heat->add_option("--t", ts, "time points")->required();
    heat->add_option("--method", method)->check(CLI::IsMember({"exact", "roth"}));
    heat->add_option("--cutoff", cutoff, "orbit length cutoff (roth)");
    heat->add_option("--kmax", heat_kmax, "spectrum cutoff (exact)");

    auto* orbits = app.add_subcommand("orbits", "primitive periodic orbits");
    int max_arcs = 6;
    double max_length = 0.0;
    orbits->add_option("--max-arcs", max_arcs)->capture_default_str();
    orbits->add_option("--max-length", max_length, "metric length cutoff (0 = none)");

    auto* czeta = app.add_subcommand("czeta", "combinatorial zeta function");
    double uval = 0.1, wval = 1.0;
    int max_order = 8;
    std::string form = "arc";
    czeta->add_option("--u", uval)->capture_default_str();
    czeta->add_option("--w", wval)->capture_default_str();
    czeta->add_option("--max-order", max_order)->capture_default_str();
    czeta->add_option("--form", form)->check(CLI::IsMember({"arc", "vertex", "series"}));

    auto* gtrace = app.add_subcommand("green-trace", "integrated diagonal Green function");
    std::vector<double> gt_gammas, gt_grid;
    gtrace->add_option("--gamma", gt_gammas, "evaluation points");
    gtrace->add_option("--gamma-grid", gt_grid, "MIN MAX STEPS")->expected(3);

    auto* validate = app.add_subcommand("validate", "check the document and its matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 2;
    }

    if (const char* th = std::getenv("QGRAPH_THREADS")) {
#ifdef _OPENMP
        int n = std::atoi(th);
        if (n > 0) omp_set_num_threads(n);
#else
        (void)th;
#endif
    }

    Loaded l = load(graph_path);
    const int p = precision;

    if (*det) {
        bool is_delta = l.bc.family == BoundaryConditions::Family::Delta;
        bool is_prime = l.bc.family == BoundaryConditions::Family::DeltaPrime;
        auto vertex_det = [&](const std::vector<BondBasisData>& basis, const SpectralParameter& sp) {
            std::vector<double> params = finite_params(l.bc);
            return is_delta ? spectral_det_vertex_continuous(l.graph, basis, params, sp)
                            : spectral_det_vertex_derivative(l.graph, basis, params, sp);
        };
        std::vector<double> gm_list = gamma_list(gammas, ggrid);
        if (formula == "all")
            print_row({"gamma", "arc_f_re", "arc_f_im", "arc_g_re", "arc_g_im", "scattering_re",
                       "scattering_im", "vertex_re", "vertex_im", "residual"});
        else if (formula == "zeta-conjecture")
            print_row({"gamma", "f_form_re", "f_form_im", "scattering_form_re",
                       "scattering_form_im", "residual"});
        else
            print_row({"gamma", "value_re", "value_im"});
        for (double gm : gm_list) {
            SpectralParameter sp{cplx(gm, 0.0)};
            std::vector<BondBasisData> basis = graph_basis(l.graph, sp);
            if (formula == "all") {
                std::vector<cplx> vals = {spectral_det_arc_f(l.graph, l.bc, basis, sp),
                                          spectral_det_arc_g(l.graph, l.bc, basis, sp),
                                          spectral_det_scattering(l.graph, l.bc, basis, sp)};
                cplx vx = (is_delta || is_prime) ? vertex_det(basis, sp) : vals[0];
                vals.push_back(vx);
                print_row({fnum(gm, p), fnum(vals[0].real(), p), fnum(vals[0].imag(), p),
                           fnum(vals[1].real(), p), fnum(vals[1].imag(), p),
                           fnum(vals[2].real(), p), fnum(vals[2].imag(), p), fnum(vx.real(), p),
                           fnum(vx.imag(), p), fnum(rel_spread(vals), 3)});
            } else if (formula == "zeta-conjecture") {
                ZetaGeneralResult z = zeta_det_general(l.graph, l.bc, basis, sp);
                print_row({fnum(gm, p), fnum(z.f_form.real(), p), fnum(z.f_form.imag(), p),
                           fnum(z.scattering_form.real(), p), fnum(z.scattering_form.imag(), p),
                           fnum(z.residual, 3)});
            } else {
                cplx v;
                if (formula == "arc-f") v = spectral_det_arc_f(l.graph, l.bc, basis, sp);
                else if (formula == "arc-g") v = spectral_det_arc_g(l.graph, l.bc, basis, sp);
                else if (formula == "scattering")
                    v = spectral_det_scattering(l.graph, l.bc, basis, sp);
                else if (formula == "vertex") {
                    if (!is_delta && !is_prime)
                        throw InputError("--formula vertex needs delta or delta_prime conditions");
                    v = vertex_det(basis, sp);
                } else { // zeta
                    if (is_delta)
                        v = zeta_det_continuous(l.graph, basis, finite_params(l.bc), sp);
                    else if (is_prime)
                        v = zeta_det_derivative(l.graph, basis, finite_params(l.bc), sp);
                    else
                        v = zeta_det_general(l.graph, l.bc, basis, sp).f_form;
                }
                print_row({fnum(gm, p), fnum(v.real(), p), fnum(v.imag(), p)});
            }
        }
    } else if (*spectrum) {
        SpectrumOptions opts;
        opts.grid_step = grid_step;
        opts.parallel = !serial;
        Spectrum s = find_spectrum(l.graph, l.bc, kmax, opts);
        for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
        print_row({"k", "energy", "multiplicity"});
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
            print_row({fnum(s.k_values[i], p), fnum(s.eigenvalues[i], p),
                       std::to_string(s.multiplicities[i])});
    } else if (*heat) {
        print_row({"t", "value", "truncation_bound"});
        if (method == "exact") {
            Spectrum s = find_spectrum(l.graph, l.bc, heat_kmax, {});
            for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
            for (double t : ts) {
                HeatTraceExact h = heat_trace_exact(s, t, heat_kmax, l.graph.total_length());
                print_row({fnum(t, p), fnum(h.value, p), fnum(h.truncation_bound, 3)});
            }
        } else {
            TraceFamily fam;
            if (l.bc.family == BoundaryConditions::Family::Delta)
                fam = TraceFamily::Continuous;
            else if (l.bc.family == BoundaryConditions::Family::DeltaPrime)
                fam = TraceFamily::Derivative;
            else
                throw InputError("heat --method roth needs delta or delta_prime conditions");
            for (const VertexParam& vp : l.bc.params)
                if (vp.infinite || vp.value != 0.0)
                    throw InputError("heat --method roth needs all couplings zero");
            for (double t : ts) {
                HeatTraceResult h = roth_heat_trace(l.graph, t, fam, cutoff);
                print_row({fnum(t, p), fnum(h.value, p), fnum(h.truncation_bound, 3)});
            }
        }
    } else if (*orbits) {
        OrbitEnumOptions opts;
        opts.max_arcs = max_arcs;
        if (max_length > 0.0) opts.max_length = max_length;
        std::vector<Orbit> os = enumerate_primitive_orbits(l.graph, opts);
        print_row({"arcs", "length", "flux", "reflections"});
        for (const Orbit& o : os) {
            std::ostringstream seq;
            for (std::size_t i = 0; i < o.arcs.size(); ++i) seq << (i ? " " : "") << o.arcs[i];
            print_row({seq.str(), fnum(o.length, p), fnum(o.flux, p),
                       std::to_string(o.reflections)});
        }
    } else if (*czeta) {
        CombGraph cg = comb_graph(l.graph);
        if (form == "series") {
            std::vector<cplx> c = bartholdi_bruteforce(cg, wval, max_order);
            print_row({"order", "coefficient_re", "coefficient_im"});
            for (std::size_t k = 0; k < c.size(); ++k)
                print_row({std::to_string(k), fnum(c[k].real(), p), fnum(c[k].imag(), p)});
        } else {
            cplx v = form == "arc" ? bartholdi_arc(cg, uval, wval) : bartholdi_vertex(cg, uval, wval);
            print_row({"u", "w", "value_re", "value_im"});
            print_row({fnum(uval, p), fnum(wval, p), fnum(v.real(), p), fnum(v.imag(), p)});
        }
    } else if (*gtrace) {
        print_row({"gamma", "value_re", "value_im"});
        for (double gm : gamma_list(gt_gammas, gt_grid)) {
            cplx v = green_trace(l.graph, l.bc, SpectralParameter{cplx(gm, 0.0)});
            print_row({fnum(gm, p), fnum(v.real(), p), fnum(v.imag(), p)});
        }
    } else if (*validate) {
        BcReport rep = validate_bc(l.bc);
        print_row({"check", "value"});
        print_row({"vertices", std::to_string(l.graph.vertex_count())});
        print_row({"bonds", std::to_string(l.graph.bond_count())});
        print_row({"hermiticity_residual", fnum(rep.hermiticity_residual, 3)});
        print_row({"rank_defect", std::to_string(rep.rank_defect)});
        print_row({"status", rep.message});
        if (!rep.pass()) throw InputError("boundary conditions failed validation: " + rep.message);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
