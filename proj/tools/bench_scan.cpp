// Compares the OpenMP-parallel secular-function scan against the serial
// reference on a potential-carrying star graph (each evaluation integrates
// an ODE per bond, so the grid scan dominates the spectrum search).
#include "qgraph/boundary.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qgraph;

namespace {

double run_scan(const MetricGraph& g, const BoundaryConditions& bc, const std::vector<double>& ks,
                bool parallel, std::vector<double>& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = secular_scan(g, bc, ks, parallel);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int points = argc > 1 ? std::atoi(argv[1]) : 1500;
    if (points < 2) points = 2;

    GraphSpec spec = make_star_spec({0.7, 1.0, 1.3, 0.9});
    for (auto& b : spec.bonds) b.potential = PotentialSpec::polynomial({0.5, 1.0, -0.3});
    MetricGraph g = build_graph(spec);
    BoundaryConditions bc = delta_coupling_bc(g, 0.0);

    std::vector<double> ks(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) ks[std::size_t(i)] = 0.05 + 20.0 * i / double(points - 1);

    std::vector<double> serial_vals, parallel_vals;
    double t_serial = run_scan(g, bc, ks, false, serial_vals);
    double t_parallel = run_scan(g, bc, ks, true, parallel_vals);

    double max_diff = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
        max_diff = std::max(max_diff, std::abs(serial_vals[i] - parallel_vals[i]));

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("points,threads,serial_ms,parallel_ms,speedup,max_abs_diff\n");
    std::printf("%d,%d,%.2f,%.2f,%.2f,%g\n", points, threads, t_serial, t_parallel,
                t_serial / t_parallel, max_diff);
    return 0;
}
