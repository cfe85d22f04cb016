#include "qgraph/graph.hpp"

#include "qgraph/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace qgraph {

int MetricGraph::vertex_index(const std::string& name) const {
    for (int v = 0; v < V_; ++v)
        if (vertex_names_[std::size_t(v)] == name) return v;
    throw InputError("unknown vertex: " + name);
}

MetricGraph build_graph(const GraphSpec& spec) {
    MetricGraph g;
    g.V_ = int(spec.vertices.size());
    g.B_ = int(spec.bonds.size());
    if (g.V_ == 0) throw InputError("graph has no vertices");
    if (g.B_ == 0) throw InputError("graph has no bonds");

    std::map<std::string, int> vidx;
    for (int v = 0; v < g.V_; ++v) {
        if (!vidx.emplace(spec.vertices[std::size_t(v)], v).second)
            throw InputError("duplicate vertex name: " + spec.vertices[std::size_t(v)]);
    }
    std::set<std::string> bond_names;
    for (const auto& b : spec.bonds) {
        if (!bond_names.insert(b.name).second) throw InputError("duplicate bond id: " + b.name);
        if (!(b.length > 0.0)) throw InputError("bond " + b.name + ": non-positive length");
        if (!vidx.count(b.from)) throw InputError("bond " + b.name + ": unknown vertex " + b.from);
        if (!vidx.count(b.to)) throw InputError("bond " + b.name + ": unknown vertex " + b.to);
    }

    g.vertex_names_ = spec.vertices;
    g.valency_.assign(std::size_t(g.V_), 0);

    // Raw arcs: 2 per bond, then sort into canonical order
    // (tail vertex, then bond id, forward before reversed on loops).
    struct RawArc {
        Arc arc;
        double theta;
    };
    std::vector<RawArc> raw;
    for (int b = 0; b < g.B_; ++b) {
        const auto& bs = spec.bonds[std::size_t(b)];
        int u = vidx[bs.from], v = vidx[bs.to];
        raw.push_back({{u, v, b, true}, bs.flux});
        raw.push_back({{v, u, b, false}, -bs.flux});
        g.lengths_.push_back(bs.length);
        g.potentials_.push_back(bs.potential);
        g.bond_names_.push_back(bs.name);
        g.valency_[std::size_t(u)] += 1;
        g.valency_[std::size_t(v)] += 1;
    }
    std::vector<int> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        const Arc &a = raw[std::size_t(i)].arc, &b = raw[std::size_t(j)].arc;
        if (a.tail != b.tail) return a.tail < b.tail;
        if (a.bond != b.bond) return a.bond < b.bond;
        return a.forward && !b.forward;
    });

    g.arcs_.resize(raw.size());
    g.flux_.resize(raw.size());
    g.bond_arcs_.assign(std::size_t(g.B_), {-1, -1});
    for (int pos = 0; pos < int(order.size()); ++pos) {
        const RawArc& ra = raw[std::size_t(order[std::size_t(pos)])];
        g.arcs_[std::size_t(pos)] = ra.arc;
        g.flux_[std::size_t(pos)] = ra.theta;
        g.bond_arcs_[std::size_t(ra.arc.bond)][ra.arc.forward ? 0 : 1] = pos;
    }
    g.reversal_.resize(raw.size());
    for (int b = 0; b < g.B_; ++b) {
        auto [f, r] = g.bond_arcs_[std::size_t(b)];
        g.reversal_[std::size_t(f)] = r;
        g.reversal_[std::size_t(r)] = f;
    }

    g.block_offset_.assign(std::size_t(g.V_), 0);
    for (int v = 1; v < g.V_; ++v)
        g.block_offset_[std::size_t(v)] =
            g.block_offset_[std::size_t(v - 1)] + g.valency_[std::size_t(v - 1)];

    g.total_length_ = std::accumulate(g.lengths_.begin(), g.lengths_.end(), 0.0);
    return g;
}

MetricGraph MetricGraph::with_fluxes(const std::vector<double>& per_bond_theta) const {
    if (int(per_bond_theta.size()) != B_) throw InputError("with_fluxes: wrong number of fluxes");
    MetricGraph g = *this;
    for (int b = 0; b < B_; ++b) {
        auto [f, r] = bond_arcs_[std::size_t(b)];
        g.flux_[std::size_t(f)] = per_bond_theta[std::size_t(b)];
        g.flux_[std::size_t(r)] = -per_bond_theta[std::size_t(b)];
    }
    return g;
}

GraphSpec make_wire_spec(double L) {
    GraphSpec s;
    s.vertices = {"A", "B"};
    s.bonds.push_back({"b1", "A", "B", L, 0.0, {}});
    return s;
}

GraphSpec make_ring_spec(double L, double theta) {
    GraphSpec s;
    s.vertices = {"A"};
    s.bonds.push_back({"b1", "A", "A", L, theta, {}});
    return s;
}

GraphSpec make_star_spec(const std::vector<double>& arm_lengths) {
    GraphSpec s;
    s.vertices = {"O"};
    for (std::size_t i = 0; i < arm_lengths.size(); ++i) {
        std::string name = "T" + std::to_string(i + 1);
        s.vertices.push_back(name);
        s.bonds.push_back({"b" + std::to_string(i + 1), "O", name, arm_lengths[i], 0.0, {}});
    }
    return s;
}

GraphSpec make_triangle_spec(double l) {
    GraphSpec s;
    s.vertices = {"A", "B", "C"};
    s.bonds.push_back({"b1", "A", "B", l, 0.0, {}});
    s.bonds.push_back({"b2", "B", "C", l, 0.0, {}});
    s.bonds.push_back({"b3", "C", "A", l, 0.0, {}});
    return s;
}

GraphSpec make_complete_graph_spec(int n, double l) {
    GraphSpec s;
    for (int i = 0; i < n; ++i) s.vertices.push_back(std::string(1, char('A' + i)));
    int b = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            s.bonds.push_back({"b" + std::to_string(++b), s.vertices[std::size_t(i)],
                               s.vertices[std::size_t(j)], l, 0.0, {}});
    return s;
}

} // namespace qgraph
