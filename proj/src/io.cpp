#include "qgraph/io.hpp"

#include "qgraph/error.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qgraph {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw InputError("line " + std::to_string(line_no) + ": " + msg);
}

double parse_double(const std::string& tok, int line_no, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(line_no, "expected a number for " + what + ", got '" + tok + "'");
    }
    if (pos != tok.size()) fail(line_no, "trailing characters in " + what + " '" + tok + "'");
    return v;
}

cplx parse_cplx(const std::string& tok, int line_no, const std::string& what) {
    if (!tok.empty() && tok.front() == '(') {
        std::istringstream is(tok);
        cplx v;
        is >> v;
        if (is.fail()) fail(line_no, "malformed complex entry '" + tok + "' in " + what);
        return v;
    }
    return parse_double(tok, line_no, what);
}

PotentialSpec parse_potential(const std::vector<std::string>& toks, std::size_t i, int line_no,
                              const std::string& bond) {
    if (i >= toks.size()) fail(line_no, "missing potential kind for bond " + bond);
    const std::string& kind = toks[i];
    if (kind == "zero") {
        return PotentialSpec::zero();
    } else if (kind == "const") {
        if (i + 1 >= toks.size()) fail(line_no, "missing value after 'const' for bond " + bond);
        return PotentialSpec::constant(parse_double(toks[i + 1], line_no, "potential value"));
    } else if (kind == "piecewise") {
        std::vector<double> breaks, vals;
        for (std::size_t j = i + 1; j < toks.size(); ++j) {
            std::size_t colon = toks[j].find(':');
            if (colon == std::string::npos)
                fail(line_no, "piecewise entries are x:V pairs, got '" + toks[j] + "'");
            breaks.push_back(parse_double(toks[j].substr(0, colon), line_no, "breakpoint"));
            vals.push_back(parse_double(toks[j].substr(colon + 1), line_no, "segment value"));
        }
        if (breaks.empty()) fail(line_no, "piecewise potential needs at least one segment");
        return PotentialSpec::piecewise(breaks, vals);
    } else if (kind == "poly") {
        std::vector<double> c;
        for (std::size_t j = i + 1; j < toks.size(); ++j)
            c.push_back(parse_double(toks[j], line_no, "polynomial coefficient"));
        if (c.empty()) fail(line_no, "polynomial potential needs coefficients");
        return PotentialSpec::polynomial(c);
    }
    fail(line_no, "unknown potential kind '" + kind + "' for bond " + bond);
}

} // namespace

GraphDocument parse_graph(const std::string& text) {
    GraphDocument doc;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    bool format_seen = false;
    int pending_general = -1; // vertex index awaiting crow/drow lines

    while (std::getline(is, line)) {
        ++line_no;
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;

        if (!format_seen) {
            if ((toks.size() == 2 && toks[0] == "format:" && toks[1] == "1") ||
                (toks.size() == 2 && toks[0] == "format" && toks[1] == "1"))
                format_seen = true;
            else
                fail(line_no, "document must start with 'format: 1'");
            continue;
        }

        if (toks[0] == "vertex") {
            if (toks.size() < 2) fail(line_no, "vertex needs a name");
            doc.graph.vertices.push_back(toks[1]);
            VertexBcSpec bc;
            pending_general = -1;
            if (toks.size() >= 3) {
                const std::string& kind = toks[2];
                if (kind == "delta" || kind == "delta_prime") {
                    bc.kind = kind == "delta" ? VertexBcSpec::Kind::Delta
                                              : VertexBcSpec::Kind::DeltaPrime;
                    if (toks.size() < 4) fail(line_no, "missing coupling value after '" + kind + "'");
                    bc.param = parse_double(toks[3], line_no, "coupling value");
                } else if (kind == "dirichlet") {
                    bc.kind = VertexBcSpec::Kind::Dirichlet;
                } else if (kind == "neumann") {
                    bc.kind = VertexBcSpec::Kind::Neumann;
                } else if (kind == "general") {
                    bc.kind = VertexBcSpec::Kind::General;
                    pending_general = int(doc.bc.size());
                } else {
                    fail(line_no, "unknown boundary kind '" + kind + "' at vertex " + toks[1]);
                }
            }
            doc.bc.push_back(std::move(bc));
        } else if (toks[0] == "crow" || toks[0] == "drow") {
            if (pending_general < 0)
                fail(line_no, "'" + toks[0] + "' outside a 'vertex ... general' block");
            std::vector<cplx> row;
            for (std::size_t j = 1; j < toks.size(); ++j)
                row.push_back(parse_cplx(toks[j], line_no, toks[0]));
            auto& bc = doc.bc[std::size_t(pending_general)];
            (toks[0] == "crow" ? bc.c_rows : bc.d_rows).push_back(std::move(row));
        } else if (toks[0] == "bond") {
            pending_general = -1;
            if (toks.size() < 4) fail(line_no, "bond needs NAME FROM TO");
            GraphSpec::Bond b;
            b.name = toks[1];
            b.from = toks[2];
            b.to = toks[3];
            bool have_length = false;
            std::size_t i = 4;
            while (i < toks.size()) {
                if (toks[i] == "length") {
                    if (i + 1 >= toks.size()) fail(line_no, "missing value after 'length'");
                    b.length = parse_double(toks[i + 1], line_no, "length of bond " + b.name);
                    have_length = true;
                    i += 2;
                } else if (toks[i] == "flux") {
                    if (i + 1 >= toks.size()) fail(line_no, "missing value after 'flux'");
                    b.flux = parse_double(toks[i + 1], line_no, "flux of bond " + b.name);
                    i += 2;
                } else if (toks[i] == "potential") {
                    b.potential = parse_potential(toks, i + 1, line_no, b.name);
                    i = toks.size();
                } else {
                    fail(line_no, "unknown bond attribute '" + toks[i] + "'");
                }
            }
            if (!have_length) fail(line_no, "bond " + b.name + " has no length");
            doc.graph.bonds.push_back(std::move(b));
        } else {
            fail(line_no, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!format_seen) throw InputError("empty document (missing 'format: 1')");
    return doc;
}

GraphDocument load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string centry(cplx v) {
    if (v.imag() == 0.0) return num(v.real());
    return "(" + num(v.real()) + "," + num(v.imag()) + ")";
}

} // namespace

std::string emit_graph(const GraphDocument& doc) {
    std::ostringstream os;
    os << "format: 1\n\n";
    for (std::size_t v = 0; v < doc.graph.vertices.size(); ++v) {
        os << "vertex " << doc.graph.vertices[v];
        const VertexBcSpec& bc = doc.bc[v];
        switch (bc.kind) {
        case VertexBcSpec::Kind::Delta: os << " delta " << num(bc.param); break;
        case VertexBcSpec::Kind::DeltaPrime: os << " delta_prime " << num(bc.param); break;
        case VertexBcSpec::Kind::Dirichlet: os << " dirichlet"; break;
        case VertexBcSpec::Kind::Neumann: os << " neumann"; break;
        case VertexBcSpec::Kind::General: os << " general"; break;
        }
        os << "\n";
        if (bc.kind == VertexBcSpec::Kind::General) {
            for (const auto& row : bc.c_rows) {
                os << "crow";
                for (cplx e : row) os << " " << centry(e);
                os << "\n";
            }
            for (const auto& row : bc.d_rows) {
                os << "drow";
                for (cplx e : row) os << " " << centry(e);
                os << "\n";
            }
        }
    }
    for (const auto& b : doc.graph.bonds) {
        os << "bond " << b.name << " " << b.from << " " << b.to << " length " << num(b.length);
        if (b.flux != 0.0) os << " flux " << num(b.flux);
        switch (b.potential.kind) {
        case PotentialSpec::Kind::Zero: break;
        case PotentialSpec::Kind::PiecewiseConstant:
            os << " potential piecewise";
            for (std::size_t i = 0; i < b.potential.values.size(); ++i)
                os << " " << num(b.potential.breakpoints[i]) << ":" << num(b.potential.values[i]);
            break;
        case PotentialSpec::Kind::Polynomial:
            os << " potential poly";
            for (double c : b.potential.coeffs) os << " " << num(c);
            break;
        }
        os << "\n";
    }
    return os.str();
}

BoundaryConditions document_bc(const MetricGraph& g, const GraphDocument& doc) {
    if (doc.bc.size() != std::size_t(g.vertex_count()))
        throw InputError("document_bc: boundary spec count does not match vertex count");

    bool all_delta = true, all_prime = true;
    for (const auto& bc : doc.bc) {
        if (bc.kind != VertexBcSpec::Kind::Delta && bc.kind != VertexBcSpec::Kind::Dirichlet)
            all_delta = false;
        if (bc.kind != VertexBcSpec::Kind::DeltaPrime && bc.kind != VertexBcSpec::Kind::Neumann)
            all_prime = false;
    }
    if (all_delta) {
        std::vector<VertexParam> p;
        for (const auto& bc : doc.bc)
            p.push_back(bc.kind == VertexBcSpec::Kind::Dirichlet ? VertexParam::inf()
                                                                 : VertexParam::finite(bc.param));
        return delta_coupling_bc(g, p);
    }
    if (all_prime) {
        std::vector<VertexParam> p;
        for (const auto& bc : doc.bc)
            p.push_back(bc.kind == VertexBcSpec::Kind::Neumann ? VertexParam::inf()
                                                               : VertexParam::finite(bc.param));
        return delta_prime_bc(g, p);
    }

    // mixed families: assemble explicit per-vertex blocks
    std::vector<Eigen::MatrixXcd> cb, db;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int m = g.valency(v);
        const VertexBcSpec& bc = doc.bc[std::size_t(v)];
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(m, m), D = Eigen::MatrixXcd::Zero(m, m);
        switch (bc.kind) {
        case VertexBcSpec::Kind::Delta:
            C(0, 0) = -bc.param;
            for (int j = 0; j < m; ++j) D(0, j) = 1.0;
            for (int i = 1; i < m; ++i) {
                C(i, 0) = -1.0;
                C(i, i) = 1.0;
            }
            break;
        case VertexBcSpec::Kind::Dirichlet:
            C = Eigen::MatrixXcd::Identity(m, m);
            break;
        case VertexBcSpec::Kind::DeltaPrime:
            D(0, 0) = -bc.param;
            for (int j = 0; j < m; ++j) C(0, j) = 1.0;
            for (int i = 1; i < m; ++i) {
                D(i, 0) = -1.0;
                D(i, i) = 1.0;
            }
            break;
        case VertexBcSpec::Kind::Neumann:
            D = Eigen::MatrixXcd::Identity(m, m);
            break;
        case VertexBcSpec::Kind::General: {
            if (int(bc.c_rows.size()) != m || int(bc.d_rows.size()) != m)
                throw InputError("vertex " + g.vertex_name(v) + ": general block needs " +
                                 std::to_string(m) + " crow and drow lines");
            for (int i = 0; i < m; ++i) {
                if (int(bc.c_rows[std::size_t(i)].size()) != m ||
                    int(bc.d_rows[std::size_t(i)].size()) != m)
                    throw InputError("vertex " + g.vertex_name(v) + ": block rows need " +
                                     std::to_string(m) + " entries");
                for (int j = 0; j < m; ++j) {
                    C(i, j) = bc.c_rows[std::size_t(i)][std::size_t(j)];
                    D(i, j) = bc.d_rows[std::size_t(i)][std::size_t(j)];
                }
            }
            break;
        }
        }
        cb.push_back(std::move(C));
        db.push_back(std::move(D));
    }
    return general_bc(g, cb, db);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_number(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

} // namespace qgraph
