#include "toricnet/netmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

#include "toricnet/errors.hpp"

namespace toricnet {

std::string ParseError::format(const std::string& msg, int line, int col) {
    std::ostringstream os;
    os << "parse error";
    if (line > 0) {
        os << " at line " << line;
        if (col > 0) os << ", column " << col;
    }
    os << ": " << msg;
    return os.str();
}

// ---------------------------------------------------------------------------
// EGraph
// ---------------------------------------------------------------------------

EGraph::EGraph(std::vector<Species> species, std::vector<Vertex> vertices,
               std::vector<Edge> edges)
    : species_(std::move(species)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)) {
    check_invariants();
    build_adjacency();
    build_components();
}

void EGraph::check_invariants() const {
    std::set<std::string> names;
    for (size_t i = 0; i < species_.size(); ++i) {
        if (species_[i].index != static_cast<int>(i))
            throw StructureError("species indices must be contiguous");
        if (!names.insert(species_[i].name).second)
            throw StructureError("duplicate species name: " + species_[i].name);
    }
    const Eigen::Index n = static_cast<Eigen::Index>(species_.size());
    for (size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].exponents.size() != n)
            throw StructureError("vertex exponent vector has wrong dimension");
        for (size_t j = 0; j < i; ++j) {
            if (vertices_[i].exponents == vertices_[j].exponents)
                throw StructureError("two vertices share the exponent vector " +
                                     vertices_[i].label);
        }
    }
    std::set<std::pair<int, int>> seen;
    for (size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.index != static_cast<int>(e))
            throw StructureError("edge indices must follow file order");
        if (ed.source < 0 || ed.source >= vertex_count() || ed.target < 0 ||
            ed.target >= vertex_count())
            throw StructureError("edge endpoint out of range");
        if (ed.source == ed.target)
            throw StructureError("self-loop at vertex " + vertices_[ed.source].label);
        if (!seen.insert({ed.source, ed.target}).second)
            throw StructureError("duplicate edge " + vertices_[ed.source].label +
                                 " -> " + vertices_[ed.target].label);
    }
}

void EGraph::build_adjacency() {
    out_edges_.assign(vertices_.size(), {});
    in_edges_.assign(vertices_.size(), {});
    for (const Edge& e : edges_) {
        out_edges_[e.source].push_back(e.index);
        in_edges_[e.target].push_back(e.index);
    }
}

void EGraph::build_components() {
    const int m = vertex_count();
    component_of_.assign(m, -1);
    // Undirected reachability; numbering by smallest member comes for free
    // because we scan roots in ascending vertex order.
    for (int root = 0; root < m; ++root) {
        if (component_of_[root] >= 0) continue;
        const int comp = static_cast<int>(components_.size());
        std::vector<int> members;
        std::deque<int> queue{root};
        component_of_[root] = comp;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            members.push_back(v);
            auto visit = [&](int w) {
                if (component_of_[w] < 0) {
                    component_of_[w] = comp;
                    queue.push_back(w);
                }
            };
            for (int e : out_edges_[v]) visit(edges_[e].target);
            for (int e : in_edges_[v]) visit(edges_[e].source);
        }
        std::sort(members.begin(), members.end());
        components_.push_back(std::move(members));
    }

    // Strong connectivity of every component: forward and backward
    // reachability from the component root must each cover the component.
    weakly_reversible_ = true;
    for (const auto& comp : components_) {
        auto reaches_all = [&](bool forward) {
            std::set<int> seen{comp.front()};
            std::deque<int> queue{comp.front()};
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                const auto& adj = forward ? out_edges_[v] : in_edges_[v];
                for (int e : adj) {
                    int w = forward ? edges_[e].target : edges_[e].source;
                    if (seen.insert(w).second) queue.push_back(w);
                }
            }
            return seen.size() == comp.size();
        };
        if (!reaches_all(true) || !reaches_all(false)) {
            weakly_reversible_ = false;
            break;
        }
    }
}

Eigen::VectorXd EGraph::reaction_vector(int e) const {
    const Edge& ed = edges_.at(e);
    return vertices_[ed.target].exponents - vertices_[ed.source].exponents;
}

const std::vector<std::vector<int>>& connected_components(const EGraph& g) {
    return g.components();
}

bool is_weakly_reversible(const EGraph& g) { return g.weakly_reversible(); }

// ---------------------------------------------------------------------------
// DSL parser
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string coefficient_string(double c) {
    if (c == std::floor(c) && std::abs(c) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(c));
        return buf;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", c);
    return buf;
}

struct Builder {
    std::vector<Species> species;
    std::map<std::string, int> species_index;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<RateExpr> rates;
    std::set<std::pair<int, int>> edge_set;
    int line_no = 0;

    int species_id(const std::string& name) const {
        auto it = species_index.find(name);
        if (it == species_index.end())
            throw ParseError("unknown species '" + name + "'", line_no);
        return it->second;
    }

    void declare_species(const std::string& rest) {
        std::istringstream is(rest);
        std::string name;
        bool any = false;
        while (is >> name) {
            any = true;
            if (!is_ident_start(name[0]) ||
                !std::all_of(name.begin(), name.end(), is_ident_char))
                throw ParseError("invalid species name '" + name + "'", line_no);
            if (species_index.count(name))
                throw ParseError("species '" + name + "' declared twice", line_no);
            species_index[name] = static_cast<int>(species.size());
            species.push_back({name, static_cast<int>(species.size())});
        }
        if (!any) throw ParseError("empty species declaration", line_no);
    }

    Eigen::VectorXd parse_complex(const std::string& text) {
        const std::string body = trim(text);
        if (body.empty()) throw ParseError("empty complex", line_no);
        Eigen::VectorXd expo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(species.size()));
        if (body == "0") return expo;
        for (const std::string& raw : split(body, '+')) {
            const std::string term = trim(raw);
            if (term.empty()) throw ParseError("empty term in complex '" + body + "'", line_no);
            size_t pos = 0;
            double coeff = 1.0;
            if (std::isdigit(static_cast<unsigned char>(term[0])) || term[0] == '.') {
                size_t end = pos;
                while (end < term.size() &&
                       (std::isdigit(static_cast<unsigned char>(term[end])) || term[end] == '.'))
                    ++end;
                try {
                    size_t used = 0;
                    coeff = std::stod(term.substr(pos, end - pos), &used);
                    if (used != end - pos) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw ParseError("invalid coefficient in term '" + term + "'", line_no);
                }
                pos = end;
                while (pos < term.size() && (term[pos] == ' ' || term[pos] == '\t')) ++pos;
                if (pos < term.size() && term[pos] == '*') {
                    ++pos;
                    while (pos < term.size() && (term[pos] == ' ' || term[pos] == '\t')) ++pos;
                }
            }
            if (pos >= term.size() || !is_ident_start(term[pos]))
                throw ParseError("expected species name in term '" + term + "'", line_no);
            size_t name_end = pos;
            while (name_end < term.size() && is_ident_char(term[name_end])) ++name_end;
            if (name_end != term.size())
                throw ParseError("trailing characters in term '" + term + "'", line_no);
            const std::string name = term.substr(pos, name_end - pos);
            expo(species_id(name)) += coeff;
        }
        return expo;
    }

    std::string complex_label(const Eigen::VectorXd& expo) const {
        std::string label;
        for (Eigen::Index i = 0; i < expo.size(); ++i) {
            if (expo(i) == 0.0) continue;
            if (!label.empty()) label += "+";
            if (expo(i) != 1.0) label += coefficient_string(expo(i));
            label += species[static_cast<size_t>(i)].name;
        }
        return label.empty() ? "0" : label;
    }

    int vertex_id(const Eigen::VectorXd& expo) {
        for (size_t i = 0; i < vertices.size(); ++i) {
            if (vertices[i].exponents == expo) return static_cast<int>(i);
        }
        vertices.push_back({expo, complex_label(expo)});
        return static_cast<int>(vertices.size() - 1);
    }

    RateExpr parse_rate(const std::string& text) {
        const std::string body = trim(text);
        if (body.empty()) throw ParseError("missing rate", line_no);
        RateExpr expr;
        if (body[0] == '$') {
            const std::string name = body.substr(1);
            if (name.empty() || !is_ident_start(name[0]) ||
                !std::all_of(name.begin(), name.end(), is_ident_char))
                throw ParseError("invalid rate placeholder '" + body + "'", line_no);
            expr.placeholder = name;
            return expr;
        }
        try {
            size_t used = 0;
            expr.value = std::stod(body, &used);
            if (used != body.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("invalid rate literal '" + body + "'", line_no);
        }
        return expr;
    }

    void add_edge(int src, int dst, const RateExpr& rate) {
        if (src == dst)
            throw StructureError("self-loop: both sides of a reaction are the complex '" +
                                 vertices[src].label + "' (line " + std::to_string(line_no) + ")");
        if (!edge_set.insert({src, dst}).second)
            throw StructureError("duplicate reaction " + vertices[src].label + " -> " +
                                 vertices[dst].label + " (line " + std::to_string(line_no) + ")");
        edges.push_back({src, dst, static_cast<int>(edges.size())});
        rates.push_back(rate);
    }

    void parse_reaction(const std::string& line) {
        bool reversible = false;
        size_t arrow = line.find("<->");
        size_t arrow_len = 3;
        if (arrow != std::string::npos) {
            reversible = true;
        } else {
            arrow = line.find("->");
            arrow_len = 2;
            if (arrow == std::string::npos)
                throw ParseError("expected '->' or '<->'", line_no);
        }
        const std::string lhs = line.substr(0, arrow);
        const std::string rest = line.substr(arrow + arrow_len);
        const size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw ParseError("missing ': rate' after reaction", line_no);
        const std::string rhs = rest.substr(0, colon);
        const std::string rate_part = rest.substr(colon + 1);

        const auto rate_fields = split(rate_part, ',');
        if (reversible && rate_fields.size() != 2)
            throw ParseError("reversible reaction needs exactly two rates", line_no);
        if (!reversible && rate_fields.size() != 1)
            throw ParseError("irreversible reaction takes exactly one rate", line_no);

        const int src = vertex_id(parse_complex(lhs));
        const int dst = vertex_id(parse_complex(rhs));
        add_edge(src, dst, parse_rate(rate_fields[0]));
        if (reversible) add_edge(dst, src, parse_rate(rate_fields[1]));
    }
};

}  // namespace

ParsedNetwork parse_network(const std::string& text) {
    Builder b;
    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++b.line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("species", 0) == 0 &&
            (line.size() == 7 || line[7] == ' ' || line[7] == '\t')) {
            b.declare_species(line.substr(7));
        } else {
            b.parse_reaction(line);
        }
    }
    return ParsedNetwork{EGraph(std::move(b.species), std::move(b.vertices), std::move(b.edges)),
                         std::move(b.rates)};
}

Eigen::VectorXd resolve_rates(const ParsedNetwork& net,
                              const std::map<std::string, double>& bindings) {
    Eigen::VectorXd k(net.graph.edge_count());
    for (int e = 0; e < net.graph.edge_count(); ++e) {
        const RateExpr& expr = net.rates.at(e);
        double value = expr.value;
        if (expr.is_placeholder()) {
            auto it = bindings.find(expr.placeholder);
            if (it == bindings.end())
                throw ParseError("unresolved rate placeholder '$" + expr.placeholder +
                                 "' (bind it with --set " + expr.placeholder + "=value)");
            value = it->second;
        }
        if (!(value > 0.0))
            throw std::invalid_argument("rate constant for edge " + std::to_string(e) +
                                        " must be positive, got " + std::to_string(value));
        k(e) = value;
    }
    return k;
}

// ---------------------------------------------------------------------------
// Stoichiometric decomposition
// ---------------------------------------------------------------------------

StoichDecomp stoich_decomp(const EGraph& g, double rank_tol) {
    if (g.edge_count() == 0)
        throw std::invalid_argument("stoich_decomp: network has no reactions");
    const int n = g.species_count();
    Eigen::MatrixXd R(g.edge_count(), n);
    for (int e = 0; e < g.edge_count(); ++e) R.row(e) = g.reaction_vector(e).transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
    StoichDecomp sd;
    sd.s = numerical_rank(svd.singularValues(), rank_tol);
    sd.basis_S = svd.matrixV().leftCols(sd.s);
    sd.basis_Sperp = svd.matrixV().rightCols(n - sd.s);
    normalize_column_signs(sd.basis_S);
    normalize_column_signs(sd.basis_Sperp);
    return sd;
}

}  // namespace toricnet
