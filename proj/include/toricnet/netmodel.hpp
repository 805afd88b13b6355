#ifndef TORICNET_NETMODEL_HPP
#define TORICNET_NETMODEL_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "toricnet/lincore.hpp"

namespace toricnet {

struct Species {
    std::string name;
    int index = 0;
};

// A reaction complex: point in R^n with a display label ("2A+B", "0", ...).
struct Vertex {
    Eigen::VectorXd exponents;
    std::string label;
};

struct Edge {
    int source = 0;
    int target = 0;
    int index = 0;  // file order; rate and flux vectors index by this
};

// Euclidean embedded graph. Immutable after construction; the component
// partition and strong-connectivity flags are computed once in the ctor.
class EGraph {
public:
    EGraph(std::vector<Species> species, std::vector<Vertex> vertices,
           std::vector<Edge> edges);

    int species_count() const { return static_cast<int>(species_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Species>& species() const { return species_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Vertex& vertex(int i) const { return vertices_.at(i); }
    const Edge& edge(int e) const { return edges_.at(e); }

    // Undirected-connectivity partition of V, components numbered by smallest
    // member vertex index, members sorted ascending.
    const std::vector<std::vector<int>>& components() const { return components_; }
    int component_of(int vertex) const { return component_of_.at(vertex); }
    int component_count() const { return static_cast<int>(components_.size()); }

    bool weakly_reversible() const { return weakly_reversible_; }

    // y_target - y_source for edge e.
    Eigen::VectorXd reaction_vector(int e) const;

    const std::vector<int>& out_edges(int vertex) const { return out_edges_.at(vertex); }
    const std::vector<int>& in_edges(int vertex) const { return in_edges_.at(vertex); }

private:
    void build_adjacency();
    void build_components();
    void check_invariants() const;

    std::vector<Species> species_;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<std::vector<int>> in_edges_;
    std::vector<std::vector<int>> components_;
    std::vector<int> component_of_;
    bool weakly_reversible_ = false;
};

const std::vector<std::vector<int>>& connected_components(const EGraph& g);
bool is_weakly_reversible(const EGraph& g);

// Per-edge rate as written in the DSL: literal value or $placeholder.
struct RateExpr {
    double value = 0.0;
    std::string placeholder;  // empty when literal
    bool is_placeholder() const { return !placeholder.empty(); }
};

struct ParsedNetwork {
    EGraph graph;
    std::vector<RateExpr> rates;  // one per edge, in edge order
};

// Parse the reaction DSL. Vertices deduplicated by exponent vector, edge
// order is first appearance, "<->" expands to forward then reverse.
// Throws ParseError / StructureError.
ParsedNetwork parse_network(const std::string& text);

// Turn the parsed per-edge rate expressions into a positive rate vector,
// resolving $name placeholders through `bindings`. Throws ParseError on an
// unresolved placeholder and std::invalid_argument on a non-positive rate.
Eigen::VectorXd resolve_rates(const ParsedNetwork& net,
                              const std::map<std::string, double>& bindings = {});

struct StoichDecomp {
    int s = 0;                    // dim S
    Eigen::MatrixXd basis_S;      // n x s, orthonormal columns
    Eigen::MatrixXd basis_Sperp;  // n x (n-s), orthonormal columns
};

// Orthonormal bases of the stoichiometric subspace S and of S-perp via SVD of
// the reaction-vector matrix; rank threshold relative to the largest singular
// value.
StoichDecomp stoich_decomp(const EGraph& g, double rank_tol = kDefaultRankTol);

}  // namespace toricnet

#endif
