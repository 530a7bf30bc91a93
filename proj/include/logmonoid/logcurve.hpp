#pragma once

// Decorated dual graphs of prestable maps and the monoids built from them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logmonoid/monoid.hpp"

namespace logmonoid {

class InvalidGraph : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};
class NotFeasible : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

struct Marking {
    std::string id;
    IntVector mu;  // length r, entries >= 0
};

struct Vertex {
    std::string id;
    std::vector<std::size_t> degeneracy;  // I_v, 1-based branch indices, sorted
    std::vector<Marking> markings;
};

/// One stored orientation from -> to; the reverse orientation carries -mu.
struct Edge {
    std::string id;
    std::string from;
    std::string to;
    IntVector mu;  // length r
};

struct DecoratedDualGraph {
    std::size_t r = 0;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    /// Genus, class and the like; carried along verbatim, never interpreted.
    std::map<std::string, std::string> metadata;

    /// Throws InvalidGraph. With strict_contact, also requires mu_{e,j} = 0
    /// for j outside I_v union I_v'.
    void validate(bool strict_contact = false) const;

    std::size_t vertex_index(const std::string& id) const;
    /// Vertex positions sorted by id; generator order follows this.
    std::vector<std::size_t> vertex_order() const;
    std::vector<std::size_t> edge_order() const;
    /// I_e = I_from union I_to.
    std::vector<std::size_t> edge_branches(const Edge& e) const;
    bool in_degeneracy(std::size_t vertex, std::size_t branch) const;
};

struct GeneratorTag {
    enum class Kind { VertexBranch, Edge };
    Kind kind;
    std::size_t index;       // position in graph.vertices or graph.edges
    std::size_t branch = 0;  // 1-based, VertexBranch only
};

struct BasicMonoid {
    DecoratedDualGraph graph;
    MonoidPresentation presentation;
    std::vector<GeneratorTag> tags;
    /// Every edge generator and every m_{v,j} with j in I_v.
    std::vector<std::size_t> reduced_gens;
    /// Relation index of m_{v,j} = 0 for each forced-zero vertex generator.
    std::map<std::size_t, std::size_t> zero_relation;
    /// Relation index of (edge position, branch) for edge relations.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_relation;

    std::size_t vertex_generator(std::size_t vertex, std::size_t branch) const;
    std::size_t edge_generator(std::size_t edge) const;
};

/// Generators m_{v,j} (vertices by id, j = 1..r) then m_e (edges by id);
/// relations m_{v,j} = 0 for j not in I_v, then per edge and branch
/// m_{v',j} = m_{v,j} + mu_{e,j} m_e.
BasicMonoid build_basic_monoid(const DecoratedDualGraph& g);

struct TropicalResult {
    /// Integer point, >= 1 on reduced generators, satisfying every relation.
    std::optional<IntVector> witness;
    /// Otherwise: multipliers y on the relations whose combination
    /// sum_j y_j (lhs_j - rhs_j) = w is >= 0, nonzero, and supported on
    /// reduced generators, so no positive assignment can exist.
    IntVector certificate_multipliers;
    IntVector certificate_combination;
};

TropicalResult tropical_feasible(const BasicMonoid& b);

/// |Q^gp_tor|.
Integer saturation_count(const BasicMonoid& b);

struct VarrhoMatrix {
    IntMatrix matrix;
    std::vector<std::string> row_labels;  // "e:j"
    std::vector<std::string> col_labels;  // "e" then "v:j"
};

/// flipped[k] reverses the chosen lift of edge k (graph.edges order).
VarrhoMatrix varrho_matrix(const DecoratedDualGraph& g, const std::vector<bool>& flipped = {});

/// |(ker rho)^perp / im(rho^dual)|.
Integer varrho_saturation_count(const DecoratedDualGraph& g, const std::vector<bool>& flipped = {});

/// Sharpened saturation, checked against the double dual. Throws NotFeasible.
SaturationResult fs_basic_monoid(const BasicMonoid& b);

struct GhostSectionResult {
    /// Slope m_e for the stored orientation of each edge (graph.edges order);
    /// the reverse orientation has slope -m_e.
    std::optional<std::vector<Integer>> slopes;
    std::string diagnostics;
};

/// rho: one target element per edge; vertex_values: one per vertex. Marking
/// values are unconstrained naturals and do not enter the check.
GhostSectionResult ghost_section_check(const DecoratedDualGraph& g, const MonoidPresentation& target,
                                       const std::vector<MonoidElement>& rho,
                                       const std::vector<MonoidElement>& vertex_values);

struct TropicalizationResult {
    bool ok = false;
    std::string diagnostics;
};

/// assignment: one target element per generator of b.
TropicalizationResult tropicalization_check(const BasicMonoid& b, const MonoidPresentation& target,
                                            const std::vector<MonoidElement>& assignment);

}  // namespace logmonoid
