#include "logmonoid/logcurve.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "logmonoid/lp.hpp"

namespace logmonoid {

namespace {

std::string sanitize(const std::string& id)
{
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (out.empty())
        out = "_";
    return out;
}

std::vector<std::size_t> order_by_id(std::size_t n, const std::function<const std::string&(std::size_t)>& id)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return id(a) < id(b); });
    return idx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph

void DecoratedDualGraph::validate(bool strict_contact) const
{
    if (vertices.empty())
        throw InvalidGraph("graph has no vertices");
    std::set<std::string> ids;
    for (const auto& v : vertices) {
        if (!ids.insert(v.id).second)
            throw InvalidGraph("duplicate vertex id '" + v.id + "'");
        for (std::size_t k = 0; k < v.degeneracy.size(); ++k) {
            std::size_t j = v.degeneracy[k];
            if (j < 1 || j > r)
                throw InvalidGraph("vertex '" + v.id + "': branch " + std::to_string(j) + " outside 1.." +
                                   std::to_string(r));
            if (k > 0 && v.degeneracy[k - 1] >= j)
                throw InvalidGraph("vertex '" + v.id + "': degeneracy set must be sorted without repeats");
        }
    }
    std::set<std::string> marking_ids;
    for (const auto& v : vertices) {
        for (const auto& m : v.markings) {
            if (!marking_ids.insert(m.id).second)
                throw InvalidGraph("duplicate marking id '" + m.id + "'");
            if (m.mu.size() != r)
                throw InvalidGraph("marking '" + m.id + "': mu must have " + std::to_string(r) + " entries");
            if (!is_nonnegative(m.mu))
                throw InvalidGraph("marking '" + m.id + "': contact orders must be >= 0");
        }
    }
    std::set<std::string> edge_ids;
    for (const auto& e : edges) {
        if (!edge_ids.insert(e.id).second)
            throw InvalidGraph("duplicate edge id '" + e.id + "'");
        if (!ids.count(e.from) || !ids.count(e.to))
            throw InvalidGraph("edge '" + e.id + "' references an unknown vertex");
        if (e.mu.size() != r)
            throw InvalidGraph("edge '" + e.id + "': mu must have " + std::to_string(r) + " entries");
        if (strict_contact) {
            auto ie = edge_branches(e);
            for (std::size_t j = 1; j <= r; ++j)
                if (e.mu[j - 1] != 0 && !std::binary_search(ie.begin(), ie.end(), j))
                    throw InvalidGraph("edge '" + e.id + "': mu_" + std::to_string(j) +
                                       " must vanish outside I_v union I_v'");
        }
    }
    // Connectivity by union-find over vertex positions.
    std::vector<std::size_t> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& e : edges)
        parent[find(vertex_index(e.from))] = find(vertex_index(e.to));
    for (std::size_t k = 0; k < vertices.size(); ++k)
        if (find(k) != find(0))
            throw InvalidGraph("graph is not connected");
}

std::size_t DecoratedDualGraph::vertex_index(const std::string& id) const
{
    for (std::size_t k = 0; k < vertices.size(); ++k)
        if (vertices[k].id == id)
            return k;
    throw InvalidGraph("unknown vertex '" + id + "'");
}

std::vector<std::size_t> DecoratedDualGraph::vertex_order() const
{
    return order_by_id(vertices.size(), [&](std::size_t k) -> const std::string& { return vertices[k].id; });
}

std::vector<std::size_t> DecoratedDualGraph::edge_order() const
{
    return order_by_id(edges.size(), [&](std::size_t k) -> const std::string& { return edges[k].id; });
}

std::vector<std::size_t> DecoratedDualGraph::edge_branches(const Edge& e) const
{
    const auto& a = vertices[vertex_index(e.from)].degeneracy;
    const auto& b = vertices[vertex_index(e.to)].degeneracy;
    std::vector<std::size_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool DecoratedDualGraph::in_degeneracy(std::size_t vertex, std::size_t branch) const
{
    const auto& d = vertices[vertex].degeneracy;
    return std::binary_search(d.begin(), d.end(), branch);
}

// ---------------------------------------------------------------------------
// Basic monoid

std::size_t BasicMonoid::vertex_generator(std::size_t vertex, std::size_t branch) const
{
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i].kind == GeneratorTag::Kind::VertexBranch && tags[i].index == vertex && tags[i].branch == branch)
            return i;
    throw PreconditionError("no generator for that vertex and branch");
}

std::size_t BasicMonoid::edge_generator(std::size_t edge) const
{
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i].kind == GeneratorTag::Kind::Edge && tags[i].index == edge)
            return i;
    throw PreconditionError("no generator for that edge");
}

BasicMonoid build_basic_monoid(const DecoratedDualGraph& g)
{
    g.validate();
    BasicMonoid b;
    b.graph = g;
    const std::size_t r = g.r;

    std::vector<std::string> labels;
    std::set<std::string> used;
    auto unique_label = [&](std::string l) {
        while (used.count(l))
            l += "'";
        used.insert(l);
        return l;
    };
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> vgen;
    for (std::size_t v : g.vertex_order()) {
        for (std::size_t j = 1; j <= r; ++j) {
            vgen[{v, j}] = b.tags.size();
            if (g.in_degeneracy(v, j))
                b.reduced_gens.push_back(b.tags.size());
            b.tags.push_back({GeneratorTag::Kind::VertexBranch, v, j});
            labels.push_back(unique_label("m_" + sanitize(g.vertices[v].id) + "_" + std::to_string(j)));
        }
    }
    std::map<std::size_t, std::size_t> egen;
    for (std::size_t e : g.edge_order()) {
        egen[e] = b.tags.size();
        b.reduced_gens.push_back(b.tags.size());
        b.tags.push_back({GeneratorTag::Kind::Edge, e, 0});
        labels.push_back(unique_label("m_" + sanitize(g.edges[e].id)));
    }
    std::sort(b.reduced_gens.begin(), b.reduced_gens.end());
    const std::size_t n = b.tags.size();

    std::vector<Relation> rels;
    for (std::size_t v : g.vertex_order()) {
        for (std::size_t j = 1; j <= r; ++j) {
            if (g.in_degeneracy(v, j))
                continue;
            b.zero_relation[vgen[{v, j}]] = rels.size();
            rels.push_back({unit_vector(n, vgen[{v, j}]), zero_vector(n)});
        }
    }
    for (std::size_t e : g.edge_order()) {
        const Edge& edge = g.edges[e];
        std::size_t v = g.vertex_index(edge.from), w = g.vertex_index(edge.to);
        for (std::size_t j = 1; j <= r; ++j) {
            // m_{w,j} = m_{v,j} + mu m_e, with a negative mu moved to the left.
            Relation rel{unit_vector(n, vgen[{w, j}]), unit_vector(n, vgen[{v, j}])};
            const Integer& mu = edge.mu[j - 1];
            if (mu > 0)
                rel.rhs[egen[e]] += mu;
            else if (mu < 0)
                rel.lhs[egen[e]] -= mu;
            b.edge_relation[{e, j}] = rels.size();
            rels.push_back(std::move(rel));
        }
    }
    b.presentation = MonoidPresentation(n, std::move(rels), std::move(labels));
    return b;
}

// ---------------------------------------------------------------------------
// Tropical condition

TropicalResult tropical_feasible(const BasicMonoid& b)
{
    const MonoidPresentation& p = b.presentation;
    const std::size_t n = p.n_gens();
    const IntMatrix& m = p.relation_matrix();
    TropicalResult out;

    LinearSystem sys(n);
    for (std::size_t j = 0; j < m.cols(); ++j)
        sys.add_equality(m.column(j));
    for (std::size_t i : b.reduced_gens)
        sys.add_weak(unit_vector(n, i), 1);
    if (auto x = lp_feasible(sys)) {
        // Homogeneous cone condition: clearing denominators keeps every
        // reduced coordinate >= 1.
        IntVector w = primitive_integer_vector(*x);
        for (std::size_t i = 0; i < n; ++i)
            if (std::find(b.reduced_gens.begin(), b.reduced_gens.end(), i) == b.reduced_gens.end() && w[i] != 0)
                throw InvariantViolation("tropical witness is nonzero on a forced-zero generator");
        out.witness = w;
        return out;
    }

    // Certificate: y with (M y)_i = 0 off the reduced set, >= 0 on it, sum >= 1.
    std::vector<bool> reduced(n, false);
    for (std::size_t i : b.reduced_gens)
        reduced[i] = true;
    LinearSystem dual(m.cols());
    IntVector total(m.cols(), Integer(0));
    for (std::size_t i = 0; i < n; ++i) {
        IntVector row = m.row(i);
        if (reduced[i]) {
            dual.add_weak(row);
            total = add(total, row);
        } else {
            dual.add_equality(row);
        }
    }
    dual.add_weak(total, 1);
    auto y = lp_feasible(dual);
    if (!y)
        throw InvariantViolation("tropical system infeasible without an alternative certificate");
    out.certificate_multipliers = primitive_integer_vector(*y);
    out.certificate_combination = m * out.certificate_multipliers;
    return out;
}

Integer saturation_count(const BasicMonoid& b) { return b.presentation.group().torsion_order(); }

// ---------------------------------------------------------------------------
// The rho matrix

VarrhoMatrix varrho_matrix(const DecoratedDualGraph& g, const std::vector<bool>& flipped)
{
    g.validate();
    if (!flipped.empty() && flipped.size() != g.edges.size())
        throw PreconditionError("varrho_matrix: one orientation flag per edge expected");
    VarrhoMatrix out;
    const auto vorder = g.vertex_order();
    const auto eorder = g.edge_order();

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;  // (edge, j)
    for (std::size_t e : eorder) {
        const Edge& edge = g.edges[e];
        auto ie = g.edge_branches(edge);
        for (std::size_t j = 1; j <= g.r; ++j)
            if (edge.mu[j - 1] != 0 && !std::binary_search(ie.begin(), ie.end(), j))
                throw InvalidGraph("edge '" + edge.id + "' has nonzero contact order outside I_e at branch " +
                                   std::to_string(j));
        for (std::size_t j : ie) {
            row_of[{e, j}] = out.row_labels.size();
            out.row_labels.push_back(edge.id + ":" + std::to_string(j));
        }
    }
    std::map<std::size_t, std::size_t> edge_col;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> vertex_col;
    for (std::size_t e : eorder) {
        edge_col[e] = out.col_labels.size();
        out.col_labels.push_back(g.edges[e].id);
    }
    for (std::size_t v : vorder) {
        for (std::size_t j : g.vertices[v].degeneracy) {
            vertex_col[{v, j}] = out.col_labels.size();
            out.col_labels.push_back(g.vertices[v].id + ":" + std::to_string(j));
        }
    }

    IntMatrix m(out.row_labels.size(), out.col_labels.size());
    for (std::size_t e : eorder) {
        const Edge& edge = g.edges[e];
        bool flip = !flipped.empty() && flipped[e];
        std::size_t tail = g.vertex_index(flip ? edge.to : edge.from);
        std::size_t head = g.vertex_index(flip ? edge.from : edge.to);
        for (std::size_t j : g.edge_branches(edge)) {
            std::size_t row = row_of[{e, j}];
            m(row, edge_col[e]) = flip ? Integer(-edge.mu[j - 1]) : edge.mu[j - 1];
            // +1 at the tail of the chosen lift, -1 at its head.
            if (g.in_degeneracy(tail, j))
                m(row, vertex_col[{tail, j}]) += 1;
            if (g.in_degeneracy(head, j))
                m(row, vertex_col[{head, j}]) -= 1;
        }
    }
    out.matrix = std::move(m);
    return out;
}

Integer varrho_saturation_count(const DecoratedDualGraph& g, const std::vector<bool>& flipped)
{
    const IntMatrix rho = varrho_matrix(g, flipped).matrix;
    if (rho.rows() == 0 || rho.cols() == 0)
        return 1;
    // im(rho^dual) is spanned by the rows of rho inside Z^cols; its
    // saturation is (ker rho)^perp. The index is the determinant of the
    // rows written in a basis of the saturation.
    IntMatrix rows_as_cols = rho.transpose();
    IntMatrix sat = saturated_span_basis(rows_as_cols);
    if (sat.cols() == 0)
        return 1;
    LatticeSolver solver(sat);
    std::vector<IntVector> coords;
    for (std::size_t k = 0; k < rows_as_cols.cols(); ++k) {
        auto c = solver.solve(rows_as_cols.column(k));
        if (!c)
            throw InvariantViolation("row of rho outside the saturation of its span");
        coords.push_back(*c);
    }
    IntMatrix c = IntMatrix::from_columns(coords, sat.cols());
    auto snf = smith_normal_form(c);
    if (snf.rank() != sat.cols())
        throw InvariantViolation("rho rows do not have full rank in their saturation");
    Integer index = 1;
    for (std::size_t k = 0; k < snf.rank(); ++k)
        index *= abs(snf.S(k, k));

    // Independent route: product of the nonzero invariant factors of rho.
    auto direct = smith_normal_form(rho);
    Integer product = 1;
    for (std::size_t k = 0; k < direct.rank(); ++k)
        product *= abs(direct.S(k, k));
    if (product != index)
        throw InvariantViolation("rho index computations disagree");
    return index;
}

SaturationResult fs_basic_monoid(const BasicMonoid& b)
{
    if (!tropical_feasible(b).witness)
        throw NotFeasible("basic monoid fails the tropical condition");
    SaturationResult sat = saturate(b.presentation);
    if (double_dual(b.presentation).hilbert_basis != sat.hilbert_basis)
        throw InvariantViolation("saturation and double dual disagree");
    return sat;
}

// ---------------------------------------------------------------------------
// Ghost sections and tropicalization

GhostSectionResult ghost_section_check(const DecoratedDualGraph& g, const MonoidPresentation& target,
                                       const std::vector<MonoidElement>& rho,
                                       const std::vector<MonoidElement>& vertex_values)
{
    g.validate();
    if (rho.size() != g.edges.size())
        throw PreconditionError("ghost_section_check: one rho value per edge expected");
    if (vertex_values.size() != g.vertices.size())
        throw PreconditionError("ghost_section_check: one value per vertex expected");
    for (const auto& x : rho)
        if (!x.owner().same_data(target))
            throw OwnerMismatch("rho value from a different monoid");
    for (const auto& x : vertex_values)
        if (!x.owner().same_data(target))
            throw OwnerMismatch("vertex value from a different monoid");
    for (std::size_t e = 0; e < rho.size(); ++e)
        if (is_zero(rho[e]))
            throw ZeroRho("rho of edge '" + g.edges[e].id + "' is zero");
    if (!is_sharp(target).sharp)
        throw NotSharp("ghost_section_check: target monoid must be sharp");

    // In a sharp target a nonzero rho_e is not torsion in the group (it
    // would be a unit), so the slope is unique when it exists.
    GhostSectionResult out;
    std::vector<Integer> slopes;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& edge = g.edges[e];
        const auto& a = vertex_values[g.vertex_index(edge.from)];
        const auto& b = vertex_values[g.vertex_index(edge.to)];
        auto c = node_slope(rho[e], a, b);
        if (!c) {
            out.diagnostics = "edge '" + edge.id + "': m_" + edge.to + " - m_" + edge.from +
                              " is not an integer multiple of rho_e";
            return out;
        }
        slopes.push_back(*c);
    }
    out.slopes = std::move(slopes);
    return out;
}

TropicalizationResult tropicalization_check(const BasicMonoid& b, const MonoidPresentation& target,
                                            const std::vector<MonoidElement>& assignment)
{
    const MonoidPresentation& p = b.presentation;
    if (assignment.size() != p.n_gens())
        throw PreconditionError("tropicalization_check: one target element per generator expected");
    for (const auto& x : assignment)
        if (!x.owner().same_data(target))
            throw OwnerMismatch("assignment value from a different monoid");

    auto image = [&](const IntVector& coeffs) {
        MonoidElement acc = MonoidElement::zero(target);
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i] != 0)
                acc = acc + assignment[i].times(coeffs[i]);
        return acc;
    };
    TropicalizationResult out;
    for (std::size_t j = 0; j < p.relations().size(); ++j) {
        const Relation& rel = p.relations()[j];
        if (!element_eq(image(rel.lhs), image(rel.rhs))) {
            out.diagnostics = "relation " + std::to_string(j) + " (" + p.format_vector(rel.lhs) + " = " +
                              p.format_vector(rel.rhs) + ") is not respected";
            return out;
        }
    }
    for (std::size_t i : b.reduced_gens) {
        if (is_zero(assignment[i])) {
            out.diagnostics = "reduced generator " + p.labels()[i] + " maps to 0";
            return out;
        }
    }
    out.ok = true;
    return out;
}

}  // namespace logmonoid
