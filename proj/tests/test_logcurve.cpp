#include <gtest/gtest.h>

#include <numeric>

#include "generators.hpp"
#include "logmonoid/logcurve.hpp"
#include "logmonoid/oracle.hpp"

using namespace logmonoid;
using namespace testsupport;

namespace {

// Independent expansion of the rho columns straight from the edge list:
// entry (e:j, e) = mu_{e,j}, (e:j, v:j) = [v is tail] - [v is head].
IntMatrix rho_by_definition(const DecoratedDualGraph& g)
{
    std::vector<std::pair<std::size_t, std::size_t>> rows;  // (edge, j)
    std::vector<std::string> eids, vids;
    for (const auto& e : g.edges)
        eids.push_back(e.id);
    std::sort(eids.begin(), eids.end());
    std::vector<std::pair<std::string, std::size_t>> vcols;
    for (const auto& v : g.vertices)
        vids.push_back(v.id);
    std::sort(vids.begin(), vids.end());
    for (const auto& id : vids)
        for (std::size_t j : g.vertices[g.vertex_index(id)].degeneracy)
            vcols.emplace_back(id, j);
    IntMatrix m(0, 0);
    std::vector<IntVector> out;
    for (const auto& id : eids) {
        const Edge* e = nullptr;
        for (const auto& x : g.edges)
            if (x.id == id)
                e = &x;
        for (std::size_t j : g.edge_branches(*e)) {
            IntVector row(eids.size() + vcols.size());
            row[std::find(eids.begin(), eids.end(), id) - eids.begin()] = e->mu[j - 1];
            for (std::size_t c = 0; c < vcols.size(); ++c) {
                if (vcols[c].second != j)
                    continue;
                if (vcols[c].first == e->from)
                    row[eids.size() + c] += 1;
                if (vcols[c].first == e->to)
                    row[eids.size() + c] -= 1;
            }
            out.push_back(row);
        }
    }
    return IntMatrix::from_rows(out, eids.size() + vcols.size());
}

}  // namespace

TEST(Graph, Validation)
{
    auto g = two_edge_graph(4, 6);
    EXPECT_NO_THROW(g.validate(true));
    auto bad = g;
    bad.edges.push_back(edge("e1", "v", "w", {1}));
    EXPECT_THROW(bad.validate(), InvalidGraph);
    bad = g;
    bad.vertices.push_back(vertex("u", {}));
    EXPECT_THROW(bad.validate(), InvalidGraph);  // disconnected
    bad = g;
    bad.vertices[1].degeneracy = {2};
    EXPECT_THROW(bad.validate(), InvalidGraph);
    bad = g;
    bad.edges[0].to = "x";
    EXPECT_THROW(bad.validate(), InvalidGraph);
    bad = g;
    bad.r = 2;
    bad.edges[0].mu = to_int_vector({4, 1});
    bad.edges[1].mu = to_int_vector({6, 0});
    EXPECT_NO_THROW(bad.validate());
    EXPECT_THROW(bad.validate(true), InvalidGraph);
}

TEST(BasicMonoid, TwoEdgeExampleSimplifies)
{
    auto b = build_basic_monoid(two_edge_graph(4, 6));
    EXPECT_EQ(b.presentation.n_gens(), 4u);
    EXPECT_EQ(b.presentation.to_string(), "<m_v_1,m_w_1,m_e1,m_e2 | m_v_1 = 0, m_w_1 = m_v_1 + 4m_e1, m_w_1 = m_v_1 + 6m_e2>");
    EXPECT_EQ(b.reduced_gens, (std::vector<std::size_t>{1, 2, 3}));
    auto s = simplify_presentation(b.presentation);
    EXPECT_EQ(s.presentation.to_string(), "<m_e1,m_e2 | 4m_e1 = 6m_e2>");
}

TEST(BasicMonoid, ChainAndTrivial)
{
    auto chain = build_basic_monoid(chain_graph(3));
    auto s = simplify_presentation(chain.presentation, TietzeMode::ForcedZeros);
    EXPECT_EQ(s.presentation.to_string(), "<m_w_1,m_e | m_w_1 = 3m_e>");
    // Isomorphic to N via m_e -> 1, m_w_1 -> 3: a m_w_1 + b m_e with a + b <= 3
    // takes the values {0..7, 9}.
    EXPECT_EQ(groupification(chain.presentation).describe(), "Z");
    auto elems = oracle::enumerate_elements(s.presentation, {3, 1, 1});
    EXPECT_EQ(elems.size(), 9u);

    auto single = build_basic_monoid(single_vertex_graph());
    EXPECT_EQ(groupification(single.presentation).describe(), "0");
    EXPECT_TRUE(single.reduced_gens.empty());
}

TEST(BasicMonoid, NegativeContactOrder)
{
    // mu < 0 moves the edge term to the left-hand side.
    auto b = build_basic_monoid(chain_graph(-2));
    EXPECT_EQ(b.presentation.relations()[1].lhs, to_int_vector({0, 1, 2}));
    EXPECT_EQ(b.presentation.relations()[1].rhs, to_int_vector({1, 0, 0}));
}

TEST(BasicMonoid, LoopRelationIsLiteral)
{
    auto b = build_basic_monoid(loop_graph());
    ASSERT_EQ(b.presentation.relations().size(), 1u);
    EXPECT_EQ(b.presentation.relations()[0].lhs, to_int_vector({1, 0}));
    EXPECT_EQ(b.presentation.relations()[0].rhs, to_int_vector({1, 1}));
}

TEST(Tropical, Examples)
{
    auto t = tropical_feasible(build_basic_monoid(two_edge_graph(4, 6)));
    ASSERT_TRUE(t.witness);
    EXPECT_EQ(*t.witness, to_int_vector({0, 12, 3, 2}));

    auto c = tropical_feasible(build_basic_monoid(chain_graph(3)));
    ASSERT_TRUE(c.witness);
    EXPECT_EQ(*c.witness, to_int_vector({0, 3, 1}));

    auto l = tropical_feasible(build_basic_monoid(loop_graph()));
    EXPECT_FALSE(l.witness);
    // The certificate exhibits m_e as a nonnegative combination equal to 0.
    EXPECT_EQ(l.certificate_combination, to_int_vector({0, 1}));
}

TEST(Tropical, AgreesWithSharpnessAndNonzeroGenerators)
{
    std::mt19937_64 rng(2024);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto g = random_graph(rng, 4, 6, 2, 4);
        auto b = build_basic_monoid(g);
        auto t = tropical_feasible(b);
        bool sharp = is_sharp(b.presentation).sharp;
        bool nonzero = true;
        for (std::size_t i : b.reduced_gens)
            if (is_zero(MonoidElement::generator(b.presentation, i)))
                nonzero = false;
        ASSERT_EQ(t.witness.has_value(), sharp && nonzero) << b.presentation.to_string();
        if (t.witness) {
            ++feasible;
            for (std::size_t i : b.reduced_gens)
                EXPECT_GE((*t.witness)[i], 1);
            EXPECT_TRUE(is_zero(b.presentation.relation_matrix().transpose() * *t.witness));
        } else {
            ++infeasible;
            const auto& w = t.certificate_combination;
            EXPECT_TRUE(is_nonnegative(w));
            EXPECT_FALSE(is_zero(w));
        }
    }
    EXPECT_GT(feasible, 30);
    EXPECT_GT(infeasible, 30);
}

TEST(SaturationCount, Examples)
{
    EXPECT_EQ(saturation_count(build_basic_monoid(two_edge_graph(4, 6))), 2);
    EXPECT_EQ(saturation_count(build_basic_monoid(two_edge_graph(6, 9))), 3);
    EXPECT_EQ(saturation_count(build_basic_monoid(single_vertex_graph(2))), 1);
}

TEST(Varrho, Examples)
{
    auto m = varrho_matrix(two_edge_graph(4, 6));
    EXPECT_EQ(m.matrix, IntMatrix::from_int_rows({{4, 0, -1}, {0, 6, -1}}));
    EXPECT_EQ(m.col_labels, (std::vector<std::string>{"e1", "e2", "w:1"}));
    EXPECT_EQ(varrho_matrix(chain_graph(5)).matrix, IntMatrix::from_int_rows({{5, -1}}));
    auto empty = varrho_matrix(single_vertex_graph());
    EXPECT_EQ(empty.matrix.rows(), 0u);
    EXPECT_EQ(varrho_saturation_count(two_edge_graph(4, 6)), 2);
    EXPECT_EQ(varrho_saturation_count(single_vertex_graph()), 1);

    auto loose = two_edge_graph(4, 6);
    loose.r = 2;
    loose.edges[0].mu = to_int_vector({4, 1});
    loose.edges[1].mu = to_int_vector({6, 0});
    EXPECT_THROW(varrho_matrix(loose), InvalidGraph);
}

TEST(Varrho, MatchesDefinitionAndSaturationCount)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_graph(rng);
        EXPECT_EQ(varrho_matrix(g).matrix, rho_by_definition(g));
        Integer count = saturation_count(build_basic_monoid(g));
        EXPECT_EQ(varrho_saturation_count(g), count);
        std::vector<bool> flips(g.edges.size());
        for (std::size_t k = 0; k < flips.size(); ++k)
            flips[k] = rng() % 2;
        EXPECT_EQ(varrho_saturation_count(g, flips), count);
    }
}

TEST(BasicMonoid, ForcedZeroDeletionKeepsGroup)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto b = build_basic_monoid(random_graph(rng));
        auto s = simplify_presentation(b.presentation, TietzeMode::ForcedZeros);
        // Substituting zeros can force further generators to zero.
        EXPECT_LE(s.presentation.n_gens(), b.presentation.n_gens() - b.zero_relation.size());
        for (const auto& [gen, rel] : b.zero_relation)
            EXPECT_TRUE(is_zero(s.substitution[gen]));
        EXPECT_EQ(groupification(s.presentation).free_rank, groupification(b.presentation).free_rank);
        EXPECT_EQ(groupification(s.presentation).invariant_factors,
                  groupification(b.presentation).invariant_factors);
    }
}

TEST(FsBasic, Examples)
{
    auto a = fs_basic_monoid(build_basic_monoid(two_edge_graph(2, 2)));
    EXPECT_EQ(a.hilbert_basis.size(), 1u);
    EXPECT_EQ(a.torsion.invariant_factors, to_int_vector({2}));
    auto c = fs_basic_monoid(build_basic_monoid(chain_graph(3)));
    EXPECT_EQ(c.hilbert_basis.size(), 1u);
    EXPECT_TRUE(c.torsion.invariant_factors.empty());
    auto d = fs_basic_monoid(build_basic_monoid(two_edge_graph(4, 6)));
    EXPECT_EQ(d.hilbert_basis.size(), 1u);
    EXPECT_EQ(d.torsion.invariant_factors, to_int_vector({2}));
    EXPECT_THROW(fs_basic_monoid(build_basic_monoid(loop_graph())), NotFeasible);
}

TEST(GhostSections, Examples)
{
    MonoidPresentation n1 = MonoidPresentation::free(1);
    auto el = [&](long k) { return MonoidElement(n1, to_int_vector({k})); };
    auto g = chain_graph(1);
    auto r = ghost_section_check(g, n1, {el(2)}, {el(1), el(5)});
    ASSERT_TRUE(r.slopes);
    EXPECT_EQ((*r.slopes)[0], 2);
    auto same = ghost_section_check(g, n1, {el(3)}, {el(4), el(4)});
    ASSERT_TRUE(same.slopes);
    EXPECT_EQ((*same.slopes)[0], 0);
    EXPECT_FALSE(ghost_section_check(g, n1, {el(2)}, {el(0), el(3)}).slopes);
    EXPECT_THROW(ghost_section_check(g, n1, {el(0)}, {el(0), el(3)}), ZeroRho);
}

TEST(GhostSections, ReversedEdgeNegatesSlope)
{
    std::mt19937_64 rng(44);
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_graph(rng, 4, 5, 1, 2);
        MonoidPresentation target = random_presentation(rng, 2, 1, 3);
        if (!is_sharp(target).sharp)
            continue;
        auto rnd = [&]() {
            IntVector x(target.n_gens());
            for (auto& c : x)
                c = uniform(rng, 0, 2);
            return MonoidElement(target, x);
        };
        std::vector<MonoidElement> rho, values;
        bool ok = true;
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            rho.push_back(rnd());
            if (is_zero(rho.back()))
                ok = false;
        }
        if (!ok)
            continue;
        for (std::size_t v = 0; v < g.vertices.size(); ++v)
            values.push_back(rnd());
        auto fwd = ghost_section_check(g, target, rho, values);
        auto rev = g;
        for (auto& e : rev.edges)
            std::swap(e.from, e.to);
        auto back = ghost_section_check(rev, target, rho, values);
        ASSERT_EQ(fwd.slopes.has_value(), back.slopes.has_value());
        if (fwd.slopes) {
            ++found;
            for (std::size_t e = 0; e < g.edges.size(); ++e)
                EXPECT_EQ((*fwd.slopes)[e] + (*back.slopes)[e], 0);
        }
    }
    EXPECT_GT(found, 10);
}

TEST(Tropicalization, Examples)
{
    MonoidPresentation n1 = MonoidPresentation::free(1);
    auto el = [&](long k) { return MonoidElement(n1, to_int_vector({k})); };
    auto b = build_basic_monoid(chain_graph(3));
    // generators: m_v_1 (forced zero), m_w_1, m_e
    EXPECT_TRUE(tropicalization_check(b, n1, {el(0), el(3), el(1)}).ok);
    auto bad = tropicalization_check(b, n1, {el(0), el(2), el(1)});
    EXPECT_FALSE(bad.ok);
    EXPECT_NE(bad.diagnostics.find("not respected"), std::string::npos);
    auto zero = tropicalization_check(b, n1, {el(0), el(0), el(0)});
    EXPECT_FALSE(zero.ok);
    EXPECT_NE(zero.diagnostics.find("maps to 0"), std::string::npos);
}
