#include <gtest/gtest.h>

#include "generators.hpp"
#include "logmonoid/slb.hpp"

using namespace logmonoid;
using namespace testsupport;

namespace {

ExactUnit q(long p, long d = 1) { return ExactUnit::from_rational(Rational(p, d)); }

}  // namespace

TEST(ExactUnit, Arithmetic)
{
    EXPECT_TRUE(ExactUnit().is_one());
    EXPECT_EQ(q(2) * q(3), q(6));
    EXPECT_EQ(q(-2) * q(-3), q(6));
    EXPECT_EQ(q(2).inverse(), q(1, 2));
    EXPECT_EQ(q(2).pow(-3), q(1, 8));
    // sqrt(8) = 2 sqrt(2); sqrt(2) * sqrt(8) = 4.
    ExactUnit r2(2, 2), r8(8, 2);
    EXPECT_EQ(r2 * r8, q(4));
    EXPECT_EQ(ExactUnit(4, 2), q(2));
    EXPECT_EQ(ExactUnit(Rational(9, 4), 2), q(3, 2));
    EXPECT_EQ(ExactUnit(8, 6), r2);
    EXPECT_EQ(ExactUnit::root_of_unity(Rational(5, 4)), ExactUnit::root_of_unity(Rational(1, 4)));
    EXPECT_EQ(q(-4).to_string(), "-4");
    EXPECT_EQ(ExactUnit(2, 3, Rational(1, 4)).to_string(), "2^(1/3)*e(1/4)");
    EXPECT_THROW(ExactUnit(0), PreconditionError);
    EXPECT_THROW(q(0), PreconditionError);
}

TEST(ExactUnit, NthRoots)
{
    auto one = unit_nth_roots(ExactUnit(), 4);
    ASSERT_EQ(one.size(), 4u);
    for (int k = 0; k < 4; ++k)
        EXPECT_EQ(one[k], ExactUnit::root_of_unity(Rational(k, 4)));

    auto m4 = unit_nth_roots(q(-4), 2);
    ASSERT_EQ(m4.size(), 2u);
    EXPECT_EQ(m4[0], ExactUnit(2, 1, Rational(1, 4)));   // 2i
    EXPECT_EQ(m4[1], ExactUnit(2, 1, Rational(3, 4)));   // -2i
    for (const auto& w : m4)
        EXPECT_EQ(w.pow(2), q(-4));

    EXPECT_EQ(unit_nth_roots(q(7, 3), 1), std::vector<ExactUnit>{q(7, 3)});

    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        ExactUnit u = random_unit(rng);
        std::size_t n = 1 + rng() % 6;
        auto roots = unit_nth_roots(u, n);
        std::set<ExactUnit> distinct(roots.begin(), roots.end());
        EXPECT_EQ(distinct.size(), n);
        for (const auto& w : roots)
            EXPECT_EQ(w.pow(static_cast<long>(n)), u);
    }
}

TEST(ExactScalar, ZeroAbsorbs)
{
    ExactScalar z = ExactScalar::zero();
    EXPECT_TRUE((z * ExactScalar(q(3))).is_zero());
    EXPECT_EQ(z.pow(0), ExactScalar(ExactUnit()));
    EXPECT_TRUE(z.pow(2).is_zero());
}

TEST(Consistency, NoRelations)
{
    SlbPointPresentation p{MonoidPresentation::free(2), {q(2), q(3)}, {}};
    auto r = consistency_check(p);
    ASSERT_TRUE(r.consistent);
    EXPECT_TRUE(r.witness[0].is_one());
    EXPECT_TRUE(r.witness[1].is_one());
}

TEST(Consistency, DuplicatedRelationWithDifferentUnits)
{
    MonoidPresentation m = parse_presentation("e1, e2 | e1 = e2, e1 = e2");
    SlbPointPresentation p{m, {q(1), q(1)}, {q(2), q(3)}};
    auto r = consistency_check(p);
    EXPECT_FALSE(r.consistent);
    EXPECT_EQ(r.failure, ConsistencyResult::Failure::Kernel);
    // z = (1, -1) up to sign; the value is 2/3 or 3/2 accordingly.
    ASSERT_EQ(r.certificate_z.size(), 2u);
    EXPECT_EQ(abs(r.certificate_z[0]), 1);
    EXPECT_EQ(r.certificate_z[0], -r.certificate_z[1]);
    EXPECT_EQ(r.certificate_value, r.certificate_z[0] > 0 ? q(2, 3) : q(3, 2));
}

TEST(Consistency, SectionSupportViolation)
{
    MonoidPresentation m = parse_presentation("e1, e2 | e1 = e2");
    SlbPointPresentation p{m, {ExactScalar::zero(), q(1)}, {q(1)}};
    auto r = consistency_check(p);
    EXPECT_FALSE(r.consistent);
    EXPECT_EQ(r.failure, ConsistencyResult::Failure::Support);
    EXPECT_EQ(m.gp_image(r.certificate_x), m.gp_image(r.certificate_y));
}

TEST(Consistency, SectionValueMismatch)
{
    // e1 = e2 with phi = 1 forces s1 = s2 under any trivialization.
    MonoidPresentation m = parse_presentation("e1, e2 | e1 = e2");
    SlbPointPresentation p{m, {q(2), q(3)}, {q(1)}};
    auto r = consistency_check(p);
    EXPECT_FALSE(r.consistent);
    EXPECT_EQ(r.failure, ConsistencyResult::Failure::Section);
    SlbPointPresentation ok{m, {q(2), q(2)}, {q(1)}};
    EXPECT_TRUE(consistency_check(ok).consistent);
}

TEST(Consistency, TorsionNeedsRoots)
{
    // 2e1 = 2e2 with phi = 4: chi1^2 = 4 chi2^2, so chi1 = 2 chi2 up to a sign.
    MonoidPresentation m = parse_presentation("e1, e2 | 2e1 = 2e2");
    SlbPointPresentation p{m, {ExactScalar::zero(), ExactScalar::zero()}, {q(4)}};
    auto r = consistency_check(p);
    ASSERT_TRUE(r.consistent);
    EXPECT_EQ(unit_power_product(r.witness, to_int_vector({2, -2})), q(4));
    EXPECT_TRUE(is_valid_witness(p, r.witness));
}

TEST(Consistency, GenerateThenCheck)
{
    std::mt19937_64 rng(77);
    int accepted = 0, with_zero = 0;
    for (int trial = 0; trial < 300; ++trial) {
        MonoidPresentation m = random_presentation(rng, 4, 3, 3);
        if (!is_sharp(m).sharp)
            continue;
        PlantedSlb s = plant_slb(rng, m);
        auto r = consistency_check(s.presentation);
        ASSERT_TRUE(r.consistent) << m.to_string() << ": " << r.reason;
        EXPECT_TRUE(is_valid_witness(s.presentation, r.witness));
        EXPECT_TRUE(is_valid_witness(s.presentation, s.chi));
        ++accepted;
        if (!is_zero(s.face_functional))
            ++with_zero;
        // Two trivializations differ by a character of the group, which
        // twists the realized sections.
        std::vector<ExactUnit> twist;
        for (std::size_t i = 0; i < m.n_gens(); ++i)
            twist.push_back(r.witness[i] / s.chi[i]);
        for (std::size_t j = 0; j < m.relation_matrix().cols(); ++j)
            EXPECT_TRUE(unit_power_product(twist, m.relation_matrix().column(j)).is_one());
        for (int k = 0; k < 5; ++k) {
            IntVector x(m.n_gens());
            for (auto& c : x)
                c = uniform(rng, 0, 2);
            MonoidElement el(m, x);
            ExactScalar expected = dot(s.face_functional, x) > 0 ? ExactScalar::zero()
                                                                  : ExactScalar(character_value(s, m.gp_image(x)));
            ExactScalar twisted = expected.is_zero() ? expected : ExactScalar(expected.unit() * unit_power_product(twist, x));
            EXPECT_EQ(realize_section(s.presentation, r.witness, el), twisted);
            EXPECT_EQ(realize_section(s.presentation, s.chi, el), expected);
        }
        EXPECT_EQ(realize_section(s.presentation, r.witness, MonoidElement::zero(m)), ExactScalar(ExactUnit()));
    }
    EXPECT_GT(accepted, 100);
    EXPECT_GT(with_zero, 20);
}

TEST(Consistency, KernelPerturbationIsRejected)
{
    std::mt19937_64 rng(78);
    int rejected = 0;
    for (int trial = 0; trial < 400; ++trial) {
        MonoidPresentation base = random_presentation(rng, 3, 2, 3, 2);
        if (base.relations().empty())
            continue;
        // Append a copy of a relation so the relation syzygies are nontrivial.
        auto rels = base.relations();
        rels.push_back(rels[rng() % rels.size()]);
        MonoidPresentation m(base.n_gens(), rels);
        if (!is_sharp(m).sharp)
            continue;
        PlantedSlb s = plant_slb(rng, m);
        ASSERT_TRUE(consistency_check(s.presentation).consistent);
        auto ker = kernel_basis(m.relation_matrix());
        ASSERT_FALSE(ker.empty());
        std::size_t j = 0;
        while (ker[0][j] == 0)
            ++j;
        SlbPointPresentation bad = s.presentation;
        bad.rel_units[j] = bad.rel_units[j] * q(2);
        auto r = consistency_check(bad);
        EXPECT_FALSE(r.consistent);
        EXPECT_EQ(r.failure, ConsistencyResult::Failure::Kernel);
        EXPECT_FALSE(unit_power_product(bad.rel_units, r.certificate_z).is_one());
        ++rejected;
    }
    EXPECT_GT(rejected, 50);
}

TEST(Consistency, BasisChangeInvariance)
{
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 200; ++trial) {
        MonoidPresentation m = random_presentation(rng, 3, 3, 2);
        SlbPointPresentation p;
        p.presentation = m;
        for (std::size_t i = 0; i < m.n_gens(); ++i)
            p.sections.push_back(rng() % 3 == 0 ? ExactScalar::zero() : ExactScalar(random_unit(rng, false)));
        for (std::size_t j = 0; j < m.relations().size(); ++j)
            p.rel_units.push_back(rng() % 2 ? ExactUnit() : random_unit(rng, false));
        std::vector<ExactUnit> u;
        for (std::size_t i = 0; i < m.n_gens(); ++i)
            u.push_back(random_unit(rng));
        auto a = consistency_check(p);
        SlbPointPresentation moved = change_basis(p, u);
        auto b = consistency_check(moved);
        ASSERT_EQ(a.consistent, b.consistent) << m.to_string();
        EXPECT_EQ(a.failure, b.failure);
        if (a.consistent) {
            EXPECT_TRUE(is_valid_witness(moved, transport_witness(a.witness, u)));
            std::vector<ExactUnit> u_inv;
            for (const auto& x : u)
                u_inv.push_back(x.inverse());
            EXPECT_TRUE(is_valid_witness(p, transport_witness(b.witness, u_inv)));
        }
    }
}

TEST(RealizeSection, ByGroupCoordinates)
{
    auto b = build_basic_monoid(two_edge_graph(4, 6));
    auto p = assemble_logmap_slb(b, trivial_logmap_data(b));
    auto r = consistency_check(p);
    ASSERT_TRUE(r.consistent);
    EXPECT_TRUE(realize_section(p, r.witness, b.presentation.gp_image(unit_vector(4, 2))).is_zero());
    EXPECT_EQ(realize_section(p, r.witness, b.presentation.gp_image(zero_vector(4))), ExactScalar(ExactUnit()));
    EXPECT_THROW(realize_section(p, r.witness, b.presentation.gp_image(scale(unit_vector(4, 2), -1))),
                 PreconditionError);
}

TEST(LogmapSlb, Assembly)
{
    auto chain = build_basic_monoid(chain_graph(3));
    auto p = assemble_logmap_slb(chain, trivial_logmap_data(chain));
    EXPECT_FALSE(p.sections[0].is_zero());  // m_v_1, forced zero
    EXPECT_TRUE(p.sections[1].is_zero());
    EXPECT_TRUE(p.sections[2].is_zero());
    EXPECT_EQ(p.rel_units.size(), 2u);
    LogmapSlbData wrong;
    wrong.relation_units = {ExactUnit()};
    EXPECT_THROW(assemble_logmap_slb(chain, wrong), DimensionMismatch);

    // Arbitrary edge units on the two-edge graph stay consistent: the
    // relations are independent.
    auto two = build_basic_monoid(two_edge_graph(4, 6));
    LogmapSlbData d;
    d.relation_units = {q(5), q(7, 2), ExactUnit(3, 2, Rational(1, 3))};
    EXPECT_TRUE(consistency_check(assemble_logmap_slb(two, d)).consistent);
}

TEST(SymplecticCheck, Examples)
{
    auto chain = build_basic_monoid(chain_graph(3));
    EXPECT_TRUE(symplectic_logmap_check(chain, assemble_logmap_slb(chain, trivial_logmap_data(chain))).ok);

    auto loop = build_basic_monoid(loop_graph());
    auto l = symplectic_logmap_check(loop, assemble_logmap_slb(loop, trivial_logmap_data(loop)));
    EXPECT_FALSE(l.ok);
    EXPECT_FALSE(l.tropical);
    EXPECT_NE(l.diagnostics.find("tropical"), std::string::npos);

    // Second branch absent from every degeneracy set: edge relations on it
    // duplicate the forced zeros, so their units must multiply to 1.
    auto g = two_edge_graph(4, 6);
    g.r = 2;
    g.edges[0].mu = to_int_vector({4, 0});
    g.edges[1].mu = to_int_vector({6, 0});
    auto b = build_basic_monoid(g);
    auto data = trivial_logmap_data(b);
    data.relation_units[b.edge_relation.at({0, 2})] = q(2);
    auto bad = symplectic_logmap_check(b, assemble_logmap_slb(b, data));
    EXPECT_TRUE(bad.tropical);
    EXPECT_FALSE(bad.consistent);
    EXPECT_EQ(bad.consistency.failure, ConsistencyResult::Failure::Kernel);
    EXPECT_TRUE(symplectic_logmap_check(b, assemble_logmap_slb(b, trivial_logmap_data(b))).ok);
}

TEST(SaturationData, Examples)
{
    EXPECT_EQ(enumerate_saturation_data(build_basic_monoid(single_vertex_graph())).size(), 1u);
    EXPECT_EQ(enumerate_saturation_data(build_basic_monoid(two_edge_graph(4, 6))).size(), 2u);
    auto three = enumerate_saturation_data(build_basic_monoid(two_edge_graph(3, 3)));
    ASSERT_EQ(three.size(), 3u);
    for (long k = 0; k < 3; ++k)
        EXPECT_EQ(three[k].values[0], ExactUnit::root_of_unity(Rational(k, 3)));
    EXPECT_THROW(enumerate_saturation_data(build_basic_monoid(loop_graph())), NotFeasible);
}

TEST(SaturationData, CountMatchesBothMethods)
{
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto g = random_graph(rng, 4, 6, 2, 4);
        auto b = build_basic_monoid(g);
        if (!tropical_feasible(b).witness)
            continue;
        ++checked;
        auto data = enumerate_saturation_data(b);
        EXPECT_EQ(Integer(static_cast<unsigned long>(data.size())), saturation_count(b));
        EXPECT_EQ(Integer(static_cast<unsigned long>(data.size())), varrho_saturation_count(g));
        std::set<std::vector<ExactUnit>> distinct;
        for (const auto& d : data) {
            distinct.insert(d.values);
            for (std::size_t k = 0; k < d.values.size(); ++k)
                EXPECT_TRUE(d.values[k].pow(d.orders[k]).is_one());
        }
        EXPECT_EQ(distinct.size(), data.size());
    }
    EXPECT_GT(checked, 30);
}
