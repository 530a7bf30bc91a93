#include <gtest/gtest.h>

#include <map>

#include "logmonoid/lp.hpp"
#include "logmonoid/monoid.hpp"
#include "logmonoid/oracle.hpp"
#include "support.hpp"

using namespace logmonoid;
using testsupport::uniform;

namespace {

MonoidPresentation two_gen(long a, long b)
{
    return MonoidPresentation(2, {{to_int_vector({a, 0}), to_int_vector({0, b})}});
}

MonoidPresentation random_presentation(std::mt19937_64& rng, std::size_t max_gens, std::size_t max_rels,
                                       long max_coeff)
{
    std::size_t n = 1 + rng() % max_gens;
    std::size_t m = rng() % (max_rels + 1);
    std::vector<Relation> rels;
    for (std::size_t j = 0; j < m; ++j) {
        Relation r{IntVector(n), IntVector(n)};
        for (std::size_t i = 0; i < n; ++i) {
            long v = uniform(rng, -max_coeff, max_coeff);
            // Keep supports disjoint most of the time, occasionally share a generator.
            if (v > 0)
                r.lhs[i] = v;
            else
                r.rhs[i] = -v;
            if (rng() % 7 == 0) {
                r.lhs[i] += 1;
                r.rhs[i] += 1;
            }
        }
        rels.push_back(r);
    }
    return MonoidPresentation(n, rels);
}

std::set<IntVector> rows_of(const IntMatrix& m)
{
    auto rows = m.row_list();
    return {rows.begin(), rows.end()};
}

// Brute-force Hom(Q, N): value vectors on generators vanishing on relations,
// minimal with respect to addition.
std::set<IntVector> dual_bruteforce(const MonoidPresentation& p, long cap)
{
    const std::size_t n = p.n_gens();
    std::vector<IntVector> homs;
    std::vector<long> v(n, 0);
    for (;;) {
        IntVector iv(n);
        for (std::size_t i = 0; i < n; ++i)
            iv[i] = v[i];
        bool ok = !is_zero(iv);
        for (const auto& r : p.relations())
            if (dot(iv, r.lhs) != dot(iv, r.rhs))
                ok = false;
        if (ok)
            homs.push_back(iv);
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (v[i] < cap) {
                ++v[i];
                break;
            }
            v[i] = 0;
        }
        if (i == n)
            break;
    }
    std::set<IntVector> all(homs.begin(), homs.end()), minimal;
    for (const auto& h : homs) {
        bool red = false;
        for (const auto& g : homs)
            if (g != h && all.count(sub(h, g)))
                red = true;
        if (!red)
            minimal.insert(h);
    }
    return minimal;
}

}  // namespace

TEST(Groupification, Examples)
{
    auto g = groupification(two_gen(4, 6));
    EXPECT_EQ(g.free_rank, 1u);
    EXPECT_EQ(g.invariant_factors, to_int_vector({2}));
    EXPECT_EQ(g.describe(), "Z + Z/2");
    EXPECT_EQ(groupification(MonoidPresentation::free(3)).describe(), "Z^3");
    EXPECT_EQ(groupification(two_gen(2, 2)).describe(), "Z + Z/2");
}

TEST(Groupification, InvariantUnderRedundantGenerator)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        MonoidPresentation p = random_presentation(rng, 4, 3, 4);
        const std::size_t n = p.n_gens();
        IntVector combo(n);
        for (auto& c : combo)
            c = uniform(rng, 0, 3);
        std::vector<Relation> rels;
        for (const auto& r : p.relations()) {
            IntVector l = r.lhs, rr = r.rhs;
            l.push_back(0);
            rr.push_back(0);
            rels.push_back({l, rr});
        }
        IntVector lhs = combo;
        lhs.push_back(0);
        rels.push_back({unit_vector(n + 1, n), lhs});
        MonoidPresentation q(n + 1, rels);
        EXPECT_EQ(groupification(p).free_rank, groupification(q).free_rank);
        EXPECT_EQ(groupification(p).invariant_factors, groupification(q).invariant_factors);
    }
}

TEST(ElementEq, Examples)
{
    MonoidPresentation p = two_gen(4, 6);
    EXPECT_TRUE(element_eq(MonoidElement(p, to_int_vector({2, 3})), MonoidElement(p, to_int_vector({2, 3}))));
    EXPECT_TRUE(element_eq(MonoidElement(p, to_int_vector({4, 0})), MonoidElement(p, to_int_vector({0, 6}))));
    EXPECT_FALSE(element_eq(MonoidElement(p, to_int_vector({1, 0})), MonoidElement(p, to_int_vector({0, 1}))));
    EXPECT_THROW(element_eq(MonoidElement::zero(p), MonoidElement::zero(two_gen(2, 2))), OwnerMismatch);
}

TEST(ElementEq, CongruenceAndOracleAgreement)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        MonoidPresentation p = random_presentation(rng, 3, 2, 3);
        const std::size_t n = p.n_gens();
        std::vector<IntVector> diffs;
        for (const auto& r : p.relations())
            diffs.push_back(sub(r.lhs, r.rhs));
        oracle::CosetReducer red(n, diffs);
        std::vector<MonoidElement> elems;
        for_each_bounded_vector(n, 3, [&](const IntVector& x) {
            elems.emplace_back(p, x);
            return true;
        });
        for (const auto& x : elems) {
            for (const auto& y : elems) {
                bool eq = element_eq(x, y);
                ASSERT_EQ(eq, red.equivalent(x.repr(), y.repr()));
                EXPECT_EQ(eq, x.key() == y.key());
                EXPECT_EQ(eq, element_eq(y, x));
                if (eq) {
                    MonoidElement z(p, unit_vector(n, rng() % n));
                    EXPECT_TRUE(element_eq(x + z, y + z));
                }
            }
        }
    }
}

TEST(Membership, Examples)
{
    MonoidPresentation p = two_gen(2, 2);
    auto zero = membership(p, p.gp_image(zero_vector(2)));
    EXPECT_EQ(zero.status, MembershipResult::Status::Yes);
    EXPECT_EQ(zero.witness, zero_vector(2));

    auto tors = membership(p, p.gp_image(to_int_vector({1, -1})));
    EXPECT_EQ(tors.status, MembershipResult::Status::No);

    auto e1 = membership(p, p.gp_image(to_int_vector({1, 0})));
    ASSERT_EQ(e1.status, MembershipResult::Status::Yes);
    EXPECT_EQ(e1.witness, to_int_vector({1, 0}));
}

TEST(Membership, OutsideConeAndUnknown)
{
    MonoidPresentation p = MonoidPresentation::free(2);
    EXPECT_EQ(membership(p, to_int_vector({-1, 0})).status, MembershipResult::Status::No);
    // Non-sharp: e1 + e2 = 0, so every class lies in Q, found by search.
    MonoidPresentation q(2, {{to_int_vector({1, 1}), zero_vector(2)}});
    auto r = membership(q, q.gp_image(to_int_vector({-3, 0})));
    ASSERT_EQ(r.status, MembershipResult::Status::Yes);
    EXPECT_EQ(q.gp_image(r.witness), q.gp_image(to_int_vector({-3, 0})));
    // A bound too small to reach the witness yields unknown rather than no.
    auto u = membership(q, q.gp_image(to_int_vector({-3, 0})), 2);
    EXPECT_EQ(u.status, MembershipResult::Status::Unknown);
    EXPECT_EQ(u.bound, 2u);
}

TEST(Membership, AgreesWithEnumeration)
{
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 60; ++trial) {
        MonoidPresentation p = random_presentation(rng, 3, 2, 3);
        if (!is_sharp(p).sharp)
            continue;
        ++checked;
        auto elements = oracle::enumerate_elements(p, {5, 10, 12});
        std::vector<IntVector> diffs;
        for (const auto& r : p.relations())
            diffs.push_back(sub(r.lhs, r.rhs));
        oracle::CosetReducer red(p.n_gens(), diffs);
        for (int s = 0; s < 40; ++s) {
            IntVector v(p.n_gens());
            for (auto& x : v)
                x = uniform(rng, -3, 4);
            auto res = membership(p, p.gp_image(v));
            ASSERT_NE(res.status, MembershipResult::Status::Unknown);
            if (res.status == MembershipResult::Status::Yes) {
                EXPECT_TRUE(is_nonnegative(res.witness));
                EXPECT_TRUE(red.equivalent(res.witness, v));
            } else {
                // No element of the enumerated window may represent v.
                EXPECT_FALSE(elements.count(red.reduce(v))) << p.to_string() << " " << to_string(v);
            }
            if (elements.count(red.reduce(v)))
                EXPECT_EQ(res.status, MembershipResult::Status::Yes);
        }
    }
    EXPECT_GE(checked, 30);
}

TEST(IsSharp, Examples)
{
    auto s = is_sharp(MonoidPresentation::free(2));
    EXPECT_TRUE(s.sharp);
    EXPECT_EQ(s.beta, to_int_vector({1, 1}));

    MonoidPresentation inv(2, {{to_int_vector({1, 1}), zero_vector(2)}});
    auto t = is_sharp(inv);
    EXPECT_FALSE(t.sharp);
    EXPECT_EQ(t.unit_generator, 0u);
    EXPECT_TRUE(is_zero(inv.gp_image(add(unit_vector(2, 0), t.unit_inverse))));

    auto u = is_sharp(two_gen(4, 6));
    EXPECT_TRUE(u.sharp);
    EXPECT_EQ(u.beta, to_int_vector({3, 2}));
}

TEST(IsSharp, TorsionGeneratorIsUnit)
{
    // e1 + e2 = e2 + ... : 2e1 = 0 makes e1 a torsion unit.
    MonoidPresentation p(2, {{to_int_vector({2, 0}), zero_vector(2)}});
    auto s = is_sharp(p);
    EXPECT_FALSE(s.sharp);
    EXPECT_EQ(s.unit_generator, 0u);
    EXPECT_EQ(s.unit_inverse, to_int_vector({1, 0}));
}

TEST(IsSharp, AgreesWithBruteForceUnitSearch)
{
    std::mt19937_64 rng(17);
    int sharp = 0, nonsharp = 0;
    for (int trial = 0; trial < 150; ++trial) {
        MonoidPresentation p = random_presentation(rng, 3, 2, 3);
        auto s = is_sharp(p);
        const std::size_t n = p.n_gens();
        if (s.sharp) {
            ++sharp;
            for (std::size_t i = 0; i < n; ++i)
                EXPECT_EQ(s.beta[i] == 0, is_zero(p.gp_image(unit_vector(n, i))));
            for_each_bounded_vector(n, 6, [&](const IntVector& y) {
                if (is_zero(p.gp_image(y)))
                    return true;
                auto r = membership(p, p.gp_image(scale(y, -1)));
                EXPECT_EQ(r.status, MembershipResult::Status::No) << p.to_string() << " " << to_string(y);
                return true;
            });
        } else {
            ++nonsharp;
            IntVector e = unit_vector(n, s.unit_generator);
            EXPECT_FALSE(is_zero(p.gp_image(e)));
            EXPECT_TRUE(is_nonnegative(s.unit_inverse));
            EXPECT_TRUE(is_zero(p.gp_image(add(e, s.unit_inverse))));
        }
    }
    EXPECT_GT(sharp, 20);
    EXPECT_GT(nonsharp, 20);
}

TEST(Saturate, Examples)
{
    auto a = saturate(MonoidPresentation::free(2));
    EXPECT_EQ(a.hilbert_basis.size(), 2u);
    EXPECT_TRUE(a.torsion.invariant_factors.empty());

    auto b = saturate(two_gen(2, 2));
    ASSERT_EQ(b.hilbert_basis.size(), 1u);
    EXPECT_EQ(b.torsion.invariant_factors, to_int_vector({2}));
    EXPECT_EQ(b.sharp_part.n_gens(), 1u);
    // The single Hilbert basis element is the image of e1.
    EXPECT_EQ(b.hilbert_basis[0], two_gen(2, 2).free_image(unit_vector(2, 0)));

    MonoidPresentation a1(3, {{to_int_vector({1, 0, 1}), to_int_vector({0, 2, 0})}});
    auto c = saturate(a1);
    EXPECT_EQ(c.hilbert_basis.size(), 3u);
    EXPECT_TRUE(c.torsion.invariant_factors.empty());

    MonoidPresentation inv(2, {{to_int_vector({1, 1}), zero_vector(2)}});
    EXPECT_THROW(saturate(inv), NotSharp);
}

TEST(Saturate, WindowMatchesBruteForce)
{
    std::mt19937_64 rng(23);
    oracle::Bound bound{3, 3, 6};
    int checked = 0;
    for (int trial = 0; trial < 100 && checked < 25; ++trial) {
        MonoidPresentation p = random_presentation(rng, 2, 1, 3);
        if (!is_sharp(p).sharp)
            continue;
        ++checked;
        auto sat = saturate(p);
        auto window = oracle::saturation_bruteforce(p, bound);
        const std::size_t f = p.group().free_rank;
        // Every class found by the oracle has free part in cone(HB); every
        // window class whose free part is a small HB combination is found.
        for (const auto& q : window) {
            IntVector v = p.free_image(q);
            LinearSystem sys(sat.hilbert_basis.size());
            for (std::size_t c = 0; c < f; ++c) {
                IntVector row;
                for (const auto& h : sat.hilbert_basis)
                    row.push_back(h[c]);
                sys.add_equality(row, v[c]);
            }
            for (std::size_t k = 0; k < sat.hilbert_basis.size(); ++k)
                sys.add_weak(unit_vector(sat.hilbert_basis.size(), k));
            EXPECT_TRUE(lp_feasible(sys)) << p.to_string();
        }
        // The torsion class of every window vector lies in Q^sat iff its
        // free part does (torsion is always absorbed).
        EXPECT_FALSE(window.empty());
    }
    EXPECT_GE(checked, 15);
}

TEST(Saturate, TorsionClassIsSaturated)
{
    MonoidPresentation p = two_gen(2, 2);
    auto window = oracle::saturation_bruteforce(p, {3, 3, 4});
    oracle::CosetReducer red(2, {to_int_vector({2, -2})});
    EXPECT_TRUE(window.count(red.reduce(to_int_vector({1, -1}))));
}

TEST(Duals, Examples)
{
    auto d = dual_monoid(MonoidPresentation::free(2));
    EXPECT_EQ(rows_of(d.pairing), (std::set<IntVector>{to_int_vector({1, 0}), to_int_vector({0, 1})}));

    auto e = dual_monoid(two_gen(2, 2));
    ASSERT_EQ(e.hilbert_basis.size(), 1u);
    EXPECT_EQ(e.pairing.row(0), to_int_vector({1, 1}));

    MonoidPresentation gen = presentation_of_generated(
        {to_int_vector({1, 0}), to_int_vector({1, 1}), to_int_vector({1, 2})}, 2, "g");
    auto f = dual_monoid(gen);
    EXPECT_EQ(rows_of(f.pairing),
              (std::set<IntVector>{to_int_vector({0, 1, 2}), to_int_vector({1, 1, 1}), to_int_vector({2, 1, 0})}));
}

TEST(Duals, DualAgreesWithHomEnumeration)
{
    std::mt19937_64 rng(61);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        MonoidPresentation p = random_presentation(rng, 3, 2, 3);
        if (!is_sharp(p).sharp)
            continue;
        auto d = dual_monoid(p);
        Integer cap = 0;
        for (const auto& x : d.pairing.entries())
            if (x > cap)
                cap = x;
        if (cap > 8)
            continue;
        ++checked;
        EXPECT_EQ(rows_of(d.pairing), dual_bruteforce(p, 8)) << p.to_string();
    }
    EXPECT_GE(checked, 20);
}

TEST(Duals, DoubleDualEqualsSaturation)
{
    std::mt19937_64 rng(71);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        MonoidPresentation p = random_presentation(rng, 4, 3, 3);
        if (!is_sharp(p).sharp)
            continue;
        ++checked;
        EXPECT_EQ(double_dual(p).hilbert_basis, saturate(p).hilbert_basis) << p.to_string();
    }
    EXPECT_GE(checked, 50);
    auto a = double_dual(MonoidPresentation::free(2));
    EXPECT_EQ(a.hilbert_basis.size(), 2u);
    EXPECT_EQ(double_dual(two_gen(2, 2)).hilbert_basis.size(), 1u);
    MonoidPresentation a1(3, {{to_int_vector({1, 0, 1}), to_int_vector({0, 2, 0})}});
    auto dd = double_dual(a1);
    EXPECT_EQ(dd.hilbert_basis.size(), 3u);
    // A1 is already saturated: its generators are the Hilbert basis.
    auto cols = dd.pairing.column_list();
    sort_canonical(cols);
    EXPECT_EQ(cols, dd.hilbert_basis);
}

TEST(DualsThrow, NotSharp)
{
    MonoidPresentation inv(2, {{to_int_vector({1, 1}), zero_vector(2)}});
    EXPECT_THROW(dual_monoid(inv), NotSharp);
    EXPECT_THROW(double_dual(inv), NotSharp);
}

TEST(Pushout, BaseZeroIsDirectSum)
{
    MonoidPresentation a = two_gen(2, 2), b = MonoidPresentation::free(1);
    auto s = pushout_int(a, b, MonoidPresentation::free(0), {}, {});
    EXPECT_EQ(s.n_gens(), 3u);
    EXPECT_EQ(groupification(s).describe(), "Z^2 + Z/2");
}

TEST(Pushout, NodeMonoidOverFreeRankOneIsPlane)
{
    MonoidPresentation n1 = MonoidPresentation::free(1);
    MonoidPresentation node = node_monoid(MonoidElement(n1, to_int_vector({1})));
    // [t,(z,w)] -> (t + z, t + w) identifies the amalgam with N^2.
    std::set<IntVector> images;
    auto pre = oracle::element_preimages(node, {5, 10, 12});
    for (const auto& x : pre)
        images.insert(IntVector{x[0] + x[1], x[0] + x[2]});
    EXPECT_EQ(images.size(), pre.size());
    for (long a = 0; a <= 5; ++a)
        for (long b = 0; a + b <= 5; ++b)
            EXPECT_TRUE(images.count(to_int_vector({a, b})));
    EXPECT_TRUE(is_sharp(node).sharp);
    EXPECT_TRUE(groupification(node).is_free());
}

TEST(Pushout, IllDefinedMapIsRejected)
{
    MonoidPresentation base(2, {{to_int_vector({1, 0}), to_int_vector({0, 1})}});
    MonoidPresentation n2 = MonoidPresentation::free(2);
    EXPECT_THROW(pushout_int(n2, n2, base, {to_int_vector({1, 0}), to_int_vector({0, 1})},
                             {to_int_vector({1, 0}), to_int_vector({1, 0})}),
                 IllDefinedMap);
}

TEST(NodeEmbedding, Examples)
{
    MonoidPresentation n1 = MonoidPresentation::free(1);
    MonoidElement rho(n1, to_int_vector({2}));
    auto res = node_monoid_embedding(rho, {{to_int_vector({0}), 0, 0}, {to_int_vector({1}), 1, 0}});
    ASSERT_EQ(res.images.size(), 2u);
    EXPECT_EQ(res.images[0].first.repr(), to_int_vector({0}));
    EXPECT_EQ(res.images[0].second.repr(), to_int_vector({0}));
    EXPECT_EQ(res.images[1].first.repr(), to_int_vector({3}));
    EXPECT_EQ(res.images[1].second.repr(), to_int_vector({1}));
    EXPECT_TRUE(res.well_defined);
    EXPECT_TRUE(res.injective);
    EXPECT_TRUE(res.image_characterized) << res.diagnostics;
    EXPECT_FALSE(node_slope(rho, MonoidElement(n1, to_int_vector({1})), MonoidElement(n1, to_int_vector({2}))));
    EXPECT_THROW(node_monoid_embedding(MonoidElement::zero(n1), {}), ZeroRho);
}

TEST(NodeEmbedding, RandomSharpMonoids)
{
    std::mt19937_64 rng(91);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 15; ++trial) {
        MonoidPresentation q = random_presentation(rng, 3, 1, 3);
        if (!is_sharp(q).sharp)
            continue;
        IntVector r(q.n_gens());
        for (auto& x : r)
            x = uniform(rng, 0, 2);
        MonoidElement rho(q, r);
        if (is_zero(rho))
            continue;
        ++checked;
        auto res = node_monoid_embedding(rho, {}, 4);
        EXPECT_TRUE(res.well_defined && res.injective && res.image_characterized)
            << q.to_string() << " rho " << to_string(r) << ": " << res.diagnostics;
    }
    EXPECT_GE(checked, 10);
}

TEST(Tietze, FullAndForcedZeros)
{
    auto p = parse_presentation("a, b, c | c = a + b");
    auto s = simplify_presentation(p);
    EXPECT_EQ(s.presentation.to_string(), "<a,b>");
    EXPECT_EQ(s.substitution[2], to_int_vector({1, 1}));

    auto z = simplify_presentation(parse_presentation("a, b | a = 0, 2b = b + b"), TietzeMode::ForcedZeros);
    EXPECT_EQ(z.presentation.to_string(), "<b>");
    EXPECT_EQ(z.kept, std::vector<std::size_t>{1});

    auto keep = simplify_presentation(parse_presentation("a, b | 2a = 3b"));
    EXPECT_EQ(keep.presentation.to_string(), "<a,b | 2a = 3b>");
}

TEST(Tietze, PreservesGroupification)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        MonoidPresentation p = random_presentation(rng, 4, 3, 2);
        auto s = simplify_presentation(p);
        EXPECT_EQ(groupification(p).free_rank, groupification(s.presentation).free_rank);
        EXPECT_EQ(groupification(p).invariant_factors, groupification(s.presentation).invariant_factors);
    }
}

TEST(Parse, RoundTripAndErrors)
{
    auto p = parse_presentation("<e1,e2 | 4e1 = 6e2>");
    EXPECT_EQ(p.to_string(), "<e1,e2 | 4e1 = 6e2>");
    EXPECT_EQ(parse_presentation(p.to_string()).to_string(), p.to_string());
    auto q = parse_presentation("x,y,z | x + z = 2*y; x = 0");
    EXPECT_EQ(q.to_string(), "<x,y,z | x + z = 2y, x = 0>");
    EXPECT_EQ(parse_presentation("").n_gens(), 0u);
    EXPECT_THROW(parse_presentation("e1 | e2 = 0"), ParseError);
    EXPECT_THROW(parse_presentation("e1, e1"), ParseError);
    EXPECT_THROW(parse_presentation("e1 | e1 = 3"), ParseError);
    EXPECT_THROW(parse_presentation("<e1 | e1 = 0"), ParseError);
}
