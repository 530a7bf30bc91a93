#include <gtest/gtest.h>

#include "logmonoid/hilbert.hpp"
#include "logmonoid/oracle.hpp"
#include "support.hpp"

using namespace logmonoid;
using testsupport::uniform;

namespace {

std::vector<IntVector> vecs(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<IntVector> out;
    for (const auto& r : rows)
        out.push_back(to_int_vector(r));
    return out;
}

Integer max_norm(const std::vector<IntVector>& vs)
{
    Integer m = 0;
    for (const auto& v : vs)
        for (const auto& x : v)
            if (abs(x) > m)
                m = abs(x);
    return m;
}

}  // namespace

TEST(HilbertBasis, PositiveQuadrant)
{
    EXPECT_EQ(hilbert_basis(vecs({{1, 0}, {0, 1}}), 2), vecs({{0, 1}, {1, 0}}));
}

TEST(HilbertBasis, DualOfA1Cone)
{
    // w1 >= 0, w1 + 2 w2 >= 0
    auto hb = hilbert_basis(vecs({{1, 0}, {1, 2}}), 2);
    EXPECT_EQ(hb, vecs({{0, 1}, {1, 0}, {2, -1}}));
    EXPECT_EQ(hb, oracle::hilbert_bruteforce(vecs({{1, 0}, {1, 2}}), 2, {}));
}

TEST(HilbertBasis, Ray)
{
    auto ineq = vecs({{1, 0}, {-1, 0}, {0, 1}});
    EXPECT_EQ(hilbert_basis(ineq, 2), vecs({{0, 1}}));
    EXPECT_EQ(oracle::hilbert_bruteforce(ineq, 2, {}), vecs({{0, 1}}));
}

TEST(HilbertBasis, ZeroCone)
{
    EXPECT_TRUE(hilbert_basis(vecs({{1}, {-1}}), 1).empty());
    EXPECT_TRUE(hilbert_basis({}, 0).empty());
}

TEST(HilbertBasis, NonPointedThrows)
{
    EXPECT_THROW(hilbert_basis(vecs({{1, 0}}), 2), NonPointedCone);
    EXPECT_THROW(hilbert_basis_of_generators(vecs({{1, 0}, {-1, 0}}), 2), NonPointedCone);
}

TEST(HilbertBasis, GeneratorRoute)
{
    EXPECT_EQ(hilbert_basis_of_generators(vecs({{1, 0}, {1, 2}}), 2), vecs({{1, 0}, {1, 1}, {1, 2}}));
    // Lower-dimensional cone: the lattice is the saturation of its span.
    EXPECT_EQ(hilbert_basis_of_generators(vecs({{2, 4, 0}}), 3), vecs({{1, 2, 0}}));
    // A classical 3D example: cone over a square with an interior lattice point.
    auto hb = hilbert_basis_of_generators(vecs({{1, 0, 0}, {0, 1, 0}, {1, 0, 2}, {0, 1, 2}}), 3);
    EXPECT_EQ(hb, vecs({{0, 1, 0}, {0, 1, 1}, {0, 1, 2}, {1, 0, 0}, {1, 0, 1}, {1, 0, 2}}));
}

TEST(HilbertBasis, AgreesWithBruteForceOnRandomCones)
{
    std::mt19937_64 rng(77);
    int compared = 0;
    for (int trial = 0; trial < 400 && compared < 120; ++trial) {
        std::size_t d = 2 + rng() % 2;
        std::size_t m = d + rng() % 3;
        std::vector<IntVector> rows;
        for (std::size_t k = 0; k < m; ++k) {
            IntVector r(d);
            for (auto& x : r)
                x = uniform(rng, -3, 3);
            rows.push_back(r);
        }
        if (rank(IntMatrix::from_rows(rows, d)) < d)
            continue;
        auto hb = hilbert_basis(rows, d);
        if (max_norm(hb) > 5)
            continue;
        EXPECT_EQ(hb, oracle::hilbert_bruteforce(rows, d, {})) << "trial " << trial;
        ++compared;
    }
    EXPECT_GE(compared, 100);
}

TEST(HilbertBasis, RoutesAgree)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 2 + rng() % 2;
        std::vector<IntVector> gens;
        for (std::size_t k = 0; k < d + rng() % 2; ++k) {
            IntVector g(d);
            for (auto& x : g)
                x = uniform(rng, 0, 3);
            gens.push_back(g);
        }
        IntMatrix G = IntMatrix::from_columns(gens, d);
        if (rank(G) < d)
            continue;
        auto ineq = oracle::cone_inequalities(gens, d);
        EXPECT_EQ(hilbert_basis_of_generators(gens, d), hilbert_basis(ineq, d));
    }
}

TEST(ExtremeRays, Quadrant)
{
    EXPECT_EQ(extreme_rays(vecs({{1, 0}, {1, 2}}), 2), vecs({{0, 1}, {2, -1}}));
}
