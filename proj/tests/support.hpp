#pragma once

// Shared helpers for the test binaries: seeded generators and a few naive
// reference computations that do not go through the library's algorithms.

#include <functional>
#include <random>
#include <vector>

#include "logmonoid/intlin.hpp"

namespace testsupport {

using logmonoid::Integer;
using logmonoid::IntMatrix;
using logmonoid::IntVector;

inline long uniform(std::mt19937_64& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, long lo, long hi)
{
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = uniform(rng, lo, hi);
    return a;
}

inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n)
{
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2)
        return u;
    for (int step = 0; step < 6; ++step) {
        std::size_t i = rng() % n, j = rng() % n;
        if (i == j)
            continue;
        u.add_row_multiple(i, j, Integer(uniform(rng, -2, 2)));
        if (rng() % 3 == 0)
            u.swap_rows(i, j);
    }
    return u;
}

// Cofactor expansion along the first row; only used on tiny matrices.
inline Integer naive_det(const std::vector<std::vector<Integer>>& m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    if (n == 1)
        return m[0][0];
    Integer total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c] == 0)
            continue;
        std::vector<std::vector<Integer>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c)
                    row.push_back(m[r][k]);
            minor.push_back(row);
        }
        Integer term = m[0][c] * naive_det(minor);
        total += (c % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& f)
{
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

// k-th determinantal divisor = gcd of all k x k minors, for k = 1..min(m,n).
inline std::vector<Integer> determinantal_divisors(const IntMatrix& a)
{
    std::size_t kmax = std::min(a.rows(), a.cols());
    std::vector<Integer> out;
    for (std::size_t k = 1; k <= kmax; ++k) {
        Integer g = 0;
        for_each_subset(a.rows(), k, [&](const std::vector<std::size_t>& rs) {
            for_each_subset(a.cols(), k, [&](const std::vector<std::size_t>& cs) {
                std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        m[i][j] = a(rs[i], cs[j]);
                Integer d = naive_det(m);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            });
        });
        out.push_back(g);
    }
    return out;
}

}  // namespace testsupport
