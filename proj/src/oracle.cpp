#include "logmonoid/oracle.hpp"

#include <algorithm>
#include <map>

namespace logmonoid::oracle {

// ---------------------------------------------------------------------------
// Coset reduction via a private echelon form

CosetReducer::CosetReducer(std::size_t n, const std::vector<IntVector>& relations) : n_(n)
{
    std::vector<IntVector> rows;
    for (const auto& r : relations) {
        if (r.size() != n)
            throw PreconditionError("CosetReducer: relation has wrong length");
        rows.push_back(r);
    }
    std::size_t top = 0;
    for (std::size_t c = 0; c < n && top < rows.size(); ++c) {
        // Euclid on column c among rows[top..].
        for (;;) {
            std::size_t piv = rows.size();
            for (std::size_t i = top; i < rows.size(); ++i) {
                if (rows[i][c] == 0)
                    continue;
                if (piv == rows.size() || abs(rows[i][c]) < abs(rows[piv][c]))
                    piv = i;
            }
            if (piv == rows.size())
                break;
            std::swap(rows[top], rows[piv]);
            bool done = true;
            for (std::size_t i = top + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0)
                    continue;
                Integer q = rows[i][c] / rows[top][c];
                for (std::size_t j = 0; j < n; ++j)
                    rows[i][j] -= q * rows[top][j];
                if (rows[i][c] != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (top < rows.size() && rows[top][c] != 0) {
            if (rows[top][c] < 0)
                for (auto& x : rows[top])
                    x = -x;
            echelon_.push_back(rows[top]);
            pivots_.push_back(c);
            ++top;
        }
    }
}

IntVector CosetReducer::reduce(IntVector v) const
{
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
        const std::size_t p = pivots_[k];
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), v[p].get_mpz_t(), echelon_[k][p].get_mpz_t());
        if (q == 0)
            continue;
        for (std::size_t j = 0; j < n_; ++j)
            v[j] -= q * echelon_[k][j];
    }
    return v;
}

bool CosetReducer::equivalent(const IntVector& a, const IntVector& b) const { return reduce(a) == reduce(b); }

namespace {

std::vector<IntVector> relation_differences(const MonoidPresentation& p)
{
    std::vector<IntVector> out;
    for (const auto& r : p.relations()) {
        IntVector d(p.n_gens());
        for (std::size_t i = 0; i < p.n_gens(); ++i)
            d[i] = r.lhs[i] - r.rhs[i];
        out.push_back(d);
    }
    return out;
}

// Odometer over N^n with coefficient sum <= degree.
template <class F>
void each_natural(std::size_t n, std::size_t degree, F&& f)
{
    std::vector<std::size_t> x(n, 0);
    for (;;) {
        IntVector v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = static_cast<unsigned long>(x[i]);
        f(v);
        std::size_t i = 0;
        for (; i < n; ++i) {
            std::size_t s = 0;
            for (std::size_t k = 0; k < n; ++k)
                s += x[k];
            if (s < degree) {
                ++x[i];
                break;
            }
            x[i] = 0;
        }
        if (i == n)
            return;
    }
}

}  // namespace

std::set<IntVector> enumerate_elements(const MonoidPresentation& p, const Bound& b)
{
    CosetReducer red(p.n_gens(), relation_differences(p));
    std::set<IntVector> out;
    each_natural(p.n_gens(), b.degree, [&](const IntVector& x) { out.insert(red.reduce(x)); });
    return out;
}

std::vector<IntVector> element_preimages(const MonoidPresentation& p, const Bound& b)
{
    CosetReducer red(p.n_gens(), relation_differences(p));
    std::map<IntVector, IntVector> first;
    each_natural(p.n_gens(), b.degree, [&](const IntVector& x) { first.emplace(red.reduce(x), x); });
    std::vector<IntVector> out;
    for (const auto& [k, x] : first)
        out.push_back(x);
    return out;
}

std::set<IntVector> saturation_bruteforce(const MonoidPresentation& p, const Bound& b)
{
    const std::size_t n = p.n_gens();
    CosetReducer red(n, relation_differences(p));
    std::set<IntVector> q_elements;
    each_natural(n, b.degree * b.multiplier, [&](const IntVector& x) { q_elements.insert(red.reduce(x)); });

    std::set<IntVector> out;
    const long box = static_cast<long>(b.box);
    std::vector<long> v(n, -box);
    for (;;) {
        IntVector iv(n);
        for (std::size_t i = 0; i < n; ++i)
            iv[i] = v[i];
        IntVector cls = red.reduce(iv);
        if (!out.count(cls)) {
            for (std::size_t m = 1; m <= b.multiplier; ++m) {
                if (q_elements.count(red.reduce(scale(iv, Integer(static_cast<unsigned long>(m)))))) {
                    out.insert(cls);
                    break;
                }
            }
        }
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (v[i] < box) {
                ++v[i];
                break;
            }
            v[i] = -box;
        }
        if (i == n)
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin verdict

namespace {

struct Row {
    std::vector<Integer> a;  // a . x >= b, or > b
    Rational b;
    bool strict;
};

void make_primitive(Row& r)
{
    Integer g = 0;
    for (const auto& x : r.a)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0 || g == 1)
        return;
    for (auto& x : r.a)
        x /= g;
    r.b /= g;
}

// Keep the tightest row for each left side.
void prune(std::vector<Row>& rows)
{
    std::map<std::vector<Integer>, std::pair<Rational, bool>> best;
    for (const auto& r : rows) {
        auto [it, inserted] = best.emplace(r.a, std::make_pair(r.b, r.strict));
        if (inserted)
            continue;
        if (r.b > it->second.first)
            it->second = {r.b, r.strict};
        else if (r.b == it->second.first && r.strict)
            it->second.second = true;
    }
    rows.clear();
    for (const auto& [a, v] : best)
        rows.push_back({a, v.first, v.second});
}

}  // namespace

namespace {

// r <- |e_k| r - sign(e_k) r_k e, which clears coordinate k of r.
Row combine_away(const Row& r, const Row& e, std::size_t k)
{
    Integer ek = e.a[k], rk = r.a[k];
    Integer w = ek < 0 ? Integer(-ek) : ek;
    Integer f = ek < 0 ? rk : Integer(-rk);
    Row c{std::vector<Integer>(r.a.size()), Rational(w) * r.b + Rational(f) * e.b, r.strict};
    for (std::size_t j = 0; j < r.a.size(); ++j)
        c.a[j] = w * r.a[j] + f * e.a[j];
    make_primitive(c);
    return c;
}

bool all_zero(const std::vector<Integer>& a)
{
    for (const auto& x : a)
        if (x != 0)
            return false;
    return true;
}

}  // namespace

bool fm_feasible(const LinearSystem& sys)
{
    const std::size_t n = sys.num_vars;
    if (n > 6)
        throw TooManyVariables("fm_feasible handles at most 6 variables");
    std::vector<Row> eqs, rows;
    for (const auto& c : sys.equalities)
        eqs.push_back({c.coeffs, Rational(c.rhs), false});
    for (const auto& c : sys.weak_inequalities)
        rows.push_back({c.coeffs, Rational(c.rhs), false});
    for (const auto& c : sys.strict_inequalities)
        rows.push_back({c.coeffs, Rational(c.rhs), true});

    // Rows without variables are decided on the spot.
    auto settle = [&]() {
        std::vector<Row> kept;
        for (auto& r : rows) {
            if (!all_zero(r.a))
                kept.push_back(r);
            else if (r.strict ? !(r.b < 0) : !(r.b <= 0))
                return false;
        }
        rows = std::move(kept);
        std::vector<Row> kept_eqs;
        for (auto& e : eqs) {
            if (!all_zero(e.a))
                kept_eqs.push_back(e);
            else if (e.b != 0)
                return false;
        }
        eqs = std::move(kept_eqs);
        return true;
    };

    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        if (!settle())
            return false;
        // Substitute an equality when one is available.
        bool substituted = false;
        for (std::size_t ei = 0; ei < eqs.size() && !substituted; ++ei) {
            for (std::size_t k = 0; k < n; ++k) {
                if (done[k] || eqs[ei].a[k] == 0)
                    continue;
                Row e = eqs[ei];
                eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(ei));
                for (auto& r : eqs)
                    if (r.a[k] != 0)
                        r = combine_away(r, e, k);
                for (auto& r : rows)
                    if (r.a[k] != 0)
                        r = combine_away(r, e, k);
                done[k] = true;
                substituted = true;
                break;
            }
        }
        if (substituted) {
            prune(rows);
            continue;
        }
        // Otherwise eliminate the variable with the fewest new rows.
        std::size_t best = n;
        std::size_t best_cost = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k])
                continue;
            std::size_t np = 0, nn = 0;
            for (const auto& r : rows) {
                np += r.a[k] > 0;
                nn += r.a[k] < 0;
            }
            if (best == n || np * nn < best_cost) {
                best = k;
                best_cost = np * nn;
            }
        }
        const std::size_t k = best;
        std::vector<Row> pos, neg, next;
        for (auto& r : rows) {
            if (r.a[k] > 0)
                pos.push_back(r);
            else if (r.a[k] < 0)
                neg.push_back(r);
            else
                next.push_back(r);
        }
        for (const auto& p : pos) {
            for (const auto& q : neg) {
                Integer wp = -q.a[k], wq = p.a[k];
                Row c{std::vector<Integer>(n), Rational(wp * p.b + wq * q.b), p.strict || q.strict};
                for (std::size_t j = 0; j < n; ++j)
                    c.a[j] = wp * p.a[j] + wq * q.a[j];
                make_primitive(c);
                next.push_back(c);
            }
        }
        prune(next);
        rows = std::move(next);
        done[k] = true;
    }
    return settle();
}

// ---------------------------------------------------------------------------
// Cones

std::vector<IntVector> cone_inequalities(const std::vector<IntVector>& generators, std::size_t dim)
{
    // Variables (x_1..x_dim, l_1..l_k); x = G l, l >= 0; eliminate every l.
    const std::size_t k = generators.size();
    const std::size_t nv = dim + k;
    std::vector<Row> rows;
    for (std::size_t c = 0; c < dim; ++c) {
        Row r{std::vector<Integer>(nv, Integer(0)), 0, false};
        r.a[c] = 1;
        for (std::size_t i = 0; i < k; ++i)
            r.a[dim + i] = -generators[i][c];
        rows.push_back(r);
        Row s = r;
        for (auto& x : s.a)
            x = -x;
        rows.push_back(s);
    }
    for (std::size_t i = 0; i < k; ++i) {
        Row r{std::vector<Integer>(nv, Integer(0)), 0, false};
        r.a[dim + i] = 1;
        rows.push_back(r);
    }
    auto primitive = [](Row& r) {
        Integer g = 0;
        for (const auto& x : r.a)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g > 1)
            for (auto& x : r.a)
                x /= g;
    };
    for (std::size_t v = dim; v < nv; ++v) {
        std::vector<Row> pos, neg, next;
        for (auto& r : rows) {
            if (r.a[v] > 0)
                pos.push_back(r);
            else if (r.a[v] < 0)
                neg.push_back(r);
            else
                next.push_back(r);
        }
        for (const auto& p : pos)
            for (const auto& q : neg) {
                Integer wp = -q.a[v], wq = p.a[v];
                Row c{std::vector<Integer>(nv), 0, false};
                for (std::size_t j = 0; j < nv; ++j)
                    c.a[j] = wp * p.a[j] + wq * q.a[j];
                primitive(c);
                next.push_back(c);
            }
        std::sort(next.begin(), next.end(), [](const Row& x, const Row& y) { return x.a < y.a; });
        next.erase(std::unique(next.begin(), next.end(), [](const Row& x, const Row& y) { return x.a == y.a; }),
                   next.end());
        rows = std::move(next);
    }
    std::set<IntVector> out;
    for (const auto& r : rows) {
        IntVector a(r.a.begin(), r.a.begin() + static_cast<std::ptrdiff_t>(dim));
        bool zero = std::all_of(a.begin(), a.end(), [](const Integer& x) { return x == 0; });
        if (!zero)
            out.insert(a);
    }
    return {out.begin(), out.end()};
}

std::vector<IntVector> hilbert_bruteforce(const std::vector<IntVector>& inequalities, std::size_t dim,
                                          const Bound& b)
{
    if (dim > 3)
        throw DimensionTooLarge("hilbert_bruteforce handles dimension at most 3");
    const long box = static_cast<long>(b.box);
    std::vector<std::vector<long>> ineq;
    for (const auto& r : inequalities) {
        std::vector<long> row;
        for (const auto& x : r)
            row.push_back(x.get_si());
        ineq.push_back(row);
    }
    auto in_cone = [&](const std::vector<long>& x) {
        for (const auto& r : ineq) {
            long s = 0;
            for (std::size_t i = 0; i < dim; ++i)
                s += r[i] * x[i];
            if (s < 0)
                return false;
        }
        return true;
    };

    std::vector<std::vector<long>> points;
    std::vector<long> x(dim, -box);
    if (dim == 0)
        return {};
    for (;;) {
        bool nonzero = std::any_of(x.begin(), x.end(), [](long t) { return t != 0; });
        if (nonzero && in_cone(x))
            points.push_back(x);
        std::size_t i = 0;
        for (; i < dim; ++i) {
            if (x[i] < box) {
                ++x[i];
                break;
            }
            x[i] = -box;
        }
        if (i == dim)
            break;
    }
    // Dense membership table over the box.
    const long side = 2 * box + 1;
    std::size_t cells = 1;
    for (std::size_t i = 0; i < dim; ++i)
        cells *= static_cast<std::size_t>(side);
    std::vector<char> table(cells, 0);
    auto cell = [&](const std::vector<long>& v) {
        std::size_t idx = 0;
        for (std::size_t i = dim; i-- > 0;)
            idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(v[i] + box);
        return idx;
    };
    for (const auto& p : points)
        table[cell(p)] = 1;

    std::vector<IntVector> out;
    std::vector<long> z(dim);
    for (const auto& p : points) {
        bool reducible = false;
        for (const auto& y : points) {
            if (y == p)
                continue;
            bool inside = true;
            for (std::size_t i = 0; i < dim; ++i) {
                z[i] = p[i] - y[i];
                if (z[i] < -box || z[i] > box)
                    inside = false;
            }
            if (inside && table[cell(z)]) {
                reducible = true;
                break;
            }
        }
        if (!reducible) {
            IntVector v;
            for (long t : p)
                v.emplace_back(t);
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace logmonoid::oracle
