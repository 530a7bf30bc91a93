#include "logmonoid/lp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace logmonoid {

void LinearSystem::add_equality(IntVector coeffs, Integer rhs)
{
    if (coeffs.size() != num_vars)
        throw PreconditionError("LinearSystem: coefficient row has wrong length");
    equalities.push_back({std::move(coeffs), std::move(rhs)});
}

void LinearSystem::add_weak(IntVector coeffs, Integer rhs)
{
    if (coeffs.size() != num_vars)
        throw PreconditionError("LinearSystem: coefficient row has wrong length");
    weak_inequalities.push_back({std::move(coeffs), std::move(rhs)});
}

void LinearSystem::add_strict(IntVector coeffs, Integer rhs)
{
    if (coeffs.size() != num_vars)
        throw PreconditionError("LinearSystem: coefficient row has wrong length");
    strict_inequalities.push_back({std::move(coeffs), std::move(rhs)});
}

std::size_t LinearSystem::num_constraints() const
{
    return equalities.size() + weak_inequalities.size() + strict_inequalities.size();
}

bool LinearSystem::is_homogeneous() const
{
    auto zero_rhs = [](const LinearConstraint& c) { return c.rhs == 0; };
    return std::all_of(equalities.begin(), equalities.end(), zero_rhs) &&
           std::all_of(weak_inequalities.begin(), weak_inequalities.end(), zero_rhs) &&
           std::all_of(strict_inequalities.begin(), strict_inequalities.end(), zero_rhs);
}

namespace {

Rational eval(const IntVector& a, const RatVector& x)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            s += Rational(a[i]) * x[i];
    return s;
}

}  // namespace

bool LinearSystem::satisfied_by(const RatVector& x) const
{
    if (x.size() != num_vars)
        return false;
    for (const auto& c : equalities)
        if (eval(c.coeffs, x) != Rational(c.rhs))
            return false;
    for (const auto& c : weak_inequalities)
        if (eval(c.coeffs, x) < Rational(c.rhs))
            return false;
    for (const auto& c : strict_inequalities)
        if (eval(c.coeffs, x) <= Rational(c.rhs))
            return false;
    return true;
}

std::string LinearSystem::describe() const
{
    std::ostringstream os;
    auto put = [&](const LinearConstraint& c, const char* op) {
        os << to_string(c.coeffs) << ".x " << op << ' ' << c.rhs.get_str() << '\n';
    };
    for (const auto& c : equalities)
        put(c, "=");
    for (const auto& c : weak_inequalities)
        put(c, ">=");
    for (const auto& c : strict_inequalities)
        put(c, ">");
    return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Fourier-Motzkin

struct Ineq {
    RatVector a;  // a . x >= b  (or > b when strict)
    Rational b;
    bool strict = false;
};

struct Substitution {
    std::size_t var;
    Rational constant;
    RatVector coeffs;  // x_var = constant + coeffs . x, coeffs[var] == 0
};

struct Level {
    std::size_t var;
    std::vector<Ineq> rows;
};

Rational floor_q(const Rational& q)
{
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

Rational ceil_q(const Rational& q)
{
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(c);
}

// Scale so the first nonzero coefficient has absolute value one; lets
// duplicate rows collapse.
void normalize(Ineq& r)
{
    for (const auto& c : r.a) {
        if (c == 0)
            continue;
        Rational s = abs(c);
        for (auto& x : r.a)
            x /= s;
        r.b /= s;
        return;
    }
}

bool is_trivial(const Ineq& r)
{
    return std::all_of(r.a.begin(), r.a.end(), [](const Rational& c) { return c == 0; });
}

bool trivial_holds(const Ineq& r) { return r.strict ? r.b < 0 : r.b <= 0; }

// Returns false on a contradiction; otherwise deduplicated non-trivial rows.
bool tidy(std::vector<Ineq>& rows)
{
    // Rows with the same normalized left side: only the tightest one matters.
    std::map<RatVector, std::pair<Rational, bool>> seen;
    for (auto& r : rows) {
        if (is_trivial(r)) {
            if (!trivial_holds(r))
                return false;
            continue;
        }
        normalize(r);
        auto [it, inserted] = seen.emplace(r.a, std::make_pair(r.b, r.strict));
        if (inserted)
            continue;
        auto& [b, strict] = it->second;
        if (r.b > b)
            it->second = {r.b, r.strict};
        else if (r.b == b)
            strict = strict || r.strict;
    }
    rows.clear();
    for (const auto& [a, bound] : seen)
        rows.push_back({a, bound.first, bound.second});
    return true;
}

Rational choose_value(bool has_lo, const Rational& lo, bool lo_strict, bool has_hi,
                      const Rational& hi, bool hi_strict)
{
    auto ok = [&](const Rational& v) {
        if (has_lo && (v < lo || (v == lo && lo_strict)))
            return false;
        if (has_hi && (v > hi || (v == hi && hi_strict)))
            return false;
        return true;
    };
    std::vector<Rational> candidates{Rational(0)};
    if (has_lo) {
        candidates.push_back(ceil_q(lo));
        candidates.push_back(floor_q(lo) + 1);
    }
    if (has_hi) {
        candidates.push_back(floor_q(hi));
        candidates.push_back(ceil_q(hi) - 1);
    }
    if (has_lo)
        candidates.push_back(lo);
    if (has_hi)
        candidates.push_back(hi);
    if (has_lo && has_hi)
        candidates.push_back((lo + hi) / 2);
    for (const auto& c : candidates)
        if (ok(c))
            return c;
    throw InvariantViolation("Fourier-Motzkin back-substitution found an empty interval");
}

std::optional<RatVector> fourier_motzkin(const LinearSystem& sys)
{
    const std::size_t n = sys.num_vars;
    auto to_rat = [](const IntVector& v) {
        RatVector r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            r[i] = v[i];
        return r;
    };

    std::vector<std::pair<RatVector, Rational>> eqs;
    for (const auto& c : sys.equalities)
        eqs.emplace_back(to_rat(c.coeffs), Rational(c.rhs));
    std::vector<Ineq> rows;
    for (const auto& c : sys.weak_inequalities)
        rows.push_back({to_rat(c.coeffs), Rational(c.rhs), false});
    for (const auto& c : sys.strict_inequalities)
        rows.push_back({to_rat(c.coeffs), Rational(c.rhs), true});

    // Eliminate equalities by substitution.
    std::vector<Substitution> substs;
    while (!eqs.empty()) {
        auto [a, b] = eqs.back();
        eqs.pop_back();
        std::size_t k = 0;
        while (k < n && a[k] == 0)
            ++k;
        if (k == n) {
            if (b != 0)
                return std::nullopt;
            continue;
        }
        Substitution s{k, b / a[k], RatVector(n, Rational(0))};
        for (std::size_t j = 0; j < n; ++j)
            if (j != k)
                s.coeffs[j] = -a[j] / a[k];
        auto apply = [&](RatVector& row, Rational& rhs) {
            if (row[k] == 0)
                return;
            Rational f = row[k];
            row[k] = 0;
            for (std::size_t j = 0; j < n; ++j)
                row[j] += f * s.coeffs[j];
            rhs -= f * s.constant;
        };
        for (auto& [ea, eb] : eqs)
            apply(ea, eb);
        for (auto& r : rows)
            apply(r.a, r.b);
        substs.push_back(std::move(s));
    }

    if (!tidy(rows))
        return std::nullopt;

    std::vector<Level> levels;
    std::vector<bool> eliminated(n, false);
    for (;;) {
        // Pick the variable producing the fewest combined rows.
        std::size_t best = n;
        std::size_t best_cost = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (eliminated[k])
                continue;
            std::size_t pos = 0, neg = 0;
            for (const auto& r : rows) {
                if (r.a[k] > 0)
                    ++pos;
                else if (r.a[k] < 0)
                    ++neg;
            }
            if (pos + neg == 0)
                continue;
            std::size_t cost = pos * neg;
            if (best == n || cost < best_cost) {
                best = k;
                best_cost = cost;
            }
        }
        if (best == n)
            break;
        const std::size_t k = best;
        eliminated[k] = true;

        Level level{k, {}};
        std::vector<Ineq> lower, upper, keep;
        for (auto& r : rows) {
            if (r.a[k] > 0)
                lower.push_back(r);
            else if (r.a[k] < 0)
                upper.push_back(r);
            else
                keep.push_back(r);
        }
        for (const auto& lo : lower) {
            for (const auto& hi : upper) {
                // lo: x_k >= ..., hi: x_k <= ...; add with positive weights to cancel x_k.
                Rational wl = -hi.a[k];
                Rational wh = lo.a[k];
                Ineq c{RatVector(n), wl * lo.b + wh * hi.b, lo.strict || hi.strict};
                for (std::size_t j = 0; j < n; ++j)
                    c.a[j] = wl * lo.a[j] + wh * hi.a[j];
                c.a[k] = 0;
                keep.push_back(std::move(c));
            }
        }
        level.rows = lower;
        level.rows.insert(level.rows.end(), upper.begin(), upper.end());
        levels.push_back(std::move(level));
        rows = std::move(keep);
        if (!tidy(rows))
            return std::nullopt;
    }

    RatVector x(n, Rational(0));
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        const std::size_t k = it->var;
        bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
        Rational lo, hi;
        for (const auto& r : it->rows) {
            Rational rest = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k && r.a[j] != 0)
                    rest += r.a[j] * x[j];
            Rational bound = (r.b - rest) / r.a[k];
            if (r.a[k] > 0) {
                if (!has_lo || bound > lo || (bound == lo && r.strict)) {
                    lo_strict = (has_lo && bound == lo) ? (lo_strict || r.strict) : r.strict;
                    lo = bound;
                    has_lo = true;
                }
            } else {
                if (!has_hi || bound < hi || (bound == hi && r.strict)) {
                    hi_strict = (has_hi && bound == hi) ? (hi_strict || r.strict) : r.strict;
                    hi = bound;
                    has_hi = true;
                }
            }
        }
        x[k] = choose_value(has_lo, lo, lo_strict, has_hi, hi, hi_strict);
    }
    for (auto it = substs.rbegin(); it != substs.rend(); ++it) {
        Rational v = it->constant;
        for (std::size_t j = 0; j < n; ++j)
            if (it->coeffs[j] != 0)
                v += it->coeffs[j] * x[j];
        x[it->var] = v;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Simplex (dense tableau, Bland's rule)

struct Tableau {
    std::vector<RatVector> A;
    RatVector b;
    std::vector<std::size_t> basis;
    std::size_t ncols = 0;

    void pivot(std::size_t r, std::size_t c)
    {
        Rational p = A[r][c];
        for (auto& v : A[r])
            v /= p;
        b[r] /= p;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c] == 0)
                continue;
            Rational f = A[i][c];
            for (std::size_t j = 0; j < ncols; ++j)
                if (A[r][j] != 0)
                    A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        basis[r] = c;
    }

    // Maximize c . x over columns [0, active); returns false if unbounded.
    bool maximize(const RatVector& c, std::size_t active)
    {
        for (;;) {
            std::vector<bool> in_basis(ncols, false);
            for (std::size_t i : basis)
                in_basis[i] = true;
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < active && enter == ncols; ++j) {
                if (in_basis[j])
                    continue;
                Rational rc = c[j];
                for (std::size_t i = 0; i < A.size(); ++i)
                    if (A[i][j] != 0)
                        rc -= c[basis[i]] * A[i][j];
                if (rc > 0)
                    enter = j;
            }
            if (enter == ncols)
                return true;
            std::size_t leave = A.size();
            Rational best;
            for (std::size_t i = 0; i < A.size(); ++i) {
                if (A[i][enter] <= 0)
                    continue;
                Rational ratio = b[i] / A[i][enter];
                if (leave == A.size() || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == A.size())
                return false;
            pivot(leave, enter);
        }
    }
};

std::optional<RatVector> simplex(const LinearSystem& sys)
{
    const std::size_t n = sys.num_vars;
    const std::size_t nweak = sys.weak_inequalities.size();
    const std::size_t nstrict = sys.strict_inequalities.size();
    const bool has_strict = nstrict > 0;

    // Columns: x+ (n), x- (n), slacks (weak + strict), t, w  | artificials.
    const std::size_t col_slack = 2 * n;
    const std::size_t col_t = col_slack + nweak + nstrict;
    const std::size_t col_w = col_t + 1;
    const std::size_t nstruct = has_strict ? col_w + 1 : col_t;

    std::vector<RatVector> rows;
    RatVector rhs;
    auto base_row = [&](const IntVector& a) {
        RatVector r(nstruct, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = a[i];
            r[n + i] = -a[i];
        }
        return r;
    };
    for (const auto& c : sys.equalities) {
        rows.push_back(base_row(c.coeffs));
        rhs.push_back(Rational(c.rhs));
    }
    for (std::size_t k = 0; k < nweak; ++k) {
        const auto& c = sys.weak_inequalities[k];
        RatVector r = base_row(c.coeffs);
        r[col_slack + k] = -1;
        rows.push_back(std::move(r));
        rhs.push_back(Rational(c.rhs));
    }
    for (std::size_t k = 0; k < nstrict; ++k) {
        const auto& c = sys.strict_inequalities[k];
        RatVector r = base_row(c.coeffs);
        r[col_slack + nweak + k] = -1;
        r[col_t] = -1;
        rows.push_back(std::move(r));
        rhs.push_back(Rational(c.rhs));
    }
    if (has_strict) {
        RatVector r(nstruct, Rational(0));
        r[col_t] = 1;
        r[col_w] = 1;
        rows.push_back(std::move(r));
        rhs.push_back(Rational(1));
    }

    const std::size_t m = rows.size();
    Tableau tab;
    tab.ncols = nstruct + m;
    for (std::size_t i = 0; i < m; ++i) {
        if (rhs[i] < 0) {
            for (auto& v : rows[i])
                v = -v;
            rhs[i] = -rhs[i];
        }
        RatVector r = rows[i];
        r.resize(tab.ncols, Rational(0));
        r[nstruct + i] = 1;
        tab.A.push_back(std::move(r));
        tab.b.push_back(rhs[i]);
        tab.basis.push_back(nstruct + i);
    }

    RatVector phase1(tab.ncols, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        phase1[nstruct + i] = -1;
    tab.maximize(phase1, tab.ncols);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= nstruct && tab.b[i] != 0)
            return std::nullopt;

    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.A.size();) {
        if (tab.basis[i] < nstruct) {
            ++i;
            continue;
        }
        std::size_t c = 0;
        while (c < nstruct && tab.A[i][c] == 0)
            ++c;
        if (c < nstruct) {
            tab.pivot(i, c);
            ++i;
        } else {
            tab.A.erase(tab.A.begin() + static_cast<std::ptrdiff_t>(i));
            tab.b.erase(tab.b.begin() + static_cast<std::ptrdiff_t>(i));
            tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    auto value_of = [&](std::size_t col) {
        for (std::size_t i = 0; i < tab.basis.size(); ++i)
            if (tab.basis[i] == col)
                return tab.b[i];
        return Rational(0);
    };

    if (has_strict) {
        RatVector obj(tab.ncols, Rational(0));
        obj[col_t] = 1;
        if (!tab.maximize(obj, nstruct))
            throw InvariantViolation("simplex: bounded auxiliary objective reported unbounded");
        if (value_of(col_t) <= 0)
            return std::nullopt;
    }

    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = value_of(i) - value_of(n + i);
    return x;
}

}  // namespace

std::optional<RatVector> lp_feasible(const LinearSystem& input, LpMethod method)
{
    LinearSystem sys = input;
    if (sys.is_homogeneous() && !sys.strict_inequalities.empty()) {
        // Positively homogeneous: any solution scales, so > 0 may become >= 1.
        for (auto& c : sys.strict_inequalities)
            sys.weak_inequalities.push_back({c.coeffs, Integer(1)});
        sys.strict_inequalities.clear();
    }
    if (method == LpMethod::Automatic)
        method = sys.num_vars <= kFourierMotzkinMaxVars ? LpMethod::FourierMotzkin : LpMethod::Simplex;

    std::optional<RatVector> x =
        method == LpMethod::FourierMotzkin ? fourier_motzkin(sys) : simplex(sys);
    if (x && !input.satisfied_by(*x))
        throw InvariantViolation("lp_feasible: witness fails verification");
    return x;
}

}  // namespace logmonoid
