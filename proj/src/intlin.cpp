#include "logmonoid/intlin.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <utility>

namespace logmonoid {

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows_ * cols_)
        throw PreconditionError("IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols)
{
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw PreconditionError("IntMatrix::from_rows: ragged input");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns, std::size_t rows)
{
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows)
            throw PreconditionError("IntMatrix::from_columns: ragged input");
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = columns[j][i];
    }
    return m;
}

IntMatrix IntMatrix::from_int_rows(std::initializer_list<std::initializer_list<long>> rows)
{
    std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
    IntMatrix m(rows.size(), cols);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != cols)
            throw PreconditionError("IntMatrix::from_int_rows: ragged input");
        std::size_t j = 0;
        for (long x : r)
            m(i, j++) = x;
        ++i;
    }
    return m;
}

IntVector IntMatrix::row(std::size_t i) const
{
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const
{
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

std::vector<IntVector> IntMatrix::row_list() const
{
    std::vector<IntVector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out.push_back(row(i));
    return out;
}

std::vector<IntVector> IntMatrix::column_list() const
{
    std::vector<IntVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        out.push_back(column(j));
    return out;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& idx) const
{
    IntMatrix m(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t j = 0; j < cols_; ++j)
            m(k, j) = (*this)(idx[k], j);
    return m;
}

IntMatrix IntMatrix::select_columns(const std::vector<std::size_t>& idx) const
{
    IntMatrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < idx.size(); ++k)
            m(i, k) = (*this)(i, idx[k]);
    return m;
}

IntMatrix IntMatrix::hcat(const IntMatrix& other) const
{
    if (other.rows_ != rows_)
        throw PreconditionError("IntMatrix::hcat: row counts differ");
    IntMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < other.cols_; ++j)
            m(i, cols_ + j) = other(i, j);
    }
    return m;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw PreconditionError("IntMatrix product: shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Integer& x = a(i, k);
            if (x == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += x * b(k, j);
        }
    return c;
}

IntVector operator*(const IntMatrix& a, const IntVector& v)
{
    if (a.cols_ != v.size())
        throw PreconditionError("IntMatrix-vector product: shape mismatch");
    IntVector out(a.rows_, Integer(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j)
            out[i] += a(i, j) * v[j];
    return out;
}

bool operator==(const IntMatrix& a, const IntMatrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t j = 0; j < cols_; ++j)
        std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_columns(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t i = 0; i < rows_; ++i)
        std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor)
{
    if (factor == 0)
        return;
    for (std::size_t j = 0; j < cols_; ++j)
        (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_column_multiple(std::size_t dst, std::size_t src, const Integer& factor)
{
    if (factor == 0)
        return;
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t i)
{
    for (std::size_t j = 0; j < cols_; ++j)
        (*this)(i, j) = -(*this)(i, j);
}

void IntMatrix::negate_column(std::size_t j)
{
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = -(*this)(i, j);
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
{
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i)
            os << ", ";
        os << to_string(m.row(i));
    }
    return os << ']';
}

std::string to_string(const IntVector& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ',';
        os << v[i].get_str();
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// Vector helpers

IntVector zero_vector(std::size_t n) { return IntVector(n, Integer(0)); }

IntVector unit_vector(std::size_t n, std::size_t i)
{
    IntVector v(n, Integer(0));
    v.at(i) = 1;
    return v;
}

IntVector to_int_vector(std::initializer_list<long> values)
{
    IntVector v;
    v.reserve(values.size());
    for (long x : values)
        v.emplace_back(x);
    return v;
}

IntVector add(const IntVector& a, const IntVector& b)
{
    if (a.size() != b.size())
        throw PreconditionError("vector add: size mismatch");
    IntVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

IntVector sub(const IntVector& a, const IntVector& b)
{
    if (a.size() != b.size())
        throw PreconditionError("vector sub: size mismatch");
    IntVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] - b[i];
    return c;
}

IntVector scale(const IntVector& a, const Integer& k)
{
    IntVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] * k;
    return c;
}

Integer dot(const IntVector& a, const IntVector& b)
{
    if (a.size() != b.size())
        throw PreconditionError("dot: size mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

bool is_zero(const IntVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

bool is_nonnegative(const IntVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x >= 0; });
}

Integer content(const IntVector& v)
{
    Integer g = 0;
    for (const auto& x : v)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntVector primitive_part(const IntVector& v)
{
    Integer g = content(v);
    if (g <= 1)
        return v;
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        mpz_divexact(out[i].get_mpz_t(), v[i].get_mpz_t(), g.get_mpz_t());
    return out;
}

IntVector primitive_integer_vector(const RatVector& v)
{
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational t = v[i] * Rational(l);
        out[i] = t.get_num();
    }
    return primitive_part(out);
}

bool lex_less(const IntVector& a, const IntVector& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_canonical(std::vector<IntVector>& vs)
{
    std::sort(vs.begin(), vs.end(), lex_less);
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SnfState {
    IntMatrix S, U, U_inv, V, V_inv;

    void row_swap(std::size_t a, std::size_t b)
    {
        S.swap_rows(a, b);
        U.swap_rows(a, b);
        U_inv.swap_columns(a, b);
    }
    // row[dst] += q * row[src]
    void row_add(std::size_t dst, std::size_t src, const Integer& q)
    {
        S.add_row_multiple(dst, src, q);
        U.add_row_multiple(dst, src, q);
        U_inv.add_column_multiple(src, dst, -q);
    }
    void row_negate(std::size_t i)
    {
        S.negate_row(i);
        U.negate_row(i);
        U_inv.negate_column(i);
    }
    void col_swap(std::size_t a, std::size_t b)
    {
        S.swap_columns(a, b);
        V.swap_columns(a, b);
        V_inv.swap_rows(a, b);
    }
    // col[dst] += q * col[src]
    void col_add(std::size_t dst, std::size_t src, const Integer& q)
    {
        S.add_column_multiple(dst, src, q);
        V.add_column_multiple(dst, src, q);
        V_inv.add_row_multiple(src, dst, -q);
    }
};

}  // namespace

std::size_t SnfDecomposition::rank() const
{
    std::size_t r = 0;
    std::size_t k = std::min(S.rows(), S.cols());
    for (std::size_t i = 0; i < k; ++i)
        if (S(i, i) != 0)
            ++r;
    return r;
}

IntVector SnfDecomposition::diagonal() const
{
    std::size_t k = std::min(S.rows(), S.cols());
    IntVector d(k);
    for (std::size_t i = 0; i < k; ++i)
        d[i] = S(i, i);
    return d;
}

SnfDecomposition smith_normal_form(const IntMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    SnfState st{a, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
                IntMatrix::identity(n)};
    IntMatrix& S = st.S;
    const std::size_t k = std::min(m, n);

    for (std::size_t t = 0; t < k; ++t) {
        bool exhausted = false;
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (S(i, j) == 0)
                        continue;
                    if (pi == m || mpz_cmpabs(S(i, j).get_mpz_t(), S(pi, pj).get_mpz_t()) < 0) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) {
                exhausted = true;
                break;
            }
            st.row_swap(t, pi);
            st.col_swap(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (S(i, t) == 0)
                    continue;
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
                st.row_add(i, t, -q);
                if (S(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S(t, j) == 0)
                    continue;
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
                st.col_add(j, t, -q);
                if (S(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            // Divisibility chain: fold an offending row into the pivot row.
            std::size_t bad_row = m;
            for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == m)
                break;
            st.row_add(t, bad_row, 1);
        }
        if (exhausted)
            break;
        if (S(t, t) < 0)
            st.row_negate(t);
    }
    return SnfDecomposition{std::move(st.U), std::move(st.S), std::move(st.V),
                            std::move(st.U_inv), std::move(st.V_inv)};
}

// ---------------------------------------------------------------------------
// Hermite normal form

HnfDecomposition hermite_normal_form(const IntMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix H = a;
    IntMatrix W = IntMatrix::identity(m);
    IntMatrix W_inv = IntMatrix::identity(m);

    auto row_swap = [&](std::size_t x, std::size_t y) {
        H.swap_rows(x, y);
        W.swap_rows(x, y);
        W_inv.swap_columns(x, y);
    };
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
        H.add_row_multiple(dst, src, q);
        W.add_row_multiple(dst, src, q);
        W_inv.add_column_multiple(src, dst, -q);
    };
    auto row_negate = [&](std::size_t i) {
        H.negate_row(i);
        W.negate_row(i);
        W_inv.negate_column(i);
    };

    std::size_t p = 0;
    for (std::size_t c = 0; c < n && p < m; ++c) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = p; i < m; ++i)
                if (H(i, c) != 0 && (best == m || mpz_cmpabs(H(i, c).get_mpz_t(), H(best, c).get_mpz_t()) < 0))
                    best = i;
            if (best == m)
                break;
            row_swap(p, best);
            bool clean = true;
            for (std::size_t i = p + 1; i < m; ++i) {
                if (H(i, c) == 0)
                    continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(p, c).get_mpz_t());
                row_add(i, p, -q);
                if (H(i, c) != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (H(p, c) == 0)
            continue;
        if (H(p, c) < 0)
            row_negate(p);
        for (std::size_t i = 0; i < p; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(p, c).get_mpz_t());
            row_add(i, p, -q);
        }
        ++p;
    }
    return HnfDecomposition{std::move(H), std::move(W), std::move(W_inv), p};
}

// ---------------------------------------------------------------------------
// Abelian groups

Integer AbelianGroup::torsion_order() const
{
    Integer o = 1;
    for (const auto& d : invariant_factors)
        o *= d;
    return o;
}

IntVector AbelianGroup::reduce(IntVector coords) const
{
    for (std::size_t k = 0; k < invariant_factors.size(); ++k) {
        Integer& c = coords[free_rank + k];
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), invariant_factors[k].get_mpz_t());
    }
    return coords;
}

IntVector AbelianGroup::project(const IntVector& ambient) const
{
    if (ambient.size() != ambient_dim)
        throw PreconditionError("AbelianGroup::project: dimension mismatch");
    return reduce(projection * ambient);
}

IntVector AbelianGroup::free_part(const IntVector& ambient) const
{
    IntVector full = project(ambient);
    full.resize(free_rank);
    return full;
}

IntVector AbelianGroup::torsion_part(const IntVector& ambient) const
{
    IntVector full = project(ambient);
    return IntVector(full.begin() + static_cast<std::ptrdiff_t>(free_rank), full.end());
}

IntVector AbelianGroup::lift_coords(const IntVector& coords) const
{
    if (coords.size() != free_rank + invariant_factors.size())
        throw PreconditionError("AbelianGroup::lift_coords: dimension mismatch");
    return lift * coords;
}

std::string AbelianGroup::describe() const
{
    std::ostringstream os;
    bool first = true;
    if (free_rank == 1) {
        os << "Z";
        first = false;
    } else if (free_rank > 1) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (const auto& d : invariant_factors) {
        if (!first)
            os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

AbelianGroup cokernel_structure(const IntMatrix& a)
{
    const std::size_t m = a.rows();
    SnfDecomposition snf = smith_normal_form(a);
    const std::size_t k = std::min(a.rows(), a.cols());

    std::vector<std::size_t> free_idx, tors_idx;
    for (std::size_t i = 0; i < m; ++i) {
        Integer d = i < k ? snf.S(i, i) : Integer(0);
        if (d == 0)
            free_idx.push_back(i);
        else if (d != 1)
            tors_idx.push_back(i);
    }

    AbelianGroup g;
    g.ambient_dim = m;
    g.free_rank = free_idx.size();
    for (std::size_t i : tors_idx)
        g.invariant_factors.push_back(snf.S(i, i));

    // Canonical free coordinates: Hermite-reduce the free rows of U.
    IntMatrix free_rows = snf.U.select_rows(free_idx);
    IntMatrix free_lift = snf.U_inv.select_columns(free_idx);
    if (!free_idx.empty()) {
        HnfDecomposition h = hermite_normal_form(free_rows);
        free_rows = h.H;
        free_lift = free_lift * h.W_inv;
    }
    IntMatrix tors_rows = snf.U.select_rows(tors_idx);
    IntMatrix tors_lift = snf.U_inv.select_columns(tors_idx);

    const std::size_t dim = free_idx.size() + tors_idx.size();
    g.projection = IntMatrix(dim, m);
    g.lift = IntMatrix(m, dim);
    for (std::size_t r = 0; r < free_idx.size(); ++r)
        for (std::size_t j = 0; j < m; ++j) {
            g.projection(r, j) = free_rows(r, j);
            g.lift(j, r) = free_lift(j, r);
        }
    for (std::size_t r = 0; r < tors_idx.size(); ++r) {
        const Integer& d = g.invariant_factors[r];
        for (std::size_t j = 0; j < m; ++j) {
            Integer x = tors_rows(r, j);
            mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
            g.projection(free_idx.size() + r, j) = x;
            g.lift(j, free_idx.size() + r) = tors_lift(j, r);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Kernels and membership

std::vector<IntVector> kernel_basis(const IntMatrix& a)
{
    const std::size_t n = a.cols();
    SnfDecomposition snf = smith_normal_form(a);
    const std::size_t r = snf.rank();
    std::vector<IntVector> raw;
    for (std::size_t j = r; j < n; ++j)
        raw.push_back(snf.V.column(j));
    if (raw.empty())
        return {};
    HnfDecomposition h = hermite_normal_form(IntMatrix::from_rows(raw, n));
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < h.rank; ++i)
        basis.push_back(h.H.row(i));
    return basis;
}

LatticeSolver::LatticeSolver(const IntMatrix& cols)
    : rows_(cols.rows()), cols_(cols.cols()), snf_(smith_normal_form(cols)), rank_(snf_.rank())
{
}

std::optional<IntVector> LatticeSolver::solve(const IntVector& v) const
{
    if (v.size() != rows_)
        throw PreconditionError("lattice_membership: dimension mismatch");
    if (cols_ == 0) {
        if (is_zero(v))
            return IntVector{};
        return std::nullopt;
    }
    IntVector w = snf_.U * v;
    IntVector y(cols_, Integer(0));
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i < rank_) {
            const Integer& d = snf_.S(i, i);
            if (!mpz_divisible_p(w[i].get_mpz_t(), d.get_mpz_t()))
                return std::nullopt;
            mpz_divexact(y[i].get_mpz_t(), w[i].get_mpz_t(), d.get_mpz_t());
        } else if (w[i] != 0) {
            return std::nullopt;
        }
    }
    return snf_.V * y;
}

std::optional<IntVector> lattice_membership(const IntVector& v, const IntMatrix& cols)
{
    return LatticeSolver(cols).solve(v);
}

std::size_t rank(const IntMatrix& a) { return hermite_normal_form(a).rank; }

IntMatrix saturated_span_basis(const IntMatrix& cols)
{
    const std::size_t m = cols.rows();
    std::vector<IntVector> normals = kernel_basis(cols.transpose());
    if (normals.empty())
        return IntMatrix::identity(m);
    std::vector<IntVector> basis = kernel_basis(IntMatrix::from_rows(normals, m));
    return IntMatrix::from_columns(basis, m);
}

}  // namespace logmonoid
