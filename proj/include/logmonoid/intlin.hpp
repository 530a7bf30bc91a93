#pragma once

// Exact integer linear algebra: dense matrices over arbitrary-precision
// integers, Smith and Hermite normal forms, lattice kernels, cokernels and
// membership.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace logmonoid {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal cross-check fails; indicates a library bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
    static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);
    static IntMatrix from_int_rows(std::initializer_list<std::initializer_list<long>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Integer>& entries() const noexcept { return data_; }

    IntVector row(std::size_t i) const;
    IntVector column(std::size_t j) const;
    std::vector<IntVector> row_list() const;
    std::vector<IntVector> column_list() const;

    IntMatrix transpose() const;
    IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
    IntMatrix select_columns(const std::vector<std::size_t>& idx) const;
    /// [this | other], same row count.
    IntMatrix hcat(const IntMatrix& other) const;

    bool is_zero() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntVector operator*(const IntMatrix& a, const IntVector& v);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b);

    // Elementary operations used by the normal-form routines.
    void swap_rows(std::size_t a, std::size_t b);
    void swap_columns(std::size_t a, std::size_t b);
    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
    /// col[dst] += factor * col[src]
    void add_column_multiple(std::size_t dst, std::size_t src, const Integer& factor);
    void negate_row(std::size_t i);
    void negate_column(std::size_t j);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);
std::string to_string(const IntVector& v);

// Vector helpers.
IntVector zero_vector(std::size_t n);
IntVector unit_vector(std::size_t n, std::size_t i);
IntVector to_int_vector(std::initializer_list<long> values);
IntVector add(const IntVector& a, const IntVector& b);
IntVector sub(const IntVector& a, const IntVector& b);
IntVector scale(const IntVector& a, const Integer& k);
Integer dot(const IntVector& a, const IntVector& b);
bool is_zero(const IntVector& v);
bool is_nonnegative(const IntVector& v);
Integer content(const IntVector& v);
/// Divide by the content; zero stays zero.
IntVector primitive_part(const IntVector& v);
/// Clear denominators and divide by the content.
IntVector primitive_integer_vector(const RatVector& v);
/// Lexicographic order on entries; used for every canonically sorted output.
bool lex_less(const IntVector& a, const IntVector& b);
void sort_canonical(std::vector<IntVector>& vs);

/// U * A * V = S with U, V unimodular and S diagonal (d1 | d2 | ... , zeros last).
struct SnfDecomposition {
    IntMatrix U;
    IntMatrix S;
    IntMatrix V;
    IntMatrix U_inv;
    IntMatrix V_inv;

    std::size_t rank() const;
    /// Diagonal entries S(i,i) for i < min(rows, cols).
    IntVector diagonal() const;
};

SnfDecomposition smith_normal_form(const IntMatrix& a);

/// Row-style Hermite normal form: W * A = H, W unimodular, H in row echelon
/// form with positive pivots and entries above each pivot reduced into
/// [0, pivot). Zero rows are last.
struct HnfDecomposition {
    IntMatrix H;
    IntMatrix W;
    IntMatrix W_inv;
    std::size_t rank = 0;
};

HnfDecomposition hermite_normal_form(const IntMatrix& a);

/// Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk,
/// presented as a quotient of an ambient lattice Z^n.
struct AbelianGroup {
    std::size_t ambient_dim = 0;
    std::size_t free_rank = 0;
    IntVector invariant_factors;  // each >= 2, d1 | d2 | ...
    /// (free_rank + k) x ambient_dim; free coordinates first, torsion
    /// coordinates are meaningful modulo the matching invariant factor.
    IntMatrix projection;
    /// ambient_dim x (free_rank + k); column c is an ambient preimage of the
    /// c-th standard generator of the group.
    IntMatrix lift;

    std::size_t torsion_rank() const { return invariant_factors.size(); }
    Integer torsion_order() const;
    bool is_free() const { return invariant_factors.empty(); }

    /// Group coordinates of an ambient vector, torsion part reduced.
    IntVector project(const IntVector& ambient) const;
    IntVector free_part(const IntVector& ambient) const;
    IntVector torsion_part(const IntVector& ambient) const;
    IntVector reduce(IntVector coords) const;
    IntVector lift_coords(const IntVector& coords) const;

    /// "Z^2 + Z/2 + Z/6", "0" for the trivial group.
    std::string describe() const;
};

/// Z^rows / column-span(A).
AbelianGroup cokernel_structure(const IntMatrix& a);

/// Lattice basis of {x in Z^cols : A x = 0} in Hermite normal form.
std::vector<IntVector> kernel_basis(const IntMatrix& a);

/// z with cols * z = v, if v lies in the integer column span.
std::optional<IntVector> lattice_membership(const IntVector& v, const IntMatrix& cols);

/// Repeated lattice_membership queries against one fixed set of columns.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& cols);
    std::optional<IntVector> solve(const IntVector& v) const;
    std::size_t dim() const { return rows_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    SnfDecomposition snf_;
    std::size_t rank_ = 0;
};

/// Rank over Q.
std::size_t rank(const IntMatrix& a);

/// Basis (as columns) of the saturated lattice (Q-span of the columns) cap Z^rows.
IntMatrix saturated_span_basis(const IntMatrix& cols);

}  // namespace logmonoid
