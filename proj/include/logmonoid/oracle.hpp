#pragma once

// Deliberately naive reference implementations used by the test suites.
// Nothing here calls the normal-form, LP or Hilbert-basis code of the main
// library; only the IntMatrix container and presentation data types are
// shared.

#include <set>
#include <stdexcept>
#include <vector>

#include "logmonoid/intlin.hpp"
#include "logmonoid/lp.hpp"
#include "logmonoid/monoid.hpp"

namespace logmonoid::oracle {

struct Bound {
    std::size_t degree = 6;
    std::size_t box = 10;
    std::size_t multiplier = 12;
};

class TooManyVariables : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Canonical representative of the class of v in Z^n / L, where L is the
/// lattice spanned by `relations` (computed with a private Hermite reduction).
class CosetReducer {
public:
    CosetReducer(std::size_t n, const std::vector<IntVector>& relations);
    IntVector reduce(IntVector v) const;
    bool equivalent(const IntVector& a, const IntVector& b) const;
    std::size_t dim() const { return n_; }

private:
    std::size_t n_;
    std::vector<IntVector> echelon_;  // rows in echelon form, positive pivots
    std::vector<std::size_t> pivots_;
};

/// Distinct classes of N^I vectors with coefficient sum <= b.degree, each
/// represented by its coset-reduced vector. Sorted.
std::set<IntVector> enumerate_elements(const MonoidPresentation& p, const Bound& b);

/// For each distinct element of degree <= b.degree, one N^I preimage.
std::vector<IntVector> element_preimages(const MonoidPresentation& p, const Bound& b);

/// Classes q of Q^gp represented by some v in Z^I with |v_i| <= b.box such
/// that m q lies in Q for some m <= b.multiplier. Membership of m q is decided
/// against the classes of N^I vectors of degree <= b.degree * b.multiplier.
/// Returned as coset-reduced representatives.
std::set<IntVector> saturation_bruteforce(const MonoidPresentation& p, const Bound& b);

/// Fourier-Motzkin verdict without witness reconstruction.
bool fm_feasible(const LinearSystem& sys);

/// Lattice points of {x : row . x >= 0 for all rows} with |x_i| <= box that
/// are nonzero and not a sum of two nonzero such points of the box. Sorted.
std::vector<IntVector> hilbert_bruteforce(const std::vector<IntVector>& inequalities,
                                          std::size_t dim, const Bound& b);

/// Inequalities {x : row . x >= 0} cutting out the cone generated by
/// `generators`, by Fourier-Motzkin elimination of the cone coefficients.
/// Rows are primitive; redundant rows may remain.
std::vector<IntVector> cone_inequalities(const std::vector<IntVector>& generators, std::size_t dim);

}  // namespace logmonoid::oracle
