#pragma once

// Systems of line bundles over a point. Every line is C with a chosen basis,
// so sections, isomorphisms and trivializations are scalars; the scalars
// used are exact units (formal radicals of positive rationals times roots of
// unity) and zero.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "logmonoid/logcurve.hpp"
#include "logmonoid/monoid.hpp"

namespace logmonoid {

class NoPreimageFound : public PreconditionError {
public:
    NoPreimageFound(const std::string& what, std::size_t bound) : PreconditionError(what), bound_(bound) {}
    std::size_t bound() const { return bound_; }

private:
    std::size_t bound_;
};
class DimensionMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// base^(1/root) * exp(2 pi i phase) with base > 0 rational, root >= 1 minimal
/// for the value and phase in [0, 1).
class ExactUnit {
public:
    ExactUnit();  // 1
    explicit ExactUnit(const Rational& base, unsigned long root = 1, const Rational& phase = 0);

    /// A nonzero rational, negative values get phase 1/2.
    static ExactUnit from_rational(const Rational& q);
    static ExactUnit root_of_unity(const Rational& phase);

    const Rational& base() const { return base_; }
    unsigned long root() const { return root_; }
    const Rational& phase() const { return phase_; }

    ExactUnit operator*(const ExactUnit& o) const;
    ExactUnit operator/(const ExactUnit& o) const;
    ExactUnit inverse() const;
    ExactUnit pow(const Integer& k) const;
    /// The root with phase / n.
    ExactUnit principal_root(unsigned long n) const;

    bool is_one() const;
    friend bool operator==(const ExactUnit& a, const ExactUnit& b);
    /// Canonical total order, for sorting and maps.
    friend bool operator<(const ExactUnit& a, const ExactUnit& b);

    /// "2", "-4", "3/2^(1/2)", "2*e(1/4)" where e(t) = exp(2 pi i t).
    std::string to_string() const;

private:
    void normalize();
    Rational base_;
    unsigned long root_;
    Rational phase_;
};

/// Exactly n distinct n-th roots of u, phases in increasing order.
std::vector<ExactUnit> unit_nth_roots(const ExactUnit& u, std::size_t n);

/// prod_i u_i^{k_i}.
ExactUnit unit_power_product(const std::vector<ExactUnit>& u, const IntVector& k);

class ExactScalar {
public:
    ExactScalar() = default;  // zero
    ExactScalar(const ExactUnit& u) : unit_(u) {}  // NOLINT: units are scalars
    static ExactScalar zero() { return {}; }

    bool is_zero() const { return !unit_.has_value(); }
    const ExactUnit& unit() const;
    ExactScalar operator*(const ExactScalar& o) const;
    ExactScalar pow(const Integer& k) const;  // k >= 0
    friend bool operator==(const ExactScalar& a, const ExactScalar& b) = default;
    std::string to_string() const;

private:
    std::optional<ExactUnit> unit_;
};

inline std::ostream& operator<<(std::ostream& os, const ExactUnit& u) { return os << u.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.to_string(); }

/// Sections s_i and relation isomorphisms phi_j in chosen bases, relative to
/// a presentation with relations a_j = b_j. A trivialization chi satisfies
/// chi^{a_j} = phi_j * chi^{b_j}.
struct SlbPointPresentation {
    MonoidPresentation presentation;
    std::vector<ExactScalar> sections;
    std::vector<ExactUnit> rel_units;

    /// Throws DimensionMismatch.
    void validate() const;
};

/// Rescale the basis of line i by 1/u_i: s_i -> u_i s_i and
/// phi_j -> phi_j * u^{-(a_j - b_j)}. Trivializations transform by chi_i / u_i.
SlbPointPresentation change_basis(const SlbPointPresentation& p, const std::vector<ExactUnit>& u);
std::vector<ExactUnit> transport_witness(const std::vector<ExactUnit>& chi, const std::vector<ExactUnit>& u);

struct ConsistencyResult {
    enum class Failure { None, Kernel, Support, Section };
    bool consistent = false;
    std::vector<ExactUnit> witness;  // chi, one per generator
    Failure failure = Failure::None;
    /// Kernel / Section: relation combination z and the unit that should be 1.
    IntVector certificate_z;
    ExactUnit certificate_value;
    /// Support: pi(x) = pi(y), x avoids zero sections, y does not.
    IntVector certificate_x;
    IntVector certificate_y;
    std::string reason;
};

std::string to_string(ConsistencyResult::Failure f);

ConsistencyResult consistency_check(const SlbPointPresentation& p);

/// chi satisfies both trivialization conditions for p.
bool is_valid_witness(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi);

/// prod (chi_i s_i)^{x_i} for the given preimage of q; other preimages one
/// relation step away are evaluated too and must agree.
ExactScalar realize_section(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const MonoidElement& q);
/// q in group coordinates; the preimage comes from a membership search.
ExactScalar realize_section(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const IntVector& q,
                            std::size_t bound = default_membership_bound());

struct LogmapSlbData {
    /// One unit per relation of the basic monoid.
    std::vector<ExactUnit> relation_units;
    /// One unit per forced-zero vertex generator (increasing generator
    /// index); defaults to the inverse of its relation unit.
    std::optional<std::vector<ExactUnit>> section_units;
};

/// Edge and degenerate vertex generators get zero sections.
SlbPointPresentation assemble_logmap_slb(const BasicMonoid& b, const LogmapSlbData& data);
/// All units 1.
LogmapSlbData trivial_logmap_data(const BasicMonoid& b);

struct SymplecticCheck {
    bool ok = false;
    bool tropical = false;
    bool consistent = false;
    TropicalResult tropical_result;
    ConsistencyResult consistency;
    std::string diagnostics;
};

SymplecticCheck symplectic_logmap_check(const BasicMonoid& b, const SlbPointPresentation& p);

/// A character of Q^gp_tor, given by its values on the invariant-factor
/// generators.
struct SaturationDatum {
    IntVector orders;
    std::vector<ExactUnit> values;
};

/// All |Q^gp_tor| characters of the torsion subgroup.
std::vector<SaturationDatum> torsion_characters(const MonoidPresentation& p);
/// Throws NotFeasible when the tropical condition fails.
std::vector<SaturationDatum> enumerate_saturation_data(const BasicMonoid& b);

}  // namespace logmonoid
