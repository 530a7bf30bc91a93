#pragma once

// Finitely presented fine commutative monoids: the image of N^I in
// Z^I / span{lhs_j - rhs_j}.

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logmonoid/intlin.hpp"

namespace logmonoid {

class NotSharp : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};
class OwnerMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};
class IllDefinedMap : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};
class ZeroRho : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};
/// Malformed textual presentation; carries the character offset.
class ParseError : public PreconditionError {
public:
    ParseError(const std::string& what, std::size_t position)
        : PreconditionError(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

struct Relation {
    IntVector lhs;
    IntVector rhs;
    friend bool operator==(const Relation&, const Relation&) = default;
};

class MonoidPresentation {
public:
    MonoidPresentation();
    MonoidPresentation(std::size_t n_gens, std::vector<Relation> relations,
                       std::vector<std::string> labels = {});

    /// N^n.
    static MonoidPresentation free(std::size_t n);

    std::size_t n_gens() const;
    const std::vector<Relation>& relations() const;
    const std::vector<std::string>& labels() const;

    /// n_gens x n_relations, column j = lhs_j - rhs_j.
    const IntMatrix& relation_matrix() const;
    /// Z^I / column span of the relation matrix, computed once.
    const AbelianGroup& group() const;
    /// Group coordinates of the image of x in Z^I.
    IntVector gp_image(const IntVector& x) const;
    /// z with relation_matrix() * z = v, if v lies in the relation lattice.
    std::optional<IntVector> relation_combination(const IntVector& v) const;
    /// Free (torsion-dropped) coordinates of the image of x.
    IntVector free_image(const IntVector& x) const;

    /// An integer functional on free coordinates that is >= 1 on every
    /// generator with nonzero free image, if one exists. Computed once.
    const std::optional<IntVector>& grading() const;

    /// Same generator count and relations (labels are ignored).
    bool same_data(const MonoidPresentation& other) const;

    /// "<e1,e2 | 4e1 = 6e2>"
    std::string to_string() const;
    std::string format_vector(const IntVector& x) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Parses "e1,e2 | 4e1 = 6e2, e1 + e2 = 2e3" (optional angle brackets,
/// relations separated by ',' or ';', "0" for the empty side).
MonoidPresentation parse_presentation(const std::string& text);

class MonoidElement {
public:
    MonoidElement(MonoidPresentation owner, IntVector repr);
    static MonoidElement zero(const MonoidPresentation& owner);
    static MonoidElement generator(const MonoidPresentation& owner, std::size_t i);

    const MonoidPresentation& owner() const { return owner_; }
    const IntVector& repr() const { return repr_; }
    /// Group coordinates; equal for equal elements.
    IntVector key() const { return owner_.gp_image(repr_); }

    MonoidElement operator+(const MonoidElement& other) const;
    MonoidElement times(const Integer& k) const;

private:
    MonoidPresentation owner_;
    IntVector repr_;
};

AbelianGroup groupification(const MonoidPresentation& p);

/// pi(x) == pi(y). Throws OwnerMismatch for elements of different presentations.
bool element_eq(const MonoidElement& x, const MonoidElement& y);
bool is_zero(const MonoidElement& x);

/// Coefficient-sum cap for bounded searches: LOGMONOID_BOUND or 64.
std::size_t default_membership_bound();

struct MembershipResult {
    enum class Status { Yes, No, Unknown };
    Status status = Status::Unknown;
    IntVector witness;      // Yes: x in N^I mapping to g
    std::size_t bound = 0;  // Unknown: the exhausted coefficient-sum bound
    std::string reason;     // No/Unknown: how the verdict was reached
};

std::string to_string(MembershipResult::Status s);

/// Decide whether the group element g (in groupification coordinates) lies in
/// the monoid.
MembershipResult membership(const MonoidPresentation& p, const IntVector& g,
                            std::size_t bound = default_membership_bound());

struct SharpnessResult {
    bool sharp = false;
    /// sharp: values beta(e_i) of a primitive integer functional vanishing on
    /// relations, >= 1 on every generator that is nonzero in the monoid.
    IntVector beta;
    /// not sharp: generator index e_i that is a nonzero unit, and an N^I vector
    /// y with e_i + y = 0.
    std::size_t unit_generator = 0;
    IntVector unit_inverse;
    std::string reason;
};

SharpnessResult is_sharp(const MonoidPresentation& p);

/// Presentation of the submonoid of Z^d generated by the given vectors,
/// relations from a kernel lattice basis.
MonoidPresentation presentation_of_generated(const std::vector<IntVector>& generators,
                                             std::size_t d, const std::string& label_prefix);

struct SaturationResult {
    /// Q^gp_tor: free rank 0, invariant factors of the groupification,
    /// projection from Z^I to torsion coordinates.
    AbelianGroup torsion;
    /// Hilbert basis of cone(Q) in Q^gp/tor = Z^free_rank, sorted.
    std::vector<IntVector> hilbert_basis;
    MonoidPresentation sharp_part;
    /// (free_rank + torsion_rank) x n_gens: column i holds the free and
    /// torsion coordinates of generator i.
    IntMatrix embedding;
};

SaturationResult saturate(const MonoidPresentation& p);

/// A cone monoid computed as a Hilbert basis together with its pairing
/// against the generators of the monoid it was derived from.
struct ConeMonoid {
    std::vector<IntVector> hilbert_basis;
    MonoidPresentation presentation;
    /// rows: Hilbert basis elements; cols: generators of the source monoid.
    IntMatrix pairing;
};

/// Q^dual = Hom(Q, N) as functionals on Q^gp/tor; pairing(a, i) = h_a(e_i).
ConeMonoid dual_monoid(const MonoidPresentation& p);

/// Q^dual-dual inside Q^gp/tor; pairing(a, i) is the a-th coordinate of e_i.
ConeMonoid double_dual(const MonoidPresentation& p);

/// Image of each generator of `base` as an N-vector over the target's generators.
using GeneratorMap = std::vector<IntVector>;

/// Integral amalgamated sum P +_base P'. Throws IllDefinedMap when f or f'
/// does not respect a relation of `base`.
MonoidPresentation pushout_int(const MonoidPresentation& p, const MonoidPresentation& p2,
                               const MonoidPresentation& base, const GeneratorMap& f,
                               const GeneratorMap& f2);

/// Q +_N N^2 with 1 -> rho in Q and 1 -> (1,1); generators of Q then z, w.
MonoidPresentation node_monoid(const MonoidElement& rho);

/// c in Z with q2 = q1 + c rho in Q^gp, if one exists.
std::optional<Integer> node_slope(const MonoidElement& rho, const MonoidElement& q1, const MonoidElement& q2);

struct NodeRequest {
    IntVector q;  // N^I preimage of an element of Q
    Integer a;
    Integer b;
};

struct NodeImage {
    NodeRequest request;
    MonoidElement first;   // q + a rho
    MonoidElement second;  // q + b rho
};

struct NodeEmbedding {
    std::vector<NodeImage> images;
    std::size_t window_degree = 0;
    std::size_t window_elements = 0;  // distinct classes of Q +_N N^2 tested
    std::size_t window_pairs = 0;     // pairs (q1, q2) tested for the image law
    bool well_defined = true;
    bool injective = true;
    bool image_characterized = true;
    std::string diagnostics;
};

/// [q,(a,b)] -> (q + a rho, q + b rho), with well-definedness, injectivity and
/// the image law {(q, q + c rho) : c in Z} checked on a degree window.
NodeEmbedding node_monoid_embedding(const MonoidElement& rho, const std::vector<NodeRequest>& requests,
                                    std::size_t window_degree = 6);

struct SimplifiedPresentation {
    MonoidPresentation presentation;
    /// kept[k] = original index of new generator k.
    std::vector<std::size_t> kept;
    /// substitution[i] expresses original generator i as an N-combination
    /// of the new generators.
    std::vector<IntVector> substitution;
};

enum class TietzeMode {
    ForcedZeros,  // only generators with a relation e_g = 0
    Full,         // any relation with one side exactly e_g, g absent from the other
};

SimplifiedPresentation simplify_presentation(const MonoidPresentation& p,
                                             TietzeMode mode = TietzeMode::Full);

/// Calls f on every x in N^n with coefficient sum <= degree, in graded
/// lexicographic order. f returns false to stop early.
void for_each_bounded_vector(std::size_t n, std::size_t degree,
                             const std::function<bool(const IntVector&)>& f);

}  // namespace logmonoid
