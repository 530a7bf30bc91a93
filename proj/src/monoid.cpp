#include "logmonoid/monoid.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "logmonoid/hilbert.hpp"
#include "logmonoid/lp.hpp"

namespace logmonoid {

struct MonoidPresentation::Impl {
    std::size_t n = 0;
    std::vector<Relation> relations;
    std::vector<std::string> labels;
    IntMatrix matrix;
    AbelianGroup group;
    LatticeSolver lattice;

    mutable std::once_flag grading_once;
    mutable std::optional<IntVector> grading;

    Impl(std::size_t n_, std::vector<Relation> rels, std::vector<std::string> labs, IntMatrix m)
        : n(n_), relations(std::move(rels)), labels(std::move(labs)), matrix(std::move(m)),
          group(cokernel_structure(matrix)), lattice(matrix)
    {
    }
};

namespace {

IntMatrix build_relation_matrix(std::size_t n, const std::vector<Relation>& rels)
{
    IntMatrix m(n, rels.size());
    for (std::size_t j = 0; j < rels.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            m(i, j) = rels[j].lhs[i] - rels[j].rhs[i];
    return m;
}

}  // namespace

MonoidPresentation::MonoidPresentation() : MonoidPresentation(0, {}) {}

MonoidPresentation::MonoidPresentation(std::size_t n_gens, std::vector<Relation> relations,
                                       std::vector<std::string> labels)
{
    for (const auto& r : relations) {
        if (r.lhs.size() != n_gens || r.rhs.size() != n_gens)
            throw PreconditionError("relation has wrong length for " + std::to_string(n_gens) +
                                    " generators");
        if (!is_nonnegative(r.lhs) || !is_nonnegative(r.rhs))
            throw PreconditionError("relation entries must be natural numbers");
    }
    if (labels.empty()) {
        for (std::size_t i = 0; i < n_gens; ++i)
            labels.push_back("e" + std::to_string(i + 1));
    }
    if (labels.size() != n_gens)
        throw PreconditionError("label count does not match generator count");
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (l.empty() || !seen.insert(l).second)
            throw PreconditionError("generator labels must be nonempty and distinct");
    IntMatrix m = build_relation_matrix(n_gens, relations);
    impl_ = std::make_shared<const Impl>(n_gens, std::move(relations), std::move(labels), std::move(m));
}

MonoidPresentation MonoidPresentation::free(std::size_t n) { return MonoidPresentation(n, {}); }

std::size_t MonoidPresentation::n_gens() const { return impl_->n; }
const std::vector<Relation>& MonoidPresentation::relations() const { return impl_->relations; }
const std::vector<std::string>& MonoidPresentation::labels() const { return impl_->labels; }
const IntMatrix& MonoidPresentation::relation_matrix() const { return impl_->matrix; }
const AbelianGroup& MonoidPresentation::group() const { return impl_->group; }

IntVector MonoidPresentation::gp_image(const IntVector& x) const { return impl_->group.project(x); }

std::optional<IntVector> MonoidPresentation::relation_combination(const IntVector& v) const
{
    return impl_->lattice.solve(v);
}

IntVector MonoidPresentation::free_image(const IntVector& x) const
{
    return impl_->group.free_part(x);
}

const std::optional<IntVector>& MonoidPresentation::grading() const
{
    std::call_once(impl_->grading_once, [this] {
        const AbelianGroup& g = impl_->group;
        LinearSystem sys(g.free_rank);
        for (std::size_t i = 0; i < impl_->n; ++i) {
            IntVector gamma = g.free_part(unit_vector(impl_->n, i));
            if (!is_zero(gamma))
                sys.add_weak(gamma, Integer(1));
        }
        auto beta = lp_feasible(sys);
        if (beta)
            impl_->grading = primitive_integer_vector(*beta);
    });
    return impl_->grading;
}

bool MonoidPresentation::same_data(const MonoidPresentation& other) const
{
    return impl_ == other.impl_ || (impl_->n == other.impl_->n && impl_->relations == other.impl_->relations);
}

std::string MonoidPresentation::format_vector(const IntVector& x) const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0)
            continue;
        Integer c = x[i];
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << '-';
        Integer a = abs(c);
        if (a != 1)
            os << a.get_str();
        os << impl_->labels[i];
        first = false;
    }
    if (first)
        os << '0';
    return os.str();
}

std::string MonoidPresentation::to_string() const
{
    std::ostringstream os;
    os << '<';
    for (std::size_t i = 0; i < impl_->n; ++i)
        os << (i ? "," : "") << impl_->labels[i];
    if (!impl_->relations.empty()) {
        os << " | ";
        for (std::size_t j = 0; j < impl_->relations.size(); ++j) {
            if (j)
                os << ", ";
            os << format_vector(impl_->relations[j].lhs) << " = " << format_vector(impl_->relations[j].rhs);
        }
    }
    os << '>';
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PresentationParser {
public:
    explicit PresentationParser(const std::string& s) : s_(s) {}

    MonoidPresentation parse()
    {
        skip();
        bool bracket = accept('<');
        std::vector<std::string> labels;
        skip();
        if (!at_end() && peek() != '|' && peek() != '>') {
            for (;;) {
                skip();
                std::size_t at = pos_;
                std::string id = identifier();
                if (index_.count(id))
                    throw ParseError("duplicate generator '" + id + "'", at);
                index_[id] = labels.size();
                labels.push_back(id);
                skip();
                if (!accept(','))
                    break;
            }
        }
        std::vector<Relation> rels;
        skip();
        if (accept('|')) {
            skip();
            while (!at_end() && peek() != '>') {
                Relation r;
                r.lhs = sum(labels.size());
                skip();
                expect('=');
                r.rhs = sum(labels.size());
                rels.push_back(std::move(r));
                skip();
                if (!accept(',') && !accept(';'))
                    break;
                skip();
            }
        }
        skip();
        if (bracket)
            expect('>');
        skip();
        if (!at_end())
            throw ParseError("unexpected trailing input", pos_);
        const std::size_t n = labels.size();
        return MonoidPresentation(n, std::move(rels), std::move(labels));
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    void skip()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool accept(char c)
    {
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        skip();
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }
    std::string identifier()
    {
        if (at_end() || !ident_start(peek()))
            throw ParseError("expected generator name", pos_);
        std::size_t b = pos_;
        while (!at_end() && ident_char(peek()))
            ++pos_;
        return s_.substr(b, pos_ - b);
    }
    IntVector sum(std::size_t n)
    {
        IntVector v(n, Integer(0));
        for (;;) {
            skip();
            std::size_t at = pos_;
            std::string digits;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                digits += s_[pos_++];
            skip();
            if (!at_end() && peek() == '*') {
                if (digits.empty())
                    throw ParseError("'*' without coefficient", pos_);
                ++pos_;
                skip();
            }
            if (!at_end() && ident_start(peek())) {
                std::size_t id_at = pos_;
                std::string id = identifier();
                auto it = index_.find(id);
                if (it == index_.end())
                    throw ParseError("unknown generator '" + id + "'", id_at);
                v[it->second] += digits.empty() ? Integer(1) : Integer(digits);
            } else if (digits.empty()) {
                throw ParseError("expected a term", at);
            } else if (Integer(digits) != 0) {
                throw ParseError("bare constant must be 0", at);
            }
            skip();
            if (!accept('+'))
                return v;
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> index_;
};

}  // namespace

MonoidPresentation parse_presentation(const std::string& text) { return PresentationParser(text).parse(); }

// ---------------------------------------------------------------------------
// Elements

MonoidElement::MonoidElement(MonoidPresentation owner, IntVector repr)
    : owner_(std::move(owner)), repr_(std::move(repr))
{
    if (repr_.size() != owner_.n_gens())
        throw PreconditionError("element representative has wrong length");
    if (!is_nonnegative(repr_))
        throw PreconditionError("element representative must lie in N^I");
}

MonoidElement MonoidElement::zero(const MonoidPresentation& owner)
{
    return MonoidElement(owner, zero_vector(owner.n_gens()));
}

MonoidElement MonoidElement::generator(const MonoidPresentation& owner, std::size_t i)
{
    return MonoidElement(owner, unit_vector(owner.n_gens(), i));
}

MonoidElement MonoidElement::operator+(const MonoidElement& other) const
{
    if (!owner_.same_data(other.owner_))
        throw OwnerMismatch("adding elements of different monoids");
    return MonoidElement(owner_, add(repr_, other.repr_));
}

MonoidElement MonoidElement::times(const Integer& k) const
{
    if (k < 0)
        throw PreconditionError("monoid elements can only be scaled by naturals");
    return MonoidElement(owner_, scale(repr_, k));
}

AbelianGroup groupification(const MonoidPresentation& p) { return p.group(); }

bool element_eq(const MonoidElement& x, const MonoidElement& y)
{
    if (!x.owner().same_data(y.owner()))
        throw OwnerMismatch("comparing elements of different monoids");
    return x.owner().relation_combination(sub(x.repr(), y.repr())).has_value();
}

bool is_zero(const MonoidElement& x) { return is_zero(x.key()); }

std::size_t default_membership_bound()
{
    if (const char* env = std::getenv("LOGMONOID_BOUND")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<std::size_t>(v);
    }
    return 64;
}

std::string to_string(MembershipResult::Status s)
{
    switch (s) {
    case MembershipResult::Status::Yes:
        return "yes";
    case MembershipResult::Status::No:
        return "no";
    case MembershipResult::Status::Unknown:
        return "unknown";
    }
    return "unknown";
}

namespace {

// Order of a torsion element given in torsion coordinates.
Integer torsion_element_order(const AbelianGroup& g, const IntVector& coords)
{
    Integer order = 1;
    for (std::size_t k = 0; k < g.invariant_factors.size(); ++k) {
        const Integer& d = g.invariant_factors[k];
        Integer c = coords[g.free_rank + k];
        Integer gc;
        mpz_gcd(gc.get_mpz_t(), d.get_mpz_t(), c.get_mpz_t());
        Integer part = d / gc;
        mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), part.get_mpz_t());
    }
    return order;
}

constexpr std::size_t kSearchNodeCap = 4'000'000;

}  // namespace

MembershipResult membership(const MonoidPresentation& p, const IntVector& g, std::size_t bound)
{
    const AbelianGroup& G = p.group();
    const std::size_t n = p.n_gens();
    const std::size_t f = G.free_rank;
    if (g.size() != f + G.torsion_rank())
        throw PreconditionError("membership: element has wrong number of group coordinates");
    const IntVector target = G.reduce(g);

    MembershipResult res;
    if (is_zero(target)) {
        res.status = MembershipResult::Status::Yes;
        res.witness = zero_vector(n);
        return res;
    }

    std::vector<IntVector> image(n);
    std::vector<std::size_t> free_gens, torsion_gens;
    for (std::size_t i = 0; i < n; ++i) {
        image[i] = G.project(unit_vector(n, i));
        IntVector fi(image[i].begin(), image[i].begin() + static_cast<std::ptrdiff_t>(f));
        if (!is_zero(fi))
            free_gens.push_back(i);
        else if (!is_zero(image[i]))
            torsion_gens.push_back(i);
    }

    // Cone test: the free part of g must be a nonnegative combination.
    IntVector target_free(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(f));
    {
        LinearSystem cone(free_gens.size());
        for (std::size_t c = 0; c < f; ++c) {
            IntVector row(free_gens.size());
            for (std::size_t k = 0; k < free_gens.size(); ++k)
                row[k] = image[free_gens[k]][c];
            cone.add_equality(row, target_free[c]);
        }
        for (std::size_t k = 0; k < free_gens.size(); ++k)
            cone.add_weak(unit_vector(free_gens.size(), k));
        if (!lp_feasible(cone)) {
            res.status = MembershipResult::Status::No;
            res.reason = "free part lies outside the cone of the generators";
            return res;
        }
    }

    const std::optional<IntVector>& beta = p.grading();
    std::vector<Integer> weight(n, Integer(0));
    Integer budget = 0;
    if (beta) {
        for (std::size_t i : free_gens) {
            IntVector fi(image[i].begin(), image[i].begin() + static_cast<std::ptrdiff_t>(f));
            weight[i] = dot(*beta, fi);
        }
        budget = dot(*beta, target_free);
    }
    std::vector<Integer> tors_order(n, Integer(0));
    for (std::size_t i : torsion_gens)
        tors_order[i] = torsion_element_order(G, image[i]);

    std::vector<std::size_t> order = free_gens;
    order.insert(order.end(), torsion_gens.begin(), torsion_gens.end());

    IntVector x(n, Integer(0));
    IntVector cur(f + G.torsion_rank(), Integer(0));
    bool truncated = false, capped = false, found = false;
    std::size_t nodes = 0;

    std::function<void(std::size_t, const Integer&, std::size_t)> dfs =
        [&](std::size_t idx, const Integer& rem, std::size_t used) {
            if (found || capped)
                return;
            if (++nodes > kSearchNodeCap) {
                capped = true;
                return;
            }
            if (beta && idx == free_gens.size() && rem != 0)
                return;
            if (idx == order.size()) {
                if (G.reduce(cur) == target)
                    found = true;
                return;
            }
            const std::size_t i = order[idx];
            Integer limit;
            bool is_free = idx < free_gens.size();
            if (is_free && beta) {
                limit = rem / weight[i];
            } else if (is_free) {
                limit = Integer(static_cast<unsigned long>(bound - used));
                truncated = true;  // no grading: the search space is not provably finite
            } else {
                limit = tors_order[i] - 1;
            }
            Integer room(static_cast<unsigned long>(bound - used));
            if (limit > room) {
                limit = room;
                truncated = true;
            }
            const std::size_t lim = limit.get_ui();
            for (std::size_t k = 0;; ++k) {
                x[i] = static_cast<unsigned long>(k);
                dfs(idx + 1, beta && is_free ? Integer(rem - weight[i] * Integer(static_cast<unsigned long>(k))) : rem,
                    used + k);
                if (found || capped)
                    return;
                if (k == lim)
                    break;
                for (std::size_t c = 0; c < cur.size(); ++c)
                    cur[c] += image[i][c];
            }
            for (std::size_t c = 0; c < cur.size(); ++c)
                cur[c] -= image[i][c] * Integer(static_cast<unsigned long>(lim));
            x[i] = 0;
        };
    dfs(0, budget, 0);

    if (found) {
        res.status = MembershipResult::Status::Yes;
        res.witness = x;
        if (G.reduce(p.gp_image(x)) != target)
            throw InvariantViolation("membership witness does not map to the target");
        return res;
    }
    if (!truncated && !capped) {
        res.status = MembershipResult::Status::No;
        res.reason = "exhausted the finite graded search space";
        return res;
    }
    res.status = MembershipResult::Status::Unknown;
    res.bound = bound;
    res.reason = capped ? "search node budget exhausted" : "coefficient-sum bound exhausted";
    return res;
}

// ---------------------------------------------------------------------------
// Sharpness

SharpnessResult is_sharp(const MonoidPresentation& p)
{
    const AbelianGroup& G = p.group();
    const std::size_t n = p.n_gens();
    SharpnessResult res;

    std::vector<IntVector> image(n);
    std::vector<std::size_t> free_gens;
    for (std::size_t i = 0; i < n; ++i) {
        image[i] = G.project(unit_vector(n, i));
        IntVector fi = G.free_part(unit_vector(n, i));
        if (!is_zero(fi)) {
            free_gens.push_back(i);
        } else if (!is_zero(image[i])) {
            // A nonzero torsion class in Q has an inverse in Q.
            Integer o = torsion_element_order(G, image[i]);
            res.sharp = false;
            res.unit_generator = i;
            res.unit_inverse = scale(unit_vector(n, i), o - 1);
            res.reason = "generator " + p.labels()[i] + " is a nonzero torsion class";
            return res;
        }
    }

    if (const auto& beta = p.grading()) {
        res.sharp = true;
        res.beta = IntVector(n, Integer(0));
        for (std::size_t i : free_gens)
            res.beta[i] = dot(*beta, G.free_part(unit_vector(n, i)));
        res.beta = primitive_part(res.beta);
        return res;
    }

    // Theorem of the alternative: lambda >= 0, sum > 0, sum lambda_i gamma_i = 0.
    const std::size_t k = free_gens.size();
    LinearSystem gordan(k);
    for (std::size_t c = 0; c < G.free_rank; ++c) {
        IntVector row(k);
        for (std::size_t a = 0; a < k; ++a)
            row[a] = image[free_gens[a]][c];
        gordan.add_equality(row);
    }
    for (std::size_t a = 0; a < k; ++a)
        gordan.add_weak(unit_vector(k, a));
    gordan.add_weak(IntVector(k, Integer(1)), Integer(1));
    auto lambda = lp_feasible(gordan);
    if (!lambda)
        throw InvariantViolation("neither a grading nor a unit certificate exists");
    IntVector lam = primitive_integer_vector(*lambda);
    IntVector y(n, Integer(0));
    Integer o = G.torsion_order();
    for (std::size_t a = 0; a < k; ++a)
        y[free_gens[a]] = lam[a] * o;
    if (!is_zero(G.project(y)))
        throw InvariantViolation("unit certificate does not sum to zero");
    std::size_t i = 0;
    while (y[i] == 0)
        ++i;
    res.sharp = false;
    res.unit_generator = i;
    res.unit_inverse = sub(y, unit_vector(n, i));
    res.reason = "generator " + p.labels()[i] + " is invertible";
    return res;
}

// ---------------------------------------------------------------------------
// Saturation and duals

MonoidPresentation presentation_of_generated(const std::vector<IntVector>& generators, std::size_t d,
                                             const std::string& label_prefix)
{
    const std::size_t k = generators.size();
    std::vector<Relation> rels;
    if (k > 0) {
        for (const auto& z : kernel_basis(IntMatrix::from_columns(generators, d))) {
            Relation r{IntVector(k, Integer(0)), IntVector(k, Integer(0))};
            for (std::size_t i = 0; i < k; ++i) {
                if (z[i] > 0)
                    r.lhs[i] = z[i];
                else
                    r.rhs[i] = -z[i];
            }
            rels.push_back(std::move(r));
        }
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i)
        labels.push_back(label_prefix + std::to_string(i + 1));
    return MonoidPresentation(k, std::move(rels), std::move(labels));
}

namespace {

std::vector<IntVector> free_images(const MonoidPresentation& p)
{
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < p.n_gens(); ++i)
        out.push_back(p.free_image(unit_vector(p.n_gens(), i)));
    return out;
}

void require_sharp(const MonoidPresentation& p, const char* what)
{
    SharpnessResult s = is_sharp(p);
    if (!s.sharp)
        throw NotSharp(std::string(what) + ": monoid is not sharp (" + s.reason + ")");
}

}  // namespace

SaturationResult saturate(const MonoidPresentation& p)
{
    require_sharp(p, "saturate");
    const AbelianGroup& G = p.group();
    const std::size_t n = p.n_gens();
    const std::size_t f = G.free_rank;

    SaturationResult res;
    res.hilbert_basis = hilbert_basis_of_generators(free_images(p), f);
    res.sharp_part = presentation_of_generated(res.hilbert_basis, f, "h");

    std::vector<std::size_t> tors_rows;
    for (std::size_t k = 0; k < G.torsion_rank(); ++k)
        tors_rows.push_back(f + k);
    res.torsion.ambient_dim = n;
    res.torsion.free_rank = 0;
    res.torsion.invariant_factors = G.invariant_factors;
    res.torsion.projection = G.projection.select_rows(tors_rows);
    res.torsion.lift = G.lift.select_columns(tors_rows);

    res.embedding = IntMatrix(f + G.torsion_rank(), n);
    for (std::size_t i = 0; i < n; ++i) {
        IntVector c = G.project(unit_vector(n, i));
        for (std::size_t r = 0; r < c.size(); ++r)
            res.embedding(r, i) = c[r];
    }

    const AbelianGroup& H = res.sharp_part.group();
    if (H.free_rank != f || !H.is_free())
        throw InvariantViolation("saturation: sharp part has the wrong groupification");
    if (!is_sharp(res.sharp_part).sharp)
        throw InvariantViolation("saturation: sharp part is not sharp");
    return res;
}

ConeMonoid dual_monoid(const MonoidPresentation& p)
{
    require_sharp(p, "dual_monoid");
    const std::size_t f = p.group().free_rank;
    std::vector<IntVector> gammas = free_images(p);
    std::vector<IntVector> rows;
    for (const auto& g : gammas)
        if (!is_zero(g))
            rows.push_back(g);

    ConeMonoid res;
    res.hilbert_basis = hilbert_basis(rows, f);
    res.presentation = presentation_of_generated(res.hilbert_basis, f, "w");
    res.pairing = IntMatrix(res.hilbert_basis.size(), p.n_gens());
    for (std::size_t a = 0; a < res.hilbert_basis.size(); ++a)
        for (std::size_t i = 0; i < p.n_gens(); ++i)
            res.pairing(a, i) = dot(res.hilbert_basis[a], gammas[i]);
    return res;
}

ConeMonoid double_dual(const MonoidPresentation& p)
{
    ConeMonoid dual = dual_monoid(p);
    const std::size_t f = p.group().free_rank;
    ConeMonoid res;
    res.hilbert_basis = hilbert_basis(dual.hilbert_basis, f);
    res.presentation = presentation_of_generated(res.hilbert_basis, f, "q");
    std::vector<IntVector> gammas = free_images(p);
    res.pairing = IntMatrix::from_columns(gammas, f);
    return res;
}

// ---------------------------------------------------------------------------
// Pushouts and node monoids

namespace {

IntVector apply_map(const GeneratorMap& f, const IntVector& x, std::size_t target_n)
{
    IntVector out(target_n, Integer(0));
    for (std::size_t b = 0; b < x.size(); ++b)
        if (x[b] != 0)
            out = add(out, scale(f[b], x[b]));
    return out;
}

void check_map(const MonoidPresentation& base, const MonoidPresentation& target, const GeneratorMap& f,
               const char* name)
{
    if (f.size() != base.n_gens())
        throw PreconditionError(std::string(name) + ": one image per base generator required");
    for (const auto& v : f)
        if (v.size() != target.n_gens() || !is_nonnegative(v))
            throw PreconditionError(std::string(name) + ": images must be N-vectors over the target generators");
    for (std::size_t j = 0; j < base.relations().size(); ++j) {
        const Relation& r = base.relations()[j];
        MonoidElement l(target, apply_map(f, r.lhs, target.n_gens()));
        MonoidElement rr(target, apply_map(f, r.rhs, target.n_gens()));
        if (!element_eq(l, rr))
            throw IllDefinedMap(std::string(name) + " does not respect base relation " + std::to_string(j + 1) +
                                " (" + base.format_vector(r.lhs) + " = " + base.format_vector(r.rhs) + ")");
    }
}

}  // namespace

MonoidPresentation pushout_int(const MonoidPresentation& p, const MonoidPresentation& p2,
                               const MonoidPresentation& base, const GeneratorMap& f, const GeneratorMap& f2)
{
    check_map(base, p, f, "first map");
    check_map(base, p2, f2, "second map");
    const std::size_t n1 = p.n_gens(), n2 = p2.n_gens(), n = n1 + n2;
    auto embed = [&](const IntVector& v, std::size_t offset) {
        IntVector out(n, Integer(0));
        for (std::size_t i = 0; i < v.size(); ++i)
            out[offset + i] = v[i];
        return out;
    };
    std::vector<Relation> rels;
    for (const auto& r : p.relations())
        rels.push_back({embed(r.lhs, 0), embed(r.rhs, 0)});
    for (const auto& r : p2.relations())
        rels.push_back({embed(r.lhs, n1), embed(r.rhs, n1)});
    for (std::size_t b = 0; b < base.n_gens(); ++b)
        rels.push_back({embed(f[b], 0), embed(f2[b], n1)});

    std::vector<std::string> labels = p.labels();
    std::set<std::string> used(labels.begin(), labels.end());
    for (std::string l : p2.labels()) {
        while (used.count(l))
            l += "'";
        used.insert(l);
        labels.push_back(l);
    }
    return MonoidPresentation(n, std::move(rels), std::move(labels));
}

MonoidPresentation node_monoid(const MonoidElement& rho)
{
    const MonoidPresentation& q = rho.owner();
    MonoidPresentation plane(2, {}, {"z", "w"});
    return pushout_int(q, plane, MonoidPresentation::free(1), {rho.repr()}, {to_int_vector({1, 1})});
}

std::optional<Integer> node_slope(const MonoidElement& rho, const MonoidElement& q1, const MonoidElement& q2)
{
    if (!rho.owner().same_data(q1.owner()) || !rho.owner().same_data(q2.owner()))
        throw OwnerMismatch("node_slope: elements of different monoids");
    const MonoidPresentation& q = rho.owner();
    IntMatrix cols = IntMatrix::from_columns({rho.repr()}, q.n_gens()).hcat(q.relation_matrix());
    auto z = lattice_membership(sub(q2.repr(), q1.repr()), cols);
    if (!z)
        return std::nullopt;
    return (*z)[0];
}

NodeEmbedding node_monoid_embedding(const MonoidElement& rho, const std::vector<NodeRequest>& requests,
                                    std::size_t window_degree)
{
    const MonoidPresentation& q = rho.owner();
    if (is_zero(rho))
        throw ZeroRho("node_monoid_embedding: rho is zero in Q");
    require_sharp(q, "node_monoid_embedding");
    const std::size_t I = q.n_gens();
    MonoidPresentation node = node_monoid(rho);

    NodeEmbedding res;
    res.window_degree = window_degree;
    auto image_of = [&](const IntVector& qq, const Integer& a, const Integer& b) {
        return std::make_pair(MonoidElement(q, add(qq, scale(rho.repr(), a))),
                              MonoidElement(q, add(qq, scale(rho.repr(), b))));
    };
    for (const auto& r : requests) {
        if (r.a < 0 || r.b < 0)
            throw PreconditionError("node_monoid_embedding: (a, b) must be natural");
        auto [x, y] = image_of(r.q, r.a, r.b);
        res.images.push_back({r, x, y});
    }

    // cols = [rho | relations]: q2 - q1 = c rho in Q^gp iff q2 - q1 lies in this lattice.
    IntMatrix rho_col = IntMatrix::from_columns({rho.repr()}, I);
    LatticeSolver law(rho_col.hcat(q.relation_matrix()));
    auto slope = [&](const IntVector& q1, const IntVector& q2) -> std::optional<Integer> {
        auto z = law.solve(sub(q2, q1));
        if (!z)
            return std::nullopt;
        return (*z)[0];
    };

    using Key = std::pair<IntVector, IntVector>;
    std::map<IntVector, Key> node_to_pair;
    std::map<Key, IntVector> pair_to_node;
    std::ostringstream diag;
    for_each_bounded_vector(I + 2, window_degree, [&](const IntVector& x) {
        IntVector qq(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(I));
        auto [u, v] = image_of(qq, x[I], x[I + 1]);
        Key k{u.key(), v.key()};
        IntVector nk = node.gp_image(x);
        auto [it, fresh] = node_to_pair.emplace(nk, k);
        if (!fresh && it->second != k) {
            res.well_defined = false;
            diag << "equal node elements map to different pairs at " << to_string(x) << "; ";
        }
        if (fresh) {
            auto [jt, fresh2] = pair_to_node.emplace(k, nk);
            if (!fresh2 && jt->second != nk) {
                res.injective = false;
                diag << "distinct node elements share the image of " << to_string(x) << "; ";
            }
        }
        if (!slope(u.repr(), v.repr())) {
            res.image_characterized = false;
            diag << "image of " << to_string(x) << " violates the slope law; ";
        }
        return true;
    });
    res.window_elements = node_to_pair.size();

    std::vector<IntVector> qs;
    for_each_bounded_vector(I, window_degree, [&](const IntVector& x) {
        qs.push_back(x);
        return true;
    });
    for (const auto& q1 : qs) {
        for (const auto& q2 : qs) {
            ++res.window_pairs;
            Key k{q.gp_image(q1), q.gp_image(q2)};
            auto c = slope(q1, q2);
            if (c) {
                // (q, q + c rho) has the explicit preimage [q1,(0,c)] or [q2,(-c,0)].
                IntVector pre = *c >= 0 ? q1 : q2;
                Integer a = *c >= 0 ? Integer(0) : Integer(-*c);
                Integer b = *c >= 0 ? *c : Integer(0);
                auto [u, v] = image_of(pre, a, b);
                if (u.key() != k.first || v.key() != k.second) {
                    res.image_characterized = false;
                    diag << "pair " << to_string(q1) << "," << to_string(q2) << " lacks its preimage; ";
                }
            } else if (pair_to_node.count(k)) {
                res.image_characterized = false;
                diag << "pair " << to_string(q1) << "," << to_string(q2) << " is hit without slope; ";
            }
        }
    }
    res.diagnostics = diag.str();
    return res;
}

// ---------------------------------------------------------------------------
// Tietze simplification

SimplifiedPresentation simplify_presentation(const MonoidPresentation& p, TietzeMode mode)
{
    const std::size_t n = p.n_gens();
    std::vector<Relation> rels = p.relations();
    std::vector<bool> alive(n, true);
    std::vector<IntVector> subst;
    for (std::size_t i = 0; i < n; ++i)
        subst.push_back(unit_vector(n, i));

    auto substitute = [&](IntVector& v, std::size_t g, const IntVector& expr) {
        if (v[g] == 0)
            return;
        Integer c = v[g];
        v[g] = 0;
        v = add(v, scale(expr, c));
    };

    for (;;) {
        std::vector<Relation> tidy;
        for (const auto& r : rels) {
            if (r.lhs == r.rhs)
                continue;
            bool dup = false;
            for (const auto& t : tidy)
                if ((t.lhs == r.lhs && t.rhs == r.rhs) || (t.lhs == r.rhs && t.rhs == r.lhs))
                    dup = true;
            if (!dup)
                tidy.push_back(r);
        }
        rels = std::move(tidy);

        std::size_t rel = rels.size(), gen = n;
        bool use_lhs = true;
        for (std::size_t j = 0; j < rels.size() && rel == rels.size(); ++j) {
            for (int side = 0; side < 2 && rel == rels.size(); ++side) {
                const IntVector& s = side == 0 ? rels[j].lhs : rels[j].rhs;
                const IntVector& o = side == 0 ? rels[j].rhs : rels[j].lhs;
                std::size_t nz = 0, g = n;
                for (std::size_t i = 0; i < n; ++i)
                    if (s[i] != 0) {
                        ++nz;
                        g = i;
                    }
                if (nz != 1 || s[g] != 1 || o[g] != 0 || !alive[g])
                    continue;
                if (mode == TietzeMode::ForcedZeros && !is_zero(o))
                    continue;
                rel = j;
                gen = g;
                use_lhs = side == 0;
            }
        }
        if (rel == rels.size())
            break;
        IntVector expr = use_lhs ? rels[rel].rhs : rels[rel].lhs;
        rels.erase(rels.begin() + static_cast<std::ptrdiff_t>(rel));
        for (auto& r : rels) {
            substitute(r.lhs, gen, expr);
            substitute(r.rhs, gen, expr);
        }
        for (auto& s : subst)
            substitute(s, gen, expr);
        alive[gen] = false;
    }

    SimplifiedPresentation out;
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i])
            out.kept.push_back(i);
    auto restrict = [&](const IntVector& v) {
        IntVector w;
        for (std::size_t i : out.kept)
            w.push_back(v[i]);
        return w;
    };
    std::vector<Relation> new_rels;
    for (const auto& r : rels)
        new_rels.push_back({restrict(r.lhs), restrict(r.rhs)});
    std::vector<std::string> labels;
    for (std::size_t i : out.kept)
        labels.push_back(p.labels()[i]);
    for (const auto& s : subst)
        out.substitution.push_back(restrict(s));
    out.presentation = MonoidPresentation(out.kept.size(), std::move(new_rels), std::move(labels));
    return out;
}

void for_each_bounded_vector(std::size_t n, std::size_t degree, const std::function<bool(const IntVector&)>& f)
{
    IntVector x(n, Integer(0));
    bool stop = false;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t rem) {
        if (stop)
            return;
        if (i + 1 >= n) {
            if (n == 0) {
                if (rem == 0 && !f(x))
                    stop = true;
                return;
            }
            x[i] = static_cast<unsigned long>(rem);
            if (!f(x))
                stop = true;
            x[i] = 0;
            return;
        }
        for (std::size_t k = rem + 1; k-- > 0;) {
            x[i] = static_cast<unsigned long>(k);
            rec(i + 1, rem - k);
            if (stop)
                break;
        }
        x[i] = 0;
    };
    for (std::size_t d = 0; d <= degree && !stop; ++d)
        rec(0, d);
}

}  // namespace logmonoid
