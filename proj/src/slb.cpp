#include "logmonoid/slb.hpp"

#include <numeric>
#include <sstream>

#include "logmonoid/lp.hpp"

namespace logmonoid {

namespace {

Integer floor_q(const Rational& q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational frac(const Rational& q) { return q - Rational(floor_q(q)); }

Integer ipow(const Integer& b, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Rational qpow(const Rational& b, unsigned long e)
{
    Rational r(ipow(b.get_num(), e), ipow(b.get_den(), e));
    r.canonicalize();
    return r;
}

std::optional<Integer> exact_root(const Integer& v, unsigned long n)
{
    Integer r;
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), n) == 0)
        return std::nullopt;
    return r;
}

unsigned long to_ulong(const Integer& k)
{
    if (!k.fits_ulong_p())
        throw PreconditionError("exponent too large for exact unit arithmetic");
    return k.get_ui();
}

}  // namespace

// ---------------------------------------------------------------------------
// Units

ExactUnit::ExactUnit() : base_(1), root_(1), phase_(0) {}

ExactUnit::ExactUnit(const Rational& base, unsigned long root, const Rational& phase)
    : base_(base), root_(root), phase_(phase)
{
    base_.canonicalize();
    phase_.canonicalize();
    if (base_ <= 0)
        throw PreconditionError("unit magnitude must be a positive rational");
    if (root_ == 0)
        throw PreconditionError("unit root index must be >= 1");
    normalize();
}

ExactUnit ExactUnit::from_rational(const Rational& q)
{
    if (q == 0)
        throw PreconditionError("zero is not a unit");
    return q > 0 ? ExactUnit(q) : ExactUnit(-q, 1, Rational(1, 2));
}

ExactUnit ExactUnit::root_of_unity(const Rational& phase) { return ExactUnit(1, 1, phase); }

void ExactUnit::normalize()
{
    phase_ = frac(phase_);
    if (base_ == 1)
        root_ = 1;
    // Pull out perfect powers until the root index is minimal.
    bool changed = true;
    while (changed && root_ > 1) {
        changed = false;
        for (unsigned long d = root_; d >= 2; --d) {
            if (root_ % d != 0)
                continue;
            auto num = exact_root(base_.get_num(), d);
            auto den = num ? exact_root(base_.get_den(), d) : std::nullopt;
            if (num && den) {
                base_ = Rational(*num, *den);
                base_.canonicalize();
                root_ /= d;
                changed = true;
                break;
            }
        }
    }
}

ExactUnit ExactUnit::operator*(const ExactUnit& o) const
{
    unsigned long l = std::lcm(root_, o.root_);
    return ExactUnit(qpow(base_, l / root_) * qpow(o.base_, l / o.root_), l, phase_ + o.phase_);
}

ExactUnit ExactUnit::operator/(const ExactUnit& o) const { return *this * o.inverse(); }

ExactUnit ExactUnit::inverse() const { return ExactUnit(1 / base_, root_, -phase_); }

ExactUnit ExactUnit::pow(const Integer& k) const
{
    if (k < 0)
        return inverse().pow(-k);
    unsigned long e = to_ulong(k);
    return ExactUnit(qpow(base_, e), root_, phase_ * Rational(k));
}

ExactUnit ExactUnit::principal_root(unsigned long n) const
{
    if (n == 0)
        throw PreconditionError("root index must be >= 1");
    return ExactUnit(base_, root_ * n, phase_ / Rational(static_cast<long>(n)));
}

bool ExactUnit::is_one() const { return base_ == 1 && phase_ == 0; }

bool operator==(const ExactUnit& a, const ExactUnit& b)
{
    return a.base_ == b.base_ && a.root_ == b.root_ && a.phase_ == b.phase_;
}

bool operator<(const ExactUnit& a, const ExactUnit& b)
{
    if (a.base_ != b.base_)
        return a.base_ < b.base_;
    if (a.root_ != b.root_)
        return a.root_ < b.root_;
    return a.phase_ < b.phase_;
}

std::string ExactUnit::to_string() const
{
    std::string mag = base_.get_str();
    if (root_ > 1) {
        if (base_.get_den() != 1)
            mag = "(" + mag + ")";
        mag += "^(1/" + std::to_string(root_) + ")";
    }
    if (phase_ == 0)
        return mag;
    if (phase_ == Rational(1, 2) && root_ == 1)
        return "-" + mag;
    return mag + "*e(" + phase_.get_str() + ")";
}

std::vector<ExactUnit> unit_nth_roots(const ExactUnit& u, std::size_t n)
{
    if (n == 0)
        throw PreconditionError("unit_nth_roots: n must be >= 1");
    ExactUnit w = u.principal_root(n);
    std::vector<ExactUnit> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(w * ExactUnit::root_of_unity(Rational(static_cast<long>(k), static_cast<long>(n))));
    return out;
}

ExactUnit unit_power_product(const std::vector<ExactUnit>& u, const IntVector& k)
{
    if (u.size() != k.size())
        throw DimensionMismatch("unit_power_product: length mismatch");
    ExactUnit acc;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (k[i] != 0)
            acc = acc * u[i].pow(k[i]);
    return acc;
}

const ExactUnit& ExactScalar::unit() const
{
    if (!unit_)
        throw PreconditionError("zero scalar has no unit part");
    return *unit_;
}

ExactScalar ExactScalar::operator*(const ExactScalar& o) const
{
    if (is_zero() || o.is_zero())
        return zero();
    return *unit_ * *o.unit_;
}

ExactScalar ExactScalar::pow(const Integer& k) const
{
    if (k < 0)
        throw PreconditionError("scalars are only raised to natural powers");
    if (k == 0)
        return ExactUnit();
    if (is_zero())
        return zero();
    return unit_->pow(k);
}

std::string ExactScalar::to_string() const { return is_zero() ? "0" : unit_->to_string(); }

// ---------------------------------------------------------------------------
// Presentations

void SlbPointPresentation::validate() const
{
    if (sections.size() != presentation.n_gens())
        throw DimensionMismatch("slb presentation: one section per generator expected");
    if (rel_units.size() != presentation.relations().size())
        throw DimensionMismatch("slb presentation: one unit per relation expected");
}

SlbPointPresentation change_basis(const SlbPointPresentation& p, const std::vector<ExactUnit>& u)
{
    p.validate();
    if (u.size() != p.presentation.n_gens())
        throw DimensionMismatch("change_basis: one unit per generator expected");
    SlbPointPresentation out = p;
    for (std::size_t i = 0; i < u.size(); ++i)
        out.sections[i] = p.sections[i] * ExactScalar(u[i]);
    const IntMatrix& m = p.presentation.relation_matrix();
    for (std::size_t j = 0; j < m.cols(); ++j)
        out.rel_units[j] = p.rel_units[j] / unit_power_product(u, m.column(j));
    return out;
}

std::vector<ExactUnit> transport_witness(const std::vector<ExactUnit>& chi, const std::vector<ExactUnit>& u)
{
    if (chi.size() != u.size())
        throw DimensionMismatch("transport_witness: length mismatch");
    std::vector<ExactUnit> out;
    for (std::size_t i = 0; i < chi.size(); ++i)
        out.push_back(chi[i] / u[i]);
    return out;
}

std::string to_string(ConsistencyResult::Failure f)
{
    switch (f) {
    case ConsistencyResult::Failure::None:
        return "none";
    case ConsistencyResult::Failure::Kernel:
        return "kernel";
    case ConsistencyResult::Failure::Support:
        return "support";
    case ConsistencyResult::Failure::Section:
        return "section";
    }
    return "none";
}

namespace {

std::vector<std::size_t> zero_sections(const SlbPointPresentation& p)
{
    std::vector<std::size_t> z;
    for (std::size_t i = 0; i < p.sections.size(); ++i)
        if (p.sections[i].is_zero())
            z.push_back(i);
    return z;
}

// w in im(M) with w <= 0 on the zero-section generators and w != 0 there,
// returned as w itself. Such a w means some x avoiding zero sections and some
// y meeting them have the same image.
std::optional<IntVector> support_violation(const SlbPointPresentation& p, const std::vector<std::size_t>& zeros)
{
    const IntMatrix& m = p.presentation.relation_matrix();
    if (zeros.empty() || m.cols() == 0)
        return std::nullopt;
    LinearSystem sys(m.cols());
    IntVector total(m.cols(), Integer(0));
    for (std::size_t i : zeros) {
        IntVector row = scale(m.row(i), -1);
        sys.add_weak(row);
        total = add(total, row);
    }
    sys.add_weak(total, 1);
    auto z = lp_feasible(sys);
    if (!z)
        return std::nullopt;
    return m * primitive_integer_vector(*z);
}

// Lattice basis of {z : (M z)_i = 0 for every zero-section generator i}.
std::vector<IntVector> section_lattice(const SlbPointPresentation& p, const std::vector<std::size_t>& zeros)
{
    const IntMatrix& m = p.presentation.relation_matrix();
    if (zeros.empty()) {
        std::vector<IntVector> basis;
        for (std::size_t j = 0; j < m.cols(); ++j)
            basis.push_back(unit_vector(m.cols(), j));
        return basis;
    }
    return kernel_basis(m.select_rows(zeros));
}

// prod (chi_i s_i)^{w_i}; w must vanish on zero-section generators.
ExactUnit section_value(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const IntVector& w)
{
    ExactUnit acc;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0)
            continue;
        acc = acc * (chi[i] * p.sections[i].unit()).pow(w[i]);
    }
    return acc;
}

void fill_support_certificate(ConsistencyResult& r, const IntVector& w)
{
    r.certificate_x = IntVector(w.size());
    r.certificate_y = IntVector(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        r.certificate_x[i] = w[i] > 0 ? w[i] : Integer(0);
        r.certificate_y[i] = w[i] < 0 ? Integer(-w[i]) : Integer(0);
    }
}

}  // namespace

ConsistencyResult consistency_check(const SlbPointPresentation& p)
{
    p.validate();
    const MonoidPresentation& q = p.presentation;
    const IntMatrix& m = q.relation_matrix();
    const std::size_t n = q.n_gens();
    ConsistencyResult out;

    // (K) phi^z = 1 on relation syzygies.
    for (const auto& z : kernel_basis(m)) {
        ExactUnit v = unit_power_product(p.rel_units, z);
        if (!v.is_one()) {
            out.failure = ConsistencyResult::Failure::Kernel;
            out.certificate_z = z;
            out.certificate_value = v;
            out.reason = "relation combination " + to_string(z) + " is trivial but its isomorphism is " +
                         v.to_string() + ", not 1";
            return out;
        }
    }

    // A trivialization: with U M V = S, the value on the k-th basis vector
    // of U^{-1} is a d_k-th root of phi^{V e_k}.
    std::vector<ExactUnit> chi(n);
    if (m.cols() > 0 && n > 0) {
        auto snf = smith_normal_form(m);
        std::vector<ExactUnit> f(n);
        for (std::size_t k = 0; k < snf.rank(); ++k) {
            Integer d = abs(snf.S(k, k));
            ExactUnit v = unit_power_product(p.rel_units, snf.V.column(k));
            if (snf.S(k, k) < 0)
                v = v.inverse();
            f[k] = v.principal_root(to_ulong(d));
        }
        for (std::size_t i = 0; i < n; ++i)
            chi[i] = unit_power_product(f, snf.U.column(i));
    }
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!(unit_power_product(chi, m.column(j)) == p.rel_units[j]))
            throw InvariantViolation("constructed trivialization violates relation " + std::to_string(j));

    const auto zeros = zero_sections(p);
    if (auto w = support_violation(p, zeros)) {
        out.failure = ConsistencyResult::Failure::Support;
        fill_support_certificate(out, *w);
        out.reason = "x = " + to_string(out.certificate_x) + " avoids zero sections but has the same image as y = " +
                     to_string(out.certificate_y);
        return out;
    }
    for (const auto& z : section_lattice(p, zeros)) {
        IntVector w = m * z;
        ExactUnit v = section_value(p, chi, w);
        if (!v.is_one()) {
            out.failure = ConsistencyResult::Failure::Section;
            out.certificate_z = z;
            out.certificate_value = v;
            out.reason = "sections disagree on the fiber of relation combination " + to_string(z) + " by the factor " +
                         v.to_string();
            return out;
        }
    }
    out.consistent = true;
    out.witness = std::move(chi);
    return out;
}

bool is_valid_witness(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi)
{
    p.validate();
    const IntMatrix& m = p.presentation.relation_matrix();
    if (chi.size() != p.presentation.n_gens())
        return false;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!(unit_power_product(chi, m.column(j)) == p.rel_units[j]))
            return false;
    const auto zeros = zero_sections(p);
    if (support_violation(p, zeros))
        return false;
    for (const auto& z : section_lattice(p, zeros))
        if (!section_value(p, chi, m * z).is_one())
            return false;
    return true;
}

namespace {

ExactScalar evaluate(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const IntVector& x)
{
    ExactScalar acc = ExactUnit();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            acc = acc * (ExactScalar(chi[i]) * p.sections[i]).pow(x[i]);
    return acc;
}

bool dominates(const IntVector& x, const IntVector& y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < y[i])
            return false;
    return true;
}

}  // namespace

ExactScalar realize_section(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const MonoidElement& q)
{
    p.validate();
    if (!q.owner().same_data(p.presentation))
        throw OwnerMismatch("realize_section: element of a different monoid");
    if (chi.size() != p.presentation.n_gens())
        throw DimensionMismatch("realize_section: one trivialization per generator expected");
    const IntVector& x = q.repr();
    ExactScalar value = evaluate(p, chi, x);
    // Second preimages: apply one relation in either direction.
    for (const auto& rel : p.presentation.relations()) {
        for (int dir = 0; dir < 2; ++dir) {
            const IntVector& from = dir == 0 ? rel.lhs : rel.rhs;
            const IntVector& to = dir == 0 ? rel.rhs : rel.lhs;
            if (from == to || !dominates(x, from))
                continue;
            if (!(evaluate(p, chi, add(sub(x, from), to)) == value))
                throw InvariantViolation("realize_section: value depends on the chosen preimage");
        }
    }
    return value;
}

ExactScalar realize_section(const SlbPointPresentation& p, const std::vector<ExactUnit>& chi, const IntVector& q,
                            std::size_t bound)
{
    auto m = membership(p.presentation, q, bound);
    if (m.status == MembershipResult::Status::No)
        throw PreconditionError("realize_section: element is not in the monoid");
    if (m.status == MembershipResult::Status::Unknown)
        throw NoPreimageFound("realize_section: no preimage within coefficient sum " + std::to_string(m.bound),
                              m.bound);
    return realize_section(p, chi, MonoidElement(p.presentation, m.witness));
}

// ---------------------------------------------------------------------------
// The slb presentation of a log map

LogmapSlbData trivial_logmap_data(const BasicMonoid& b)
{
    LogmapSlbData d;
    d.relation_units.assign(b.presentation.relations().size(), ExactUnit());
    d.section_units = std::vector<ExactUnit>(b.zero_relation.size(), ExactUnit());
    return d;
}

SlbPointPresentation assemble_logmap_slb(const BasicMonoid& b, const LogmapSlbData& data)
{
    const MonoidPresentation& q = b.presentation;
    if (data.relation_units.size() != q.relations().size())
        throw DimensionMismatch("assemble_logmap_slb: expected " + std::to_string(q.relations().size()) +
                                " relation units, got " + std::to_string(data.relation_units.size()));
    if (data.section_units && data.section_units->size() != b.zero_relation.size())
        throw DimensionMismatch("assemble_logmap_slb: expected " + std::to_string(b.zero_relation.size()) +
                                " section units, got " + std::to_string(data.section_units->size()));
    SlbPointPresentation p;
    p.presentation = q;
    p.rel_units = data.relation_units;
    p.sections.assign(q.n_gens(), ExactScalar::zero());
    std::size_t k = 0;
    for (const auto& [gen, rel] : b.zero_relation) {  // increasing generator index
        p.sections[gen] = data.section_units ? (*data.section_units)[k] : data.relation_units[rel].inverse();
        ++k;
    }
    return p;
}

SymplecticCheck symplectic_logmap_check(const BasicMonoid& b, const SlbPointPresentation& p)
{
    if (!p.presentation.same_data(b.presentation))
        throw PreconditionError("symplectic_logmap_check: slb presentation does not match the basic monoid");
    SymplecticCheck out;
    out.tropical_result = tropical_feasible(b);
    out.tropical = out.tropical_result.witness.has_value();
    out.consistency = consistency_check(p);
    out.consistent = out.consistency.consistent;
    out.ok = out.tropical && out.consistent;
    if (!out.tropical)
        out.diagnostics = "tropical condition fails: no map to N that is positive on every reduced generator";
    if (!out.consistent) {
        if (!out.diagnostics.empty())
            out.diagnostics += "; ";
        out.diagnostics += "analytic matching fails: " + out.consistency.reason;
    }
    return out;
}

std::vector<SaturationDatum> torsion_characters(const MonoidPresentation& p)
{
    const IntVector& d = p.group().invariant_factors;
    std::vector<SaturationDatum> out;
    std::vector<unsigned long> a(d.size(), 0);
    for (;;) {
        SaturationDatum s;
        s.orders = d;
        for (std::size_t k = 0; k < d.size(); ++k)
            s.values.push_back(ExactUnit::root_of_unity(Rational(Integer(a[k]), d[k])));
        out.push_back(std::move(s));
        std::size_t k = 0;
        for (; k < d.size(); ++k) {
            if (Integer(a[k] + 1) < d[k]) {
                ++a[k];
                break;
            }
            a[k] = 0;
        }
        if (k == d.size())
            break;
    }
    return out;
}

std::vector<SaturationDatum> enumerate_saturation_data(const BasicMonoid& b)
{
    if (!tropical_feasible(b).witness)
        throw NotFeasible("saturation data need the tropical condition");
    return torsion_characters(b.presentation);
}

}  // namespace logmonoid
