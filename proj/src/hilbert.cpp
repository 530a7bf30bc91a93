#include "logmonoid/hilbert.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "logmonoid/lp.hpp"

namespace logmonoid {

namespace {

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& f)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    for (;;) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1))
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

bool all_nonnegative(const std::vector<IntVector>& rows, const IntVector& x)
{
    for (const auto& r : rows)
        if (dot(r, x) < 0)
            return false;
    return true;
}

// Primitive normals n with n . g >= 0 for all generators, each vanishing on
// a rank (d-1) subset: the facets of a full-dimensional cone in Z^d.
std::vector<IntVector> facets_of_full_cone(const std::vector<IntVector>& gens, std::size_t d)
{
    std::set<IntVector> out;
    for_each_combination(gens.size(), d - 1, [&](const std::vector<std::size_t>& s) {
        std::vector<IntVector> rows;
        for (std::size_t i : s)
            rows.push_back(gens[i]);
        auto ker = kernel_basis(IntMatrix::from_rows(rows, d));
        if (ker.size() != 1)
            return;
        IntVector n = primitive_part(ker[0]);
        bool pos = true, neg = true;
        for (const auto& g : gens) {
            Integer v = dot(n, g);
            if (v < 0)
                pos = false;
            if (v > 0)
                neg = false;
        }
        if (pos)
            out.insert(n);
        else if (neg)
            out.insert(scale(n, -1));
    });
    return {out.begin(), out.end()};
}

// Lattice points of the half-open parallelepiped spanned by the columns of an
// invertible d x d matrix B.
void parallelepiped_points(const IntMatrix& B, std::set<IntVector>& out)
{
    const std::size_t d = B.rows();
    SnfDecomposition snf = smith_normal_form(B);
    IntVector diag = snf.diagonal();
    IntVector y(d, Integer(0));
    for (;;) {
        // x = U^{-1} y is a coset representative of Z^d / B Z^d.
        IntVector x = snf.U_inv * y;
        // lambda = B^{-1} x = V S^{-1} U x; shift x by B floor(lambda).
        IntVector ux = snf.U * x;
        RatVector t(d);
        for (std::size_t i = 0; i < d; ++i)
            t[i] = Rational(ux[i], diag[i]);
        IntVector shift(d, Integer(0));
        for (std::size_t i = 0; i < d; ++i) {
            Rational lam = 0;
            for (std::size_t k = 0; k < d; ++k)
                if (snf.V(i, k) != 0)
                    lam += Rational(snf.V(i, k)) * t[k];
            Integer f;
            mpz_fdiv_q(f.get_mpz_t(), lam.get_num_mpz_t(), lam.get_den_mpz_t());
            shift[i] = f;
        }
        IntVector p = sub(x, B * shift);
        if (!is_zero(p))
            out.insert(p);

        std::size_t i = 0;
        while (i < d) {
            y[i] += 1;
            if (y[i] < diag[i])
                break;
            y[i] = 0;
            ++i;
        }
        if (i == d)
            return;
    }
}

// Hilbert basis of a full-dimensional pointed cone in Z^d.
std::vector<IntVector> full_dimensional_basis(const std::vector<IntVector>& rays, std::size_t d)
{
    std::vector<IntVector> facets = facets_of_full_cone(rays, d);
    std::set<IntVector> candidates(rays.begin(), rays.end());
    for_each_combination(rays.size(), d, [&](const std::vector<std::size_t>& s) {
        std::vector<IntVector> cols;
        for (std::size_t i : s)
            cols.push_back(rays[i]);
        IntMatrix B = IntMatrix::from_columns(cols, d);
        if (rank(B) != d)
            return;
        parallelepiped_points(B, candidates);
    });

    std::vector<IntVector> cand(candidates.begin(), candidates.end());
    std::vector<IntVector> basis;
    for (const auto& x : cand) {
        bool reducible = false;
        for (const auto& g : cand) {
            if (g == x)
                continue;
            if (all_nonnegative(facets, sub(x, g))) {
                reducible = true;
                break;
            }
        }
        if (!reducible)
            basis.push_back(x);
    }
    return basis;
}

}  // namespace

std::vector<IntVector> extreme_rays(const std::vector<IntVector>& inequalities, std::size_t dim)
{
    for (const auto& r : inequalities)
        if (r.size() != dim)
            throw PreconditionError("extreme_rays: inequality has wrong length");
    if (dim == 0)
        return {};
    IntMatrix A = IntMatrix::from_rows(inequalities, dim);
    if (rank(A) < dim)
        throw NonPointedCone("cone contains a line (inequalities do not have full rank)");
    std::set<IntVector> rays;
    for_each_combination(inequalities.size(), dim - 1, [&](const std::vector<std::size_t>& s) {
        auto ker = kernel_basis(A.select_rows(s));
        if (ker.size() != 1)
            return;
        IntVector r = primitive_part(ker[0]);
        if (all_nonnegative(inequalities, r))
            rays.insert(r);
        else if (all_nonnegative(inequalities, scale(r, -1)))
            rays.insert(scale(r, -1));
    });
    return {rays.begin(), rays.end()};
}

std::vector<IntVector> hilbert_basis(const std::vector<IntVector>& inequalities, std::size_t dim)
{
    return hilbert_basis_of_generators(extreme_rays(inequalities, dim), dim);
}

std::vector<IntVector> hilbert_basis_of_generators(const std::vector<IntVector>& generators,
                                                   std::size_t dim)
{
    std::vector<IntVector> gens;
    for (const auto& g : generators) {
        if (g.size() != dim)
            throw PreconditionError("hilbert_basis_of_generators: generator has wrong length");
        if (!is_zero(g))
            gens.push_back(g);
    }
    if (gens.empty())
        return {};

    LinearSystem pointed(dim);
    for (const auto& g : gens)
        pointed.add_strict(g);
    if (!lp_feasible(pointed))
        throw NonPointedCone("generated cone contains a line");

    // Work in coordinates of the saturated lattice spanned by the generators.
    IntMatrix L = saturated_span_basis(IntMatrix::from_columns(gens, dim));
    const std::size_t d = L.cols();
    std::set<IntVector> local;
    for (const auto& g : gens) {
        auto c = lattice_membership(g, L);
        if (!c)
            throw InvariantViolation("generator outside its own saturated span");
        local.insert(primitive_part(*c));
    }
    std::vector<IntVector> rays(local.begin(), local.end());
    std::vector<IntVector> basis;
    for (const auto& h : full_dimensional_basis(rays, d))
        basis.push_back(L * h);
    sort_canonical(basis);
    return basis;
}

}  // namespace logmonoid
