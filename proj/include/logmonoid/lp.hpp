#pragma once

// Exact rational feasibility for systems of linear equalities and weak or
// strict inequalities.

#include <optional>
#include <string>
#include <vector>

#include "logmonoid/intlin.hpp"

namespace logmonoid {

/// coeffs . x  (op)  rhs; the operator is implied by the list holding it.
struct LinearConstraint {
    IntVector coeffs;
    Integer rhs;
};

struct LinearSystem {
    std::size_t num_vars = 0;
    std::vector<LinearConstraint> equalities;         // coeffs . x == rhs
    std::vector<LinearConstraint> weak_inequalities;  // coeffs . x >= rhs
    std::vector<LinearConstraint> strict_inequalities;  // coeffs . x > rhs

    explicit LinearSystem(std::size_t n = 0) : num_vars(n) {}

    void add_equality(IntVector coeffs, Integer rhs = 0);
    void add_weak(IntVector coeffs, Integer rhs = 0);
    void add_strict(IntVector coeffs, Integer rhs = 0);

    std::size_t num_constraints() const;
    /// Every right-hand side is zero.
    bool is_homogeneous() const;
    bool satisfied_by(const RatVector& x) const;
    std::string describe() const;
};

enum class LpMethod { Automatic, FourierMotzkin, Simplex };

/// Variable count at and below which Automatic uses Fourier-Motzkin.
inline constexpr std::size_t kFourierMotzkinMaxVars = 8;

/// A witness satisfying every constraint exactly, or nullopt when the system
/// is infeasible. Witnesses are verified before being returned.
std::optional<RatVector> lp_feasible(const LinearSystem& sys, LpMethod method = LpMethod::Automatic);

}  // namespace logmonoid
