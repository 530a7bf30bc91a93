#pragma once

// Hilbert bases of pointed rational polyhedral cones.

#include <stdexcept>
#include <vector>

#include "logmonoid/intlin.hpp"

namespace logmonoid {

class NonPointedCone : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Primitive extreme rays of the pointed cone {x in Q^dim : row . x >= 0}.
/// Throws NonPointedCone when the rows do not have full rank.
std::vector<IntVector> extreme_rays(const std::vector<IntVector>& inequalities, std::size_t dim);

/// Hilbert basis of {x in Z^dim : row . x >= 0 for every row}, sorted
/// lexicographically. Throws NonPointedCone if the cone contains a line.
std::vector<IntVector> hilbert_basis(const std::vector<IntVector>& inequalities, std::size_t dim);

/// Hilbert basis of cone(generators) intersected with the lattice
/// Z^dim cap span(generators). Generators must span a pointed cone.
std::vector<IntVector> hilbert_basis_of_generators(const std::vector<IntVector>& generators,
                                                   std::size_t dim);

}  // namespace logmonoid
