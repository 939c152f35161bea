#pragma once

#include <random>

#include "phasespace/weyl.hpp"

namespace phasespace {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng);

/// (G + G^dagger) / 2 for a Gaussian G.
OperatorMatrix random_hermitian(const SpacePtr& space, Rng& rng);

/// G G^dagger / Tr, a full-rank mixed state.
OperatorMatrix random_density(const SpacePtr& space, Rng& rng);

/// |psi><psi| for a Gaussian random vector.
OperatorMatrix random_pure_state(const SpacePtr& space, Rng& rng);

/// Real grid with standard normal entries.
WeylSymbol random_real_symbol(const SpacePtr& space, Rng& rng);

}  // namespace phasespace
