#pragma once

#include <cstdint>
#include <random>

#include "contlim/numerics.hpp"

namespace contlim {

using Rng = std::mt19937_64;

// Complex Ginibre matrix with unit-variance entries.
CMatrix random_ginibre(Rng& rng, Index rows, Index cols);
CMatrix random_hermitian(Rng& rng, Index n);
// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R divided out.
CMatrix random_unitary(Rng& rng, Index n);
// Haar isometry with orthonormal columns, rows >= cols.
CMatrix random_isometry(Rng& rng, Index rows, Index cols);
// Full-rank density matrix drawn from the Hilbert-Schmidt ensemble.
CMatrix random_density(Rng& rng, Index n);

}  // namespace contlim
