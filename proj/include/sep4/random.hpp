#pragma once

#include "sep4/types.hpp"

#include <cstdint>
#include <random>

namespace sep4 {

using Rng = std::mt19937_64;

Vector random_complex_gaussian(long n, Rng& rng);
Matrix random_complex_gaussian(long rows, long cols, Rng& rng);
// Haar-distributed unitary (QR of a Gaussian matrix with the phase fix).
Matrix random_unitary(long n, Rng& rng);
Vector random_unit_vector(long n, Rng& rng);

}  // namespace sep4
