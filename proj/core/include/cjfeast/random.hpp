#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "cjfeast/dense_matrix.hpp"

namespace cjfeast {

using Rng = std::mt19937_64;

/// Independent deterministic sub-stream `index` of `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
std::vector<double> rademacher_vector(std::size_t n, Rng& rng);
/// Q factor of a Gaussian matrix.
DenseMatrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace cjfeast
