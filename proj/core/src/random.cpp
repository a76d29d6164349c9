#include "cjfeast/random.hpp"

namespace cjfeast {

Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix g(rows, cols);
  for (auto& v : g.data()) v = normal(rng);
  return g;
}

std::vector<double> rademacher_vector(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  for (auto& v : w) v = (rng() & 1u) ? 1.0 : -1.0;
  return w;
}

DenseMatrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
  return thin_qr(gaussian_matrix(rows, cols, rng)).q;
}

}  // namespace cjfeast
