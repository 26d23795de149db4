#ifndef SWSTREAM_SAMPLING_HPP
#define SWSTREAM_SAMPLING_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swstream/joint_pmf.hpp"

namespace swstream {

using Symbol = std::uint8_t;
using Block = std::vector<Symbol>;

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based uniform double in [0, 1): pure function of (seed, counter),
/// bit-identical across platforms.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix64(mix64(seed) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// A reproducible i.i.d. stream of source block pairs.
struct SourceStream {
  std::uint64_t seed = 0;
  int n = 0;  // symbols per block
  std::vector<Block> x_blocks;
  std::vector<Block> y_blocks;

  std::size_t block_count() const { return x_blocks.size(); }
};

/// Draws `count` block pairs of length n from pmf by inverse CDF over the
/// flattened joint matrix.
inline SourceStream sample_blocks(const JointPmf& pmf, int n, int count, std::uint64_t seed) {
  if (n < 1 || count < 1) throw std::invalid_argument("sample_blocks: n and count must be >= 1");
  const std::size_t nx = pmf.alphabet_x(), ny = pmf.alphabet_y();
  std::vector<double> cdf(nx * ny);
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += pmf.flat()[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  SourceStream s;
  s.seed = seed;
  s.n = n;
  s.x_blocks.assign(count, Block(n));
  s.y_blocks.assign(count, Block(n));
  std::uint64_t t = 0;
  for (int k = 0; k < count; ++k) {
    for (int i = 0; i < n; ++i, ++t) {
      const double u = counter_uniform(seed, t);
      std::size_t cell = 0;
      while (cell + 1 < cdf.size() && u >= cdf[cell]) ++cell;
      s.x_blocks[k][i] = static_cast<Symbol>(cell / ny);
      s.y_blocks[k][i] = static_cast<Symbol>(cell % ny);
    }
  }
  return s;
}

}  // namespace swstream

#endif
