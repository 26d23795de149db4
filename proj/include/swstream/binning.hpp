#ifndef SWSTREAM_BINNING_HPP
#define SWSTREAM_BINNING_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

#include "swstream/sampling.hpp"
#include "swstream/schedule.hpp"

namespace swstream {

/// Incremental keyed 128-bit hash; two decoupled splitmix lanes. Used to
/// realize i.i.d. uniform random binning with O(1) memory: the bin of a
/// window is a pure function of (seed, encoder index, side, window symbols),
/// so encoder and decoder built from the same seed share one codebook.
struct HashState {
  std::uint64_t h1 = 0;
  std::uint64_t h2 = 0;

  void absorb(std::uint64_t v) {
    h1 = mix64(h1 ^ v);
    h2 = mix64(h2 + (v ^ 0x6a09e667f3bcc909ull)) ^ (h2 >> 32);
  }
  void absorb_symbols(std::span<const Symbol> syms) {
    for (Symbol s : syms) absorb(static_cast<std::uint64_t>(s) + 0x100);
  }
  std::uint64_t reduce(std::uint64_t bins) const {
    const unsigned __int128 h = (static_cast<unsigned __int128>(mix64(h1)) << 64) | mix64(h2 ^ h1);
    return static_cast<std::uint64_t>(h % bins);
  }
};

/// Seeded random binning maps. Side 0 bins X-windows into [0, N1), side 1
/// bins Y-windows into [0, N2).
class BinningCode {
 public:
  BinningCode(std::uint64_t seed, std::uint64_t n1, std::uint64_t n2) : seed_(seed), n1_(n1), n2_(n2) {
    if (n1_ < 1 || n2_ < 1) throw std::invalid_argument("BinningCode: bin counts must be >= 1");
  }

  std::uint64_t n1() const { return n1_; }
  std::uint64_t n2() const { return n2_; }
  std::uint64_t seed() const { return seed_; }

  HashState start(int side, long tau) const {
    HashState st;
    st.absorb(seed_);
    st.absorb(static_cast<std::uint64_t>(side) + 0x51ed2701);
    st.absorb(static_cast<std::uint64_t>(tau));
    return st;
  }

  std::uint64_t finish(int side, const HashState& st) const { return st.reduce(side == 0 ? n1_ : n2_); }

  std::uint64_t bin(int side, long tau, std::span<const Symbol> window) const {
    HashState st = start(side, tau);
    st.absorb_symbols(window);
    return finish(side, st);
  }

  /// Bin of the X-window of codeword tau; the window length must equal
  /// n * |encode_window(tau)|.
  std::uint64_t bin_x(const Schedule& sched, int n, long tau, std::span<const Symbol> window) const {
    check_window(sched, n, tau, window.size());
    return bin(0, tau, window);
  }
  std::uint64_t bin_y(const Schedule& sched, int n, long tau, std::span<const Symbol> window) const {
    check_window(sched, n, tau, window.size());
    return bin(1, tau, window);
  }

 private:
  static void check_window(const Schedule& sched, int n, long tau, std::size_t got) {
    const std::size_t want = static_cast<std::size_t>(sched.encode_window(tau).length()) * n;
    if (got != want) throw std::invalid_argument("BinningCode: window length does not match encode_window");
  }

  std::uint64_t seed_;
  std::uint64_t n1_, n2_;
};

}  // namespace swstream

#endif
