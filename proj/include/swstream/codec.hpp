#ifndef SWSTREAM_CODEC_HPP
#define SWSTREAM_CODEC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swstream/binning.hpp"
#include "swstream/info_measures.hpp"
#include "swstream/sampling.hpp"
#include "swstream/schedule.hpp"

namespace swstream {

// ---------------------------------------------------------------------------
// Weighted empirical suffix entropy
// ---------------------------------------------------------------------------

struct SuffixScore {
  long l;
  long m;
  double value;  // nats per symbol
};

namespace detail {
inline void append_blocks(std::vector<Symbol>& out, std::span<const Block> blocks, long lo, long hi,
                          long first_index) {
  for (long b = lo; b <= hi; ++b) {
    const Block& blk = blocks[static_cast<std::size_t>(b - first_index)];
    out.insert(out.end(), blk.begin(), blk.end());
  }
}
}  // namespace detail

/// Weighted empirical suffix entropy H_S(l, m, x_a^b, y_a^b) with l, m the
/// first-difference block indices of the pair under comparison:
///   l = m : joint empirical entropy of blocks l..b
///   l < m : (m-l)/(b-l+1) * H(x_l^{m-1} | y_l^{m-1})
///           + (b-m+1)/(b-l+1) * H(x_m^b, y_m^b)
///   l > m : the X<->Y mirror of the branch above.
inline SuffixScore suffix_entropy(long l, long m, std::span<const Block> x, std::span<const Block> y,
                                  long first_index) {
  const long a = first_index;
  const long b = first_index + static_cast<long>(x.size()) - 1;
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("suffix_entropy: block shape mismatch");
  if (l < a || l > b || m < a || m > b) throw std::invalid_argument("suffix_entropy: l, m must lie in [a:b]");

  std::vector<Symbol> xs, ys;
  if (l == m) {
    detail::append_blocks(xs, x, l, b, a);
    detail::append_blocks(ys, y, l, b, a);
    return {l, m, empirical_entropy(xs, ys).h_joint};
  }
  if (l < m) {
    detail::append_blocks(xs, x, l, m - 1, a);
    detail::append_blocks(ys, y, l, m - 1, a);
    const double h_cond = empirical_entropy(xs, ys).h_x_given_y;
    xs.clear();
    ys.clear();
    detail::append_blocks(xs, x, m, b, a);
    detail::append_blocks(ys, y, m, b, a);
    const double h_suffix = empirical_entropy(xs, ys).h_joint;
    const double span = static_cast<double>(b - l + 1);
    return {l, m, (m - l) / span * h_cond + (b - m + 1) / span * h_suffix};
  }
  // l > m: the differing-first side is Y, conditioned on the agreeing X.
  detail::append_blocks(xs, x, m, l - 1, a);
  detail::append_blocks(ys, y, m, l - 1, a);
  const double h_cond = empirical_entropy(ys, xs).h_x_given_y;
  xs.clear();
  ys.clear();
  detail::append_blocks(xs, x, l, b, a);
  detail::append_blocks(ys, y, l, b, a);
  const double h_suffix = empirical_entropy(xs, ys).h_joint;
  const double span = static_cast<double>(b - m + 1);
  return {l, m, (l - m) / span * h_cond + (b - l + 1) / span * h_suffix};
}

struct FirstDiff {
  std::optional<long> l;  // first block index where the x sides differ
  std::optional<long> m;  // first block index where the y sides differ
};

inline FirstDiff first_difference(std::span<const Block> x_ref, std::span<const Block> y_ref,
                                  std::span<const Block> x_cand, std::span<const Block> y_cand,
                                  long first_index) {
  if (x_ref.size() != x_cand.size() || y_ref.size() != y_cand.size())
    throw std::invalid_argument("first_difference: shape mismatch");
  FirstDiff d;
  for (std::size_t i = 0; i < x_ref.size(); ++i)
    if (x_ref[i] != x_cand[i]) {
      d.l = first_index + static_cast<long>(i);
      break;
    }
  for (std::size_t i = 0; i < y_ref.size(); ++i)
    if (y_ref[i] != y_cand[i]) {
      d.m = first_index + static_cast<long>(i);
      break;
    }
  return d;
}

// ---------------------------------------------------------------------------
// Exact score comparison
//
// With (l, m, b) fixed, comparing H_S between two candidates reduces to
// comparing integer combinations of t*log(t) terms of small type counts (the
// S log S normalization terms are shared and cancel). Evaluating those terms
// in a fixed-point scale makes the comparison exact and order-independent,
// so staged and brute-force decoders agree bit-for-bit even on type-class
// ties.
// ---------------------------------------------------------------------------

inline std::int64_t fix_nlogn(std::int64_t t) {
  if (t <= 1) return 0;
  const double v = static_cast<double>(t) * std::log(static_cast<double>(t));
  return std::llround(v * 1099511627776.0);  // 2^40
}

namespace detail {
// table-backed fast path for the small counts the decoder sees
inline std::int64_t fix_nlogn_fast(std::int64_t t) {
  static const std::vector<std::int64_t> table = [] {
    std::vector<std::int64_t> tb(4096);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(tb.size()); ++i) tb[i] = fix_nlogn(i);
    return tb;
  }();
  return t < static_cast<std::int64_t>(table.size()) ? table[static_cast<std::size_t>(t)] : fix_nlogn(t);
}
}  // namespace detail

namespace detail {

// Joint symbol-pair counts over a block range. The decoder's scoring loop
// runs this on every pairwise comparison, so the storage is a fixed-size
// array; the codec restricts itself to |X|*|Y| <= 64.
struct JointCounts {
  std::array<std::int32_t, 64> cells{};
  std::size_t ax = 0, ay = 0;
  void init(std::size_t ax_, std::size_t ay_) {
    ax = ax_;
    ay = ay_;
    if (ax * ay > cells.size()) throw std::invalid_argument("JointCounts: alphabet product too large");
    cells.fill(0);
  }
  void add_pair(Symbol x, Symbol y) { ++cells[static_cast<std::size_t>(x) * ay + y]; }
};

// sum of fixed-point t log t over joint cells
inline std::int64_t g_joint(const JointCounts& c) {
  std::int64_t g = 0;
  for (std::size_t i = 0; i < c.ax * c.ay; ++i) g += fix_nlogn_fast(c.cells[i]);
  return g;
}
// over y-marginal cells
inline std::int64_t g_marg_y(const JointCounts& c) {
  std::int64_t g = 0;
  for (std::size_t y = 0; y < c.ay; ++y) {
    std::int32_t s = 0;
    for (std::size_t x = 0; x < c.ax; ++x) s += c.cells[x * c.ay + y];
    g += fix_nlogn_fast(s);
  }
  return g;
}
inline std::int64_t g_marg_x(const JointCounts& c) {
  std::int64_t g = 0;
  for (std::size_t x = 0; x < c.ax; ++x) {
    std::int32_t s = 0;
    for (std::size_t y = 0; y < c.ay; ++y) s += c.cells[x * c.ay + y];
    g += fix_nlogn_fast(s);
  }
  return g;
}

// Fixed-point comparison key for one candidate at branch (l, m): larger key
// means strictly smaller weighted suffix entropy. Block indices are relative
// to the candidate's first block.
inline std::int64_t score_key(std::span<const Block> x, std::span<const Block> y, long l, long m,
                              std::size_t ax, std::size_t ay) {
  const long b = static_cast<long>(x.size()) - 1;
  JointCounts range, suffix;
  range.init(ax, ay);
  suffix.init(ax, ay);
  auto accumulate = [&](JointCounts& c, long lo, long hi) {
    for (long blk = lo; blk <= hi; ++blk)
      for (std::size_t i = 0; i < x[blk].size(); ++i) c.add_pair(x[blk][i], y[blk][i]);
  };
  if (l == m) {
    accumulate(suffix, l, b);
    return g_joint(suffix);
  }
  if (l < m) {
    accumulate(range, l, m - 1);
    accumulate(suffix, m, b);
    return g_joint(range) - g_marg_y(range) + g_joint(suffix);
  }
  accumulate(range, m, l - 1);
  accumulate(suffix, l, b);
  return g_joint(range) - g_marg_x(range) + g_joint(suffix);
}

}  // namespace detail

/// Fixed-point key of a candidate's whole-window joint type entropy: larger
/// key means strictly smaller entropy. Shared by the decoder's deterministic
/// candidate ordering and by reference decoders in tests.
inline std::int64_t suffix_strength_key(const std::vector<Block>& x, const std::vector<Block>& y,
                                        std::size_t alphabet_x, std::size_t alphabet_y) {
  return detail::score_key(x, y, 0, 0, alphabet_x, alphabet_y);
}

/// Exact pairwise decision between two distinct candidates over the same
/// block window: negative if the first scores strictly lower (wins), zero on
/// an exact type tie, positive if the second scores strictly lower. A
/// candidate differing on one side only is scored with the l = m branch at
/// its first difference, the other side being common to both.
inline int suffix_compare(const std::vector<Block>& xa, const std::vector<Block>& ya,
                          const std::vector<Block>& xb, const std::vector<Block>& yb,
                          std::size_t alphabet_x, std::size_t alphabet_y) {
  long l = -1, m = -1;
  for (std::size_t i = 0; i < xa.size(); ++i)
    if (xa[i] != xb[i]) {
      l = static_cast<long>(i);
      break;
    }
  for (std::size_t i = 0; i < ya.size(); ++i)
    if (ya[i] != yb[i]) {
      m = static_cast<long>(i);
      break;
    }
  if (l < 0 && m < 0) return 0;
  long le, me;
  if (l < 0) le = me = m;
  else if (m < 0) le = me = l;
  else {
    le = l;
    me = m;
  }
  const std::int64_t ka = detail::score_key(xa, ya, le, me, alphabet_x, alphabet_y);
  const std::int64_t kb = detail::score_key(xb, yb, le, me, alphabet_x, alphabet_y);
  if (ka > kb) return -1;  // larger key = smaller entropy
  if (ka < kb) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Streaming codec
// ---------------------------------------------------------------------------

struct CodecParams {
  Schedule schedule;
  int n;                     // symbols per block
  std::size_t alphabet_x;
  std::size_t alphabet_y;
  std::uint64_t n1;          // X-side bins per codeword
  std::uint64_t n2;          // Y-side bins per codeword
  std::uint64_t seed;
  std::uint64_t candidate_cap = 1ull << 24;
};

struct Codeword {
  std::uint64_t m1;
  std::uint64_t m2;
};

/// Refusal: a decode stage would materialize more joint candidates than the
/// configured cap allows.
class CandidateCapError : public std::runtime_error {
 public:
  CandidateCapError(long block, BinFamily family, double required, std::uint64_t cap)
      : std::runtime_error("candidate cap exceeded at block " + std::to_string(block) + " (family " +
                           to_string(family) + "): needs " + std::to_string(required) + " > cap " +
                           std::to_string(cap)),
        block_(block),
        family_(family),
        required_(required) {}
  long block() const { return block_; }
  BinFamily family() const { return family_; }
  double required() const { return required_; }

 private:
  long block_;
  BinFamily family_;
  double required_;
};

struct StageTrace {
  BinFamily family;
  BlockRange targets;
  double candidate_space = 0;       // free product-space size
  std::uint64_t bin_survivors = 0;  // candidates satisfying all bin constraints
  std::vector<int> winner_x;        // committed target block ids
  std::vector<int> winner_y;
  double winner_score = 0;          // joint empirical entropy of the committed free suffix
  bool tie = false;                 // several weak dominators, agreeing targets
  bool failed = false;              // no dominator, disagreement, or empty bin set
};

struct DecodeTrace {
  long k = 0;
  std::vector<StageTrace> stages;
  bool any_failure = false;
};

struct BlockEstimate {
  Block x;
  Block y;
};

class StreamCodec {
 public:
  explicit StreamCodec(CodecParams params)
      : p_(std::move(params)), code_(p_.seed, p_.n1, p_.n2) {
    if (p_.n < 1) throw std::invalid_argument("StreamCodec: n must be >= 1");
    if (p_.alphabet_x < 2 || p_.alphabet_y < 2)
      throw std::invalid_argument("StreamCodec: alphabets must be >= 2");
    if (p_.alphabet_x * p_.alphabet_y > 64)
      throw std::invalid_argument("StreamCodec: exhaustive decoding supports |X|*|Y| <= 64 only");
    num_x_ = ipow(p_.alphabet_x, p_.n);
    num_y_ = ipow(p_.alphabet_y, p_.n);
    x_syms_ = build_symbol_table(p_.alphabet_x, num_x_);
    y_syms_ = build_symbol_table(p_.alphabet_y, num_y_);
  }

  const CodecParams& params() const { return p_; }
  const BinningCode& binning() const { return code_; }

  /// Codewords (M_{1,k}, M_{2,k}) for k = 1..block_count.
  std::vector<Codeword> encode(const SourceStream& stream) const {
    if (stream.n != p_.n) throw std::invalid_argument("encode: stream block length mismatch");
    std::vector<Codeword> cws(stream.block_count());
    std::vector<Symbol> wx, wy;
    for (long k = 1; k <= static_cast<long>(stream.block_count()); ++k) {
      const BlockRange w = p_.schedule.encode_window(k);
      wx.clear();
      wy.clear();
      for (long b = w.lo; b <= w.hi; ++b) {
        const Block& xb = stream.x_blocks[static_cast<std::size_t>(b - 1)];
        const Block& yb = stream.y_blocks[static_cast<std::size_t>(b - 1)];
        wx.insert(wx.end(), xb.begin(), xb.end());
        wy.insert(wy.end(), yb.begin(), yb.end());
      }
      cws[static_cast<std::size_t>(k - 1)] = {code_.bin_x(p_.schedule, p_.n, k, wx),
                                              code_.bin_y(p_.schedule, p_.n, k, wy)};
    }
    return cws;
  }

  /// Decodes block k at time T_k from codewords 1..T_k by running the
  /// backtracking plan stage by stage. Throws CandidateCapError on refusal.
  BlockEstimate decode_block(std::span<const Codeword> cws, long k, DecodeTrace* trace = nullptr) const {
    const DecodePlan plan = decode_plan(p_.schedule, k);
    if (static_cast<long>(cws.size()) < plan.decode_time)
      throw std::invalid_argument("decode_block: need codewords through T_k");
    if (trace) *trace = DecodeTrace{k, {}, false};

    std::vector<int> est_x(static_cast<std::size_t>(plan.decode_time) + 1, -1);
    std::vector<int> est_y(est_x.size(), -1);
    for (const DecodeStage& st : plan.stages) {
      StageTrace tr = run_stage(st, cws, est_x, est_y);
      if (trace) {
        trace->stages.push_back(tr);
        trace->any_failure = trace->any_failure || tr.failed;
      }
    }
    BlockEstimate out;
    out.x = id_to_block(x_syms_, est_x[static_cast<std::size_t>(k)] < 0 ? 0 : est_x[static_cast<std::size_t>(k)]);
    out.y = id_to_block(y_syms_, est_y[static_cast<std::size_t>(k)] < 0 ? 0 : est_y[static_cast<std::size_t>(k)]);
    return out;
  }

  int block_id_x(const Block& b) const { return block_to_id(b, p_.alphabet_x); }
  int block_id_y(const Block& b) const { return block_to_id(b, p_.alphabet_y); }
  Block block_from_id_x(int id) const { return id_to_block(x_syms_, id); }
  Block block_from_id_y(int id) const { return id_to_block(y_syms_, id); }

 private:
  static std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) {
      if (r > (1ull << 40) / base) throw std::invalid_argument("StreamCodec: per-block space too large");
      r *= base;
    }
    return r;
  }

  std::vector<Symbol> build_symbol_table(std::size_t alphabet, std::size_t count) const {
    std::vector<Symbol> t(count * p_.n);
    for (std::size_t id = 0; id < count; ++id) {
      std::size_t v = id;
      for (int i = p_.n - 1; i >= 0; --i) {
        t[id * p_.n + i] = static_cast<Symbol>(v % alphabet);
        v /= alphabet;
      }
    }
    return t;
  }

  int block_to_id(const Block& b, std::size_t alphabet) const {
    if (static_cast<int>(b.size()) != p_.n) throw std::invalid_argument("block_to_id: length mismatch");
    std::size_t id = 0;
    for (Symbol s : b) {
      if (s >= alphabet) throw std::invalid_argument("block_to_id: symbol out of range");
      id = id * alphabet + s;
    }
    return static_cast<int>(id);
  }

  Block id_to_block(const std::vector<Symbol>& table, int id) const {
    return Block(table.begin() + static_cast<std::size_t>(id) * p_.n,
                 table.begin() + static_cast<std::size_t>(id + 1) * p_.n);
  }

  std::span<const Symbol> id_syms(const std::vector<Symbol>& table, int id) const {
    return {table.data() + static_cast<std::size_t>(id) * p_.n, static_cast<std::size_t>(p_.n)};
  }

  // --- per-stage machinery -------------------------------------------------

  // Enumerates one side's candidate id-sequences over the free blocks of a
  // stage, filtering by each bin constraint as soon as its window closes.
  // The hash state of the estimate-pinned window prefix is computed once per
  // constraint; candidates only absorb their own free symbols.
  std::vector<std::vector<int>> enumerate_side(int side, const DecodeStage& st, long free_lo,
                                               std::span<const Codeword> cws,
                                               const std::vector<int>& est) const {
    const std::size_t num_ids = side == 0 ? num_x_ : num_y_;
    const std::vector<Symbol>& table = side == 0 ? x_syms_ : y_syms_;
    std::vector<std::vector<int>> frontier(1);
    for (long b = free_lo; b <= st.span.hi; ++b) {
      const double needed = static_cast<double>(frontier.size()) * static_cast<double>(num_ids);
      if (needed > static_cast<double>(p_.candidate_cap))
        throw CandidateCapError(st.targets.lo, st.family, needed, p_.candidate_cap);

      const bool constrained = st.codewords.contains(b);
      HashState prefix;
      std::uint64_t want = 0;
      BlockRange w{1, 0};
      if (constrained) {
        w = p_.schedule.encode_window(b);
        prefix = code_.start(side, b);
        for (long pb = w.lo; pb < free_lo; ++pb) {
          const int id = est[static_cast<std::size_t>(pb)];
          prefix.absorb_symbols(id_syms(table, id));
        }
        want = side == 0 ? cws[static_cast<std::size_t>(b - 1)].m1 : cws[static_cast<std::size_t>(b - 1)].m2;
      }

      std::vector<std::vector<int>> next;
      next.reserve(frontier.size());
      for (const std::vector<int>& partial : frontier) {
        HashState base = prefix;
        if (constrained) {
          const long cand_from = std::max(w.lo, free_lo);
          for (long cb = cand_from; cb < b; ++cb)
            base.absorb_symbols(id_syms(table, partial[static_cast<std::size_t>(cb - free_lo)]));
        }
        for (std::size_t id = 0; id < num_ids; ++id) {
          if (constrained) {
            HashState h = base;
            h.absorb_symbols(id_syms(table, static_cast<int>(id)));
            if (code_.finish(side, h) != want) continue;
          }
          std::vector<int> ext = partial;
          ext.push_back(static_cast<int>(id));
          next.push_back(std::move(ext));
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
    return frontier;
  }

  struct Cand {
    std::uint32_t ix, iy;
  };

  // Range joint counts over free blocks [lo, hi] (free coordinates).
  void range_counts(const std::vector<int>& xs, const std::vector<int>& ys, long lo, long hi,
                    detail::JointCounts& c) const {
    c.init(p_.alphabet_x, p_.alphabet_y);
    for (long b = lo; b <= hi; ++b) {
      const auto sx = id_syms(x_syms_, xs[static_cast<std::size_t>(b)]);
      const auto sy = id_syms(y_syms_, ys[static_cast<std::size_t>(b)]);
      for (int i = 0; i < p_.n; ++i) c.add_pair(sx[i], sy[i]);
    }
  }

  std::int64_t pair_key(const std::vector<int>& xs, const std::vector<int>& ys, long le, long me,
                        long last) const {
    detail::JointCounts range, suffix;
    if (le == me) {
      range_counts(xs, ys, le, last, suffix);
      return detail::g_joint(suffix);
    }
    if (le < me) {
      range_counts(xs, ys, le, me - 1, range);
      range_counts(xs, ys, me, last, suffix);
      return detail::g_joint(range) - detail::g_marg_y(range) + detail::g_joint(suffix);
    }
    range_counts(xs, ys, me, le - 1, range);
    range_counts(xs, ys, le, last, suffix);
    return detail::g_joint(range) - detail::g_marg_x(range) + detail::g_joint(suffix);
  }

  StageTrace run_stage(const DecodeStage& st, std::span<const Codeword> cws, std::vector<int>& est_x,
                       std::vector<int>& est_y) const {
    const long free_lo = st.prereq.empty() ? st.span.lo : st.prereq.hi + 1;
    const long free_len = st.span.hi - free_lo + 1;
    StageTrace tr;
    tr.family = st.family;
    tr.targets = st.targets;
    tr.candidate_space = std::pow(static_cast<double>(num_x_), static_cast<double>(free_len)) *
                         std::pow(static_cast<double>(num_y_), static_cast<double>(free_len));

    const auto sx = enumerate_side(0, st, free_lo, cws, est_x);
    const auto sy = enumerate_side(1, st, free_lo, cws, est_y);
    const double joint = static_cast<double>(sx.size()) * static_cast<double>(sy.size());
    if (joint > static_cast<double>(p_.candidate_cap))
      throw CandidateCapError(st.targets.lo, st.family, joint, p_.candidate_cap);
    tr.bin_survivors = static_cast<std::uint64_t>(sx.size()) * static_cast<std::uint64_t>(sy.size());

    if (sx.empty() || sy.empty()) {
      // No candidate is consistent with the bins and the (possibly wrong)
      // prefix estimates; commit zero blocks and flag the failure.
      tr.failed = true;
      for (long b = st.targets.lo; b <= st.targets.hi; ++b) {
        est_x[static_cast<std::size_t>(b)] = 0;
        est_y[static_cast<std::size_t>(b)] = 0;
        tr.winner_x.push_back(0);
        tr.winner_y.push_back(0);
      }
      return tr;
    }

    std::vector<Cand> cands;
    cands.reserve(static_cast<std::size_t>(tr.bin_survivors));
    for (std::uint32_t ix = 0; ix < sx.size(); ++ix)
      for (std::uint32_t iy = 0; iy < sy.size(); ++iy) cands.push_back({ix, iy});

    // Deterministic total order: strongest (smallest whole-suffix entropy)
    // first, then lexicographic ids. Ordering candidates this way lets the
    // dominance scan below eliminate weak candidates after a few
    // comparisons; the winner set itself is order-independent.
    std::vector<std::int64_t> strength(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c)
      strength[c] = pair_key(sx[cands[c].ix], sy[cands[c].iy], 0, 0, free_len - 1);
    std::vector<std::uint32_t> order(cands.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (strength[a] != strength[b]) return strength[a] > strength[b];
      if (cands[a].ix != cands[b].ix) return sx[cands[a].ix] < sx[cands[b].ix];
      return sy[cands[a].iy] < sy[cands[b].iy];
    });

    // Weak dominator set: candidates never strictly beaten in a pairwise
    // comparison at the pair's own (l, m).
    auto pair_lm = [&](const Cand& a, const Cand& b, long& le, long& me) -> bool {
      long l = -1, mm = -1;
      const auto &xa = sx[a.ix], &xb = sx[b.ix];
      const auto &ya = sy[a.iy], &yb = sy[b.iy];
      for (long i = 0; i < free_len; ++i)
        if (xa[static_cast<std::size_t>(i)] != xb[static_cast<std::size_t>(i)]) {
          l = i;
          break;
        }
      for (long i = 0; i < free_len; ++i)
        if (ya[static_cast<std::size_t>(i)] != yb[static_cast<std::size_t>(i)]) {
          mm = i;
          break;
        }
      if (l < 0 && mm < 0) return false;  // identical candidates cannot occur
      if (l < 0) le = me = mm;
      else if (mm < 0) le = me = l;
      else {
        le = l;
        me = mm;
      }
      return true;
    };

    std::vector<std::uint32_t> winners;
    for (std::uint32_t c = 0; c < cands.size(); ++c) {
      bool beaten = false;
      for (std::uint32_t oi = 0; oi < order.size() && !beaten; ++oi) {
        const std::uint32_t d = order[oi];
        if (d == c) continue;
        long le, me;
        if (!pair_lm(cands[c], cands[d], le, me)) continue;
        const std::int64_t kc = pair_key(sx[cands[c].ix], sy[cands[c].iy], le, me, free_len - 1);
        const std::int64_t kd = pair_key(sx[cands[d].ix], sy[cands[d].iy], le, me, free_len - 1);
        if (kc < kd) beaten = true;  // strictly larger entropy than d at (l, m)
      }
      if (!beaten) winners.push_back(c);
    }

    // Commit: winners must agree on the target blocks.
    auto target_ids = [&](std::uint32_t c, std::vector<int>& tx, std::vector<int>& ty) {
      tx.clear();
      ty.clear();
      for (long b = st.targets.lo; b <= st.targets.hi; ++b) {
        tx.push_back(sx[cands[c].ix][static_cast<std::size_t>(b - free_lo)]);
        ty.push_back(sy[cands[c].iy][static_cast<std::size_t>(b - free_lo)]);
      }
    };

    std::uint32_t commit_from;
    if (winners.empty()) {
      tr.failed = true;
      commit_from = order.front();
    } else {
      std::vector<int> tx0, ty0, tx, ty;
      target_ids(winners.front(), tx0, ty0);
      bool agree = true;
      for (std::size_t i = 1; i < winners.size() && agree; ++i) {
        target_ids(winners[i], tx, ty);
        agree = tx == tx0 && ty == ty0;
      }
      if (!agree) tr.failed = true;
      tr.tie = winners.size() > 1 && agree;
      // first winner in the total order
      commit_from = winners.front();
      for (std::uint32_t oi = 0; oi < order.size(); ++oi)
        if (std::find(winners.begin(), winners.end(), order[oi]) != winners.end()) {
          commit_from = order[oi];
          break;
        }
    }

    for (long b = st.targets.lo; b <= st.targets.hi; ++b) {
      est_x[static_cast<std::size_t>(b)] = sx[cands[commit_from].ix][static_cast<std::size_t>(b - free_lo)];
      est_y[static_cast<std::size_t>(b)] = sy[cands[commit_from].iy][static_cast<std::size_t>(b - free_lo)];
      tr.winner_x.push_back(est_x[static_cast<std::size_t>(b)]);
      tr.winner_y.push_back(est_y[static_cast<std::size_t>(b)]);
    }

    // Diagnostic: per-symbol joint empirical entropy of the committed free
    // suffix.
    {
      std::vector<Symbol> xs, ys;
      for (long b = 0; b < free_len; ++b) {
        const auto bx = id_syms(x_syms_, sx[cands[commit_from].ix][static_cast<std::size_t>(b)]);
        const auto by = id_syms(y_syms_, sy[cands[commit_from].iy][static_cast<std::size_t>(b)]);
        xs.insert(xs.end(), bx.begin(), bx.end());
        ys.insert(ys.end(), by.begin(), by.end());
      }
      tr.winner_score = empirical_entropy(xs, ys).h_joint;
    }
    return tr;
  }

  CodecParams p_;
  BinningCode code_;
  std::size_t num_x_ = 0, num_y_ = 0;
  std::vector<Symbol> x_syms_, y_syms_;
};

}  // namespace swstream

#endif
