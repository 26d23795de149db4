#ifndef SWSTREAM_SCHEDULE_HPP
#define SWSTREAM_SCHEDULE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swstream {

/// Inclusive block-index range [lo:hi]; empty when lo > hi.
struct BlockRange {
  long lo = 1;
  long hi = 0;
  bool empty() const { return lo > hi; }
  long length() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(long k) const { return k >= lo && k <= hi; }
};

inline bool operator==(const BlockRange& a, const BlockRange& b) { return a.lo == b.lo && a.hi == b.hi; }

/// Truncated-memory buffer parameters: maximum size Psi, minimum size Omega,
/// decode delay T, with Psi > 2*Omega and Omega >= T >= 1.
///
/// Periodic-phase index algebra:
///   alpha_q = (Psi-Omega+1) q + Omega
///   beta_q  = (Psi-Omega+1)(q+1) + Omega - 1
///   t_q     = (Psi-Omega+1) q + 1
///   S(q)    = [alpha_q : beta_q]
class Schedule {
 public:
  Schedule(long psi, long omega, long delay) : psi_(psi), omega_(omega), delay_(delay) {
    if (delay_ < 1) throw std::invalid_argument("Schedule: T must be >= 1");
    if (omega_ < delay_) throw std::invalid_argument("Schedule: Omega must be >= T");
    if (psi_ <= 2 * omega_) throw std::invalid_argument("Schedule: Psi must exceed 2*Omega");
  }

  long psi() const { return psi_; }
  long omega() const { return omega_; }
  long delay() const { return delay_; }
  long period() const { return psi_ - omega_ + 1; }

  long alpha(long q) const { return period() * q + omega_; }
  long beta(long q) const { return period() * (q + 1) + omega_ - 1; }
  long t(long q) const { return period() * q + 1; }
  BlockRange s_range(long q) const { return {alpha(q), beta(q)}; }

  /// q such that k is in S(q); requires k >= Omega = alpha_0.
  long q_of(long k) const {
    if (k < omega_) throw std::invalid_argument("Schedule::q_of: k below alpha_0");
    return (k - omega_) / period();
  }

  /// Time at which block k is decoded.
  long decode_time(long k) const { return k + delay_ - 1; }

  /// Blocks held in the encoder buffer when codeword k is produced; the
  /// window the encoder f_k maps into M_{1,k}.
  BlockRange encode_window(long k) const {
    if (k < 1) throw std::invalid_argument("Schedule::encode_window: k must be >= 1");
    if (k <= psi_) return {1, k};
    return {t(q_of(k)), k};
  }

  BlockRange buffer_contents(long k) const { return encode_window(k); }

  /// Number of codewords whose windows cover block k; always in [Omega, Psi].
  long codewords_per_block(long k) const {
    if (k < 1) throw std::invalid_argument("Schedule::codewords_per_block: k must be >= 1");
    long count = 0;
    for (long tau = k;; ++tau) {
      const BlockRange w = encode_window(tau);
      if (w.lo > k) break;
      ++count;
    }
    return count;
  }

  /// Asymptotic parameter choice Psi = n^(1/2+delta), Omega = 2T, rounded up
  /// until Psi > 2*Omega.
  static Schedule asymptotic(long n, long delay, double delta = 0.1) {
    if (n < 1) throw std::invalid_argument("Schedule::asymptotic: n must be >= 1");
    const long omega = 2 * delay;
    long psi = static_cast<long>(std::ceil(std::pow(static_cast<double>(n), 0.5 + delta)));
    if (psi <= 2 * omega) psi = 2 * omega + 1;
    return Schedule(psi, omega, delay);
  }

 private:
  long psi_, omega_, delay_;
};

/// Bin families of the backtracking decoder. B1 decodes a block range
/// jointly; B2..B6 decode one block per stage. INIT marks the
/// initialization-phase specialization (k with q < 2): blocks [1:k] decoded
/// sequentially from all codewords up to the decode time.
enum class BinFamily { B1, B2, B3, B4, B5, B6, INIT };

inline const char* to_string(BinFamily f) {
  switch (f) {
    case BinFamily::B1: return "B1";
    case BinFamily::B2: return "B2";
    case BinFamily::B3: return "B3";
    case BinFamily::B4: return "B4";
    case BinFamily::B5: return "B5";
    case BinFamily::B6: return "B6";
    case BinFamily::INIT: return "INIT";
  }
  return "?";
}

/// One decoding stage: candidates extend over `span`, blocks in `prereq`
/// are pinned to earlier estimates, the bin constraints are the codewords
/// with indices in `codewords`, and `targets` are committed from the winner.
struct DecodeStage {
  BlockRange targets;
  BlockRange span;
  BlockRange codewords;
  BlockRange prereq;  // empty for the joint first stage
  BinFamily family;
};

struct DecodePlan {
  long k = 0;
  long decode_time = 0;
  std::vector<DecodeStage> stages;
};

/// Stage list implementing the backtracking decoder for block k at time
/// T_k = k+T-1. For k in S(q) with q >= 2 this is the full B1..B6 machinery;
/// earlier k fall back to the INIT specialization.
inline DecodePlan decode_plan(const Schedule& s, long k) {
  if (k < 1) throw std::invalid_argument("decode_plan: k must be >= 1");
  const long tk = s.decode_time(k);
  DecodePlan plan{k, tk, {}};

  const bool periodic = k >= s.omega() && s.q_of(k) >= 2;
  if (!periodic) {
    for (long j = 1; j <= k; ++j)
      plan.stages.push_back({{j, j}, {1, tk}, {j, tk}, {1, j - 1}, BinFamily::INIT});
    return plan;
  }

  const long q = s.q_of(k);
  const long tq1 = s.t(q - 1), aq1 = s.alpha(q - 1), bq1 = s.beta(q - 1);
  const long tq = s.t(q), aq = s.alpha(q), bq = s.beta(q);
  const long lambda = std::min(tk, bq);

  // B1: joint decode of [t_{q-1} : alpha_{q-1}] from codewords [alpha_{q-1} : beta_{q-1}].
  plan.stages.push_back({{tq1, aq1}, {tq1, bq1}, {aq1, bq1}, {1, 0}, BinFamily::B1});
  // B2: j in [alpha_{q-1}+1 : t_q - 1].
  for (long j = aq1 + 1; j <= tq - 1; ++j)
    plan.stages.push_back({{j, j}, {tq1, bq1}, {j, bq1}, {tq1, j - 1}, BinFamily::B2});
  // B3: j in [t_q : beta_{q-1}], candidates out to lambda_k = min(T_k, beta_q).
  for (long j = tq; j <= bq1; ++j)
    plan.stages.push_back({{j, j}, {tq1, lambda}, {j, lambda}, {tq1, j - 1}, BinFamily::B3});
  // j in [alpha_q : k]: single family B4 when T_k <= beta_q, else B5/B6 split
  // at t_{q+1}.
  if (tk <= bq) {
    for (long j = aq; j <= k; ++j)
      plan.stages.push_back({{j, j}, {tq, tk}, {j, tk}, {tq, j - 1}, BinFamily::B4});
  } else {
    const long tq2 = s.t(q + 1);
    for (long j = aq; j <= std::min(k, tq2 - 1); ++j)
      plan.stages.push_back({{j, j}, {tq, bq}, {j, bq}, {tq, j - 1}, BinFamily::B5});
    for (long j = tq2; j <= k; ++j)
      plan.stages.push_back({{j, j}, {tq, tk}, {j, tk}, {tq, j - 1}, BinFamily::B6});
  }
  return plan;
}

/// Backtracking summary in the style of the worked decoding example: the
/// prerequisite blocks before t_q, the blocks of S(q) before k, and block k
/// itself, each with the union of codeword indices its stages consume.
struct BacktrackGroup {
  BlockRange blocks;
  BlockRange codewords;
};

inline std::vector<BacktrackGroup> backtrack_summary(const DecodePlan& plan) {
  std::vector<BacktrackGroup> groups;
  auto flush = [&](std::vector<const DecodeStage*>& bucket) {
    if (bucket.empty()) return;
    BacktrackGroup g{{bucket.front()->targets.lo, bucket.back()->targets.hi},
                     {bucket.front()->codewords.lo, bucket.front()->codewords.hi}};
    for (const DecodeStage* st : bucket) {
      g.codewords.lo = std::min(g.codewords.lo, st->codewords.lo);
      g.codewords.hi = std::max(g.codewords.hi, st->codewords.hi);
    }
    groups.push_back(g);
    bucket.clear();
  };
  std::vector<const DecodeStage*> bucket;
  for (const DecodeStage& st : plan.stages) {
    const bool earlier_period = st.family == BinFamily::B1 || st.family == BinFamily::B2;
    const bool final_block = st.targets.hi == plan.k;
    if (!bucket.empty()) {
      const bool prev_earlier =
          bucket.back()->family == BinFamily::B1 || bucket.back()->family == BinFamily::B2;
      if (prev_earlier != earlier_period || final_block) flush(bucket);
    }
    bucket.push_back(&st);
    if (final_block) flush(bucket);
  }
  flush(bucket);
  return groups;
}

}  // namespace swstream

#endif
