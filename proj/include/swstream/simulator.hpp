#ifndef SWSTREAM_SIMULATOR_HPP
#define SWSTREAM_SIMULATOR_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "swstream/codec.hpp"
#include "swstream/joint_pmf.hpp"
#include "swstream/md_analysis.hpp"
#include "swstream/sampling.hpp"
#include "swstream/schedule.hpp"

namespace swstream {

/// Rate specification: either explicit bin counts, or the moderate-
/// deviations parameterization R = R* + theta * n^{-t} with bin counts
/// N = round(exp(n R)).
struct MdRates {
  BoundaryCase label;
  Theta theta;
  double xi_t;  // xi_n = n^{-t}, t in (0, 1/2)
  std::optional<double> rx;
  std::optional<double> ry;
};

struct SimConfig {
  JointPmf pmf;
  int n;
  Schedule schedule;
  std::optional<std::uint64_t> n1;  // explicit bin counts...
  std::optional<std::uint64_t> n2;
  std::optional<MdRates> md;        // ...or MD parameterization
  int blocks = 1;                   // L: block indices 1..L are decoded
  int trials = 1;
  std::uint64_t seed = 0;
  std::uint64_t candidate_cap = 1ull << 24;
  int jobs = 0;                     // 0 = hardware concurrency
};

struct WilsonInterval {
  double lo;
  double hi;
};

/// 95% Wilson score interval for e errors in t trials.
inline WilsonInterval wilson95(std::uint64_t errors, std::uint64_t trials) {
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct BlockErrorRow {
  long k;
  std::uint64_t errors;
  std::uint64_t trials;
  double eps_hat;
  WilsonInterval ci;
};

struct SimReport {
  std::vector<BlockErrorRow> rows;
  double sup_eps_hat = 0;
  std::uint64_t n1 = 0, n2 = 0;
  double rate_x = 0, rate_y = 0;          // nats/symbol actually used
  std::optional<double> nu_hat;           // -log(sup eps)/(n xi^2), MD mode, sup > 0
  double max_candidate_space = 0;
  std::uint64_t max_bin_survivors = 0;
  double wall_seconds = 0;
};

namespace detail {
struct ResolvedRates {
  std::uint64_t n1, n2;
  double rx, ry;
  std::optional<double> xi;
};

inline ResolvedRates resolve_rates(const SimConfig& cfg) {
  if (cfg.n1 && cfg.n2) {
    const double n = static_cast<double>(cfg.n);
    return {*cfg.n1, *cfg.n2, std::log(static_cast<double>(*cfg.n1)) / n,
            std::log(static_cast<double>(*cfg.n2)) / n, std::nullopt};
  }
  if (!cfg.md) throw std::invalid_argument("simulate: need either (n1, n2) or the MD parameterization");
  if (!(cfg.md->xi_t > 0.0 && cfg.md->xi_t < 0.5))
    throw std::invalid_argument("simulate: xi exponent t must lie in (0, 1/2)");
  const SourceProfile pr = profile(cfg.pmf);
  if (!check_positive_dispersions(pr))
    throw std::invalid_argument("simulate: MD parameterization needs positive dispersions");
  const BoundaryTarget target = make_target_auto(pr, cfg.md->label, cfg.md->theta, cfg.md->rx, cfg.md->ry);
  const double xi = std::pow(static_cast<double>(cfg.n), -cfg.md->xi_t);
  const double rx = target.rx + target.theta.t1 * xi;
  const double ry = target.ry + target.theta.t2 * xi;
  auto bins = [&](double r) {
    const double v = std::round(std::exp(static_cast<double>(cfg.n) * r));
    return static_cast<std::uint64_t>(std::max(1.0, v));
  };
  return {bins(rx), bins(ry), rx, ry, xi};
}
}  // namespace detail

/// Monte Carlo estimate of the per-block decoding error probability.
/// Trial i draws its stream with seed mix(seed, i); trials are independent
/// and may run on several threads, with order-independent aggregation, so
/// the report is a pure function of the config.
inline SimReport run(const SimConfig& cfg) {
  if (cfg.blocks < 1 || cfg.trials < 1) throw std::invalid_argument("simulate: blocks and trials must be >= 1");
  const auto rates = detail::resolve_rates(cfg);
  const CodecParams params{cfg.schedule, cfg.n, cfg.pmf.alphabet_x(), cfg.pmf.alphabet_y(),
                           rates.n1, rates.n2, cfg.seed, cfg.candidate_cap};
  const int stream_len = cfg.blocks + static_cast<int>(cfg.schedule.delay()) - 1;

  const auto t0 = std::chrono::steady_clock::now();
  const int jobs = cfg.jobs > 0 ? cfg.jobs
                                : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::uint64_t> errors(static_cast<std::size_t>(cfg.blocks), 0);
  std::atomic<int> next_trial{0};
  std::atomic<bool> refused{false};
  std::optional<CandidateCapError> refusal;
  std::mutex merge_mu;
  double max_space = 0;
  std::uint64_t max_survivors = 0;

  auto worker = [&]() {
    const StreamCodec codec(params);
    std::vector<std::uint64_t> local(errors.size(), 0);
    double local_space = 0;
    std::uint64_t local_survivors = 0;
    for (;;) {
      const int t = next_trial.fetch_add(1);
      if (t >= cfg.trials || refused.load()) break;
      const SourceStream stream = sample_blocks(cfg.pmf, cfg.n, stream_len, mix64(cfg.seed) ^ static_cast<std::uint64_t>(t));
      const std::vector<Codeword> cws = codec.encode(stream);
      for (long k = 1; k <= cfg.blocks; ++k) {
        DecodeTrace trace;
        BlockEstimate est;
        try {
          est = codec.decode_block(cws, k, &trace);
        } catch (const CandidateCapError& e) {
          bool expected = false;
          if (refused.compare_exchange_strong(expected, true)) {
            std::lock_guard<std::mutex> g(merge_mu);
            refusal = e;
          }
          return;
        }
        for (const StageTrace& st : trace.stages) {
          local_space = std::max(local_space, st.candidate_space);
          local_survivors = std::max(local_survivors, st.bin_survivors);
        }
        const bool err = est.x != stream.x_blocks[static_cast<std::size_t>(k - 1)] ||
                         est.y != stream.y_blocks[static_cast<std::size_t>(k - 1)];
        if (err) ++local[static_cast<std::size_t>(k - 1)];
      }
    }
    std::lock_guard<std::mutex> g(merge_mu);
    for (std::size_t i = 0; i < errors.size(); ++i) errors[i] += local[i];
    max_space = std::max(max_space, local_space);
    max_survivors = std::max(max_survivors, local_survivors);
  };

  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (refusal) throw *refusal;

  SimReport rep;
  rep.n1 = rates.n1;
  rep.n2 = rates.n2;
  rep.rate_x = rates.rx;
  rep.rate_y = rates.ry;
  rep.max_candidate_space = max_space;
  rep.max_bin_survivors = max_survivors;
  for (long k = 1; k <= cfg.blocks; ++k) {
    const std::uint64_t e = errors[static_cast<std::size_t>(k - 1)];
    const double eps = static_cast<double>(e) / static_cast<double>(cfg.trials);
    rep.rows.push_back({k, e, static_cast<std::uint64_t>(cfg.trials), eps,
                        wilson95(e, static_cast<std::uint64_t>(cfg.trials))});
    rep.sup_eps_hat = std::max(rep.sup_eps_hat, eps);
  }
  if (rates.xi && rep.sup_eps_hat > 0)
    rep.nu_hat = -std::log(rep.sup_eps_hat) / (static_cast<double>(cfg.n) * (*rates.xi) * (*rates.xi));
  rep.wall_seconds =
      std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct SweepRow {
  std::uint64_t n1, n2;
  double sup_eps_hat;
};

/// sup_k eps_hat per (N1, N2) point; everything else fixed from cfg.
inline std::vector<SweepRow> rate_sweep(SimConfig cfg,
                                        const std::vector<std::pair<std::uint64_t, std::uint64_t>>& grid) {
  std::vector<SweepRow> rows;
  cfg.md.reset();
  for (auto [n1, n2] : grid) {
    cfg.n1 = n1;
    cfg.n2 = n2;
    rows.push_back({n1, n2, run(cfg).sup_eps_hat});
  }
  return rows;
}

struct DelayRow {
  int delay;
  double sup_eps_hat;
};

/// sup_k eps_hat per delay T, with Omega = 2T and Psi from cfg (which must
/// stay feasible for every T in the list).
inline std::vector<DelayRow> delay_sweep(const SimConfig& cfg, const std::vector<int>& delays) {
  std::vector<DelayRow> rows;
  for (int t : delays) {
    SimConfig c = cfg;
    c.schedule = Schedule(cfg.schedule.psi(), 2 * t, t);
    rows.push_back({t, run(c).sup_eps_hat});
  }
  return rows;
}

}  // namespace swstream

#endif
