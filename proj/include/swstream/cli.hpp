#ifndef SWSTREAM_CLI_HPP
#define SWSTREAM_CLI_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swstream/error_bounds.hpp"
#include "swstream/info_measures.hpp"
#include "swstream/md_analysis.hpp"
#include "swstream/simulator.hpp"
#include "swstream/source_desc.hpp"

namespace swstream {
namespace cli {

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::setprecision(12) << v;
  return ss.str();
}

/// Writes CSV either to --out or to the provided stream.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

struct GridSpec {
  double lo, hi, step;
};

inline GridSpec parse_grid(const std::string& s) {
  GridSpec g{};
  char c1 = 0, c2 = 0;
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  if (!(ss >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !(g.step > 0))
    throw std::invalid_argument("bad grid spec \"" + s + "\" (want lo:hi:step)");
  return g;
}

/// Parses argv-style arguments and runs one subcommand.
/// Exit codes: 0 success, 2 validation error, 3 candidate-cap refusal.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"streaming Slepian-Wolf coding toolbox"};
  app.set_config("--config", "", "flat key = value config file; # comments");
  app.fallthrough();
  std::string out_path;
  int jobs = 0;
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--jobs", jobs, "worker threads (default: machine parallelism)");

  std::string source_desc, case_label, grid_spec;
  double rx = 0, ry = 0, gamma = -1, theta1 = 0, theta2 = 0, xi_t = 0, rate_x = -1, rate_y = -1;
  long psi = 0, omega = 0, kidx = 0;
  int n = 0, delay = 0, delay2 = 0, blocks = 0, trials = 0;
  std::uint64_t seed = 0, cap = 1ull << 24;
  bool bits = false;

  auto add_common = [&](CLI::App* sub) { sub->configurable(); };

  CLI::App* analyze = app.add_subcommand("analyze", "print the information profile of a source");
  analyze->add_option("--source", source_desc, "source descriptor")->required();
  analyze->add_flag("--bits", bits, "display in bits instead of nats");
  add_common(analyze);

  CLI::App* exponent = app.add_subcommand("exponent", "error exponents at a rate pair");
  exponent->add_option("--source", source_desc)->required();
  exponent->add_option("--rx", rx, "R_X in nats/symbol")->required();
  exponent->add_option("--ry", ry, "R_Y in nats/symbol")->required();
  exponent->add_option("--gamma", gamma, "fix gamma; otherwise minimize over [0,1]");
  add_common(exponent);

  CLI::App* mdc = app.add_subcommand("md-constant", "moderate-deviations constants");
  mdc->add_option("--source", source_desc)->required();
  mdc->add_option("--case", case_label, "boundary case i|ii|iii|iv|v")->required();
  mdc->add_option("--rx", rx, "boundary R_X* (defaulted per case)");
  mdc->add_option("--ry", ry, "boundary R_Y* (defaulted per case)");
  mdc->add_option("--theta1", theta1)->required();
  mdc->add_option("--theta2", theta2)->required();
  mdc->add_option("--delay", delay, "decoding delay T")->required();
  mdc->add_option("--delay2", delay2, "second delay (different-delay variant)");
  bool mdc_has_rx = false, mdc_has_ry = false;
  add_common(mdc);

  CLI::App* gain = app.add_subcommand("gain-region", "g1/g2 gain thresholds");
  gain->add_option("--source", source_desc)->required();
  gain->add_option("--grid", grid_spec, "sweep the family parameter lo:hi:step");
  add_common(gain);

  CLI::App* sched = app.add_subcommand("schedule", "encode windows and decode plan");
  sched->add_option("--psi", psi, "max buffer size")->required();
  sched->add_option("--omega", omega, "min buffer size")->required();
  sched->add_option("--delay", delay, "decoding delay T")->required();
  sched->add_option("--k", kidx, "block index")->required();
  add_common(sched);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo block error rates");
  sim->add_option("--source", source_desc)->required();
  sim->add_option("--n", n, "symbols per block")->required();
  sim->add_option("--psi", psi)->required();
  sim->add_option("--omega", omega)->required();
  sim->add_option("--delay", delay)->required();
  sim->add_option("--blocks", blocks, "L: decode blocks 1..L")->required();
  sim->add_option("--trials", trials)->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("--rate-x", rate_x, "R_X in nats/symbol (bin count rounds exp(nR))");
  sim->add_option("--rate-y", rate_y, "R_Y in nats/symbol");
  sim->add_option("--case", case_label, "MD mode: boundary case");
  sim->add_option("--theta1", theta1);
  sim->add_option("--theta2", theta2);
  sim->add_option("--xi-t", xi_t, "MD mode: xi_n = n^-t, t in (0, 1/2)");
  sim->add_option("--cap", cap, "candidate-space cap per stage");
  add_common(sim);

  CLI::App* bound = app.add_subcommand("bound", "analytic union bound per error family");
  bound->add_option("--source", source_desc)->required();
  bound->add_option("--n", n)->required();
  bound->add_option("--psi", psi)->required();
  bound->add_option("--omega", omega)->required();
  bound->add_option("--delay", delay)->required();
  bound->add_option("--rx", rx, "R_X in nats/symbol")->required();
  bound->add_option("--ry", ry, "R_Y in nats/symbol")->required();
  bound->add_option("--k", kidx, "block index (needs q >= 2)")->required();
  add_common(bound);

  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("swcli");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  mdc_has_rx = mdc->count("--rx") > 0;
  mdc_has_ry = mdc->count("--ry") > 0;

  try {
    CsvSink sink(out_path, out);
    std::ostream& os = sink.stream();

    if (app.got_subcommand(analyze)) {
      const SourceProfile pr = profile(make_source(source_desc));
      const double eu = bits ? std::log(2.0) : 1.0;  // entropy unit
      const double vu = eu * eu;
      os << "measure,value\n";
      os << "h_joint," << fmt(pr.h_joint / eu) << "\n";
      os << "h_x_given_y," << fmt(pr.h_x_given_y / eu) << "\n";
      os << "h_y_given_x," << fmt(pr.h_y_given_x / eu) << "\n";
      os << "h_x," << fmt(pr.h_x / eu) << "\n";
      os << "h_y," << fmt(pr.h_y / eu) << "\n";
      os << "v_joint," << fmt(pr.v_joint / vu) << "\n";
      os << "v_x_given_y," << fmt(pr.v_x_given_y / vu) << "\n";
      os << "v_y_given_x," << fmt(pr.v_y_given_x / vu) << "\n";
      os << "v_x," << fmt(pr.v_x / vu) << "\n";
      os << "v_y," << fmt(pr.v_y / vu) << "\n";
      return 0;
    }

    if (app.got_subcommand(exponent)) {
      const JointPmf pmf = make_source(source_desc);
      const GallagerCurves gc(pmf);
      os << "measure,value\n";
      if (gamma >= 0) {
        os << "e_x," << fmt(exponent_x(gc, rx, ry, gamma)) << "\n";
        os << "e_y," << fmt(exponent_y(gc, rx, ry, gamma)) << "\n";
      } else {
        const GammaMin mx = min_exponent_over_gamma_x(gc, rx, ry);
        const GammaMin my = min_exponent_over_gamma_y(gc, rx, ry);
        os << "min_e_x," << fmt(mx.value) << "\n";
        os << "argmin_gamma_x," << fmt(mx.gamma) << "\n";
        os << "min_e_y," << fmt(my.value) << "\n";
        os << "argmin_gamma_y," << fmt(my.gamma) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(mdc)) {
      const JointPmf pmf = make_source(source_desc);
      const SourceProfile pr = profile(pmf);
      const auto c = parse_case(case_label);
      if (!c) throw std::invalid_argument("bad --case " + case_label);
      const BoundaryTarget target =
          make_target_auto(pr, *c, Theta{theta1, theta2},
                           mdc_has_rx ? std::optional<double>(rx) : std::nullopt,
                           mdc_has_ry ? std::optional<double>(ry) : std::nullopt);
      os << "measure,value\n";
      os << "rx_star," << fmt(target.rx) << "\n";
      os << "ry_star," << fmt(target.ry) << "\n";
      os << "nu_nonstreaming," << fmt(nu_nonstreaming(pr, target)) << "\n";
      if (delay2 > 0) {
        os << "nu_streaming_lower," << fmt(nu_two_delays(pr, target, delay, delay2)) << "\n";
        os << "effective_delay," << std::min(delay, delay2) << "\n";
      } else {
        os << "nu_streaming_lower," << fmt(nu_streaming_lower(pr, target, delay)) << "\n";
      }
      os << "l_constant," << fmt(l_constant(pr, target)) << "\n";
      if (*c == BoundaryCase::ii) {
        const GainVerdict v = gain_region(pr, target.theta);
        os << "g1," << fmt(v.g1) << "\n";
        os << "g2," << fmt(v.g2) << "\n";
        os << "holds_gain_T," << (v.holds_gain_t ? 1 : 0) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(gain)) {
      const SourceDesc d = parse_source_desc(source_desc);
      os << "param,g1,g2\n";
      if (!grid_spec.empty()) {
        if (d.family == "custom") throw std::invalid_argument("gain-region: --grid needs a parametric family");
        const GridSpec g = parse_grid(grid_spec);
        for (const GainCurveRow& row : g_curves(d.family, g.lo, g.hi, g.step))
          os << fmt(row.param) << "," << fmt(row.g1) << "," << fmt(row.g2) << "\n";
      } else {
        const SourceProfile pr = profile(make_source(d));
        const double vc = pr.v_x_given_y, vj = pr.v_joint;
        if (!(vc > 0)) throw std::invalid_argument("gain-region: conditional dispersion is zero");
        os << fmt(d.param) << "," << fmt((vj - vc) / (2.0 * vc)) << ","
           << fmt(std::min(std::sqrt(vj / vc) - 1.0, (vj - vc) / (vj + vc))) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(sched)) {
      const Schedule s(psi, omega, delay);
      const DecodePlan plan = decode_plan(s, kidx);
      const BlockRange w = s.encode_window(kidx);
      out << "schedule Psi=" << psi << " Omega=" << omega << " T=" << delay << " k=" << kidx
          << " (decoded at T_k=" << plan.decode_time << ")\n";
      out << "encode window of k: [" << w.lo << ":" << w.hi << "]\n";
      out << "buffer timeline:\n";
      for (long tau = 1; tau <= plan.decode_time; ++tau) {
        const BlockRange b = s.buffer_contents(tau);
        out << "  tau=" << std::setw(3) << tau << "  buffer [" << b.lo << ":" << b.hi << "]\n";
      }
      out << "backtracking summary:\n";
      int gi = 1;
      for (const BacktrackGroup& g : backtrack_summary(plan)) {
        out << "  stage " << gi++ << ": decode blocks [" << g.blocks.lo << ":" << g.blocks.hi
            << "] using codewords [" << g.codewords.lo << ":" << g.codewords.hi << "]\n";
      }
      os << "stage,block_lo,block_hi,cw_lo,cw_hi,bin_family\n";
      int si = 1;
      for (const DecodeStage& st : plan.stages)
        os << si++ << "," << st.targets.lo << "," << st.targets.hi << "," << st.codewords.lo << ","
           << st.codewords.hi << "," << to_string(st.family) << "\n";
      return 0;
    }

    if (app.got_subcommand(sim)) {
      SimConfig cfg{make_source(source_desc), n, Schedule(psi, omega, delay)};
      cfg.blocks = blocks;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.candidate_cap = cap;
      cfg.jobs = jobs;
      const bool has_rates = sim->count("--rate-x") > 0 && sim->count("--rate-y") > 0;
      const bool has_md = sim->count("--case") > 0;
      if (has_rates == has_md)
        throw std::invalid_argument("simulate: give either --rate-x/--rate-y or --case/--theta1/--theta2/--xi-t");
      if (has_rates) {
        auto bins = [&](double r) {
          return static_cast<std::uint64_t>(std::max(1.0, std::round(std::exp(n * r))));
        };
        cfg.n1 = bins(rate_x);
        cfg.n2 = bins(rate_y);
      } else {
        const auto c = parse_case(case_label);
        if (!c) throw std::invalid_argument("bad --case " + case_label);
        cfg.md = MdRates{*c, Theta{theta1, theta2}, xi_t, std::nullopt, std::nullopt};
      }
      const SimReport rep = run(cfg);
      os << "# N1=" << rep.n1 << " N2=" << rep.n2 << " rate_x=" << fmt(rep.rate_x)
         << " rate_y=" << fmt(rep.rate_y) << "\n";
      os << "# sup_eps_hat=" << fmt(rep.sup_eps_hat) << " max_candidates="
         << fmt(rep.max_candidate_space) << " max_bin_survivors=" << rep.max_bin_survivors << "\n";
      if (cfg.md) {
        os << "# nu_hat (diagnostic only; asymptotic MD constants are n->infinity limits and are\n";
        os << "# not reproducible at desk-scale n): "
           << (rep.nu_hat ? fmt(*rep.nu_hat) : std::string("inf (no errors observed)")) << "\n";
      }
      os << "k,errors,trials,eps_hat,ci_lo,ci_hi\n";
      for (const BlockErrorRow& r : rep.rows)
        os << r.k << "," << r.errors << "," << r.trials << "," << fmt(r.eps_hat) << "," << fmt(r.ci.lo)
           << "," << fmt(r.ci.hi) << "\n";
      return 0;
    }

    if (app.got_subcommand(bound)) {
      const BoundInputs in{make_source(source_desc), n, Schedule(psi, omega, delay), rx, ry, kidx};
      const BoundBreakdown bb = total_bound(in);
      os << "family,log_bound,span,exponent\n";
      for (const FamilyTerm& t : bb.terms)
        os << t.family << "," << fmt(t.log_bound) << "," << t.span << "," << fmt(t.exponent) << "\n";
      os << "total," << fmt(bb.log_total) << ",0,0\n";
      return 0;
    }
  } catch (const CandidateCapError& e) {
    err << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace cli
}  // namespace swstream

#endif
