#ifndef SWSTREAM_MD_ANALYSIS_HPP
#define SWSTREAM_MD_ANALYSIS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swstream/exponents.hpp"
#include "swstream/info_measures.hpp"
#include "swstream/joint_pmf.hpp"

namespace swstream {

/// Boundary cases of the Slepian-Wolf region:
///   (i)   R_X* = H(X|Y), R_Y* > H(Y)            vertical segment
///   (ii)  R_X* = H(X|Y), R_Y* = H(Y)            corner
///   (iii) R_X* + R_Y* = H(X,Y), strict interior diagonal
///   (iv)  R_X* = H(X),  R_Y* = H(Y|X)           other corner
///   (v)   R_X* > H(X),  R_Y* = H(Y|X)           horizontal segment
enum class BoundaryCase { i, ii, iii, iv, v };

struct Theta {
  double t1 = 0;
  double t2 = 0;
};

struct BoundaryTarget {
  BoundaryCase label;
  double rx;  // R_X*, nats/symbol
  double ry;  // R_Y*, nats/symbol
  Theta theta;
};

inline const char* to_string(BoundaryCase c) {
  switch (c) {
    case BoundaryCase::i: return "i";
    case BoundaryCase::ii: return "ii";
    case BoundaryCase::iii: return "iii";
    case BoundaryCase::iv: return "iv";
    case BoundaryCase::v: return "v";
  }
  return "?";
}

inline std::optional<BoundaryCase> parse_case(const std::string& s) {
  if (s == "i") return BoundaryCase::i;
  if (s == "ii") return BoundaryCase::ii;
  if (s == "iii") return BoundaryCase::iii;
  if (s == "iv") return BoundaryCase::iv;
  if (s == "v") return BoundaryCase::v;
  return std::nullopt;
}

/// Validates (case, rates, theta) against the profile. Boundary equalities
/// are checked with absolute tolerance `tol`; the case label itself is fixed
/// a priori by the caller. Theta on the closed boundary of its feasible set
/// (e.g. theta2 = -theta1 in case (ii)) is rejected.
inline BoundaryTarget make_target(const SourceProfile& pr, BoundaryCase c, double rx, double ry,
                                  Theta th, double tol = 1e-9) {
  auto want_eq = [&](double a, double b, const char* what) {
    if (std::abs(a - b) > tol) throw std::invalid_argument(std::string("make_target: ") + what);
  };
  switch (c) {
    case BoundaryCase::i:
      want_eq(rx, pr.h_x_given_y, "case (i) needs R_X* = H(X|Y)");
      if (!(ry > pr.h_y + tol)) throw std::invalid_argument("make_target: case (i) needs R_Y* > H(Y)");
      if (!(th.t1 > 0)) throw std::invalid_argument("make_target: case (i) needs theta1 > 0");
      break;
    case BoundaryCase::ii:
      want_eq(rx, pr.h_x_given_y, "case (ii) needs R_X* = H(X|Y)");
      want_eq(ry, pr.h_y, "case (ii) needs R_Y* = H(Y)");
      if (!(th.t1 > 0 && th.t2 > -th.t1))
        throw std::invalid_argument("make_target: case (ii) needs theta1 > 0 and theta2 > -theta1");
      break;
    case BoundaryCase::iii:
      want_eq(rx + ry, pr.h_joint, "case (iii) needs R_X* + R_Y* = H(X,Y)");
      if (!(rx > pr.h_x_given_y + tol && rx < pr.h_x - tol))
        throw std::invalid_argument("make_target: case (iii) needs H(X|Y) < R_X* < H(X)");
      if (!(ry > pr.h_y_given_x + tol && ry < pr.h_y - tol))
        throw std::invalid_argument("make_target: case (iii) needs H(Y|X) < R_Y* < H(Y)");
      if (!(th.t1 + th.t2 > 0)) throw std::invalid_argument("make_target: case (iii) needs theta1 + theta2 > 0");
      break;
    case BoundaryCase::iv:
      want_eq(rx, pr.h_x, "case (iv) needs R_X* = H(X)");
      want_eq(ry, pr.h_y_given_x, "case (iv) needs R_Y* = H(Y|X)");
      if (!(th.t2 > 0 && th.t1 > -th.t2))
        throw std::invalid_argument("make_target: case (iv) needs theta2 > 0 and theta1 > -theta2");
      break;
    case BoundaryCase::v:
      want_eq(ry, pr.h_y_given_x, "case (v) needs R_Y* = H(Y|X)");
      if (!(rx > pr.h_x + tol)) throw std::invalid_argument("make_target: case (v) needs R_X* > H(X)");
      if (!(th.t2 > 0)) throw std::invalid_argument("make_target: case (v) needs theta2 > 0");
      break;
  }
  return {c, rx, ry, th};
}

/// Convenience: fills the boundary rates implied by the case. Case (iii)
/// needs rx (ry is then H(X,Y) - rx); cases (i)/(v) accept an optional
/// strictly-above rate, defaulting to the entropy plus 0.1 nats.
inline BoundaryTarget make_target_auto(const SourceProfile& pr, BoundaryCase c, Theta th,
                                       std::optional<double> rx = std::nullopt,
                                       std::optional<double> ry = std::nullopt) {
  switch (c) {
    case BoundaryCase::i:
      return make_target(pr, c, rx.value_or(pr.h_x_given_y), ry.value_or(pr.h_y + 0.1), th);
    case BoundaryCase::ii:
      return make_target(pr, c, rx.value_or(pr.h_x_given_y), ry.value_or(pr.h_y), th);
    case BoundaryCase::iii: {
      const double r = rx.value_or(0.5 * (pr.h_x_given_y + pr.h_x));
      return make_target(pr, c, r, ry.value_or(pr.h_joint - r), th);
    }
    case BoundaryCase::iv:
      return make_target(pr, c, rx.value_or(pr.h_x), ry.value_or(pr.h_y_given_x), th);
    case BoundaryCase::v:
      return make_target(pr, c, rx.value_or(pr.h_x + 0.1), ry.value_or(pr.h_y_given_x), th);
  }
  throw std::invalid_argument("make_target_auto: bad case");
}

/// Case-(ii) objective f(P, gamma, theta) =
///   (theta1 + (1-gamma) theta2)^2 / (2 (gamma Vc + (1-gamma) Vj)).
inline double case_ii_objective(double vc, double vj, Theta th, double gamma) {
  const double num = th.t1 + (1.0 - gamma) * th.t2;
  return num * num / (2.0 * (gamma * vc + (1.0 - gamma) * vj));
}

struct GammaMinF {
  double value;
  double gamma;
};

namespace detail {
// f is convex in gamma; the interior stationary point has the closed form
// gamma* = -t1/t2 + (Vc+Vj)/(Vj-Vc), defined only when t2 != 0 and Vj != Vc.
inline GammaMinF minimize_case_ii(double vc, double vj, Theta th) {
  GammaMinF best{case_ii_objective(vc, vj, th, 0.0), 0.0};
  const double f1 = case_ii_objective(vc, vj, th, 1.0);
  if (f1 < best.value) best = {f1, 1.0};
  if (th.t2 != 0.0 && vj != vc) {
    const double gs = -th.t1 / th.t2 + (vc + vj) / (vj - vc);
    if (gs > 0.0 && gs < 1.0) {
      const double fs = case_ii_objective(vc, vj, th, gs);
      if (fs < best.value) best = {fs, gs};
    }
  }
  return best;
}
}  // namespace detail

inline GammaMinF minimize_f_over_gamma(const SourceProfile& pr, Theta th) {
  if (!(th.t1 > 0 && th.t2 > -th.t1))
    throw std::invalid_argument("minimize_f_over_gamma: theta must lie in Theta_(ii)");
  return detail::minimize_case_ii(pr.v_x_given_y, pr.v_joint, th);
}

/// Moderate-deviations constant of non-streaming Slepian-Wolf coding.
inline double nu_nonstreaming(const SourceProfile& pr, const BoundaryTarget& t) {
  const double s = t.theta.t1 + t.theta.t2;
  switch (t.label) {
    case BoundaryCase::i:
      return t.theta.t1 * t.theta.t1 / (2.0 * pr.v_x_given_y);
    case BoundaryCase::ii:
      return std::min(t.theta.t1 * t.theta.t1 / (2.0 * pr.v_x_given_y), s * s / (2.0 * pr.v_joint));
    case BoundaryCase::iii:
      return s * s / (2.0 * pr.v_joint);
    case BoundaryCase::iv:
      return std::min(t.theta.t2 * t.theta.t2 / (2.0 * pr.v_y_given_x), s * s / (2.0 * pr.v_joint));
    case BoundaryCase::v:
      return t.theta.t2 * t.theta.t2 / (2.0 * pr.v_y_given_x);
  }
  throw std::invalid_argument("nu_nonstreaming: bad case");
}

/// Limit constant L(R_X*, R_Y*) of the rate-backoff exponents; equals the
/// streaming lower bound divided by the delay T.
inline double l_constant(const SourceProfile& pr, const BoundaryTarget& t) {
  const double s = t.theta.t1 + t.theta.t2;
  switch (t.label) {
    case BoundaryCase::i:
      return t.theta.t1 * t.theta.t1 / (2.0 * pr.v_x_given_y);
    case BoundaryCase::ii: {
      const double inf_f = detail::minimize_case_ii(pr.v_x_given_y, pr.v_joint, t.theta).value;
      return std::min(inf_f, s * s / (2.0 * pr.v_joint));
    }
    case BoundaryCase::iii:
      return s * s / (2.0 * pr.v_joint);
    case BoundaryCase::iv: {
      const double inf_f =
          detail::minimize_case_ii(pr.v_y_given_x, pr.v_joint, Theta{t.theta.t2, t.theta.t1}).value;
      return std::min(inf_f, s * s / (2.0 * pr.v_joint));
    }
    case BoundaryCase::v:
      return t.theta.t2 * t.theta.t2 / (2.0 * pr.v_y_given_x);
  }
  throw std::invalid_argument("l_constant: bad case");
}

/// Achievable lower bound on the streaming constant: T * L(R_X*, R_Y*).
inline double nu_streaming_lower(const SourceProfile& pr, const BoundaryTarget& t, int delay) {
  if (delay < 1) throw std::invalid_argument("nu_streaming_lower: T must be >= 1");
  return static_cast<double>(delay) * l_constant(pr, t);
}

/// Two per-source delay requirements: T replaced by min(T1, T2).
inline double nu_two_delays(const SourceProfile& pr, const BoundaryTarget& t, int t1, int t2) {
  if (t1 < 1 || t2 < 1) throw std::invalid_argument("nu_two_delays: delays must be >= 1");
  return nu_streaming_lower(pr, t, std::min(t1, t2));
}

/// Streaming point-to-point lossless coding, with or without decoder side
/// information.
inline double nu_point_to_point(const SourceProfile& pr, int delay, bool with_side_info) {
  if (delay < 1) throw std::invalid_argument("nu_point_to_point: T must be >= 1");
  const double v = with_side_info ? pr.v_x_given_y : pr.v_x;
  if (!(v > 1e-12)) throw std::invalid_argument("nu_point_to_point: relevant dispersion is zero");
  return static_cast<double>(delay) / (2.0 * v);
}

/// Gain-region verdict for a direction theta in Theta_(ii):
///   g1 = (Vj - Vc) / (2 Vc)
///   g2 = min( sqrt(Vj/Vc) - 1, (Vj - Vc)/(Vj + Vc) )
/// The factor-T gain holds iff theta2/theta1 >= g1 or -1 < theta2/theta1 <= g2.
struct GainVerdict {
  bool holds_gain_t;
  double g1;
  double g2;
  double ratio;              // theta2 / theta1
  std::string binding;       // which condition fired: "ratio>=g1", "ratio<=g2", "none"
};

inline GainVerdict gain_region(const SourceProfile& pr, Theta th) {
  if (!(pr.v_x_given_y > 0)) throw std::invalid_argument("gain_region: V(P_X|Y|P_Y) must be positive");
  if (!(th.t1 > 0 && th.t2 > -th.t1))
    throw std::invalid_argument("gain_region: theta must lie in Theta_(ii)");
  const double vc = pr.v_x_given_y, vj = pr.v_joint;
  const double g1 = (vj - vc) / (2.0 * vc);
  const double g2 = std::min(std::sqrt(vj / vc) - 1.0, (vj - vc) / (vj + vc));
  const double r = th.t2 / th.t1;
  GainVerdict v{false, g1, g2, r, "none"};
  if (r >= g1) {
    v.holds_gain_t = true;
    v.binding = "ratio>=g1";
  } else if (r > -1.0 && r <= g2) {
    v.holds_gain_t = true;
    v.binding = "ratio<=g2";
  }
  return v;
}

/// One row of the g-curve tables behind the numeric-example figures.
struct GainCurveRow {
  double param;
  double g1;
  double g2;
};

/// g1/g2 over a parameter grid of one of the three source families.
inline std::vector<GainCurveRow> g_curves(const std::string& family, double lo, double hi, double step) {
  if (!(step > 0)) throw std::invalid_argument("g_curves: step must be positive");
  std::vector<GainCurveRow> rows;
  for (int i = 0;; ++i) {
    const double p = lo + i * step;
    if (p > hi + 1e-12) break;
    JointPmf pmf = [&] {
      if (family == "dsbs") return make_dsbs(p);
      if (family == "zchannel") return make_zchannel(p);
      if (family == "asym") return make_asymmetric(p);
      throw std::invalid_argument("g_curves: unknown family " + family);
    }();
    const SourceProfile pr = profile(pmf);
    const double vc = pr.v_x_given_y, vj = pr.v_joint;
    if (!(vc > 0)) continue;
    rows.push_back({p, (vj - vc) / (2.0 * vc),
                    std::min(std::sqrt(vj / vc) - 1.0, (vj - vc) / (vj + vc))});
  }
  return rows;
}

/// Numerical check of the small-xi exponent limit: at rates
/// R* + theta xi the ratio min{inf_gamma E_X, inf_gamma E_Y} / xi^2
/// converges to L(R_X*, R_Y*) as xi -> 0.
struct MdLimitRow {
  double xi;
  double ratio;
  double rel_err;  // |ratio/L - 1|
};

struct MdLimitReport {
  std::vector<MdLimitRow> rows;
  double l;
};

inline MdLimitReport md_limit_check(const JointPmf& pmf, const SourceProfile& pr,
                                    const BoundaryTarget& t,
                                    std::vector<double> xis = {1e-2, 1e-3, 1e-4}) {
  const GallagerCurves gc(pmf);
  MdLimitReport rep;
  rep.l = l_constant(pr, t);
  for (double xi : xis) {
    const double rx = t.rx + t.theta.t1 * xi;
    const double ry = t.ry + t.theta.t2 * xi;
    const double v = min_exponent_both(gc, rx, ry) / (xi * xi);
    rep.rows.push_back({xi, v, std::abs(v / rep.l - 1.0)});
  }
  return rep;
}

}  // namespace swstream

#endif
