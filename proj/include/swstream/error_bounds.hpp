#ifndef SWSTREAM_ERROR_BOUNDS_HPP
#define SWSTREAM_ERROR_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swstream/exponents.hpp"
#include "swstream/joint_pmf.hpp"
#include "swstream/schedule.hpp"

namespace swstream {

/// Inputs of the union bound on the probability of decoding block k (in
/// S(q), q >= 2) wrongly at time T_k. Rates are in nats/symbol.
struct BoundInputs {
  JointPmf pmf;
  int n;
  Schedule schedule;
  double rx;
  double ry;
  long k;
};

struct TruncatedRates {
  double rx_l;    // R_{X,n}^l
  double ry_m;    // R_{Y,n}^m
  double kappa;   // R_{X,n} - R_{X,n}^l
  double zeta;    // R_{Y,n} - R_{Y,n}^m
};

/// Window-truncated rates used by the joint-decoding error family:
///   R_{X,n}^l = (Psi-Omega+1)/(beta_{q-1}-l+1) * R_{X,n}
/// for l in [t_{q-1} : alpha_{q-1}], and symmetrically in m.
inline TruncatedRates truncated_rates(const Schedule& s, long q, long l, long m, double rx, double ry) {
  const long lo = s.t(q - 1), hi = s.alpha(q - 1);
  if (l < lo || l > hi || m < lo || m > hi)
    throw std::invalid_argument("truncated_rates: l, m must lie in [t_{q-1} : alpha_{q-1}]");
  const double w = static_cast<double>(s.period());
  const double fl = w / static_cast<double>(s.beta(q - 1) - l + 1);
  const double fm = w / static_cast<double>(s.beta(q - 1) - m + 1);
  return {fl * rx, fm * ry, (1.0 - fl) * rx, (1.0 - fm) * ry};
}

/// One family of the union bound, as log(prefactor) - n * span * exponent.
struct FamilyTerm {
  int family = 0;
  double log_prefactor = 0;
  long span = 0;
  double exponent = 0;   // the min over {inf_gamma E_X, inf_gamma E_Y} it uses
  double log_bound = 0;  // families consolidating several sub-terms sum them here
  bool extrapolated = false;
};

struct BoundBreakdown {
  std::vector<FamilyTerm> terms;
  double log_total = 0;
  double total_display = 0;  // exp(log_total) clamped to [0, 1]
};

namespace detail {
inline double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}
}  // namespace detail

/// Per-family bound for family in {1,2,3,5,6} (and the extrapolated 4).
/// Family 1 consolidates its truncated-rate sub-cases into the printed
/// two-term form; the exponents are minimized explicitly over the feasible
/// l, m window offsets.
inline FamilyTerm family_term(int family, const BoundInputs& in) {
  const Schedule& s = in.schedule;
  if (in.k < s.omega()) throw std::invalid_argument("family_term: k before the periodic phase");
  const long q = s.q_of(in.k);
  if (q < 2) throw std::invalid_argument("family_term: bound analyzed for q >= 2 only");
  const long tk = s.decode_time(in.k);
  const double axy = static_cast<double>(in.pmf.alphabet_x() * in.pmf.alphabet_y());
  const double n = static_cast<double>(in.n);
  const double psi = static_cast<double>(s.psi());
  const double log_pref = std::log(2.0) + 2.0 * std::log(psi) + 7.0 * axy * std::log(n * psi + 1.0);

  const GallagerCurves gc(in.pmf);
  FamilyTerm t;
  t.family = family;
  t.log_prefactor = log_pref;

  switch (family) {
    case 1: {
      const long lo = s.t(q - 1), hi = s.alpha(q - 1);
      double e_a = std::numeric_limits<double>::infinity();
      double e_b = std::numeric_limits<double>::infinity();
      for (long l = lo; l <= hi; ++l) {
        const double rxl = truncated_rates(s, q, l, lo, in.rx, in.ry).rx_l;
        e_b = std::min(e_b, min_exponent_over_gamma_x(gc, rxl, in.ry).value);
        for (long m = lo; m <= hi; ++m) {
          const double rym = truncated_rates(s, q, l, m, in.rx, in.ry).ry_m;
          e_a = std::min(e_a, std::min(min_exponent_over_gamma_x(gc, rxl, rym).value,
                                       min_exponent_over_gamma_y(gc, rxl, rym).value));
        }
      }
      for (long m = lo; m <= hi; ++m) {
        const double rym = truncated_rates(s, q, lo, m, in.rx, in.ry).ry_m;
        e_b = std::min(e_b, min_exponent_over_gamma_y(gc, in.rx, rym).value);
      }
      t.span = s.period();
      t.exponent = std::min(e_a, e_b);
      t.log_bound = detail::logsumexp2(log_pref - n * t.span * e_a, log_pref - n * t.span * e_b);
      return t;
    }
    case 2:
    case 3:
    case 5:
    case 6:
    case 4: {
      const double min_e = min_exponent_both(gc, in.rx, in.ry);
      if (family == 2 || family == 5) t.span = s.omega();
      else if (family == 3) t.span = s.period() + 1;  // Psi - Omega + 2
      else if (family == 6) {
        if (tk <= s.beta(q)) throw std::invalid_argument("family_term: family 6 requires T_k > beta_q");
        t.span = s.delay();
      } else {  // family 4: the T_k <= beta_q branch, not analyzed in the text
        t.span = std::max(s.delay(), s.beta(q) - in.k + 1);
        t.extrapolated = true;
      }
      t.exponent = min_e;
      t.log_bound = log_pref - n * static_cast<double>(t.span) * min_e;
      return t;
    }
    default:
      throw std::invalid_argument("family_term: family must be one of 1,2,3,4,5,6");
  }
}

inline double family_bound(int family, const BoundInputs& in) { return family_term(family, in).log_bound; }

/// Union bound over all families applicable to k: {1,2,3,5,6} when
/// T_k > beta_q, else {1,2,3,4} (family 4 extrapolated).
inline BoundBreakdown total_bound(const BoundInputs& in) {
  const Schedule& s = in.schedule;
  const long q = s.q_of(in.k);
  const bool beyond = s.decode_time(in.k) > s.beta(q);
  BoundBreakdown out;
  const std::vector<int> fams = beyond ? std::vector<int>{1, 2, 3, 5, 6} : std::vector<int>{1, 2, 3, 4};
  double acc = -std::numeric_limits<double>::infinity();
  for (int f : fams) {
    FamilyTerm t = family_term(f, in);
    acc = (acc == -std::numeric_limits<double>::infinity()) ? t.log_bound
                                                            : detail::logsumexp2(acc, t.log_bound);
    out.terms.push_back(std::move(t));
  }
  out.log_total = acc;
  out.total_display = std::exp(std::min(acc, 0.0));
  return out;
}

}  // namespace swstream

#endif
