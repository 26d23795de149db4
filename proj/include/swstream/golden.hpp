#ifndef SWSTREAM_GOLDEN_HPP
#define SWSTREAM_GOLDEN_HPP

#include <cmath>
#include <utility>

namespace swstream {

struct ScalarOpt {
  double x;
  double value;
};

/// Golden-section minimization of a unimodal function on [lo, hi].
/// Both endpoints are evaluated explicitly, so a minimum attained at the
/// boundary is returned exactly at the boundary.
template <typename F>
ScalarOpt golden_minimize(F&& f, double lo, double hi, double xtol = 1e-10) {
  constexpr double invphi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double mid = 0.5 * (a + b);
  ScalarOpt best{mid, f(mid)};
  const double flo = f(lo), fhi = f(hi);
  if (flo < best.value) best = {lo, flo};
  if (fhi < best.value) best = {hi, fhi};
  return best;
}

template <typename F>
ScalarOpt golden_maximize(F&& f, double lo, double hi, double xtol = 1e-10) {
  auto r = golden_minimize([&](double x) { return -f(x); }, lo, hi, xtol);
  return {r.x, -r.value};
}

}  // namespace swstream

#endif
