#ifndef SWSTREAM_EXPONENTS_HPP
#define SWSTREAM_EXPONENTS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swstream/golden.hpp"
#include "swstream/info_measures.hpp"
#include "swstream/joint_pmf.hpp"

namespace swstream {

/// Gallager cumulant functions of a joint source.
///   E_XY(rho)   = (1+rho) log sum_{x,y} P(x,y)^{1/(1+rho)}
///   E_X|Y(rho)  = log sum_y P(y) ( sum_x P(x|y)^{1/(1+rho)} )^{1+rho}
/// Both vanish at rho = 0 and are convex on [0, 1].
class GallagerCurves {
 public:
  explicit GallagerCurves(const JointPmf& pmf) : nx_(pmf.alphabet_x()), ny_(pmf.alphabet_y()) {
    joint_ = pmf.flat();
    py_.resize(ny_);
    px_.resize(nx_);
    for (std::size_t y = 0; y < ny_; ++y) py_[y] = pmf.py(y);
    for (std::size_t x = 0; x < nx_; ++x) px_[x] = pmf.px(x);
  }

  double e_xy(double rho) const {
    const double e = 1.0 / (1.0 + rho);
    double s = 0.0;
    for (double p : joint_)
      if (p > 0.0) s += std::pow(p, e);
    return (1.0 + rho) * std::log(s);
  }

  double e_x_given_y(double rho) const {
    const double e = 1.0 / (1.0 + rho);
    double s = 0.0;
    for (std::size_t y = 0; y < ny_; ++y) {
      if (py_[y] <= 0.0) continue;
      double inner = 0.0;
      for (std::size_t x = 0; x < nx_; ++x) {
        const double p = joint_[x * ny_ + y];
        if (p > 0.0) inner += std::pow(p / py_[y], e);
      }
      s += py_[y] * std::pow(inner, 1.0 + rho);
    }
    return std::log(s);
  }

  double e_y_given_x(double rho) const {
    const double e = 1.0 / (1.0 + rho);
    double s = 0.0;
    for (std::size_t x = 0; x < nx_; ++x) {
      if (px_[x] <= 0.0) continue;
      double inner = 0.0;
      for (std::size_t y = 0; y < ny_; ++y) {
        const double p = joint_[x * ny_ + y];
        if (p > 0.0) inner += std::pow(p / px_[x], e);
      }
      s += px_[x] * std::pow(inner, 1.0 + rho);
    }
    return std::log(s);
  }

 private:
  std::size_t nx_, ny_;
  std::vector<double> joint_, px_, py_;
};

inline double e_xy(const JointPmf& pmf, double rho) { return GallagerCurves(pmf).e_xy(rho); }
inline double e_x_given_y(const JointPmf& pmf, double rho) { return GallagerCurves(pmf).e_x_given_y(rho); }
inline double e_y_given_x(const JointPmf& pmf, double rho) { return GallagerCurves(pmf).e_y_given_x(rho); }

/// E_X(R_X, R_Y, gamma) = max_{rho in [0,1]}
///   gamma (rho R_X - E_X|Y(rho)) + (1-gamma) (rho (R_X+R_Y) - E_XY(rho)).
/// The objective is concave in rho and zero at rho = 0, so the maximum is
/// nonnegative; golden-section search to 1e-10 in rho.
inline double exponent_x(const GallagerCurves& gc, double rx, double ry, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("exponent_x: gamma must lie in [0, 1]");
  auto obj = [&](double rho) {
    return gamma * (rho * rx - gc.e_x_given_y(rho)) + (1.0 - gamma) * (rho * (rx + ry) - gc.e_xy(rho));
  };
  const ScalarOpt m = golden_maximize(obj, 0.0, 1.0, 1e-10);
  return m.value > 0.0 ? m.value : 0.0;  // objective(0) = 0
}

inline double exponent_y(const GallagerCurves& gc, double rx, double ry, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("exponent_y: gamma must lie in [0, 1]");
  auto obj = [&](double rho) {
    return gamma * (rho * ry - gc.e_y_given_x(rho)) + (1.0 - gamma) * (rho * (rx + ry) - gc.e_xy(rho));
  };
  const ScalarOpt m = golden_maximize(obj, 0.0, 1.0, 1e-10);
  return m.value > 0.0 ? m.value : 0.0;
}

inline double exponent_x(const JointPmf& pmf, double rx, double ry, double gamma) {
  return exponent_x(GallagerCurves(pmf), rx, ry, gamma);
}
inline double exponent_y(const JointPmf& pmf, double rx, double ry, double gamma) {
  return exponent_y(GallagerCurves(pmf), rx, ry, gamma);
}

struct GammaMin {
  double value;
  double gamma;
};

/// inf_{gamma in [0,1]} E_X(R_X, R_Y, gamma). E_X is a pointwise maximum of
/// affine functions of gamma, hence convex; both endpoints are evaluated
/// before the interior search.
inline GammaMin min_exponent_over_gamma_x(const GallagerCurves& gc, double rx, double ry) {
  auto f = [&](double g) { return exponent_x(gc, rx, ry, g); };
  const double f0 = f(0.0), f1 = f(1.0);
  ScalarOpt m = golden_minimize(f, 0.0, 1.0, 1e-10);
  if (f0 <= m.value) m = {0.0, f0};
  if (f1 < m.value) m = {1.0, f1};
  return {m.value, m.x};
}

inline GammaMin min_exponent_over_gamma_y(const GallagerCurves& gc, double rx, double ry) {
  auto f = [&](double g) { return exponent_y(gc, rx, ry, g); };
  const double f0 = f(0.0), f1 = f(1.0);
  ScalarOpt m = golden_minimize(f, 0.0, 1.0, 1e-10);
  if (f0 <= m.value) m = {0.0, f0};
  if (f1 < m.value) m = {1.0, f1};
  return {m.value, m.x};
}

inline GammaMin min_exponent_over_gamma_x(const JointPmf& pmf, double rx, double ry) {
  return min_exponent_over_gamma_x(GallagerCurves(pmf), rx, ry);
}
inline GammaMin min_exponent_over_gamma_y(const JointPmf& pmf, double rx, double ry) {
  return min_exponent_over_gamma_y(GallagerCurves(pmf), rx, ry);
}

/// min over both sides at common rates; the quantity driving every union
/// bound term at full rates.
inline double min_exponent_both(const GallagerCurves& gc, double rx, double ry) {
  return std::min(min_exponent_over_gamma_x(gc, rx, ry).value, min_exponent_over_gamma_y(gc, rx, ry).value);
}

/// Finite-difference checks of the derivative identities E'(0) = H,
/// E''(0) = V,
/// and sampled convexity of E on [0, 1].
struct DerivativeReport {
  double first_err_xy, second_err_xy;
  double first_err_x_given_y, second_err_x_given_y;
  double first_err_y_given_x, second_err_y_given_x;
  double min_second_difference;  // min over rho-grid of central 2nd difference
};

inline DerivativeReport derivative_checks(const JointPmf& pmf, double h = 1e-5) {
  const GallagerCurves gc(pmf);
  const SourceProfile pr = profile(pmf);
  auto d1 = [&](auto&& f) { return (f(h) - f(-h)) / (2.0 * h); };
  auto d2 = [&](auto&& f) { return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h); };
  auto exy = [&](double r) { return gc.e_xy(r); };
  auto exgy = [&](double r) { return gc.e_x_given_y(r); };
  auto eygx = [&](double r) { return gc.e_y_given_x(r); };

  DerivativeReport rep{};
  rep.first_err_xy = std::abs(d1(exy) - pr.h_joint);
  rep.second_err_xy = std::abs(d2(exy) - pr.v_joint);
  rep.first_err_x_given_y = std::abs(d1(exgy) - pr.h_x_given_y);
  rep.second_err_x_given_y = std::abs(d2(exgy) - pr.v_x_given_y);
  rep.first_err_y_given_x = std::abs(d1(eygx) - pr.h_y_given_x);
  rep.second_err_y_given_x = std::abs(d2(eygx) - pr.v_y_given_x);

  rep.min_second_difference = std::numeric_limits<double>::infinity();
  const double step = 1e-4;
  for (double rho = step; rho <= 1.0 - step; rho += 0.05) {
    const double sxy = (exy(rho + step) - 2 * exy(rho) + exy(rho - step)) / (step * step);
    const double sxgy = (exgy(rho + step) - 2 * exgy(rho) + exgy(rho - step)) / (step * step);
    const double sygx = (eygx(rho + step) - 2 * eygx(rho) + eygx(rho - step)) / (step * step);
    rep.min_second_difference = std::min({rep.min_second_difference, sxy, sxgy, sygx});
  }
  return rep;
}

}  // namespace swstream

#endif
