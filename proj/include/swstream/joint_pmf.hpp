#ifndef SWSTREAM_JOINT_PMF_HPP
#define SWSTREAM_JOINT_PMF_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swstream {

/// Finite joint distribution P_XY over X x Y, stored row-major (x-major).
/// Zero cells are kept; all information measures downstream use the
/// convention p log^k p = 0 for p = 0.
class JointPmf {
 public:
  JointPmf(std::size_t nx, std::size_t ny, std::vector<double> probs)
      : nx_(nx), ny_(ny), p_(std::move(probs)) {
    if (nx_ < 2 || ny_ < 2) throw std::invalid_argument("JointPmf: alphabet sizes must be >= 2");
    if (p_.size() != nx_ * ny_) throw std::invalid_argument("JointPmf: wrong number of entries");
    double sum = 0.0;
    for (double v : p_) {
      if (v < 0.0) throw std::invalid_argument("JointPmf: negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("JointPmf: entries must sum to 1");
    px_.assign(nx_, 0.0);
    py_.assign(ny_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t y = 0; y < ny_; ++y) {
        px_[x] += at(x, y);
        py_[y] += at(x, y);
      }
  }

  std::size_t alphabet_x() const { return nx_; }
  std::size_t alphabet_y() const { return ny_; }
  double at(std::size_t x, std::size_t y) const { return p_[x * ny_ + y]; }
  double operator()(std::size_t x, std::size_t y) const { return at(x, y); }
  double px(std::size_t x) const { return px_[x]; }
  double py(std::size_t y) const { return py_[y]; }
  const std::vector<double>& flat() const { return p_; }

 private:
  std::size_t nx_, ny_;
  std::vector<double> p_;
  std::vector<double> px_, py_;
};

/// Doubly symmetric binary source: P(0,0)=P(1,1)=(1-p)/2, off-diagonal p/2.
inline JointPmf make_dsbs(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("make_dsbs: p must lie in [0, 1/2]");
  return JointPmf(2, 2, {(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0});
}

/// X ~ Bern(1/2), Y = X through a Z-channel with flip probability delta:
/// P(Y=0|X=1) = delta, P(Y=0|X=0) = 1.
inline JointPmf make_zchannel(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("make_zchannel: delta must lie in (0, 1)");
  return JointPmf(2, 2, {0.5, 0.0, delta / 2.0, (1.0 - delta) / 2.0});
}

/// Asymmetric correlated binary source: P(0,0)=1-3p, the three other cells p.
/// p = 0 and p = 1/4 give a zero dispersion, p >= 1/3 leaves the simplex;
/// all are rejected.
inline JointPmf make_asymmetric(double p) {
  if (!(p > 0.0 && p < 1.0 / 3.0) || std::abs(p - 0.25) <= 1e-12)
    throw std::invalid_argument("make_asymmetric: p must lie in (0, 1/4) U (1/4, 1/3)");
  return JointPmf(2, 2, {1.0 - 3.0 * p, p, p, p});
}

}  // namespace swstream

#endif
