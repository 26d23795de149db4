#ifndef SWSTREAM_INFO_MEASURES_HPP
#define SWSTREAM_INFO_MEASURES_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "swstream/joint_pmf.hpp"
#include "swstream/sampling.hpp"

namespace swstream {

/// Entropies and varentropies of a joint source, in nats and nats^2.
struct SourceProfile {
  double h_joint = 0;
  double h_x_given_y = 0;
  double h_y_given_x = 0;
  double h_x = 0;
  double h_y = 0;
  double v_joint = 0;
  double v_x_given_y = 0;
  double v_y_given_x = 0;
  double v_x = 0;
  double v_y = 0;
};

namespace detail {
inline double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log(q);
  return h;
}
inline double varentropy_of(const std::vector<double>& p, double h) {
  double v = 0.0;
  for (double q : p)
    if (q > 0.0) {
      const double d = -std::log(q) - h;
      v += q * d * d;
    }
  return v;
}
}  // namespace detail

/// All measures; sums run only over cells with positive probability.
/// Conditional varentropies are computed directly from the definition
/// (expected squared deviation of -log P(x|y)), not via variance identities.
inline SourceProfile profile(const JointPmf& pmf) {
  const std::size_t nx = pmf.alphabet_x(), ny = pmf.alphabet_y();
  SourceProfile pr;
  std::vector<double> px(nx), py(ny);
  for (std::size_t x = 0; x < nx; ++x) px[x] = pmf.px(x);
  for (std::size_t y = 0; y < ny; ++y) py[y] = pmf.py(y);
  pr.h_joint = detail::entropy_of(pmf.flat());
  pr.h_x = detail::entropy_of(px);
  pr.h_y = detail::entropy_of(py);
  pr.v_joint = detail::varentropy_of(pmf.flat(), pr.h_joint);
  pr.v_x = detail::varentropy_of(px, pr.h_x);
  pr.v_y = detail::varentropy_of(py, pr.h_y);

  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = pmf.at(x, y);
      if (p <= 0.0) continue;
      pr.h_x_given_y += p * (-std::log(p / py[y]));
      pr.h_y_given_x += p * (-std::log(p / px[x]));
    }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = pmf.at(x, y);
      if (p <= 0.0) continue;
      const double dx = -std::log(p / py[y]) - pr.h_x_given_y;
      const double dy = -std::log(p / px[x]) - pr.h_y_given_x;
      pr.v_x_given_y += p * dx * dx;
      pr.v_y_given_x += p * dy * dy;
    }
  return pr;
}

/// True iff all three dispersions V(P_XY), V(P_X|Y|P_Y), V(P_Y|X|P_X)
/// exceed eps.
inline bool check_positive_dispersions(const SourceProfile& pr, double eps = 1e-12) {
  return pr.v_joint > eps && pr.v_x_given_y > eps && pr.v_y_given_x > eps;
}

struct EmpiricalEntropy {
  double h_joint;     // entropy of the joint type of (x, y)
  double h_x_given_y; // H(T_{x|y} | T_y)
};

/// Empirical entropies of the joint type of two equal-length sequences.
/// Counts are integer; the type probabilities come from one division each,
/// so a point-mass type yields exactly zero.
inline EmpiricalEntropy empirical_entropy(std::span<const Symbol> x, std::span<const Symbol> y) {
  if (x.size() != y.size()) throw std::invalid_argument("empirical_entropy: length mismatch");
  if (x.empty()) throw std::invalid_argument("empirical_entropy: empty sequences");
  std::size_t ax = 0, ay = 0;
  for (Symbol s : x) ax = std::max<std::size_t>(ax, s + 1);
  for (Symbol s : y) ay = std::max<std::size_t>(ay, s + 1);
  std::vector<std::size_t> joint(ax * ay, 0), marg_y(ay, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++joint[x[i] * ay + y[i]];
    ++marg_y[y[i]];
  }
  const double total = static_cast<double>(x.size());
  auto entropy_counts = [&](const std::vector<std::size_t>& c) {
    double h = 0.0;
    for (std::size_t v : c)
      if (v > 0) {
        const double p = static_cast<double>(v) / total;
        h -= p * std::log(p);
      }
    return h;
  };
  const double hj = entropy_counts(joint);
  const double hy = entropy_counts(marg_y);
  return {hj, hj - hy};
}

inline EmpiricalEntropy empirical_entropy(const Block& x, const Block& y) {
  return empirical_entropy(std::span<const Symbol>(x), std::span<const Symbol>(y));
}

}  // namespace swstream

#endif
