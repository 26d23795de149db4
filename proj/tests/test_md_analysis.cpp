#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "swstream/md_analysis.hpp"

using namespace swstream;

namespace {
JointPmf random_pmf(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  const double s = a + b + c + d;
  a /= s;
  b /= s;
  c /= s;
  return JointPmf(2, 2, {a, b, c, 1.0 - a - b - c});
}
}  // namespace

TEST_CASE("target validation") {
  const SourceProfile pr = profile(make_dsbs(0.11));
  CHECK_NOTHROW(make_target(pr, BoundaryCase::ii, pr.h_x_given_y, pr.h_y, {1.0, 0.0}));
  CHECK_THROWS_AS(make_target(pr, BoundaryCase::ii, pr.h_x_given_y + 0.01, pr.h_y, Theta{1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_target(pr, BoundaryCase::ii, pr.h_x_given_y, pr.h_y, Theta{1.0, -1.0}),
                  std::invalid_argument);  // theta on the boundary of Theta_(ii) is rejected
  CHECK_THROWS_AS(make_target(pr, BoundaryCase::i, pr.h_x_given_y, pr.h_y, Theta{1.0, 0.0}),
                  std::invalid_argument);  // case (i) needs R_Y* strictly above H(Y)
  CHECK_NOTHROW(make_target(pr, BoundaryCase::i, pr.h_x_given_y, pr.h_y + 0.2, Theta{2.0, -5.0}));
  CHECK_THROWS_AS(make_target(pr, BoundaryCase::iii, pr.h_x_given_y, pr.h_y, Theta{1.0, 1.0}),
                  std::invalid_argument);  // not interior
}

TEST_CASE("nu_nonstreaming formulas") {
  SECTION("constructed case (iii)") {
    SourceProfile pr{};
    pr.v_joint = 2.0;
    pr.v_x_given_y = pr.v_y_given_x = 1.0;
    const BoundaryTarget t{BoundaryCase::iii, 0, 0, {1.0, 1.0}};
    CHECK(nu_nonstreaming(pr, t) == Catch::Approx(1.0));  // (1+1)^2 / (2*2)
  }
  SECTION("dsbs case (ii), theta=(1,0)") {
    const SourceProfile pr = profile(make_dsbs(0.11));
    const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, {1.0, 0.0});
    // V_j = V_c for this family, so both branches coincide at 1/(2 V_c)
    CHECK(nu_nonstreaming(pr, t) == Catch::Approx(1.0 / (2.0 * pr.v_x_given_y)).epsilon(1e-12));
  }
  SECTION("case (i) ignores theta2") {
    const SourceProfile pr = profile(make_zchannel(0.6));
    const BoundaryTarget a = make_target_auto(pr, BoundaryCase::i, {2.0, -3.0});
    const BoundaryTarget b = make_target_auto(pr, BoundaryCase::i, {2.0, 7.0});
    CHECK(nu_nonstreaming(pr, a) == Catch::Approx(4.0 / (2.0 * pr.v_x_given_y)).epsilon(1e-12));
    CHECK(nu_nonstreaming(pr, a) == nu_nonstreaming(pr, b));
  }
}

TEST_CASE("streaming bound vs nonstreaming") {
  SECTION("T=1 never exceeds the nonstreaming constant in case (ii)") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dt(-0.9, 3.0);
    for (int i = 0; i < 100; ++i) {
      const JointPmf pmf = random_pmf(rng);
      const SourceProfile pr = profile(pmf);
      if (!check_positive_dispersions(pr)) continue;
      const Theta th{1.0, dt(rng)};
      const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, th);
      CHECK(nu_streaming_lower(pr, t, 1) <= nu_nonstreaming(pr, t) + 1e-12);
    }
  }
  SECTION("dsbs achieves exactly T times the nonstreaming constant") {
    const SourceProfile pr = profile(make_dsbs(0.23));
    for (const Theta th : {Theta{1.0, 0.0}, Theta{1.0, 2.0}, Theta{2.0, -1.0}, Theta{0.5, 10.0}}) {
      const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, th);
      CHECK(nu_streaming_lower(pr, t, 3) ==
            Catch::Approx(3.0 * nu_nonstreaming(pr, t)).epsilon(1e-12));
    }
  }
  SECTION("asym(0.1) with theta ratio 0.5 falls strictly short of the T gain") {
    const SourceProfile pr = profile(make_asymmetric(0.1));
    const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, {1.0, 0.5});
    CHECK(nu_streaming_lower(pr, t, 2) < 2.0 * nu_nonstreaming(pr, t) * (1.0 - 1e-9));
  }
  SECTION("cases (i) and (iii) always gain the factor T") {
    const SourceProfile pr = profile(make_zchannel(0.35));
    const BoundaryTarget t1 = make_target_auto(pr, BoundaryCase::i, {1.5, 0.0});
    const BoundaryTarget t3 = make_target_auto(pr, BoundaryCase::iii, {0.7, 0.9});
    for (int T : {1, 2, 5}) {
      CHECK(nu_streaming_lower(pr, t1, T) == Catch::Approx(T * nu_nonstreaming(pr, t1)));
      CHECK(nu_streaming_lower(pr, t3, T) == Catch::Approx(T * nu_nonstreaming(pr, t3)));
    }
  }
}

TEST_CASE("minimize_f_over_gamma") {
  SECTION("equal dispersions: minimizer at an endpoint") {
    const SourceProfile pr = profile(make_dsbs(0.11));
    const GammaMinF m = minimize_f_over_gamma(pr, {1.0, 0.5});
    CHECK(m.gamma == 1.0);
    CHECK(m.value == Catch::Approx(1.0 / (2.0 * pr.v_x_given_y)));
  }
  SECTION("theta2=0: larger-dispersion endpoint wins") {
    const SourceProfile pr = profile(make_zchannel(0.6));  // V_j > V_c
    const GammaMinF m = minimize_f_over_gamma(pr, {1.0, 0.0});
    CHECK(m.gamma == 0.0);
    CHECK(m.value == Catch::Approx(1.0 / (2.0 * pr.v_joint)));
  }
  SECTION("grid oracle agreement on random cases") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dt(-0.9, 3.0);
    for (int i = 0; i < 50; ++i) {
      const JointPmf pmf = random_pmf(rng);
      const SourceProfile pr = profile(pmf);
      if (!check_positive_dispersions(pr)) continue;
      const Theta th{1.0, dt(rng)};
      const GammaMinF m = minimize_f_over_gamma(pr, th);
      double oracle = std::numeric_limits<double>::infinity();
      for (double g = 0.0; g <= 1.0 + 1e-12; g += 1e-5)
        oracle = std::min(oracle, case_ii_objective(pr.v_x_given_y, pr.v_joint, th, std::min(g, 1.0)));
      CHECK(m.value == Catch::Approx(oracle).margin(1e-8));
      CHECK(m.value <= oracle + 1e-12);  // never exceeds any grid point
    }
  }
}

TEST_CASE("gain region thresholds") {
  SECTION("dsbs: g1 = g2 = 0, every direction gains") {
    for (double p : {0.05, 0.11, 0.3, 0.49}) {
      const SourceProfile pr = profile(make_dsbs(p));
      const GainVerdict v = gain_region(pr, {1.0, 0.37});
      CHECK(std::abs(v.g1) < 1e-12);
      CHECK(std::abs(v.g2) < 1e-12);
      CHECK(v.holds_gain_t);
      CHECK(gain_region(pr, {1.0, -0.9}).holds_gain_t);
    }
  }
  SECTION("zchannel delta=0.6 pins the printed thresholds") {
    const SourceProfile pr = profile(make_zchannel(0.6));
    const GainVerdict v = gain_region(pr, {1.0, 0.0});
    CHECK(v.g1 == Catch::Approx(0.058).margin(0.003));
    CHECK(v.g2 == Catch::Approx(0.056).margin(0.003));
    // frozen from this implementation for regression
    CHECK(v.g1 == Catch::Approx(0.058893205263178).margin(1e-12));
    CHECK(v.g2 == Catch::Approx(0.055617700605172).margin(1e-12));
    CHECK(v.holds_gain_t);  // 0 <= g2
    CHECK_FALSE(gain_region(pr, {1.0, 0.057}).holds_gain_t);
  }
  SECTION("asym(0.1): ratio 0.5 lies in the gap") {
    const SourceProfile pr = profile(make_asymmetric(0.1));
    const GainVerdict v = gain_region(pr, {1.0, 0.5});
    CHECK_FALSE(v.holds_gain_t);
    // frozen values; the (0.40, 0.67) pair often quoted for this family is
    // what these formulas give at p = 0.09, not at p = 0.1
    CHECK(v.g2 == Catch::Approx(0.39197547614398).margin(1e-11));
    CHECK(v.g1 == Catch::Approx(0.64467050384436).margin(1e-11));
    const SourceProfile pr09 = profile(make_asymmetric(0.09));
    const GainVerdict v09 = gain_region(pr09, {1.0, 0.5});
    CHECK(v09.g2 == Catch::Approx(0.40).margin(0.005));
    CHECK(v09.g1 == Catch::Approx(0.67).margin(0.005));
  }
  SECTION("g1 >= g2 always, equality iff equal dispersions") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const SourceProfile pr = profile(random_pmf(rng));
      if (!(pr.v_x_given_y > 0)) continue;
      const GainVerdict v = gain_region(pr, {1.0, 0.0});
      CHECK(v.g1 >= v.g2 - 1e-12);
      if (std::abs(pr.v_joint - pr.v_x_given_y) < 1e-10) CHECK(std::abs(v.g1 - v.g2) < 1e-9);
      else CHECK(v.g1 > v.g2);
    }
  }
}

TEST_CASE("g_curves tables") {
  SECTION("zchannel grid: g1 >= g2 row-wise") {
    const auto rows = g_curves("zchannel", 0.05, 0.95, 0.05);
    CHECK(rows.size() == 19);
    for (const auto& r : rows) CHECK(r.g1 >= r.g2 - 1e-12);
  }
  SECTION("dsbs grid: all-zero columns") {
    for (const auto& r : g_curves("dsbs", 0.05, 0.45, 0.05)) {
      CHECK(std::abs(r.g1) < 1e-12);
      CHECK(std::abs(r.g2) < 1e-12);
    }
  }
  SECTION("asym grid includes the p=0.1 row") {
    const auto rows = g_curves("asym", 0.02, 0.32, 0.02);
    bool found = false;
    for (const auto& r : rows)
      if (std::abs(r.param - 0.1) < 1e-9) {
        found = true;
        CHECK(r.g2 == Catch::Approx(0.392).margin(0.001));
        CHECK(r.g1 == Catch::Approx(0.6447).margin(0.001));
      }
    CHECK(found);
  }
}

TEST_CASE("gain-region equivalence on randomized cases") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> dt(-0.95, 3.0);
  int tested = 0;
  while (tested < 300) {
    const JointPmf pmf = random_pmf(rng);
    const SourceProfile pr = profile(pmf);
    if (!check_positive_dispersions(pr)) continue;
    const Theta th{1.0, dt(rng)};
    const GainVerdict v = gain_region(pr, th);
    // keep a guard band around the thresholds so the float knife edge
    // cannot flip one side of the equivalence
    if (std::abs(v.ratio - v.g1) < 1e-3 || std::abs(v.ratio - v.g2) < 1e-3) continue;
    ++tested;
    const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, th);
    const double lhs = nu_streaming_lower(pr, t, 4) / 4.0;
    const double rhs = nu_nonstreaming(pr, t);
    const bool equal = std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs));
    CHECK(equal == v.holds_gain_t);
  }
}

TEST_CASE("l_constant consistency") {
  const SourceProfile pr = profile(make_asymmetric(0.1));
  for (const auto& [c, th] : std::vector<std::pair<BoundaryCase, Theta>>{
           {BoundaryCase::i, {1.0, 0.0}},
           {BoundaryCase::ii, {1.0, 0.5}},
           {BoundaryCase::iii, {1.0, 1.0}},
           {BoundaryCase::iv, {0.5, 1.0}},
           {BoundaryCase::v, {0.0, 1.0}}}) {
    const BoundaryTarget t = make_target_auto(pr, c, th);
    for (int T : {1, 2, 7}) CHECK(nu_streaming_lower(pr, t, T) == Catch::Approx(T * l_constant(pr, t)));
  }
  const BoundaryTarget t1 = make_target_auto(pr, BoundaryCase::i, {1.0, 0.0});
  CHECK(l_constant(pr, t1) == Catch::Approx(1.0 / (2.0 * pr.v_x_given_y)));
  const BoundaryTarget t3 = make_target_auto(pr, BoundaryCase::iii, {1.0, 1.0});
  CHECK(l_constant(pr, t3) == Catch::Approx(4.0 / (2.0 * pr.v_joint)));
}

TEST_CASE("two delays and point-to-point") {
  const SourceProfile pr = profile(make_zchannel(0.6));
  const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, {1.0, 0.2});
  CHECK(nu_two_delays(pr, t, 3, 3) == Catch::Approx(nu_streaming_lower(pr, t, 3)));
  CHECK(nu_two_delays(pr, t, 2, 5) == Catch::Approx(nu_streaming_lower(pr, t, 2)));
  CHECK(nu_two_delays(pr, t, 5, 2) == Catch::Approx(nu_two_delays(pr, t, 2, 5)));

  CHECK(nu_point_to_point(pr, 1, true) == Catch::Approx(1.0 / (2.0 * pr.v_x_given_y)));
  CHECK(nu_point_to_point(pr, 4, true) == Catch::Approx(4.0 * nu_point_to_point(pr, 1, true)));
  const SourceProfile asym = profile(make_asymmetric(0.1));
  CHECK(nu_point_to_point(asym, 1, false) == Catch::Approx(1.0 / (2.0 * asym.v_x)));
  // dsbs has a uniform Bern(1/2) X marginal, so the no-side-info constant is undefined
  const SourceProfile dsbs = profile(make_dsbs(0.11));
  CHECK_THROWS_AS(nu_point_to_point(dsbs, 1, false), std::invalid_argument);
}

TEST_CASE("md limit check converges for dsbs(0.11) case (ii)") {
  const JointPmf pmf = make_dsbs(0.11);
  const SourceProfile pr = profile(pmf);
  const BoundaryTarget t = make_target_auto(pr, BoundaryCase::ii, {1.0, 0.0});
  const MdLimitReport rep = md_limit_check(pmf, pr, t);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[2].rel_err < 0.05);
  CHECK(rep.rows[0].rel_err > rep.rows[1].rel_err);
  CHECK(rep.rows[1].rel_err > rep.rows[2].rel_err);
}
