#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "swstream/joint_pmf.hpp"
#include "swstream/sampling.hpp"
#include "swstream/source_desc.hpp"

using namespace swstream;

TEST_CASE("dsbs factory") {
  SECTION("noiseless p=0") {
    const JointPmf p = make_dsbs(0.0);
    CHECK(p(0, 0) == 0.5);
    CHECK(p(1, 1) == 0.5);
    CHECK(p(0, 1) == 0.0);
    CHECK(p(1, 0) == 0.0);
  }
  SECTION("independent p=1/2") {
    const JointPmf p = make_dsbs(0.5);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) CHECK(p(x, y) == 0.25);
  }
  SECTION("p=0.11") {
    const JointPmf p = make_dsbs(0.11);
    CHECK(p(0, 0) == Catch::Approx(0.445).margin(1e-15));
    CHECK(p(0, 1) == Catch::Approx(0.055).margin(1e-15));
    CHECK(p(1, 0) == Catch::Approx(0.055).margin(1e-15));
    CHECK(p(1, 1) == Catch::Approx(0.445).margin(1e-15));
  }
  CHECK_THROWS_AS(make_dsbs(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(make_dsbs(0.51), std::invalid_argument);
}

TEST_CASE("zchannel factory") {
  const JointPmf p = make_zchannel(0.6);
  CHECK(p(0, 0) == 0.5);
  CHECK(p(0, 1) == 0.0);
  CHECK(p(1, 0) == Catch::Approx(0.3).margin(1e-15));
  CHECK(p(1, 1) == Catch::Approx(0.2).margin(1e-15));
  const JointPmf q = make_zchannel(0.5);
  CHECK(q(1, 0) == 0.25);
  CHECK(q(1, 1) == 0.25);
  // the (0,1) cell is structurally zero for every delta
  for (double d : {0.05, 0.3, 0.95}) CHECK(make_zchannel(d)(0, 1) == 0.0);
  CHECK_THROWS_AS(make_zchannel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_zchannel(1.0), std::invalid_argument);
}

TEST_CASE("asymmetric factory") {
  const JointPmf p = make_asymmetric(0.1);
  CHECK(p(0, 0) == Catch::Approx(0.7).margin(1e-15));
  CHECK(p(0, 1) == Catch::Approx(0.1).margin(1e-15));
  CHECK(p(1, 0) == Catch::Approx(0.1).margin(1e-15));
  CHECK(p(1, 1) == Catch::Approx(0.1).margin(1e-15));
  const JointPmf q = make_asymmetric(0.3);
  CHECK(q(0, 0) == Catch::Approx(0.1).margin(1e-15));
  CHECK(q(1, 1) == Catch::Approx(0.3).margin(1e-15));
  CHECK_THROWS_AS(make_asymmetric(0.25), std::invalid_argument);
  CHECK_THROWS_AS(make_asymmetric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_asymmetric(1.0 / 3.0), std::invalid_argument);
  CHECK_THROWS_AS(make_asymmetric(0.4), std::invalid_argument);
}

TEST_CASE("factories are pure and normalized") {
  for (double p : {0.05, 0.11, 0.3, 0.49}) {
    const JointPmf a = make_dsbs(p), b = make_dsbs(p);
    CHECK(a.flat() == b.flat());
    double sum = 0;
    for (double v : a.flat()) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("sample_blocks determinism and point mass") {
  const JointPmf point(2, 2, {1.0, 0.0, 0.0, 0.0});
  const SourceStream s = sample_blocks(point, 4, 10, 7);
  for (const Block& b : s.x_blocks)
    for (Symbol v : b) CHECK(v == 0);
  for (const Block& b : s.y_blocks)
    for (Symbol v : b) CHECK(v == 0);

  const JointPmf dsbs = make_dsbs(0.2);
  const SourceStream a = sample_blocks(dsbs, 8, 50, 1234);
  const SourceStream b = sample_blocks(dsbs, 8, 50, 1234);
  CHECK(a.x_blocks == b.x_blocks);
  CHECK(a.y_blocks == b.y_blocks);
  const SourceStream c = sample_blocks(dsbs, 8, 50, 1235);
  CHECK(a.x_blocks != c.x_blocks);
}

TEST_CASE("sample_blocks empirical frequencies") {
  const JointPmf dsbs = make_dsbs(0.5);
  const SourceStream s = sample_blocks(dsbs, 1000, 1, 42);
  std::map<std::pair<int, int>, double> freq;
  for (std::size_t i = 0; i < 1000; ++i) freq[{s.x_blocks[0][i], s.y_blocks[0][i]}] += 1e-3;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(freq[{x, y}] == Catch::Approx(0.25).margin(0.05));
}

TEST_CASE("sample_blocks converges at 1e5 symbols") {
  const JointPmf pmf = make_asymmetric(0.1);
  const SourceStream s = sample_blocks(pmf, 100, 1000, 99);  // 1e5 symbol pairs
  std::vector<double> freq(4, 0.0);
  const double w = 1.0 / 1e5;
  for (int k = 0; k < 1000; ++k)
    for (int i = 0; i < 100; ++i) freq[s.x_blocks[k][i] * 2 + s.y_blocks[k][i]] += w;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(std::abs(freq[x * 2 + y] - pmf(x, y)) < 0.02);
}

TEST_CASE("joint pmf validation") {
  CHECK_THROWS_AS(JointPmf(1, 2, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf(2, 2, {0.5, 0.5, 0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf(2, 2, {0.9, 0.2, -0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("source descriptors") {
  CHECK(make_source("dsbs:p=0.11")(0, 0) == Catch::Approx(0.445));
  CHECK(make_source("zchannel:delta=0.6")(1, 0) == Catch::Approx(0.3));
  CHECK(make_source("asym:p=0.1")(0, 0) == Catch::Approx(0.7));
  CHECK_THROWS_AS(make_source("dsbs"), std::invalid_argument);
  CHECK_THROWS_AS(make_source("dsbs:q=0.1"), std::invalid_argument);
  CHECK_THROWS_AS(make_source("nope:p=0.1"), std::invalid_argument);
}
