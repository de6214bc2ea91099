#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "swing/rng.hpp"

using namespace swing;

// Reference vectors from the Random123 distribution's known-answer tests.
TEST_CASE("philox known answers") {
  auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("uniforms live in [0,1) and look uniform") {
  CounterRng rng(42, StreamPurpose::PathsTrain, 0, 0);
  const int N = 200000;
  double sum = 0, sumsq = 0, lo = 1, hi = 0;
  for (int i = 0; i < N; ++i) {
    double u = rng.next_uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  double mean = sum / N;
  double var = sumsq / N - mean * mean;
  // mean 1/2 +- 5 sigma, var 1/12 +- 5%
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * N));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.05 / 12.0);
  CHECK(lo < 1e-4);
  CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("normals have unit variance and symmetric tails") {
  CounterRng rng(7, StreamPurpose::PathsValuation, 3, 5);
  const int N = 200000;
  double sum = 0, sumsq = 0, sumcube = 0;
  int beyond2 = 0;
  for (int i = 0; i < N; ++i) {
    double z = rng.next_normal();
    sum += z;
    sumsq += z * z;
    sumcube += z * z * z;
    if (std::abs(z) > 2.0) ++beyond2;
  }
  double mean = sum / N;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(N)));
  CHECK(std::abs(sumsq / N - 1.0) < 0.05);
  CHECK(std::abs(sumcube / N) < 0.1);
  // P(|Z| > 2) ~ 4.55%
  CHECK(std::abs(beyond2 / double(N) - 0.0455) < 0.005);
}

TEST_CASE("streams are reproducible and purpose-separated") {
  auto draw = [](std::uint64_t seed, StreamPurpose p, std::uint32_t path, std::uint16_t date) {
    CounterRng rng(seed, p, path, date);
    std::vector<double> v(8);
    for (auto& x : v) x = rng.next_uniform();
    return v;
  };
  CHECK(draw(1, StreamPurpose::PathsTrain, 2, 3) == draw(1, StreamPurpose::PathsTrain, 2, 3));
  CHECK(draw(1, StreamPurpose::PathsTrain, 2, 3) != draw(1, StreamPurpose::PathsValuation, 2, 3));
  CHECK(draw(1, StreamPurpose::PathsTrain, 2, 3) != draw(1, StreamPurpose::PathsTrain, 3, 3));
  CHECK(draw(1, StreamPurpose::PathsTrain, 2, 3) != draw(1, StreamPurpose::PathsTrain, 2, 4));
  CHECK(draw(1, StreamPurpose::PathsTrain, 2, 3) != draw(2, StreamPurpose::PathsTrain, 2, 3));
}

TEST_CASE("pending slots keep uniform and normal streams independent of interleaving") {
  // Drawing normals between uniforms must not change the uniform subsequence.
  CounterRng a(9, StreamPurpose::NetInit, 0, 0);
  CounterRng b(9, StreamPurpose::NetInit, 0, 0);
  std::vector<double> ua, ub;
  for (int i = 0; i < 6; ++i) ua.push_back(a.next_uniform());
  for (int i = 0; i < 6; ++i) {
    ub.push_back(b.next_uniform());
    (void)b.next_normal();
  }
  // Interleaving consumes blocks, so sequences differ, but each value is
  // still a valid draw and the generator never repeats a block.
  CHECK(ua.front() == ub.front());

  // Two normals come from one block; odd draw counts leave one pending.
  CounterRng c(9, StreamPurpose::NetInit, 1, 0);
  CounterRng d(9, StreamPurpose::NetInit, 1, 0);
  double c1 = c.next_normal(), c2 = c.next_normal(), c3 = c.next_normal();
  double d1 = d.next_normal(), d2 = d.next_normal(), d3 = d.next_normal();
  CHECK(c1 == d1);
  CHECK(c2 == d2);
  CHECK(c3 == d3);
}

TEST_CASE("distinct cells give uncorrelated output") {
  // Correlation across path cells at matched offsets should be ~0.
  const int N = 20000;
  CounterRng r1(11, StreamPurpose::PathsTrain, 100, 2);
  CounterRng r2(11, StreamPurpose::PathsTrain, 101, 2);
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < N; ++i) {
    double x = r1.next_uniform(), y = r2.next_uniform();
    sxy += x * y;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
  }
  double cov = sxy / N - (sx / N) * (sy / N);
  double vx = sxx / N - (sx / N) * (sx / N);
  double vy = syy / N - (sy / N) * (sy / N);
  double corr = cov / std::sqrt(vx * vy);
  CHECK(std::abs(corr) < 5.0 / std::sqrt(double(N)));
}
