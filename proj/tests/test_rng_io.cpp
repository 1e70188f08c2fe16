#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "igs/harness.hpp"
#include "igs/rng.hpp"

using igs::Rng;

TEST_CASE("same seed reproduces the sequence exactly") {
  Rng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(42, 7), d(42, 7);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.normal() == d.normal());
    CHECK(c.cnormal(2.0) == d.cnormal(2.0));
  }
}

TEST_CASE("streams and seeds decorrelate") {
  Rng a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("split children ignore the parent's position") {
  Rng parent1(9, 0), parent2(9, 0);
  for (int i = 0; i < 17; ++i) parent2.next_u64();  // advance only one parent
  Rng c1 = parent1.split(3), c2 = parent2.split(3);
  for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c2.next_u64());
}

TEST_CASE("uniform stays in the half-open unit interval") {
  Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("complex normal matches requested variance") {
  Rng r(123);
  const double var = 0.7;
  double acc = 0.0, pseudo_re = 0.0, pseudo_im = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto z = r.cnormal(var);
    acc += std::norm(z);
    pseudo_re += z.real() * z.real() - z.imag() * z.imag();
    pseudo_im += 2.0 * z.real() * z.imag();
  }
  CHECK(acc / n == doctest::Approx(var).epsilon(0.02));
  CHECK(std::abs(pseudo_re / n) < 0.02);
  CHECK(std::abs(pseudo_im / n) < 0.02);
}

TEST_CASE("channel generation is deterministic per seed") {
  igs::ChannelEnsembleConfig cfg;
  cfg.seed = 11;
  cfg.count = 16;
  const auto a = igs::gen_channels(cfg);
  const auto b = igs::gen_channels(cfg);
  REQUIRE(a.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(a[i].h[r][c] == b[i].h[r][c]);
}

TEST_CASE("zero cross variance gives exactly zero interference gains") {
  igs::ChannelEnsembleConfig cfg;
  cfg.var_cross = 0.0;
  cfg.count = 8;
  for (const auto& ic : igs::gen_channels(cfg)) {
    CHECK(ic.h[0][1] == igs::cplx(0.0));
    CHECK(ic.h[1][0] == igs::cplx(0.0));
    CHECK(std::abs(ic.h[0][0]) > 0.0);
  }
}

TEST_CASE("empirical gain variances match the ensemble config") {
  igs::ChannelEnsembleConfig cfg;
  cfg.count = 100000;
  cfg.var_direct = 1.0;
  cfg.var_cross = 0.2;
  const auto chans = igs::gen_channels(cfg);
  double direct = 0.0, cross = 0.0;
  for (const auto& ic : chans) {
    direct += std::norm(ic.h[0][0]) + std::norm(ic.h[1][1]);
    cross += std::norm(ic.h[0][1]) + std::norm(ic.h[1][0]);
  }
  CHECK(direct / (2 * cfg.count) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(cross / (2 * cfg.count) == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("channel json round-trips exactly") {
  const auto rc = igs::reference_case_strong();
  const auto back = igs::channel_from_json(igs::channel_to_json(rc.channel));
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(back.h[r][c] == rc.channel.h[r][c]);
  CHECK(back.sigma2 == rc.channel.sigma2);
  CHECK(back.power[0] == rc.channel.power[0]);
  CHECK(back.power[1] == rc.channel.power[1]);
}

TEST_CASE("strategy json round-trips exactly") {
  const igs::SisoStrategy s{3.25, igs::cplx(-1.5, 2.75)};
  const auto back = igs::strategy_from_json(igs::strategy_to_json(s));
  CHECK(back.c == s.c);
  CHECK(back.ct == s.ct);
}

TEST_CASE("ensemble json round-trips") {
  igs::ChannelEnsembleConfig cfg;
  cfg.count = 5;
  const auto chans = igs::gen_channels(cfg);
  const auto back = igs::ensemble_from_json(igs::ensemble_to_json(cfg, chans));
  REQUIRE(back.size() == chans.size());
  for (std::size_t i = 0; i < chans.size(); ++i) {
    CHECK(back[i].h[0][0] == chans[i].h[0][0]);
    CHECK(back[i].h[1][0] == chans[i].h[1][0]);
    CHECK(back[i].power[0] == chans[i].power[0]);
  }
}

TEST_CASE("malformed channel json is rejected") {
  CHECK_THROWS_AS((void)igs::channel_from_json("{\"h\": []}"), std::invalid_argument);
  CHECK_THROWS_AS((void)igs::channel_from_json("not json"), std::exception);
}
