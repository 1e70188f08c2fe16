#include <doctest.h>

#include <cmath>

#include "igs/baselines.hpp"
#include "igs/rng.hpp"
#include "support/reference_case.hpp"

using igs::cplx;
using igs::GridSpec;
using igs::MaxminMethod;
using igs::RateProfile;

TEST_CASE("time sharing rate follows the single-user formula") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.0, 0.0), cplx(0.7, 0.1)}, {cplx(-0.2, 0.5), cplx(0.0, -1.0)}}};
  ic.power = {10.0, 10.0};
  // both direct gains have unit magnitude, so both slots carry the same rate
  const double expect = 0.5 * std::log1p(10.0);
  CHECK(igs::tdma_maxmin(ic) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect / refcase::kLn2 == doctest::Approx(1.72972).epsilon(1e-5));

  const auto pt = igs::maxmin_point(ic, MaxminMethod::tdma);
  CHECK(pt.diag.status == "tdma");
  CHECK(pt.rates[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(pt.rates[1] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(pt.value == doctest::Approx(2.0 * expect).epsilon(1e-12));
}

TEST_CASE("time sharing picks the weaker direct link") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(2.0, 0.0), cplx(0.0)}, {cplx(0.0), cplx(0.5, 0.0)}}};
  ic.power = {4.0, 9.0};
  const double r1 = 0.5 * std::log1p(4.0 * 4.0);
  const double r2 = 0.5 * std::log1p(0.25 * 9.0);
  CHECK(igs::tdma_maxmin(ic) == doctest::Approx(std::min(r1, r2)).epsilon(1e-12));
}

TEST_CASE("grid search solves the interference-free case exactly") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.1, -0.4), cplx(0.0)}, {cplx(0.0), cplx(0.6, 0.9)}}};
  ic.power = {10.0, 7.0};
  const RateProfile profile(0.5, 0.5);
  double expect = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k)
    expect = std::min(
        expect, std::log1p(std::norm(ic.h[k][k]) * ic.power[k]) / profile[k]);
  // full power and zero pseudo part sit on grid nodes, so the optimum is hit
  // exactly rather than to within the mesh width
  const auto pt = igs::grid_oracle(ic, profile);
  CHECK(pt.value == doctest::Approx(expect).epsilon(1e-9));
  CHECK(std::abs(pt.strategy[0].ct) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(pt.strategy[1].ct) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("grid refinement never loses ground") {
  igs::Rng rng(321);
  for (int rep = 0; rep < 5; ++rep) {
    igs::SisoIcInstance ic;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) ic.h[r][c] = rng.cnormal();
    ic.power = {5.0, 5.0};
    GridSpec coarse;
    coarse.refine = 0;
    GridSpec fine;
    fine.refine = 3;
    const auto a = igs::grid_oracle(ic, {0.5, 0.5}, coarse);
    const auto b = igs::grid_oracle(ic, {0.5, 0.5}, fine);
    CHECK(b.value >= a.value - 1e-12);
    CHECK(b.diag.evaluations > a.diag.evaluations);
  }
}

TEST_CASE("grid witnesses respect the power and magnitude boxes") {
  igs::Rng rng(322);
  for (int rep = 0; rep < 5; ++rep) {
    igs::SisoIcInstance ic;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) ic.h[r][c] = rng.cnormal();
    ic.power = {3.0, 8.0};
    GridSpec spec;
    spec.n_power = 9;
    spec.n_mag = 5;
    spec.n_theta = 24;
    spec.refine = 2;
    const auto pt = igs::grid_oracle(ic, {0.5, 0.5}, spec);
    for (int k = 0; k < 2; ++k) {
      CHECK(pt.strategy[k].c <= ic.power[k] + 1e-12);
      CHECK(std::abs(pt.strategy[k].ct) <= pt.strategy[k].c + 1e-12);
      CHECK(igs::validate_strategy(pt.strategy[k], ic.power[k] + 1e-9).valid);
    }
  }
}

TEST_CASE("egalitarian dispatch keeps the value consistent with the rates") {
  const auto ic = refcase::strong_channel();
  for (const auto method : {MaxminMethod::proper, MaxminMethod::separate,
                            MaxminMethod::joint, MaxminMethod::oracle,
                            MaxminMethod::tdma}) {
    const auto pt = igs::maxmin_point(ic, method);
    CHECK(pt.value ==
          doctest::Approx(std::min(pt.rates[0], pt.rates[1]) / 0.5).epsilon(1e-9));
    CHECK(std::min(pt.rates[0], pt.rates[1]) > 0.0);
  }
}

TEST_CASE("proper egalitarian point matches its own power stage") {
  const auto ic = refcase::strong_channel();
  const auto pt = igs::maxmin_point(ic, MaxminMethod::proper);
  REQUIRE(pt.diag.status == "ok");
  CHECK(std::abs(pt.strategy[0].ct) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(pt.strategy[1].ct) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(pt.value - pt.diag.r_star) <= 5e-4);
}

TEST_CASE("pinned strong case: search hierarchy at the egalitarian profile") {
  const auto ic = refcase::strong_channel();
  const auto proper = igs::maxmin_point(ic, MaxminMethod::proper);
  const auto sep = igs::maxmin_point(ic, MaxminMethod::separate);
  const auto joint = igs::maxmin_point(ic, MaxminMethod::joint);
  const auto oracle = igs::maxmin_point(ic, MaxminMethod::oracle);
  REQUIRE(proper.diag.status == "ok");
  REQUIRE(sep.diag.status == "ok");
  REQUIRE(joint.diag.status == "ok");
  REQUIRE(oracle.diag.status == "ok");
  CHECK(sep.value >= proper.value - 1e-9);
  CHECK(joint.value >= proper.value - 1e-9);
  // the exhaustive search is mesh limited, so it may trail slightly, but
  // never by much
  CHECK(oracle.value >= 0.98 * joint.value);
  CHECK(oracle.value <= joint.diag.upper_bound + 1e-6);
}

TEST_CASE("pinned weak case regression values") {
  const auto ic = refcase::weak_channel();
  const auto proper = igs::maxmin_point(ic, MaxminMethod::proper);
  const auto oracle = igs::maxmin_point(ic, MaxminMethod::oracle);
  CHECK(proper.value == doctest::Approx(refcase::kFrozenWeakProper).epsilon(2e-4));
  CHECK(oracle.value == doctest::Approx(refcase::kFrozenWeakOracle).epsilon(2e-4));
}
