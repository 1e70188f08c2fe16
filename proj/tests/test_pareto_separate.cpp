#include <doctest.h>

#include <cmath>
#include <complex>

#include "igs/harness.hpp"
#include "igs/pareto_separate.hpp"
#include "igs/rate_engine.hpp"
#include "igs/rng.hpp"
#include "support/reference_case.hpp"

using igs::cplx;
using igs::RateProfile;
using igs::SisoStrategy;

TEST_CASE("power stage decouples without interference") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.2, 0.5), cplx(0.0)}, {cplx(0.0), cplx(0.8, -0.3)}}};
  ic.power = {10.0, 5.0};
  const RateProfile profile(0.35, 0.65);
  double expect = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k)
    expect = std::min(
        expect, std::log1p(std::norm(ic.h[k][k]) * ic.power[k]) / profile[k]);
  const auto ps = igs::proper_pareto_point(ic, profile);
  REQUIRE(ps.ok);
  CHECK(std::abs(ps.r_star - expect) <= 2.5e-4);
}

TEST_CASE("power stage reports zero without direct links") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(0.0), cplx(0.4, 0.1)}, {cplx(0.3, -0.2), cplx(0.0)}}};
  const auto ps = igs::proper_pareto_point(ic, {0.5, 0.5});
  REQUIRE(ps.ok);
  CHECK(ps.r_star == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("symmetric channels get symmetric power witnesses") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.0, 0.4), cplx(0.3, -0.5)}, {cplx(-0.5, 0.3), cplx(0.4, -1.0)}}};
  // equal magnitudes on both direct and both cross links
  ic.power = {5.0, 5.0};
  const auto ps = igs::proper_pareto_point(ic, {0.5, 0.5});
  REQUIRE(ps.ok);
  CHECK(std::abs(ps.c[0] - ps.c[1]) < 1e-6);
}

TEST_CASE("pseudo stage coefficients are trivial at the power-stage value") {
  const auto ic = refcase::strong_channel();
  const RateProfile profile(0.6130, 0.3870);
  const auto ps = igs::proper_pareto_point(ic, profile);
  REQUIRE(ps.ok);
  const auto pc = igs::pseudo_coeffs(ic, ps.c, ps.r_star, ps.r_star, profile);
  CHECK(pc.beta1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pc.beta2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pc.b1 == doctest::Approx(0.0).scale(1.0));
  CHECK(pc.b2 == doctest::Approx(0.0).scale(1.0));

  // growth factors increase with the target rate
  double prev1 = pc.beta1, prev2 = pc.beta2;
  for (double dr : {0.05, 0.1, 0.2}) {
    const auto p2 = igs::pseudo_coeffs(ic, ps.c, ps.r_star, ps.r_star + dr, profile);
    CHECK(p2.beta1 > prev1);
    CHECK(p2.beta2 > prev2);
    prev1 = p2.beta1;
    prev2 = p2.beta2;
  }
}

TEST_CASE("pseudo stage coefficients encode the target rates") {
  // user k's cone bounds the partner magnitude: |q_other|^2 >= a_k |h_k1^2 q_1
  // + h_k2^2 q_2|^2 + b_k.  With equality the achieved rate must satisfy the
  // exact identity rate_k = alpha_k (R - r_star) + log(cy_k / cs_k).
  igs::Rng rng(606);
  int built = 0;
  for (int rep = 0; rep < 40; ++rep) {
    igs::SisoIcInstance ic;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) ic.h[r][c] = rng.cnormal();
    ic.power = {3.0, 3.0};
    const RateProfile profile(0.5, 0.5);
    const auto ps = igs::proper_pareto_point(ic, profile);
    if (!ps.ok || ps.r_star < 0.2) continue;
    const double target = ps.r_star + 0.05;
    const auto pc = igs::pseudo_coeffs(ic, ps.c, ps.r_star, target, profile);
    if (pc.degenerate) continue;

    for (int k = 0; k < 2; ++k) {
      const int o = 1 - k;
      const double a = (k == 0) ? pc.a1 : pc.a2;
      const double b = (k == 0) ? pc.b1 : pc.b2;
      const cplx sk = ic.h[k][k] * ic.h[k][k];
      const cplx so = ic.h[k][o] * ic.h[k][o];
      const double t = 0.9 * ps.c[o];
      if (t * t <= b) continue;  // equality unreachable inside the box
      const cplx qo = std::polar(t, rng.uniform(0.0, 2 * M_PI));
      // choose q_k so the aggregate pseudo-covariance at receiver k hits the
      // cone boundary at a random phase
      const cplx v = std::polar(std::sqrt((t * t - b) / a), rng.uniform(0.0, 2 * M_PI));
      const cplx qk = (v - so * qo) / sk;
      if (std::abs(qk) > ps.c[k]) continue;  // outside the validity box
      std::array<SisoStrategy, 2> tx;
      tx[k] = SisoStrategy{ps.c[k], qk};
      tx[o] = SisoStrategy{ps.c[o], qo};
      const double want =
          profile[k] * (target - ps.r_star) + std::log(pc.cy[k] / pc.cs[k]);
      const double got = igs::siso_rate(ic, tx, k).total;
      CHECK(got == doctest::Approx(want).epsilon(1e-8));
      ++built;
    }
  }
  CHECK(built >= 15);
}

TEST_CASE("planted stationary-system roots are recovered") {
  igs::Rng rng(1234);
  for (int rep = 0; rep < 200; ++rep) {
    const double m_max = rng.uniform(0.5, 3.0);
    const double m0 = rng.uniform(0.1, m_max);
    const double th0 = rng.uniform(0.0, 2 * M_PI);
    // keep the phase offset away from 0 and pi so the elimination stays
    // well conditioned
    const double sgn = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    const double omega = sgn * rng.uniform(0.4, M_PI - 0.4);
    const double d1 = rng.uniform(-1.0, 1.0);
    const double d3 = rng.uniform(-1.0, 1.0);
    // back-solve the constant terms so (th0, m0) satisfies both equations
    const double d2 = -(m0 * std::cos(th0) + d1 * m0 * m0);
    const double d4 = -(m0 * std::cos(th0 + omega) + d3 * m0 * m0);
    const auto roots = igs::solve_reduced_theta(d1, d2, d3, d4, omega, m_max);
    bool hit = false;
    for (const auto& [eta, m] : roots) {
      const double r1 = m * std::cos(eta) + d1 * m * m + d2;
      const double r2 = m * std::cos(eta + omega) + d3 * m * m + d4;
      CHECK(std::abs(r1) < 1e-6);
      CHECK(std::abs(r2) < 1e-6);
      const double dth = std::remainder(eta - th0, 2 * M_PI);
      if (std::abs(dth) < 1e-6 && std::abs(m - m0) < 1e-6) hit = true;
    }
    CHECK(hit);
  }
}

TEST_CASE("fully coincident stationary systems yield no isolated roots") {
  // identical equations leave a curve of solutions, not points; the solver
  // must decline rather than fabricate candidates
  const auto roots = igs::solve_reduced_theta(0.3, -0.4, 0.3, -0.4, 0.0, 2.0);
  CHECK(roots.empty());
}

TEST_CASE("angle candidate sets stay small and well formed") {
  igs::Rng rng(9090);
  for (int rep = 0; rep < 50; ++rep) {
    igs::SisoIcInstance ic;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) ic.h[r][c] = rng.cnormal();
    ic.power = {4.0, 4.0};
    const RateProfile profile(0.5, 0.5);
    const auto ps = igs::proper_pareto_point(ic, profile);
    if (!ps.ok || ps.r_star < 0.1) continue;
    const auto pc = igs::pseudo_coeffs(ic, ps.c, ps.r_star, ps.r_star + 0.03, profile);
    if (pc.degenerate) continue;
    const auto cand = igs::theta_candidates(ic, pc, ps.c);
    CHECK_FALSE(cand.fallback_grid);
    CHECK(cand.items.size() <= 18);
    CHECK(cand.items.size() >= 2);  // at least the two antiphase closed forms
    int closed = 0;
    for (const auto& c : cand.items) {
      if (c.source == igs::theta_closed_form) ++closed;
      CHECK(std::isfinite(c.theta));
    }
    CHECK(closed >= 1);
  }
}

TEST_CASE("degenerate coefficients request the dense fallback") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.0, 0.0), cplx(0.0)}, {cplx(0.0), cplx(1.0, 0.0)}}};
  const RateProfile profile(0.5, 0.5);
  const auto ps = igs::proper_pareto_point(ic, profile);
  REQUIRE(ps.ok);
  const auto pc = igs::pseudo_coeffs(ic, ps.c, ps.r_star, ps.r_star + 0.01, profile);
  CHECK(pc.degenerate);  // vanishing cross gains make the angle systems singular
  const auto cand = igs::theta_candidates(ic, pc, ps.c);
  CHECK(cand.fallback_grid);
}

TEST_CASE("two-stage point never falls below the power-only stage") {
  igs::ChannelEnsembleConfig cfg;
  cfg.seed = 23;
  cfg.count = 20;
  for (const auto& ic : igs::gen_channels(cfg)) {
    const RateProfile profile(0.5, 0.5);
    const auto ps = igs::proper_pareto_point(ic, profile);
    const auto pt = igs::improper_pareto_point(ic, profile);
    REQUIRE(ps.ok);
    REQUIRE(pt.diag.status == "ok");
    CHECK(pt.value >= ps.r_star - 1e-9);
    CHECK(pt.value ==
          doctest::Approx(std::min(pt.rates[0] / 0.5, pt.rates[1] / 0.5)).epsilon(1e-9));
  }
}

TEST_CASE("no interference leaves the pseudo stage idle") {
  igs::SisoIcInstance ic;
  ic.h = {{{cplx(1.2, 0.5), cplx(0.0)}, {cplx(0.0), cplx(0.8, -0.3)}}};
  ic.power = {10.0, 5.0};
  const auto ps = igs::proper_pareto_point(ic, {0.5, 0.5});
  const auto pt = igs::improper_pareto_point(ic, {0.5, 0.5});
  REQUIRE(pt.diag.status == "ok");
  CHECK(std::abs(pt.value - ps.r_star) <= 2.5e-4);
  CHECK(std::abs(pt.strategy[0].ct) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(pt.strategy[1].ct) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pinned strong case regression values") {
  const auto ic = refcase::strong_channel();
  const RateProfile profile(0.6130, 0.3870);

  const auto ps = igs::proper_pareto_point(ic, profile);
  REQUIRE(ps.ok);
  CHECK(ps.r_star == doctest::Approx(refcase::kFrozenProperValue).epsilon(2e-4));
  CHECK(ps.c[0] == doctest::Approx(refcase::kFrozenProperC1).epsilon(1e-3));
  CHECK(ps.c[1] == doctest::Approx(refcase::kFrozenProperC2).epsilon(1e-3));

  const auto pt = igs::improper_pareto_point(ic, profile);
  REQUIRE(pt.diag.status == "ok");
  CHECK(pt.value == doctest::Approx(refcase::kFrozenSeparateValue).epsilon(2e-4));
  CHECK(pt.diag.r_star == doctest::Approx(ps.r_star).epsilon(1e-9));
  CHECK(pt.value >= ps.r_star);
  // achieved rates sit on the requested ray
  CHECK(pt.diag.ray_deviation <= 2e-3);
  // the winning strategies hold the power-stage covariances
  CHECK(pt.strategy[0].c == doctest::Approx(ps.c[0]).epsilon(1e-9));
  CHECK(pt.strategy[1].c == doctest::Approx(ps.c[1]).epsilon(1e-9));
}

TEST_CASE("pinned weak case: pseudo stage brings nothing") {
  const auto ic = refcase::weak_channel();
  const auto pt = igs::improper_pareto_point(ic, {0.5, 0.5});
  REQUIRE(pt.diag.status == "ok");
  CHECK(pt.value == doctest::Approx(refcase::kFrozenWeakProper).epsilon(2e-4));
}
