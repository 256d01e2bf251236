#include <doctest.h>

#include "dsnls/errors.hpp"
#include "dsnls/lorentz.hpp"
#include "dsnls/parallel.hpp"
#include "dsnls/strichartz.hpp"
#include "support.hpp"

using namespace ds;

TEST_CASE("admissible quads") {
  CHECK(is_admissible({4, 4, 4, 4, 2}).admissible);
  const double d = 1.0 / 0.65;  // dual of 1/0.35
  CHECK(is_admissible({4, 4, 1.0 / 0.35, 1.0 / 0.35, 3}).admissible);
  CHECK(ExponentQuad::dual(1.0 / 0.35) == doctest::Approx(d));
  // 2/q = n(1/2 - 1/r) with the same pair on both sides
  CHECK(is_admissible({8.0 / 3, 8, 8.0 / 3, 8, 2}).admissible);
  // the n = 3 endpoint pair sits on the boundary of 1/rt' - 1/r < 2/n
  CHECK_FALSE(is_admissible({2, 6, 2, 6, 3}).admissible);
}

TEST_CASE("inadmissible quads name the failed condition") {
  auto a = is_admissible({4, 2, 4, 4, 2});
  CHECK_FALSE(a.admissible);
  REQUIRE_FALSE(a.violated.empty());
  a = is_admissible({4, kInf, 4, 4, 2});
  CHECK_FALSE(a.admissible);
  a = is_admissible({5, 4, 4, 4, 2});  // breaks the scaling identity
  CHECK_FALSE(a.admissible);
  bool named = false;
  for (const auto& v : a.violated) named = named || v.find("(n/2)(1/rt' - 1/r) = 1") != std::string::npos;
  CHECK(named);
  // swapping keeps the scaling identity symmetric
  const ExponentQuad e{4, 4, 4, 4, 2};
  CHECK(is_admissible(e.swapped()).admissible);
}

TEST_CASE("window for the nonlinear estimate") {
  auto w = prop3_window(4.0, 2);
  CHECK(w.inside);
  CHECK(w.lo == doctest::Approx(3.0));
  CHECK(w.hi == doctest::Approx(6.0));
  CHECK(1.0 / w.p - 1.0 / 4.0 == doctest::Approx(0.5));
  w = prop3_window(3.0, 3);
  CHECK(w.inside);
  CHECK(w.lo == doctest::Approx(8.0 / 3.0));
  CHECK(w.hi == doctest::Approx(40.0 / 9.0));
  CHECK_FALSE(prop3_window(6.0, 2).inside);
  CHECK_FALSE(prop3_window(2.5, 3).inside);
  // the window ends correspond to the alpha range through r = alpha (n + 2) / 2
  for (int n : {2, 3}) {
    const double lo = 4.0 * (n + 1) / (n * (n + 2.0)), hi = 4.0 * (n + 1) / double(n * n);
    CHECK(prop3_window(1.0, n).lo == doctest::Approx(lo * (n + 2) / 2.0));
    CHECK(prop3_window(1.0, n).hi == doctest::Approx(hi * (n + 2) / 2.0));
  }
}

TEST_CASE("forcing is reproducible and supported in the window") {
  StrichartzConfig cfg;
  cfg.grid = GridSpec::cube(2, 64, 12.0);
  cfg.slices = 16;
  const auto f1 = strichartz_forcing(cfg, 0, 2.0);
  const auto f2 = strichartz_forcing(cfg, 0, 2.0);
  CHECK(f1.size() == 17);
  CHECK(f1.dt() == doctest::Approx(cfg.window * cfg.tau / 4.0 / 16));
  CHECK(sup_l2_distance(f1, f2) == 0.0);
  CHECK(f1.front().max_abs() == 0.0);
  CHECK(f1.back().max_abs() == 0.0);
  CHECK(f1[2].max_abs() > 0.0);
  CHECK(sup_l2_distance(f1, strichartz_forcing(cfg, 1, 2.0)) > 0.0);
}

TEST_CASE("ratio sweep") {
  StrichartzConfig cfg;
  cfg.grid = GridSpec::cube(2, 64, 12.0);
  cfg.slices = 16;
  cfg.betas = {0.5, 1.0, 2.0};
  const ExponentQuad e{4, 4, 4, 4, 2};
  const auto rep = strichartz_ratio_sweep(e, cfg);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.skipped == 0);
  CHECK(rep.spread_G >= 1.0);
  CHECK(rep.spread_TT >= 1.0);
  for (const auto& row : rep.rows) {
    CHECK(row.ratio_G > 0.0);
    CHECK(std::isfinite(row.ratio_TT));
  }
  const auto csv = rep.to_csv();
  CHECK(csv.rfind("q,r,qt,rt,beta,sample,ratio_G,ratio_TTstar\n", 0) == 0);
  CHECK_THROWS_AS(strichartz_ratio_sweep({4, 2, 4, 4, 2}, cfg), ArgumentError);

  cfg.amplitude = 0.0;
  const auto zero = strichartz_ratio_sweep(e, cfg);
  CHECK(zero.skipped == 3);
  CHECK(zero.to_csv().find("skipped") != std::string::npos);
}

TEST_CASE("sweep does not depend on the worker count") {
  StrichartzConfig cfg;
  cfg.grid = GridSpec::cube(2, 32, 12.0);
  cfg.slices = 8;
  cfg.samples = 2;
  set_thread_count(1);
  const auto a = strichartz_ratio_sweep({4, 4, 4, 4, 2}, cfg).to_csv();
  set_thread_count(4);
  const auto b = strichartz_ratio_sweep({4, 4, 4, 4, 2}, cfg).to_csv();
  set_thread_count(0);
  CHECK(a == b);
}
