#include <doctest.h>

#include "dsnls/errors.hpp"
#include "dsnls/propagator.hpp"
#include "dsnls/selfsim.hpp"
#include "support.hpp"

using namespace ds;
using dstest::pi;

namespace {

// Confluent hypergeometric M(a, c, z) by its power series.
cplx kummer(double a, double c, cplx z) {
  cplx term = 1.0, sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    term *= (a + k) / (c + k) * z / double(k + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 10) break;
  }
  return sum;
}

// U(t)|x|^{-p} = Gamma(b)/Gamma(n/2) (4 i t)^{-a} M(a, n/2, i r^2/4t)
cplx kummer_solution(int n, double p, double r, double t) {
  const double a = 0.5 * p, b = 0.5 * (n - p);
  return std::tgamma(b) / std::tgamma(0.5 * n) * std::pow(cplx(0.0, 4.0 * t), -a) *
         kummer(a, 0.5 * n, cplx(0.0, r * r / (4.0 * t)));
}

double poch(double x, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= x + j;
  return v;
}

}  // namespace

TEST_CASE("series coefficients") {
  SeriesParams sp;
  sp.n = 3;
  sp.p = 5.0 / 3.0;
  const CwSeries cw(sp);
  const double a = sp.a(), b = sp.b();
  for (int k = 0; k < 6; ++k) {
    const double fk = std::tgamma(k + 1.0);
    CHECK(cw.A(k) == doctest::Approx(poch(a, k) * poch(1 - b, k) / fk));
    CHECK(cw.B(k) == doctest::Approx(std::tgamma(b) / std::tgamma(a) * poch(b, k) * poch(1 - a, k) / fk));
  }
  sp.bk = BkNormalization::GammaB;
  CHECK(CwSeries(sp).B(2) == doctest::Approx(poch(b, 2) * poch(1 - a, 2) / 2.0));
  CHECK(std::string(to_string(BkNormalization::GammaA)) != to_string(BkNormalization::GammaB));
}

TEST_CASE("series parameter validation") {
  SeriesParams sp;
  sp.p = 2.5;
  CHECK_THROWS(sp.validate());
  sp.p = 1.0;
  sp.quad_nodes = 0;
  CHECK_THROWS(sp.validate());
  sp.quad_nodes = 48;
  CHECK_NOTHROW(sp.resolved().validate());
  CHECK(sp.resolved().m >= 0);
  CHECK(sp.resolved().l >= 0);
}

TEST_CASE("explicit evolution agrees with the Kummer representation") {
  // The power series for M loses about 1e-8 to cancellation by y = 20, so the
  // tight comparison stops at y = 8.
  for (auto [n, p] : {std::pair{2, 1.0}, std::pair{2, 0.5}, std::pair{2, 1.5}, std::pair{3, 1.0}, std::pair{3, 5.0 / 3.0},
                      std::pair{3, 2.5}}) {
    for (int nodes : {48, 96}) {
      SeriesParams sp;
      sp.n = n;
      sp.p = p;
      sp.quad_nodes = nodes;
      const CwSeries cw(sp);
      const double tol = nodes == 48 ? 1e-5 : 1e-7;
      for (double t : {0.25, 1.0}) {
        for (double y : {0.5, 1.0, 2.0, 4.0, 8.0, 20.0}) {
          const double r = std::sqrt(4.0 * t * y);
          const cplx ex = kummer_solution(n, p, r, t);
          // size of the two branches
          const double env = std::pow(r, -p) + std::tgamma(0.5 * (n - p)) / std::tgamma(0.5 * p) *
                                                   std::pow(r, p - n) * std::pow(4.0 * t, 0.5 * n - p);
          INFO("n=" << n << " p=" << p << " nodes=" << nodes << " t=" << t << " y=" << y);
          CHECK(std::abs(cw(r, t) - ex) / env < (y > 10.0 ? 1e-7 : tol));
        }
      }
    }
  }
}

TEST_CASE("the alternative B normalization disagrees with the Kummer representation") {
  SeriesParams sp;
  sp.n = 3;
  sp.p = 5.0 / 3.0;
  sp.bk = BkNormalization::GammaB;
  const CwSeries cw(sp);
  const double r = 3.0, t = 1.0;
  CHECK(std::abs(cw(r, t) - kummer_solution(3, sp.p, r, t)) / std::pow(r, -sp.p) > 0.01);
}

TEST_CASE("explicit evolution is self-similar") {
  SeriesParams sp;
  sp.n = 2;
  sp.p = 1.0;
  const CwSeries cw(sp);
  for (double lam : {0.5, 2.0, 3.0})
    for (double r : {2.0, 5.0}) {
      const cplx lhs = cw(lam * r, lam * lam * 1.0);
      const cplx rhs = std::pow(lam, -sp.p) * cw(r, 1.0);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("smooth branch tends to the initial datum") {
  for (auto [n, p] : {std::pair{2, 1.0}, std::pair{3, 1.0}}) {
    SeriesParams sp;
    sp.n = n;
    sp.p = p;
    const CwSeries cw(sp);
    for (double r : {10.0, 20.0, 40.0}) {
      const auto terms = cw.terms(r, 1.0);
      CHECK(std::abs(terms.smooth * r - 1.0) < 0.05);
    }
    const Vec3 x{3.0, 4.0, 0.0};
    CHECK(std::abs(cw_free_evolution(x, 1.0, sp) - cw(5.0, 1.0)) < 1e-14);
  }
}

TEST_CASE("cw_field is radial and zero inside the floor") {
  const auto g = GridSpec::cube(2, 32, 16.0);
  SeriesParams sp;
  const Field f = cw_field(g, 1.0, sp);
  CHECK(f[g.flat(16, 16, 0)] == cplx(0.0));  // origin
  CHECK(std::abs(f[g.flat(16 + 6, 16, 0)] - f[g.flat(16, 16 - 6, 0)]) < 1e-14);
  const cplx ex = CwSeries(sp)(3.0, 1.0);
  CHECK(std::abs(f[g.flat(16 + 6, 16, 0)] - ex) < 1e-14 * std::abs(ex));
}

TEST_CASE("homogeneous data") {
  const auto g = GridSpec::cube(2, 64, 16.0);
  HomogeneousData hd{0.5, 2.0, 0.5};
  const Field f = homogeneous_field(hd, g);
  CHECK(f[g.flat(32 + 8, 32, 0)].real() == doctest::Approx(0.5 / 2.0));
  CHECK(f[g.flat(32, 32, 0)].real() == doctest::Approx(0.5 / 0.5));
  hd.core_cutoff = 0.1;
  CHECK_THROWS_AS(homogeneous_field(hd, g), ConfigError);
  hd.core_cutoff = 0.5;
  hd.alpha = 0.8;  // 2/alpha above the dimension
  CHECK_THROWS_AS(homogeneous_field(hd, g), ConfigError);
}

TEST_CASE("smooth window") {
  CHECK(smooth_window(0.5, 1.0, 2.0) == 1.0);
  CHECK(smooth_window(2.5, 1.0, 2.0) == 0.0);
  CHECK(smooth_window(1.5, 1.0, 2.0) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double k = 1.0; k <= 2.0; k += 0.01) {
    CHECK(smooth_window(k, 1.0, 2.0) <= prev + 1e-15);
    prev = smooth_window(k, 1.0, 2.0);
  }
}

TEST_CASE("spectral homogeneous data approximates the power law in the annulus") {
  const auto g = GridSpec::cube(2, 256, 32.0);
  const double nyq = 256 / 64.0;
  const Field f = spectral_homogeneous_field(g, 1.0, 1.0, {0.5 * nyq, 0.9 * nyq}, 8.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    const double r = std::hypot(x[0], x[1]);
    if (r < 2.0 || r > 8.0) continue;
    worst = std::max(worst, std::abs(f[i].real() * r - 1.0));
  }
  CHECK(worst < 0.02);
  CHECK(f.is_real());
}

TEST_CASE("decay exponent prediction and fit") {
  CHECK(predicted_sigma(2.0, 2) == 1.0);
  CHECK(predicted_sigma(1.2, 3) == doctest::Approx(3.0 - 2.0 / 1.2));
  CHECK(predicted_sigma(1.5, 3) == doctest::Approx(4.0 / 3.0));
  const auto g = GridSpec::cube(2, 128, 64.0);
  for (double sigma : {0.5, 1.0, 1.7}) {
    const Field f = Field::sample(g, [&](const Vec3& x) { return std::pow(1.0 + std::hypot(x[0], x[1]), -sigma); });
    CHECK(profile_decay_fit(f, 2.0, 2) == doctest::Approx(sigma).epsilon(1e-10));
  }
  CHECK_THROWS_AS(profile_decay_fit(Field::zeros(g), 2.0, 2), NumericalError);
  CHECK_THROWS_AS(profile_decay_fit(Field::constant(GridSpec::cube(2, 16, 64.0), 1.0), 2.0, 2), NumericalError);
}

TEST_CASE("scaling residual against dilated gaussians") {
  const auto g = GridSpec::cube(2, 128, 16.0);
  const Field u = dstest::gaussian(g);
  const Trajectory traj(std::vector<Field>(9, u), 0.0, 0.1);
  const double alpha = 2.0, beta = 2.0;
  const auto series = scaling_residual_series(traj, beta, alpha);
  REQUIRE(series.size() == 3);  // j = 0, 1, 2 map onto 0, 4, 8
  const Field scaled = dstest::gaussian(g, beta * beta);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    if (std::abs(x[0]) >= 4.0 || std::abs(x[1]) >= 4.0) continue;
    num += std::norm(std::pow(beta, 2.0 / alpha) * scaled[i] - u[i]);
    den += std::norm(u[i]);
  }
  for (const auto& s : series) CHECK(s.residual == doctest::Approx(std::sqrt(num / den)).epsilon(1e-8));
  CHECK(scaling_residual(traj, 1.0, alpha) == 0.0);
  CHECK_THROWS_AS(scaling_residual(traj, 1.3, alpha), ArgumentError);
  CHECK_THROWS_AS(scaling_residual(Trajectory(std::vector<Field>(9, u), 0.5, 0.1), 2.0, alpha), ArgumentError);
}

TEST_CASE("distribution report structure") {
  const auto g = GridSpec::cube(2, 32, 8.0);
  ModelParams mp;
  const Field u0 = dstest::gaussian(g);
  const auto u = split_step_evolve(u0, 0.5, 0.01, mp);
  const auto rep = distribution_bound_check(u, 2.0, 2);
  CHECK(rep.target_exponent == -4.0);
  CHECK(rep.lambdas.size() == 24);
  CHECK(rep.distribution.size() == rep.lambdas.size());
  CHECK(rep.bound.size() == rep.lambdas.size());
  CHECK(rep.lambda_hi > rep.lambda_lo);
  CHECK(std::isfinite(rep.fitted_exponent));
  // the gaussian barely disperses here, so the range is narrow
  CHECK_FALSE(rep.flags.empty());
  CHECK_THROWS_AS(distribution_bound_check(u, 2.0, 3), ArgumentError);
}
