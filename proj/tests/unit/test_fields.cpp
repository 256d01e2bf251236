#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "dsnls/errors.hpp"
#include "dsnls/io.hpp"
#include "support.hpp"

using namespace ds;
using dstest::pi;

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridSpec::cube(2, 8, 1.0));
  CHECK_THROWS_AS(GridSpec::cube(2, 12, 1.0), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(2, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(4, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(3, 16, -1.0), ConfigError);
  const auto g = GridSpec::cube(3, 16, 4.0);
  CHECK(g.cell_volume() == doctest::Approx(std::pow(0.25, 3)));
  CHECK(g.coordinate(0, 0) == -2.0);
  CHECK(g.coordinate(1, 8) == 0.0);
  for (std::size_t i : {0ul, 17ul, 4095ul}) {
    const auto ix = g.unflat(i);
    CHECK(g.flat(ix[0], ix[1], ix[2]) == i);
  }
}

TEST_CASE("field rejects non-finite samples") {
  const auto g = GridSpec::cube(2, 8, 1.0);
  std::vector<cplx> v(g.size());
  v[3] = std::nan("");
  CHECK_THROWS_AS(Field(g, v), NumericalError);
  CHECK_THROWS_AS(Field(g, std::vector<cplx>(5)), ArgumentError);
}

TEST_CASE("constant field concentrates at zero frequency") {
  const auto g = GridSpec::cube(2, 32, 3.0);
  const auto c = forward_transform(Field::constant(g, 2.0));
  CHECK(std::abs(c.at(0, 0) - cplx(2.0 * 9.0)) < 1e-12);
  double rest = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) rest = std::max(rest, std::abs(c.coefficients()[i]));
  CHECK(rest < 1e-12);
}

TEST_CASE("plane wave lands on one lattice coefficient and back") {
  for (int n : {2, 3}) {
    const auto g = GridSpec::cube(n, 16, 2.0);
    const Field f = dstest::plane_wave(g, 3, -2, n == 3 ? 5 : 0);
    const auto c = forward_transform(f);
    const std::size_t s = c.slot(3, -2, n == 3 ? 5 : 0);
    CHECK(std::abs(c.coefficients()[s] - cplx(g.box_volume())) < 1e-11);
    double rest = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (i != s) rest = std::max(rest, std::abs(c.coefficients()[i]));
    CHECK(rest < 1e-11);
    // single coefficient back to the plane wave
    std::vector<cplx> one(g.size());
    one[s] = g.box_volume();
    CHECK(dstest::max_diff(inverse_transform(SpectralField(g, one)), f) < 1e-12);
  }
}

TEST_CASE("zero spectrum gives the zero field") {
  const auto g = GridSpec::cube(2, 8, 1.0);
  CHECK(inverse_transform(SpectralField(g, std::vector<cplx>(g.size()))).max_abs() == 0.0);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (auto [n, N] : {std::pair{2, 64}, std::pair{2, 128}, std::pair{3, 32}}) {
    const auto g = GridSpec::cube(n, std::size_t(N), 5.0);
    const Field f = dstest::random_field(g, 7 + N);
    const auto c = forward_transform(f);
    CHECK(dstest::rel_l2(inverse_transform(c), f) < 1e-12);
    double spec = 0.0;
    for (const auto& z : c.coefficients()) spec += std::norm(z);
    spec /= g.box_volume();
    const double phys = std::pow(lp_norm(f, 2.0), 2);
    CHECK(std::abs(spec - phys) / phys < 1e-12);
  }
}

TEST_CASE("lp_norm values") {
  const auto g = GridSpec::cube(2, 64, 3.0);
  CHECK(lp_norm(Field::constant(g, 1.0), 1.0) == doctest::Approx(9.0).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(Field::constant(g, 1.0), 0.5), ArgumentError);
  CHECK(lp_norm(Field::constant(g, -3.0), kInf) == 3.0);
  for (int n : {2, 3}) {
    // int e^{-2 pi |x|^2} = 2^{-n/2}
    const auto gg = GridSpec::cube(n, n == 2 ? 128 : 64, 12.0);
    CHECK(std::abs(lp_norm(dstest::gaussian(gg), 2.0) - std::pow(2.0, -n / 4.0)) < 1e-6);
  }
}

TEST_CASE("lp_norm dilation scaling for a band-limited function") {
  const auto g = GridSpec::cube(2, 256, 16.0);
  const Field f = dstest::gaussian(g);
  const Field f2 = dstest::gaussian(g, 4.0);  // f(2x)
  for (double p : {1.0, 2.0, 3.0}) CHECK(lp_norm(f2, p) == doctest::Approx(std::pow(2.0, -2.0 / p) * lp_norm(f, p)).epsilon(1e-9));
}

namespace {

// max difference over the half box |x_a| < L/4, where x and beta x both stay inside for beta <= 2
double half_box_diff(const Field& a, const Field& b) {
  const GridSpec& g = a.spec();
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    bool in = true;
    for (int k = 0; k < g.dim; ++k) in = in && std::abs(x[k]) < 0.25 * g.length[k];
    if (in) m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("spectral_resample") {
  const auto g = GridSpec::cube(2, 64, 8.0);
  const Field f = dstest::band_limited(g, 3, 10);
  SUBCASE("beta = 1 is the identity") { CHECK(dstest::max_diff(spectral_resample(f, 1.0).field, f) == 0.0); }
  SUBCASE("plane wave doubles its frequency") {
    const auto r = spectral_resample(dstest::plane_wave(g, 3, -5), 2.0);
    CHECK(dstest::max_diff(r.field, dstest::plane_wave(g, 6, -10)) < 1e-11);
    CHECK_FALSE(r.aliasing_warning);
  }
  SUBCASE("gaussian matches the closed form") {
    const auto gg = GridSpec::cube(2, 128, 12.0);
    const auto r = spectral_resample(dstest::gaussian(gg), 2.0);
    CHECK(half_box_diff(r.field, dstest::gaussian(gg, 4.0)) < 1e-10);
  }
  SUBCASE("beta then 1/beta returns the input") {
    const Field back = spectral_resample(spectral_resample(f, 0.5).field, 2.0).field;
    CHECK(half_box_diff(back, f) < 1e-10 * f.max_abs());
  }
  SUBCASE("high band content raises the warning") {
    CHECK(spectral_resample(dstest::random_field(g, 1), 2.0).aliasing_warning);
  }
  SUBCASE("real stays real") {
    const Field fr = dstest::band_limited(g, 4, 12, true);
    CHECK(spectral_resample(fr, 0.7).field.max_abs_imag() < 1e-13);
  }
  CHECK_THROWS_AS(spectral_resample(f, 0.0), ArgumentError);
}

TEST_CASE("spectral derivatives") {
  const auto g = GridSpec::cube(2, 32, 2.0);
  const Field f = Field::sample(g, [](const Vec3& x) { return std::sin(2 * pi * x[0]) * std::cos(pi * x[1]); });
  const Field d = spectral_derivative(f, 0, 1);
  const Field ex = Field::sample(g, [](const Vec3& x) { return 2 * pi * std::cos(2 * pi * x[0]) * std::cos(pi * x[1]); });
  CHECK(dstest::max_diff(d, ex) < 1e-11);
  const Field d2 = spectral_derivative(f, 1, 2);
  CHECK(dstest::max_diff(d2, -(pi * pi) * f) < 1e-10);
}

TEST_CASE("field and trajectory files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "dsnls_fields_test";
  std::filesystem::create_directories(dir);
  const auto g = GridSpec::cube(3, 8, 2.5);
  const Field f = dstest::random_field(g, 11).with_time(0.75);
  const auto fp = (dir / "f.dsfld").string();
  write_field(fp, f);
  const Field r = read_field(fp);
  CHECK(r.spec() == g);
  CHECK(r.time() == 0.75);
  CHECK(dstest::max_diff(r, f) == 0.0);
  CHECK(sniff_file(fp) == FileKind::Field);

  std::vector<Field> sl{f, 2.0 * f, 3.0 * f};
  const Trajectory u(sl, 0.5, 0.125);
  const auto tp = (dir / "u.dstrj").string();
  write_trajectory(tp, u);
  const Trajectory v = read_trajectory(tp);
  CHECK(v.size() == 3);
  CHECK(v.dt() == 0.125);
  CHECK(v.t0() == 0.5);
  CHECK(v[2].time() == 0.75);
  CHECK(dstest::max_diff(v[1], u[1]) == 0.0);
  CHECK(sniff_file(tp) == FileKind::Trajectory);

  // header layout: magic, u8 n, per axis u64 N and f64 L, f64 time
  std::FILE* fh = std::fopen(fp.c_str(), "rb");
  unsigned char head[9];
  REQUIRE(std::fread(head, 1, 9, fh) == 9);
  std::fclose(fh);
  CHECK(std::string(reinterpret_cast<char*>(head), 6) == "DSFLD1");
  CHECK(head[6] == 0);
  CHECK(head[8] == 3);
  CHECK(std::filesystem::file_size(fp) == 8 + 1 + 3 * 16 + 8 + g.size() * 16);

  const auto bad = (dir / "bad.bin").string();
  { std::FILE* b = std::fopen(bad.c_str(), "wb"); std::fputs("NOTAFILE", b); std::fclose(b); }
  CHECK_THROWS_AS(read_field(bad), IoError);
  CHECK_THROWS_AS(read_field((dir / "missing").string()), IoError);
  std::filesystem::remove_all(dir);
}
