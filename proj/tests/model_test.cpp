#include <doctest.h>

#include "support.hpp"
#include "tomolab/error.hpp"
#include "tomolab/model.hpp"

using namespace tomolab;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("default scene grid") {
  const Grid2D g = Grid2D::centered_square(56.0, 1.0, 28.0);
  CHECK(g.nx() == 56);
  CHECK(g.size() == 56u * 56u);
  CHECK(g.active().size() == 2472u);
  CHECK(g.center(0, 0).x == -27.5);
  CHECK(g.center(55, 55).y == 27.5);
  CHECK(g.index(3, 2) == 2u * 56u + 3u);
  CHECK(g.reach() < 32.0);
  CHECK_NOTHROW(g.require_inside(32.0));
  CHECK(g.resolves(8.0));
  CHECK_FALSE(g.resolves(3.0));
}

TEST_CASE("grid preconditions") {
  CHECK(kind_of([] { Grid2D({0, 0}, 0, 4, 1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { Grid2D({0, 0}, 4, 4, -1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { Grid2D::centered_square(56.0, 1.0).require_inside(32.0); }) == ErrorKind::Domain);
  CHECK(Grid2D::centered_square(8.0, 1.0) == Grid2D({-4.0, -4.0}, 8, 8, 1.0));
  CHECK_FALSE(Grid2D::centered_square(8.0, 1.0) == Grid2D::centered_square(8.0, 1.0, 3.0));
}

TEST_CASE("phantom values follow the blob formula on active cells") {
  const Wavenumber k = test::wave8();
  const Grid2D g = Grid2D::centered_square(56.0, 1.0, 28.0);
  const PhantomSpec s = PhantomSpec::two_blob(0.43, 8.0);
  const ScattererField v = build_phantom(s, k, g);
  const double k2 = k.k0() * k.k0();
  for (int idx : {0, 1000, 1596, 3135}) {
    const Point r = g.center(static_cast<std::size_t>(idx));
    const double d1 = (r.x + 10.0) * (r.x + 10.0) + r.y * r.y, d2 = r.x * r.x + r.y * r.y;
    const double ref = 0.43 * k2 * (std::exp(-d1 / (6.4 * 6.4)) - 0.5 * std::exp(-d2 / (9.6 * 9.6)));
    const double got = v.values[idx].real();
    if (g.is_active(static_cast<std::size_t>(idx)))
      CHECK(got == doctest::Approx(ref).epsilon(1e-14));
    else
      CHECK(got == 0.0);
  }
  CHECK(v.values.imag().norm() == 0.0);
}

TEST_CASE("four-blob phantom adds two quarter-wavelength components") {
  const PhantomSpec s = PhantomSpec::four_blob(1.1, 8.0);
  REQUIRE(s.blobs.size() == 4);
  CHECK(s.blobs[2].center.x == -11.0);
  CHECK(s.blobs[2].width == doctest::Approx(3.2));
  CHECK(s.blobs[3].center.x == 2.0);
  CHECK(s.blobs[3].weight == 0.5);
}

TEST_CASE("phantom extent check") {
  const Wavenumber k = test::wave8();
  // 48 x 48 is too small for the wide negative blob.
  CHECK(kind_of([&] { build_phantom(PhantomSpec::two_blob(0.43, 8.0), k, Grid2D::centered_square(48.0, 1.0, 24.0)); }) ==
        ErrorKind::SpecOutOfDomain);
  CHECK_NOTHROW(build_phantom(PhantomSpec::two_blob(0.43, 8.0), k, Grid2D::centered_square(56.0, 1.0, 28.0)));
}

TEST_CASE("zero amplitude gives a zero scatterer") {
  const ScattererField v = test::small_phantom(0.0);
  CHECK(v.values.norm() == 0.0);
  CHECK(v_to_speed_contrast(v).norm() == 0.0);
}

TEST_CASE("speed contrast round trip and frequency scaling") {
  const Wavenumber k = test::wave8();
  const ScattererField v = build_phantom(PhantomSpec::two_blob(0.91, 8.0), k, Grid2D::centered_square(56.0, 1.0, 28.0));
  const RVector c = v_to_speed_contrast(v);
  const ScattererField back = speed_contrast_to_v(c, v.grid, k);
  CHECK(test::rel(back.values, v.values) < 1e-14);

  // v / omega^2 is frequency independent.
  const Wavenumber k2(1.5 * k.omega(), k.c0());
  const ScattererField v2 = at_frequency(v, k2);
  CHECK(test::rel(CVector(v2.values / (k2.omega() * k2.omega())), CVector(v.values / (k.omega() * k.omega()))) < 1e-15);
  const ScattererField built = build_phantom(PhantomSpec::two_blob(0.91, 8.0), k2, v.grid, k);
  CHECK(test::rel(built.values, v2.values) < 1e-14);
  CHECK((v_to_speed_contrast(v2) - c).norm() / c.norm() < 1e-12);
}

TEST_CASE("nonphysical potential is rejected") {
  const Wavenumber k = test::wave8();
  ScattererField v(test::small_grid(), k);
  v.values[0] = 2.0 * k.k0() * k.k0();
  CHECK(kind_of([&] { v_to_speed_contrast(v); }) == ErrorKind::Nonphysical);
}
