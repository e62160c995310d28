#include <doctest.h>

#include "support.hpp"
#include "tomolab/error.hpp"
#include "tomolab/forward.hpp"

using namespace tomolab;

namespace {

std::vector<double> ring_angles(int n) {
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = two_pi * i / n;
  return a;
}

}  // namespace

TEST_CASE("empty scatterer leaves the incident field untouched") {
  const ScattererField v = test::small_phantom(0.0);
  const ForwardSolver fs(v);
  const auto inc = plane_waves({0.0, 1.0, 2.0});
  const auto u = solve_internal_fields(fs, inc, v.wave);
  CHECK(u.u == incident_field(v.grid, inc, v.wave));
  const BoundaryFields bf = simulate_boundary(v, test::ring60());
  CHECK(bf.scattered().norm() == 0.0);
  const AmplitudeGrid f = simulate_amplitude(v, ring_angles(12));
  CHECK(f.values.norm() == 0.0);
}

TEST_CASE("kernel is symmetric with the self-cell rule on the diagonal") {
  const Grid2D g = test::small_grid();
  const Wavenumber k = test::wave8();
  const CMatrix K = assemble_kernel(g, k);
  CHECK((K - K.transpose()).norm() == 0.0);
  CHECK(K(0, 0) == self_cell_integral(g.h(), k.k0()));
  const Point a = g.center(static_cast<std::size_t>(g.active()[0]));
  const Point b = g.center(static_cast<std::size_t>(g.active()[5]));
  CHECK(std::abs(K(0, 5) - green0(a, b, k) * g.cell_area()) < 1e-15);
}

TEST_CASE("forward residual on the default scene") {
  const Wavenumber k = test::wave8();
  const Grid2D g = Grid2D::centered_square(56.0, 1.0, 28.0);
  const ScattererField v = build_phantom(PhantomSpec::two_blob(0.91, 8.0), k, g);
  const ForwardSolver fs(v);
  CHECK(fs.unknowns() == 2472u);
  CHECK(fs.condition_estimate() < 1e8);
  CHECK(fs.warnings().empty());
  const auto geom = test::ring60();
  std::vector<Incidence> inc;
  for (int m : {0, 17, 44}) inc.push_back(Incidence::point_source(geom.position(m)));
  inc.push_back(Incidence::plane_wave(0.3));
  const CMatrix u0 = incident_field(g, inc, k);
  const CMatrix u = fs.solve(u0);
  CHECK(fs.residual(u, u0) <= 1e-10);
}

TEST_CASE("boundary Green function is reciprocal") {
  const ScattererField v = build_phantom(test::single_blob(1.5, {1.0, -1.0}, 2.0), test::wave8(), test::small_grid());
  const BoundaryFields bf = simulate_boundary(v, test::ring60());
  const CMatrix sc = bf.scattered();
  CHECK(sc.norm() > 0.0);
  CHECK(test::rel(CMatrix(sc.transpose()), sc) < 1e-6);
  CHECK((bf.G0 - bf.G0.transpose()).norm() == 0.0);
}

TEST_CASE("scattering amplitude is reciprocal: f(k, l) = f(-l, -k)") {
  const ScattererField v = build_phantom(test::single_blob(1.5, {1.0, -1.0}, 2.0), test::wave8(), test::small_grid());
  const int n = 60;
  const AmplitudeGrid f = simulate_amplitude(v, ring_angles(n));
  CMatrix swapped(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) swapped(i, j) = f.values((j + n / 2) % n, (i + n / 2) % n);
  CHECK(test::rel(swapped, f.values) < 1e-6);
}

TEST_CASE("optical theorem: -Im f(k, k) = (pi / 2) * integral of |f(k, l)|^2") {
  for (double A0 : {0.05, 0.8}) {
    const ScattererField v = test::small_phantom(A0, {1.0, 0.5});
    const int n = 120;
    const AmplitudeGrid f = simulate_amplitude(v, ring_angles(n));
    for (int i : {0, 37}) {
      double flux = 0.0;
      for (int j = 0; j < n; ++j) flux += std::norm(f.values(i, j)) * two_pi / n;
      CHECK(f.values(i, i).imag() < 0.0);
      CHECK(-f.values(i, i).imag() == doctest::Approx(0.5 * pi * flux).epsilon(0.01));
    }
  }
}

TEST_CASE("weak scatterer: amplitude is the Fourier transform of v") {
  // Analytic transform of the Gaussian blobs: A0 k^2 w pi s^2 exp(-s^2 |xi|^2 / 4).
  const double A0 = 1e-4, lambda = 8.0;
  const Wavenumber k = test::wave8();
  const Grid2D g = Grid2D::centered_square(56.0, 1.0, 28.0);
  const PhantomSpec spec = PhantomSpec::two_blob(A0, lambda);
  const ScattererField v = build_phantom(spec, k, g);
  const auto angles = ring_angles(30);
  const AmplitudeGrid f = simulate_amplitude(v, angles);
  const double k0 = k.k0();
  CMatrix ref(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const double xx = k0 * (std::cos(angles[j]) - std::cos(angles[i]));
      const double xy = k0 * (std::sin(angles[j]) - std::sin(angles[i]));
      cplx s = 0.0;
      for (const auto& b : spec.blobs) {
        const double w2 = b.width * b.width;
        s += b.weight * pi * w2 * std::exp(-w2 * (xx * xx + xy * xy) / 4.0) *
             std::exp(-I * (xx * b.center.x + xy * b.center.y));
      }
      ref(i, j) = A0 * k0 * k0 * s / (4.0 * pi * pi);
    }
  CHECK(test::rel(f.values, ref) < 0.03);
}

TEST_CASE("far field approaches the amplitude at 50 wavelengths") {
  // u_sc(z) ~ C exp(i k |z|) / sqrt(|z|) f, C = -pi^(3/2) (1 + i) / sqrt(k).
  const Wavenumber k = test::wave8();
  const Grid2D g = Grid2D::centered_square(12.0, 1.0, 6.0);
  PhantomSpec spec = test::single_blob(0.6, {0.0, 0.0}, 1.5);
  const ScattererField v = build_phantom(spec, k, g);
  const ForwardSolver fs(v);
  const std::vector<double> phis{0.0, 2.0};
  const auto internal = solve_internal_fields(fs, plane_waves(phis), k);
  const std::vector<double> out{0.0, 0.9, 2.5, 4.0};
  const AmplitudeGrid f = scattering_amplitude_direct(v, internal, out, k);
  const double R = 50.0 * k.wavelength();
  std::vector<Point> pts;
  for (double a : out) pts.push_back({R * std::cos(a), R * std::sin(a)});
  const CMatrix usc = fs.radiate(pts, internal.u);  // points x incidences
  const double k0 = k.k0();
  const cplx C = -std::pow(pi, 1.5) * cplx(1.0, 1.0) / std::sqrt(k0);
  for (std::size_t i = 0; i < phis.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) {
      const cplx asym = C * std::exp(I * (k0 * R)) / std::sqrt(R) * f.values(i, j);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(usc(j, i) - asym) <= 0.01 * std::abs(usc(j, i)));
    }
}

TEST_CASE("singular and mismatched systems are rejected") {
  const ScattererField v = test::small_phantom(0.5);
  SolverOptions strict;
  strict.max_condition = 1.0;
  try {
    ForwardSolver fs(v, strict);
    FAIL("expected a singular-system error");
  } catch (const SingularSystemError& e) {
    CHECK(e.kind() == ErrorKind::SingularSystem);
    CHECK(e.condition_estimate() > 1.0);
  }
  const ForwardSolver fs(v);
  CHECK_THROWS_AS(solve_internal_fields(fs, plane_waves({0.0}), Wavenumber(2.0, 1.0)), Error);
  const ScattererField coarse = build_phantom(test::single_blob(0.2, {0, 0}, 2.5), Wavenumber::from_k0(two_pi / 3.0, 1.0),
                                              test::small_grid());
  CHECK_FALSE(ForwardSolver(coarse).warnings().empty());
}
