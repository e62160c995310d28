#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "tomolab/error.hpp"
#include "tomolab/inversion.hpp"
#include "tomolab/metrics.hpp"

using namespace tomolab;

namespace {

using test::sampled_spectrum;

std::vector<double> ring(int n) {
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = two_pi * i / n;
  return a;
}

}  // namespace

TEST_CASE("disk inverse Fourier transform matches a polar oracle") {
  const Wavenumber k = test::wave8();
  const Grid2D g = Grid2D::centered_square(56.0, 1.0, 28.0);
  const PhantomSpec s = PhantomSpec::four_blob(0.5, 8.0);
  CHECK(test::disk_oracle_error(s, k, g, 1.0) < 1e-3);
  // A smaller disk adds the staircase of the sampled indicator along its edge.
  CHECK(test::disk_oracle_error(s, k, g, 0.6) < 2e-3);
}

TEST_CASE("tau acts as an exact indicator on the refined grid") {
  const Wavenumber k = test::wave8();
  const Grid2D g = test::small_grid();
  const SpectralEstimate sv = sampled_spectrum(PhantomSpec::two_blob(0.4, 8.0), k, 60);
  const ScattererField a = disk_inverse_fourier(sv, 0.5, g, k);
  DiskQuadrature plain;
  plain.refine = 1;
  const ScattererField b = disk_inverse_fourier(apply_disk_filter(refine_spectrum(sv, 2), 0.5), 1.0, g, k, plain);
  CHECK(test::rel(a.values, b.values) < 1e-14);
  CHECK_THROWS_AS(disk_inverse_fourier(sv, 0.0, g, k), Error);
  CHECK_THROWS_AS(disk_inverse_fourier(sv, 1.5, g, k), Error);
}

TEST_CASE("disk mask and weights") {
  const auto m = disk_mask(60, 0.5);
  // |sin(pi d / 60)| <= 0.5 exactly up to d = 10.
  CHECK(m(10, 0));
  CHECK_FALSE(m(11, 0));
  CHECK(m(50, 0));
  CHECK_FALSE(m(49, 0));
  CHECK(disk_mask(60, 1.0).all());
  const auto w = disk_weights(60, 1.0, 1.0, false);
  CHECK(w(0, 0) == 0.0);
  CHECK(w(15, 0) == doctest::Approx(0.5 * std::pow(two_pi / 60, 2)));
  const auto wk = disk_weights(60, 1.0, 1.0, true);
  CHECK(wk(0, 0) == doctest::Approx(0.5 * std::pow(two_pi / 60, 3) / 6.0));
  CHECK(wk(30, 0) == doctest::Approx(wk(0, 0)));
}

TEST_CASE("Hermitian projection") {
  const SpectralEstimate sv = sampled_spectrum(PhantomSpec::two_blob(0.4, 8.0), test::wave8(), 30);
  SpectralEstimate noisy = sv;
  noisy.values(3, 7) += cplx(0.0, 1e-3);
  const SpectralEstimate h = hermitian_part(noisy);
  CHECK((h.values - h.values.adjoint()).norm() == 0.0);
  CHECK(test::rel(hermitian_part(h).values, h.values) == 0.0);
  // Data of a real scatterer are already Hermitian.
  CHECK(test::rel(hermitian_part(sv).values, sv.values) < 1e-14);
  SpectralEstimate partial = sv;
  partial.phis.pop_back();
  CHECK_THROWS_AS(hermitian_part(partial), Error);
}

TEST_CASE("iterative step adds the data residual") {
  AmplitudeGrid fm = AmplitudeGrid::zeros(ring(4), ring(4), 1.0);
  fm.values.setConstant(cplx(1.0, 1.0));
  AmplitudeGrid fp = fm;
  fp.values.setConstant(cplx(0.5, 0.0));
  const SpectralEstimate sv = born_estimate(fm);
  const SpectralEstimate next = iterative_step(sv, fm, fp);
  CHECK(next.values(2, 1) == cplx(1.5, 2.0));
  CHECK(iterative_step(sv, fm, fm).values == sv.values);
  AmplitudeGrid other = fp;
  other.omega = 2.0;
  CHECK_THROWS_AS(iterative_step(sv, fm, other), Error);
}

TEST_CASE("tau schedule") {
  TauSchedule fixed;
  fixed.mode = TauMode::Fixed;
  fixed.tau0 = 1.0;
  CHECK(tau_update(fixed, 1.0, {0.3, 0.5}).tau == 1.0);
  CHECK_FALSE(tau_update(fixed, 1.0, {0.3, 0.5}).revert);
  CHECK(fixed.floor() == 1.0);

  const TauSchedule a;  // adaptive defaults
  CHECK(a.floor() == a.tau_min);
  const auto rise = tau_update(a, 0.5, {0.3, 0.2, 0.25});
  CHECK(rise.revert);
  CHECK(rise.tau == doctest::Approx(0.4));
  CHECK(tau_update(a, 0.21, {0.3, 0.31}).tau == a.tau_min);
  const auto stall = tau_update(a, 0.5, {0.3, 0.2, 0.2, 0.2, 0.199});
  CHECK_FALSE(stall.revert);
  CHECK(stall.tau == doctest::Approx(0.6));
  CHECK(tau_update(a, 0.95, {0.2, 0.2, 0.2, 0.2}).tau == 1.0);
  CHECK(tau_update(a, 0.5, {0.3, 0.2, 0.1, 0.05}).tau == 0.5);

  TauSchedule bad;
  bad.tau0 = 0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = TauSchedule{};
  bad.shrink = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("zero data give a one-record converged trace") {
  const Wavenumber k = test::wave8();
  const AmplitudeGrid f = AmplitudeGrid::zeros(ring(60), ring(60), k.omega());
  const ReconstructionTrace t = reconstruct(f, test::small_grid(), k, test::ring60(), {});
  REQUIRE(t.records.size() == 1);
  CHECK(t.status == RunStatus::Converged);
  CHECK(t.result().delta_f == 0.0);
  CHECK(t.result().estimate.values.norm() == 0.0);
}

TEST_CASE("weak scatterer: Born is accurate and iterations keep it") {
  const Wavenumber k = test::wave8();
  const RingGeometry geom = test::ring60();
  const Grid2D g = test::small_grid();
  const ScattererField v = build_phantom(test::single_blob(0.01, {0, 0}, 2.5), k, g);
  const AmplitudeGrid f = simulate_amplitude(v, geom.angles());
  ReconstructionConfig cfg;
  cfg.tau.mode = TauMode::Fixed;
  cfg.tau.tau0 = 1.0;
  cfg.max_iterations = 3;
  const ReconstructionTrace t = reconstruct(f, g, k, geom, cfg, &v);
  REQUIRE(t.records.size() >= 2);
  CHECK(t.records.size() <= 4);
  CHECK(*t.born().delta_v < 0.1);
  CHECK(*t.result().delta_v <= *t.born().delta_v);
  CHECK(t.result().delta_f < t.born().delta_f);
  CHECK(t.tau_trajectory() == std::vector<double>(t.records.size(), 1.0));
  for (const auto& r : t.records) CHECK(r.estimate.values.imag().norm() == 0.0);
  // best holds the lowest discrepancy of the trace.
  for (const auto& r : t.records) CHECK(t.records[t.best].delta_f <= r.delta_f);
}

TEST_CASE("boundary data and direct data give the same reconstruction") {
  const Wavenumber k = test::wave8();
  const RingGeometry geom = test::ring60();
  const Grid2D g = test::small_grid();
  const ScattererField v = build_phantom(test::single_blob(0.3, {1, 0}, 2.5), k, g);
  const BoundaryFields bf = simulate_boundary(v, geom);
  ReconstructionConfig cfg;
  cfg.max_iterations = 2;
  const ReconstructionTrace a = run_reconstruction(bf, g, k, geom, cfg, &v);
  cfg.source = AmplitudeSource::Boundary;
  const ReconstructionTrace b = run_reconstruction(bf, g, k, geom, cfg, &v);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(std::abs(*a.result().delta_v - *b.result().delta_v) < 1e-3);
}
