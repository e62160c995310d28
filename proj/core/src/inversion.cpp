#include "tomolab/inversion.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "tomolab/error.hpp"
#include "tomolab/metrics.hpp"

namespace tomolab {

namespace {

bool is_ring_grid(const std::vector<double>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(a[i] - two_pi * static_cast<double>(i) / n) > 1e-12) return false;
  return n >= 2;
}

void require_square_ring(const SpectralEstimate& sv) {
  if (sv.phis.size() != sv.phis_prime.size() || !is_ring_grid(sv.phis) || !is_ring_grid(sv.phis_prime))
    fail(ErrorKind::Mismatch, "spectral estimate must be sampled on the full equispaced angle grid");
}

std::vector<double> ring_angles(std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = two_pi * static_cast<double>(i) / n;
  return a;
}

double imag_ratio(const CVector& v) {
  const double den = v.norm();
  return den > 0.0 ? v.imag().norm() / den : 0.0;
}

}  // namespace

SpectralEstimate born_estimate(const AmplitudeGrid& f) {
  return {f.phis, f.phis_prime, f.values, f.omega};
}

SpectralEstimate hermitian_part(const SpectralEstimate& sv) {
  require_square_ring(sv);
  SpectralEstimate out = sv;
  out.values = 0.5 * (sv.values + sv.values.adjoint());
  return out;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> disk_mask(int n, double tau) {
  // |xi| = 2 k0 |sin((phi - phi') / 2)|, so the mask does not depend on k0.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int d = ((i - j) % n + n) % n;
      const double s = std::abs(std::sin(pi * d / n));
      m(i, j) = s <= tau * (1.0 + 1e-12);
    }
  return m;
}

Eigen::MatrixXd disk_weights(int n, double k0, double tau, bool kink_correction) {
  const double dphi = two_pi / n;
  const double c = 0.5 * k0 * k0;
  const auto mask = disk_mask(n, tau);
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int d = ((i - j) % n + n) % n;
      double x = c * std::abs(std::sin(two_pi * d / n)) * dphi * dphi;
      // |sin| has derivative jumps of 2 on the diagonals phi' = phi and
      // phi' = phi + pi; the trapezoid sum misses dphi^2 / 6 of the integrand
      // there, per node, in the inner sum.
      if (kink_correction && (d == 0 || (n % 2 == 0 && d == n / 2))) x += c * dphi * dphi * dphi / 6.0;
      w(i, j) = mask(i, j) ? x : 0.0;
    }
  return w;
}

SpectralEstimate refine_spectrum(const SpectralEstimate& sv, int r) {
  require_square_ring(sv);
  if (r == 1) return sv;
  SpectralEstimate out;
  out.values = trig_refine(sv.values, r);
  out.phis = ring_angles(sv.phis.size() * r);
  out.phis_prime = out.phis;
  out.omega = sv.omega;
  return out;
}

SpectralEstimate apply_disk_filter(const SpectralEstimate& sv, double tau) {
  require_square_ring(sv);
  const auto mask = disk_mask(static_cast<int>(sv.phis.size()), tau);
  SpectralEstimate out = sv;
  for (Eigen::Index j = 0; j < out.values.cols(); ++j)
    for (Eigen::Index i = 0; i < out.values.rows(); ++i)
      if (!mask(i, j)) out.values(i, j) = 0.0;
  return out;
}

ScattererField disk_inverse_fourier(const SpectralEstimate& sv, double tau, const Grid2D& grid,
                                    const Wavenumber& k, const DiskQuadrature& quad) {
  if (!(tau > 0.0) || tau > 1.0) fail(ErrorKind::Domain, "tau must lie in (0, 1]");
  if (quad.refine < 1) fail(ErrorKind::Domain, "quadrature refinement must be >= 1");
  const SpectralEstimate fine = refine_spectrum(sv, quad.refine);
  const int n = static_cast<int>(fine.phis.size());
  const double k0 = k.k0();
  const Eigen::MatrixXd W = disk_weights(n, k0, tau, quad.kink_correction);
  const CMatrix B = fine.values.cwiseProduct(W.cast<cplx>());

  const auto& cells = grid.active();
  const Eigen::Index N = static_cast<Eigen::Index>(cells.size());
  // E(r, i) = exp(-i k(phi_i).r); v(r) = sum_ij E(r, i) B(i, j) conj E(r, j).
  CMatrix E(N, n);
  for (int i = 0; i < n; ++i) {
    const double kx = k0 * std::cos(fine.phis[i]), ky = k0 * std::sin(fine.phis[i]);
    for (Eigen::Index c = 0; c < N; ++c) {
      const Point r = grid.center(static_cast<std::size_t>(cells[c]));
      E(c, i) = std::exp(-I * (kx * r.x + ky * r.y));
    }
  }
  const CMatrix EB = E * B;
  ScattererField out(grid, k);
  for (Eigen::Index c = 0; c < N; ++c) out.values[cells[c]] = E.row(c).dot(EB.row(c));
  return out;
}

SpectralEstimate iterative_step(const SpectralEstimate& sv_prev, const AmplitudeGrid& f_meas,
                                const AmplitudeGrid& f_prev) {
  if (sv_prev.phis != f_meas.phis || sv_prev.phis_prime != f_meas.phis_prime ||
      f_prev.phis != f_meas.phis || f_prev.phis_prime != f_meas.phis_prime)
    fail(ErrorKind::Mismatch, "iterative step needs identical angle grids");
  if (sv_prev.omega != f_meas.omega || f_prev.omega != f_meas.omega)
    fail(ErrorKind::Mismatch, "iterative step needs a common frequency");
  SpectralEstimate out = sv_prev;
  out.values = sv_prev.values + (f_meas.values - f_prev.values);
  return out;
}

const char* to_string(TauMode m) { return m == TauMode::Fixed ? "fixed" : "adaptive"; }

const char* to_string(AmplitudeSource s) { return s == AmplitudeSource::Direct ? "direct" : "boundary"; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max-iter";
    case RunStatus::DivergedReverted: return "diverged-reverted";
  }
  return "unknown";
}

void TauSchedule::validate() const {
  auto in_unit = [](double t) { return t > 0.0 && t <= 1.0; };
  if (!in_unit(tau0)) fail(ErrorKind::Domain, "tau0 must lie in (0, 1]");
  if (!in_unit(tau_min) || tau_min > tau0) fail(ErrorKind::Domain, "tau_min must lie in (0, tau0]");
  if (!(shrink > 0.0 && shrink < 1.0)) fail(ErrorKind::Domain, "tau shrink factor must lie in (0, 1)");
  if (!(growth >= 0.0)) fail(ErrorKind::Domain, "tau growth step must be >= 0");
  if (window < 1) fail(ErrorKind::Domain, "stagnation window must be >= 1");
  if (!(stagnation >= 0.0)) fail(ErrorKind::Domain, "stagnation threshold must be >= 0");
}

TauDecision tau_update(const TauSchedule& sched, double tau, const std::vector<double>& history) {
  if (sched.mode == TauMode::Fixed) return {sched.tau0, false};
  if (history.empty()) fail(ErrorKind::Domain, "adaptive tau update needs a discrepancy history");
  const std::size_t n = history.size() - 1;
  if (n >= 1 && history[n] > history[n - 1])
    return {std::max(tau * sched.shrink, sched.tau_min), true};
  const std::size_t m = static_cast<std::size_t>(sched.window);
  if (n >= m && history[n - m] > 0.0 &&
      std::abs(history[n] - history[n - m]) / history[n - m] < sched.stagnation)
    return {std::min(tau + sched.growth, 1.0), false};
  return {tau, false};
}

std::vector<double> ReconstructionTrace::tau_trajectory() const {
  std::vector<double> t;
  for (const auto& r : records) t.push_back(r.tau);
  return t;
}

AmplitudeGrid predict_amplitude(const ScattererField& v, const RingGeometry& geom,
                                AmplitudeSource source, const TruncationPolicy& trunc,
                                const SolverOptions& solver, std::vector<std::string>* warnings) {
  const auto angles = geom.angles();
  const ForwardSolver fs(v, solver);
  if (warnings)
    for (const auto& w : fs.warnings()) warnings->push_back(w);
  if (source == AmplitudeSource::Direct) {
    const auto internal = solve_internal_fields(fs, plane_waves(angles), v.wave);
    return scattering_amplitude_direct(v, internal, angles, v.wave);
  }
  const auto internal = solve_internal_fields(fs, ring_sources(geom), v.wave);
  const auto bf = boundary_fields(fs, internal, v.wave, geom);
  return near_to_far(bf, v.wave, geom, angles, angles, trunc);
}

ReconstructionTrace reconstruct(const AmplitudeGrid& f_meas, const Grid2D& grid, const Wavenumber& k,
                                const RingGeometry& geom, const ReconstructionConfig& cfg,
                                const ScattererField* truth) {
  cfg.tau.validate();
  if (cfg.max_iterations < 0) fail(ErrorKind::Domain, "max_iterations must be >= 0");
  if (f_meas.omega != k.omega()) fail(ErrorKind::Mismatch, "measured amplitude frequency mismatch");
  if (truth && !(truth->grid == grid)) fail(ErrorKind::Mismatch, "reference scatterer grid mismatch");
  grid.require_inside(geom.radius());

  using clock = std::chrono::steady_clock;
  ReconstructionTrace trace;
  trace.measured = f_meas;
  const double fnorm = f_meas.values.norm();

  auto delta_v = [&](const ScattererField& est) -> std::optional<double> {
    if (!truth || truth->values.norm() == 0.0) return std::nullopt;
    return solution_discrepancy(est, *truth);
  };

  if (fnorm == 0.0) {
    IterationRecord rec{0, ScattererField(grid, k), delta_v(ScattererField(grid, k)), 0.0,
                        cfg.tau.tau0, 0.0, false, 0.0};
    trace.records.push_back(std::move(rec));
    trace.status = RunStatus::Converged;
    return trace;
  }

  const auto project = [&](const SpectralEstimate& s) { return cfg.real_scatterer ? hermitian_part(s) : s; };
  SpectralEstimate raw = born_estimate(f_meas);
  SpectralEstimate sv = project(raw);
  double tau = cfg.tau.tau0;
  const double floor = cfg.tau.floor();

  std::vector<double> history;
  double best_df = std::numeric_limits<double>::infinity();
  SpectralEstimate best_sv = sv;
  double best_tau = tau;
  int growth = 0;
  bool reverted = false;

  for (int n = 0;; ++n) {
    const auto t0 = clock::now();
    ScattererField est = disk_inverse_fourier(sv, tau, grid, k, cfg.quadrature);
    double imag = 0.0;
    if (cfg.real_scatterer) {
      // Gauge the part of the update the real projection discards.
      imag = imag_ratio(disk_inverse_fourier(raw, tau, grid, k, cfg.quadrature).values);
      est.values = est.values.real().cast<cplx>();
    } else {
      imag = imag_ratio(est.values);
    }
    const AmplitudeGrid fp = predict_amplitude(est, geom, cfg.source, cfg.truncation, cfg.solver, &trace.warnings);
    const double df = (fp.values - f_meas.values).norm() / fnorm;
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    trace.records.push_back(IterationRecord{n, est, delta_v(est), df, tau, secs, reverted, imag});
    const std::size_t idx = trace.records.size() - 1;

    const bool increased = !history.empty() && df > history.back();
    history.push_back(df);
    if (df < best_df) {
      best_df = df;
      best_sv = sv;
      best_tau = tau;
      trace.best = idx;
    }
    growth = (increased && tau <= floor * (1.0 + 1e-12)) ? growth + 1 : 0;

    if (df <= cfg.stop_discrepancy) {
      trace.status = RunStatus::Converged;
      trace.final = idx;
      break;
    }
    if (growth >= 2) {
      trace.status = RunStatus::DivergedReverted;
      trace.final = trace.best;
      break;
    }
    if (n >= cfg.max_iterations) {
      trace.status = RunStatus::MaxIterations;
      trace.final = idx;
      break;
    }
    const TauDecision dec = tau_update(cfg.tau, tau, history);
    if (dec.revert) {
      // Re-evaluating the best iterate at an unchanged tau cannot make progress.
      if (std::abs(dec.tau - best_tau) <= 1e-15) {
        trace.status = RunStatus::DivergedReverted;
        trace.final = trace.best;
        break;
      }
      sv = best_sv;
      raw = best_sv;
      tau = dec.tau;
      reverted = true;
      continue;
    }
    reverted = false;
    raw = iterative_step(sv, f_meas, fp);
    sv = project(raw);
    tau = dec.tau;
  }
  return trace;
}

ReconstructionTrace run_reconstruction(const BoundaryFields& bf, const Grid2D& grid,
                                       const Wavenumber& k, const RingGeometry& geom,
                                       const ReconstructionConfig& cfg, const ScattererField* truth) {
  const auto angles = geom.angles();
  const AmplitudeGrid f = near_to_far(bf, k, geom, angles, angles, cfg.truncation);
  return reconstruct(f, grid, k, geom, cfg, truth);
}

}  // namespace tomolab
