#include "tomolab/near2far.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tomolab/error.hpp"

namespace tomolab {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// E(q, m) = exp(-i q phi_m) / M for q in [-Q, Q].
CMatrix analysis_matrix(int Q, int M) {
  CMatrix E(2 * Q + 1, M);
  for (int q = -Q; q <= Q; ++q)
    for (int m = 0; m < M; ++m) E(q + Q, m) = std::exp(-I * (q * two_pi * m / M)) / double(M);
  return E;
}

// Real interpolation kernel mapping M equispaced samples onto n = r M nodes.
// For even M the Nyquist harmonic is split evenly between +-M/2.
Eigen::MatrixXd refine_matrix(int M, int r) {
  const int n = r * M;
  Eigen::MatrixXd R(n, M);
  const int half = M / 2;
  for (int p = 0; p < n; ++p)
    for (int m = 0; m < M; ++m) {
      const double d = two_pi * p / n - two_pi * m / M;
      double s = 1.0;
      const int top = (M % 2 == 0) ? half - 1 : half;
      for (int q = 1; q <= top; ++q) s += 2.0 * std::cos(q * d);
      if (M % 2 == 0) s += std::cos(half * d);
      R(p, m) = s / M;
    }
  return R;
}

}  // namespace

DoubleSpectrum ring_double_dft(const CMatrix& samples, int Q) {
  const int M = static_cast<int>(samples.rows());
  if (samples.cols() != samples.rows()) fail(ErrorKind::Mismatch, "ring samples must be square");
  if (Q < 0 || Q > M / 2 - 1)
    fail(ErrorKind::Truncation, "order " + std::to_string(Q) + " exceeds the ring Nyquist limit " +
                                    std::to_string(M / 2 - 1));
  const CMatrix E = analysis_matrix(Q, M);
  return {Q, E * samples * E.transpose()};
}

CMatrix ring_double_idft(const DoubleSpectrum& spec, int M) {
  CMatrix B(M, 2 * spec.Q + 1);
  for (int m = 0; m < M; ++m)
    for (int q = -spec.Q; q <= spec.Q; ++q) B(m, q + spec.Q) = std::exp(I * (q * two_pi * m / M));
  return B * spec.values * B.transpose();
}

PhiSpectrum phi_spectrum_solve(const DoubleSpectrum& scattered, const Wavenumber& k,
                               const RingGeometry& geom, const TruncationPolicy& trunc) {
  const int Q = scattered.Q;
  if (Q > geom.nyquist_order())
    fail(ErrorKind::Truncation, "spectrum order exceeds the ring Nyquist limit");
  const auto g = green0_spectrum_table(Q, k, geom);
  double gmax2 = 0.0;
  for (const auto& x : g) gmax2 = std::max(gmax2, std::norm(x));
  const double ring = two_pi * geom.radius();
  PhiSpectrum out{DoubleSpectrum::zeros(Q), {}};
  for (int qy = -Q; qy <= Q; ++qy)
    for (int qx = -Q; qx <= Q; ++qx) {
      const cplx gg = g[qy + Q] * g[qx + Q];
      if (std::abs(gg) < trunc.g_floor * gmax2) {
        out.zeroed.emplace_back(qy, qx);
        continue;
      }
      out.phi.at(qy, qx) = scattered.at(qy, qx) / (ring * ring * gg);
    }
  return out;
}

AmplitudeGrid amplitude_from_phi(const DoubleSpectrum& phi, const std::vector<double>& phis,
                                 const std::vector<double>& phis_prime, const Wavenumber& k,
                                 const RingGeometry& geom) {
  const int Q = phi.Q;
  const auto c = planewave_coefficient_table(Q, k, geom);  // i^q J_q
  CMatrix Ul(2 * Q + 1, phis_prime.size()), Uk(2 * Q + 1, phis.size());
  for (int q = -Q; q <= Q; ++q) {
    for (std::size_t j = 0; j < phis_prime.size(); ++j)
      Ul(q + Q, j) = c[q + Q] * std::exp(-I * (q * (phis_prime[j] + pi)));
    for (std::size_t i = 0; i < phis.size(); ++i) Uk(q + Q, i) = c[q + Q] * std::exp(-I * (q * phis[i]));
  }
  // Phi(-a, -b) is the spectrum reversed along both axes.
  const CMatrix neg = phi.values.reverse();
  const double R2 = geom.radius() * geom.radius();
  AmplitudeGrid f;
  f.phis = phis;
  f.phis_prime = phis_prime;
  f.omega = k.omega();
  f.values = (R2 * (Ul.transpose() * neg * Uk)).transpose();
  return f;
}

AmplitudeGrid near_to_far(const BoundaryFields& bf, const Wavenumber& k, const RingGeometry& geom,
                          const std::vector<double>& phis, const std::vector<double>& phis_prime,
                          const TruncationPolicy& trunc) {
  if (bf.omega != k.omega()) fail(ErrorKind::Mismatch, "boundary data frequency mismatch");
  const auto spec = ring_double_dft(bf.scattered(), trunc.Q);
  const auto phi = phi_spectrum_solve(spec, k, geom, trunc);
  return amplitude_from_phi(phi.phi, phis, phis_prime, k, geom);
}

CMatrix trig_refine(const CMatrix& samples, int r) {
  if (r < 1) fail(ErrorKind::Domain, "refinement factor must be >= 1");
  if (r == 1) return samples;
  const int M = static_cast<int>(samples.rows());
  const CMatrix R = refine_matrix(M, r).cast<cplx>();
  return R * samples * R.transpose();
}

CMatrix single_layer_matrix(int n, const Wavenumber& k, double R0) {
  if (n < 4 || n % 2) fail(ErrorKind::Domain, "single-layer quadrature needs an even node count");
  const int N = n / 2;
  const double k0 = k.k0();
  // Kress weights depend on the node difference only.
  std::vector<double> Rw(n);
  for (int d = 0; d < n; ++d) {
    const double t = two_pi * d / n;
    double s = 0.0;
    for (int m = 1; m < N; ++m) s -= (two_pi / N) * std::cos(m * t) / m;
    s -= (pi / (double(N) * N)) * std::cos(N * t);
    Rw[d] = s;
  }
  std::vector<cplx> row(n);
  for (int d = 0; d < n; ++d) {
    const double t = two_pi * d / n;
    if (d == 0) {
      const cplx K2 = -0.25 * I + (std::log(0.5 * k0 * R0) + euler_gamma) / two_pi;
      row[0] = R0 * (Rw[0] / (4.0 * pi) + (two_pi / n) * K2);
      continue;
    }
    const double chord = 2.0 * R0 * std::abs(std::sin(0.5 * t));
    const auto p = cylinder_functions(0, k0 * chord);
    const double K1 = p.J / (4.0 * pi);
    const cplx G = -0.25 * I * cplx(p.J, p.Y);
    const double lg = std::log(4.0 * std::sin(0.5 * t) * std::sin(0.5 * t));
    const cplx K2 = G - K1 * lg;
    row[d] = R0 * (Rw[d] * K1 + (two_pi / n) * K2);
  }
  CMatrix S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = row[((i - j) % n + n) % n];
  return S;
}

AmplitudeGrid amplitude_coordinate_path(const BoundaryFields& bf, const RingGeometry& geom,
                                        const Wavenumber& k, const std::vector<double>& phis,
                                        const std::vector<double>& phis_prime,
                                        const CoordinatePathOptions& opt,
                                        CoordinatePathReport* report) {
  if (bf.omega != k.omega()) fail(ErrorKind::Mismatch, "boundary data frequency mismatch");
  const int M = geom.count();
  const int n = opt.refine * M;
  const double R0 = geom.radius(), k0 = k.k0();
  const CMatrix dG = trig_refine(bf.scattered(), opt.refine);
  const CMatrix S = single_layer_matrix(n, k, R0);

  Eigen::JacobiSVD<CMatrix> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  RVector inv(sv.size());
  int discarded = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > opt.sv_floor * sv[0]) {
      inv[i] = 1.0 / sv[i];
    } else {
      inv[i] = 0.0;
      ++discarded;
    }
  }
  if (report) {
    report->condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                : std::numeric_limits<double>::infinity();
    report->discarded = discarded;
  }
  const CMatrix Sp = svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  const CMatrix Phi = Sp * dG * Sp.transpose();

  CMatrix UL(phis_prime.size(), n), UK(n, phis.size());
  for (int t = 0; t < n; ++t) {
    const double th = two_pi * t / n;
    const double yx = R0 * std::cos(th), yy = R0 * std::sin(th);
    for (std::size_t j = 0; j < phis_prime.size(); ++j)
      UL(j, t) = std::exp(-I * (k0 * (std::cos(phis_prime[j]) * yx + std::sin(phis_prime[j]) * yy)));
    for (std::size_t i = 0; i < phis.size(); ++i)
      UK(t, i) = std::exp(I * (k0 * (std::cos(phis[i]) * yx + std::sin(phis[i]) * yy)));
  }
  const double w = R0 * two_pi / n;
  AmplitudeGrid f;
  f.phis = phis;
  f.phis_prime = phis_prime;
  f.omega = k.omega();
  f.values = ((w * w / (two_pi * two_pi)) * (UL * Phi * UK)).transpose();
  return f;
}

}  // namespace tomolab
