#pragma once

#include <utility>
#include <vector>

#include "tomolab/background.hpp"
#include "tomolab/forward.hpp"

namespace tomolab {

// Double angular harmonics indexed (q_y, q_x) in [-Q, Q]^2.
struct DoubleSpectrum {
  int Q = 0;
  CMatrix values;

  static DoubleSpectrum zeros(int Q) { return {Q, CMatrix::Zero(2 * Q + 1, 2 * Q + 1)}; }
  cplx& at(int qy, int qx) { return values(qy + Q, qx + Q); }
  cplx at(int qy, int qx) const { return values(qy + Q, qx + Q); }
};

// g~~(q, q') = M^-2 sum g(phi_m, phi_m') exp(-i q phi_m) exp(-i q' phi_m').
DoubleSpectrum ring_double_dft(const CMatrix& samples, int Q);
// Inverse sum back onto M x M equispaced ring angles.
CMatrix ring_double_idft(const DoubleSpectrum& spec, int M);

struct TruncationPolicy {
  int Q = 29;
  // Channels with |g(q_y) g(q_x)| below g_floor * max|g|^2 are zeroed.
  double g_floor = 1e-8;
};

struct PhiSpectrum {
  DoubleSpectrum phi;
  std::vector<std::pair<int, int>> zeroed;
};

// Divides the spectrum of the scattered samples G - G0 by the analytic G0
// spectrum. With the transform convention above, the harmonic (q_y, q_x) of
// G - G0 maps onto Phi(q_y, q_x) directly.
PhiSpectrum phi_spectrum_solve(const DoubleSpectrum& scattered, const Wavenumber& k,
                               const RingGeometry& geom, const TruncationPolicy& trunc = {});

// f(phi, phi') = R0^2 sum u0(a, phi' + pi) Phi(-a, -b) u0(b, phi)
AmplitudeGrid amplitude_from_phi(const DoubleSpectrum& phi, const std::vector<double>& phis,
                                 const std::vector<double>& phis_prime, const Wavenumber& k,
                                 const RingGeometry& geom);

// Angular-harmonic path from ring measurements.
AmplitudeGrid near_to_far(const BoundaryFields& bf, const Wavenumber& k, const RingGeometry& geom,
                          const std::vector<double>& phis, const std::vector<double>& phis_prime,
                          const TruncationPolicy& trunc = {});

struct CoordinatePathOptions {
  // The ring data are trigonometrically interpolated onto refine * M nodes
  // before the single-layer operator is discretized.
  int refine = 2;
  // Singular values of the discretized operator below this fraction of the
  // largest one are discarded.
  double sv_floor = 1e-4;
};

struct CoordinatePathReport {
  double condition = 0.0;
  int discarded = 0;
};

// Coordinate-space path: f = (2 pi)^-2 U_L^T [S^-1 (G - G0) S^-T] U_K with the
// arc-length weights folded into S and the plane-wave samples.
AmplitudeGrid amplitude_coordinate_path(const BoundaryFields& bf, const RingGeometry& geom,
                                        const Wavenumber& k, const std::vector<double>& phis,
                                        const std::vector<double>& phis_prime,
                                        const CoordinatePathOptions& opt = {},
                                        CoordinatePathReport* report = nullptr);

// Discretized single-layer operator on n equispaced ring nodes (Kress product
// quadrature for the logarithmic part). Exposed for testing.
CMatrix single_layer_matrix(int n, const Wavenumber& k, double R0);

// Trigonometric interpolation of M x M periodic samples onto (rM) x (rM).
CMatrix trig_refine(const CMatrix& samples, int r);

}  // namespace tomolab
