#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tomolab/forward.hpp"
#include "tomolab/model.hpp"

namespace tomolab {

// ||v^ - v|| / ||v|| over all grid cells.
double solution_discrepancy(const ScattererField& v_hat, const ScattererField& v_true);
// Relative L2 misfit over the (phi, phi') torus.
double data_discrepancy(const AmplitudeGrid& f_hat, const AmplitudeGrid& f_meas);
// sqrt of the integral of |f|^2 over the torus, uniform angular weights.
double amplitude_norm(const AmplitudeGrid& f);

// Bilinear interpolation of a cell-centred field; zero outside the grid.
double bilinear(const Grid2D& grid, const RVector& field, Point p);

struct PhaseShift {
  double total = 0.0;
  double positive = 0.0;  // contribution of cells with positive contrast
  double negative = 0.0;
};

// k0 * integral of c / (1 + c) along the segment a -> b, trapezoid with step
// at most `step` (h / 2 when step <= 0).
PhaseShift phase_shift(const Grid2D& grid, const RVector& contrast, const Wavenumber& k, Point a,
                       Point b, double step = 0.0);

struct NoiseSpec {
  double level = 0.15;
  std::uint64_t seed = 20240607;
};

// mt19937_64 with 53-bit uniforms and Box-Muller pairs, so the stream is the
// same on every platform.
class NoiseRng {
 public:
  explicit NoiseRng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // [0, 1)
  double normal();

 private:
  std::mt19937_64 eng_;
  bool cached_ = false;
  double spare_ = 0.0;
};

struct NoisyFields {
  BoundaryFields fields;
  double noise_to_signal = 0.0;  // ||noise|| / ||G - G0||
  double sigma = 0.0;
};

// Adds N(0, sigma^2) to Re and Im of every G - G0 entry, sigma = level times
// the rms scattered amplitude. Draws are row-major (receiver, source), Re first.
NoisyFields inject_noise(const BoundaryFields& bf, double level, NoiseRng& rng);
// One generator, frequencies consumed in order.
std::vector<NoisyFields> inject_noise(const std::vector<BoundaryFields>& bfs, const NoiseSpec& spec);

// omega_1^2 * mean_j v^(omega_j) / omega_j^2, omega_1 being the first entry.
ScattererField multifrequency_average(const std::vector<ScattererField>& estimates);

}  // namespace tomolab
