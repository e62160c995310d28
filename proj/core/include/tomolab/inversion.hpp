#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomolab/forward.hpp"
#include "tomolab/model.hpp"
#include "tomolab/near2far.hpp"

namespace tomolab {

// v~(xi) on the (phi, phi') grid, xi = k(phi) - l(phi'). values(i, j) belongs
// to incident angle phis[i] and scattered angle phis_prime[j].
struct SpectralEstimate {
  std::vector<double> phis;
  std::vector<double> phis_prime;
  CMatrix values;
  double omega = 0.0;
};

SpectralEstimate born_estimate(const AmplitudeGrid& f);

// Hermitian part (v~(xi) + conj v~(-xi)) / 2. On a square equispaced grid the
// reflection xi -> -xi swaps phi and phi', so this is a conjugate transpose.
SpectralEstimate hermitian_part(const SpectralEstimate& sv);

struct DiskQuadrature {
  // Trigonometric refinement of the angle grid before summation.
  int refine = 2;
  // Endpoint correction for the |sin(phi - phi')| kinks on the two diagonals.
  bool kink_correction = true;
};

// Mask and weights of the disk quadrature on an n x n equispaced angle grid.
// weight(i, j) = (k0^2 / 2) |sin(phi_i - phi'_j)| dphi^2 [+ kink terms] for
// |xi| <= 2 tau k0, zero elsewhere.
Eigen::MatrixXd disk_weights(int n, double k0, double tau, bool kink_correction);
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> disk_mask(int n, double tau);

// Spectral estimate interpolated onto an r-times finer angle grid.
SpectralEstimate refine_spectrum(const SpectralEstimate& sv, int r);

// Multiplies v~ by the indicator of |xi| <= 2 tau k0.
SpectralEstimate apply_disk_filter(const SpectralEstimate& sv, double tau);

// v(r) = (k0^2 / 2) sum v~(xi) exp(-i xi.r) |sin(phi - phi')| dphi dphi' over
// |xi| <= 2 tau k0. The filter is applied on the refined grid.
ScattererField disk_inverse_fourier(const SpectralEstimate& sv, double tau, const Grid2D& grid,
                                    const Wavenumber& k, const DiskQuadrature& quad = {});

// v~(n) = v~(n-1) + f - f(n-1)
SpectralEstimate iterative_step(const SpectralEstimate& sv_prev, const AmplitudeGrid& f_meas,
                                const AmplitudeGrid& f_prev);

enum class TauMode { Fixed, Adaptive };

struct TauSchedule {
  TauMode mode = TauMode::Adaptive;
  double tau0 = 0.5;
  double growth = 0.1;
  double shrink = 0.8;
  int window = 3;
  double stagnation = 0.01;
  double tau_min = 0.2;

  void validate() const;
  // Floor used for divergence detection. In fixed mode this is tau0.
  double floor() const { return mode == TauMode::Fixed ? tau0 : tau_min; }
};

const char* to_string(TauMode m);

struct TauDecision {
  double tau;
  bool revert;
};

// history holds delta_f for every evaluated iterate, the current one last.
TauDecision tau_update(const TauSchedule& sched, double tau, const std::vector<double>& history);

enum class AmplitudeSource { Direct, Boundary };
const char* to_string(AmplitudeSource s);

struct ReconstructionConfig {
  TauSchedule tau;
  int max_iterations = 60;
  double stop_discrepancy = 0.0;
  AmplitudeSource source = AmplitudeSource::Direct;
  // Keep v~ Hermitian and v real, as for a pure sound-speed scatterer.
  bool real_scatterer = true;
  DiskQuadrature quadrature;
  TruncationPolicy truncation;
  SolverOptions solver;
};

enum class RunStatus { Converged, MaxIterations, DivergedReverted };
const char* to_string(RunStatus s);

struct IterationRecord {
  int n = 0;
  ScattererField estimate;
  std::optional<double> delta_v;
  double delta_f = 0.0;
  double tau = 1.0;
  double seconds = 0.0;
  bool reverted = false;  // spectrum restored to the best iterate before this step
  double imag_ratio = 0.0;  // ||Im v^|| / ||v^|| before any real projection
};

struct ReconstructionTrace {
  std::vector<IterationRecord> records;  // records[0] is the Born estimate
  RunStatus status = RunStatus::MaxIterations;
  std::size_t best = 0;   // lowest delta_f
  std::size_t final = 0;  // reported estimate
  AmplitudeGrid measured;
  std::vector<std::string> warnings;

  const IterationRecord& born() const { return records.front(); }
  const IterationRecord& result() const { return records[final]; }
  std::vector<double> tau_trajectory() const;
};

// Steps 2-7 from a measured amplitude grid on the square ring-angle grid.
ReconstructionTrace reconstruct(const AmplitudeGrid& f_meas, const Grid2D& grid, const Wavenumber& k,
                                const RingGeometry& geom, const ReconstructionConfig& cfg,
                                const ScattererField* truth = nullptr);

// Full pipeline from ring measurements: near-to-far conversion, then reconstruct.
ReconstructionTrace run_reconstruction(const BoundaryFields& bf, const Grid2D& grid,
                                       const Wavenumber& k, const RingGeometry& geom,
                                       const ReconstructionConfig& cfg,
                                       const ScattererField* truth = nullptr);

// Predicted amplitude of a trial scatterer on the ring angle grid.
AmplitudeGrid predict_amplitude(const ScattererField& v, const RingGeometry& geom,
                                AmplitudeSource source, const TruncationPolicy& trunc,
                                const SolverOptions& solver, std::vector<std::string>* warnings = nullptr);

}  // namespace tomolab
