#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tomolab/background.hpp"
#include "tomolab/model.hpp"

namespace tomolab {

enum class IncidenceKind { PointSource, PlaneWave };

struct Incidence {
  IncidenceKind kind;
  Point source;   // point sources: location on the ring
  double angle;   // plane waves: direction of k

  static Incidence point_source(Point x) { return {IncidenceKind::PointSource, x, 0.0}; }
  static Incidence plane_wave(double phi) { return {IncidenceKind::PlaneWave, {}, phi}; }
};

std::vector<Incidence> ring_sources(const RingGeometry& geom);
std::vector<Incidence> plane_waves(const std::vector<double>& angles);

// Incident field at the active cells, one column per incidence.
CMatrix incident_field(const Grid2D& grid, const std::vector<Incidence>& inc, const Wavenumber& k);

// Integral of G0 over the equal-area disk of radius h / sqrt(pi).
cplx self_cell_integral(double h, double k0);

struct SolverOptions {
  double warn_condition = 1e8;
  // Above this estimate the factorization is rejected as singular.
  double max_condition = 1e14;
};

// Dense midpoint collocation of u = u0 + G0 V u on the active cells of the
// scatterer's grid. The LU factors are computed once and shared by all solves.
class ForwardSolver {
 public:
  explicit ForwardSolver(const ScattererField& v, SolverOptions opt = {});
  ~ForwardSolver();
  ForwardSolver(ForwardSolver&&) noexcept;
  ForwardSolver& operator=(ForwardSolver&&) noexcept;

  const ScattererField& scatterer() const { return v_; }
  std::size_t unknowns() const { return cells_.size(); }
  double condition_estimate() const { return condition_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  CMatrix solve(const CMatrix& incident) const;
  // ||u - u0 - K V u|| / ||u0|| in the Frobenius norm.
  double residual(const CMatrix& u, const CMatrix& incident) const;
  // Scattered field sum_cells G0(y, r) v(r) u(r) h^2 at off-grid points.
  CMatrix radiate(const std::vector<Point>& points, const CMatrix& u) const;

 private:
  ScattererField v_;
  std::vector<int> cells_;
  double condition_ = 1.0;
  std::vector<std::string> warnings_;
  struct Factor;
  std::unique_ptr<Factor> lu_;
};

// Kernel matrix K[i, j] = G0(r_i, r_j) h^2 with the self-cell rule on the diagonal.
CMatrix assemble_kernel(const Grid2D& grid, const Wavenumber& k);

struct InternalFields {
  std::vector<Incidence> incidences;
  CMatrix u;  // active cells x incidences
};

InternalFields solve_internal_fields(const ForwardSolver& solver, const std::vector<Incidence>& inc,
                                     const Wavenumber& k);

// Boundary Green's functions on the ring. G(m, n): receiver m, source n.
// Entries with coincident receiver and source hold the arc-cell average of G0.
struct BoundaryFields {
  CMatrix G;
  CMatrix G0;
  double omega = 0.0;

  CMatrix scattered() const { return G - G0; }
};

// Ring matrix of G0 with the arc-averaged diagonal.
CMatrix ring_green0(const RingGeometry& geom, const Wavenumber& k);

BoundaryFields boundary_fields(const ForwardSolver& solver, const InternalFields& internal,
                               const Wavenumber& k, const RingGeometry& geom);

// Convenience: factor, solve for all ring sources and collect G.
BoundaryFields simulate_boundary(const ScattererField& v, const RingGeometry& geom,
                                 SolverOptions opt = {});

// Scattering amplitude grid. values(i, j) = f(phis[i], phis_prime[j]) with
// phis the incident and phis_prime the scattered direction.
struct AmplitudeGrid {
  std::vector<double> phis;
  std::vector<double> phis_prime;
  CMatrix values;
  double omega = 0.0;

  static AmplitudeGrid zeros(std::vector<double> phis, std::vector<double> phis_prime, double omega);
};

AmplitudeGrid scattering_amplitude_direct(const ScattererField& v, const InternalFields& internal,
                                          const std::vector<double>& phis_prime, const Wavenumber& k);

// Convenience: factor, solve for plane waves at `angles` and evaluate f on the
// square angle grid.
AmplitudeGrid simulate_amplitude(const ScattererField& v, const std::vector<double>& angles,
                                 SolverOptions opt = {});

}  // namespace tomolab
