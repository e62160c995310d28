#include "tomolab/forward.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tomolab/error.hpp"

namespace tomolab {

std::vector<Incidence> ring_sources(const RingGeometry& geom) {
  std::vector<Incidence> inc;
  inc.reserve(geom.count());
  for (int m = 0; m < geom.count(); ++m) inc.push_back(Incidence::point_source(geom.position(m)));
  return inc;
}

std::vector<Incidence> plane_waves(const std::vector<double>& angles) {
  std::vector<Incidence> inc;
  inc.reserve(angles.size());
  for (double a : angles) inc.push_back(Incidence::plane_wave(a));
  return inc;
}

CMatrix incident_field(const Grid2D& grid, const std::vector<Incidence>& inc, const Wavenumber& k) {
  const auto& cells = grid.active();
  CMatrix u0(cells.size(), inc.size());
  const double k0 = k.k0();
  for (std::size_t c = 0; c < inc.size(); ++c) {
    const Incidence& s = inc[c];
    if (s.kind == IncidenceKind::PlaneWave) {
      const double kx = k0 * std::cos(s.angle), ky = k0 * std::sin(s.angle);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const Point r = grid.center(static_cast<std::size_t>(cells[i]));
        u0(i, c) = std::exp(I * (kx * r.x + ky * r.y));
      }
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i)
        u0(i, c) = green0(grid.center(static_cast<std::size_t>(cells[i])), s.source, k);
    }
  }
  return u0;
}

cplx self_cell_integral(double h, double k0) {
  // int_0^a G0(k rho) 2 pi rho drho = -(i pi a / (2k)) H1(ka) + 1/k^2
  const double a = h / std::sqrt(pi);
  return -I * pi * a / (2.0 * k0) * hankel1(1, k0 * a) + 1.0 / (k0 * k0);
}

namespace {

// G0(h |d|) h^2 for integer offsets 0 <= dx < nx, 0 <= dy < ny; the zero offset
// holds the self-cell integral.
class KernelTable {
 public:
  KernelTable(const Grid2D& grid, const Wavenumber& k) : nx_(grid.nx()), ny_(grid.ny()) {
    const double h = grid.h(), k0 = k.k0();
    t_.resize(static_cast<std::size_t>(nx_) * ny_);
    std::vector<double> J, Y;
    for (int dy = 0; dy < ny_; ++dy)
      for (int dx = 0; dx < nx_; ++dx) {
        if (dx == 0 && dy == 0) {
          t_[0] = self_cell_integral(h, k0);
          continue;
        }
        cylinder_table(1, k0 * h * std::hypot(double(dx), double(dy)), J, Y);
        t_[static_cast<std::size_t>(dy) * nx_ + dx] = -0.25 * I * cplx(J[0], Y[0]) * (h * h);
      }
  }
  cplx operator()(int dx, int dy) const {
    return t_[static_cast<std::size_t>(std::abs(dy)) * nx_ + std::abs(dx)];
  }

 private:
  int nx_, ny_;
  std::vector<cplx> t_;
};

// A = I - K diag(v) over active cells.
CMatrix assemble_system(const ScattererField& v) {
  const Grid2D& g = v.grid;
  const auto& cells = g.active();
  const KernelTable K(g, v.wave);
  const Eigen::Index n = static_cast<Eigen::Index>(cells.size());
  CMatrix A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int cj = cells[j];
    const int jx = cj % g.nx(), jy = cj / g.nx();
    const cplx vj = v.values[cj];
    for (Eigen::Index i = 0; i < n; ++i) {
      const int ci = cells[i];
      A(i, j) = -K(ci % g.nx() - jx, ci / g.nx() - jy) * vj;
    }
    A(j, j) += 1.0;
  }
  return A;
}

}  // namespace

CMatrix assemble_kernel(const Grid2D& grid, const Wavenumber& k) {
  const auto& cells = grid.active();
  const KernelTable K(grid, k);
  const Eigen::Index n = static_cast<Eigen::Index>(cells.size());
  CMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = K(cells[i] % grid.nx() - cells[j] % grid.nx(), cells[i] / grid.nx() - cells[j] / grid.nx());
  return out;
}

struct ForwardSolver::Factor {
  CMatrix A;
  std::optional<Eigen::PartialPivLU<Eigen::Ref<CMatrix>>> lu;
};

ForwardSolver::ForwardSolver(const ScattererField& v, SolverOptions opt)
    : v_(v), cells_(v.grid.active()), lu_(std::make_unique<Factor>()) {
  if (!v.grid.resolves(v.wave.wavelength()))
    warnings_.push_back("cell size " + std::to_string(v.grid.h()) + " exceeds a quarter wavelength");
  lu_->A = assemble_system(v_);
  lu_->lu.emplace(lu_->A);
  const double rc = lu_->lu->rcond();
  condition_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!std::isfinite(condition_) || condition_ > opt.max_condition)
    throw SingularSystemError("Lippmann-Schwinger system is numerically singular (condition estimate " +
                                  std::to_string(condition_) + ")",
                              condition_);
  if (condition_ > opt.warn_condition)
    warnings_.push_back("condition estimate " + std::to_string(condition_) + " above " +
                        std::to_string(opt.warn_condition));
}

ForwardSolver::~ForwardSolver() = default;
ForwardSolver::ForwardSolver(ForwardSolver&&) noexcept = default;
ForwardSolver& ForwardSolver::operator=(ForwardSolver&&) noexcept = default;

CMatrix ForwardSolver::solve(const CMatrix& incident) const {
  if (static_cast<std::size_t>(incident.rows()) != cells_.size())
    fail(ErrorKind::Mismatch, "incident field rows do not match the active cells");
  return lu_->lu->solve(incident);
}

double ForwardSolver::residual(const CMatrix& u, const CMatrix& incident) const {
  const CMatrix A = assemble_system(v_);
  return (A * u - incident).norm() / incident.norm();
}

CMatrix ForwardSolver::radiate(const std::vector<Point>& points, const CMatrix& u) const {
  const Grid2D& g = v_.grid;
  const double h2 = g.cell_area();
  const Eigen::Index n = static_cast<Eigen::Index>(cells_.size());
  CMatrix P(points.size(), n);
  std::vector<double> J, Y;
  const double k0 = v_.wave.k0();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point r = g.center(static_cast<std::size_t>(cells_[j]));
    const cplx w = v_.values[cells_[j]] * h2;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const double d = distance(points[p], r);
      if (d < default_separation_eps)
        fail(ErrorKind::Singularity, "observation point coincides with a cell center");
      cylinder_table(1, k0 * d, J, Y);
      P(p, j) = -0.25 * I * cplx(J[0], Y[0]) * w;
    }
  }
  return P * u;
}

InternalFields solve_internal_fields(const ForwardSolver& solver, const std::vector<Incidence>& inc,
                                     const Wavenumber& k) {
  if (k.omega() != solver.scatterer().omega() || k.c0() != solver.scatterer().wave.c0())
    fail(ErrorKind::Mismatch, "scatterer was built for a different frequency");
  const CMatrix u0 = incident_field(solver.scatterer().grid, inc, k);
  return {inc, solver.solve(u0)};
}

CMatrix ring_green0(const RingGeometry& geom, const Wavenumber& k) {
  const int M = geom.count();
  const double R0 = geom.radius(), k0 = k.k0();
  CMatrix G(M, M);
  for (int n = 0; n < M; ++n)
    for (int m = 0; m < M; ++m)
      if (m != n) G(m, n) = green0(geom.position(m), geom.position(n), k);
  // Average over the arc cell centred on the transducer.
  const double half = 0.5 * R0 * geom.step();
  boost::math::quadrature::tanh_sinh<double> ts;
  auto chord = [&](double s) { return std::max(2.0 * R0 * std::sin(s / (2.0 * R0)), 1e-300); };
  const double re = ts.integrate([&](double s) { return 0.25 * cylinder_functions(0, k0 * chord(s)).Y; },
                                 0.0, half);
  const double im = ts.integrate([&](double s) { return -0.25 * cylinder_functions(0, k0 * chord(s)).J; },
                                 0.0, half);
  const cplx diag = cplx(re, im) / half;
  for (int m = 0; m < M; ++m) G(m, m) = diag;
  return G;
}

BoundaryFields boundary_fields(const ForwardSolver& solver, const InternalFields& internal,
                               const Wavenumber& k, const RingGeometry& geom) {
  const int M = geom.count();
  if (static_cast<int>(internal.incidences.size()) != M)
    fail(ErrorKind::Mismatch, "boundary fields need one point-source solve per transducer");
  for (int n = 0; n < M; ++n) {
    const auto& s = internal.incidences[n];
    const Point x = geom.position(n);
    if (s.kind != IncidenceKind::PointSource || distance(s.source, x) > 1e-9 * geom.radius())
      fail(ErrorKind::Mismatch, "internal fields are not the ring point-source solves");
  }
  std::vector<Point> receivers;
  for (int m = 0; m < M; ++m) receivers.push_back(geom.position(m));
  BoundaryFields bf;
  bf.omega = k.omega();
  bf.G0 = ring_green0(geom, k);
  bf.G = bf.G0 + solver.radiate(receivers, internal.u);
  return bf;
}

BoundaryFields simulate_boundary(const ScattererField& v, const RingGeometry& geom, SolverOptions opt) {
  v.grid.require_inside(geom.radius());
  const ForwardSolver solver(v, opt);
  const auto internal = solve_internal_fields(solver, ring_sources(geom), v.wave);
  return boundary_fields(solver, internal, v.wave, geom);
}

AmplitudeGrid AmplitudeGrid::zeros(std::vector<double> phis, std::vector<double> phis_prime, double omega) {
  AmplitudeGrid a;
  a.values = CMatrix::Zero(phis.size(), phis_prime.size());
  a.phis = std::move(phis);
  a.phis_prime = std::move(phis_prime);
  a.omega = omega;
  return a;
}

AmplitudeGrid scattering_amplitude_direct(const ScattererField& v, const InternalFields& internal,
                                          const std::vector<double>& phis_prime, const Wavenumber& k) {
  const Grid2D& g = v.grid;
  const auto& cells = g.active();
  if (static_cast<std::size_t>(internal.u.rows()) != cells.size())
    fail(ErrorKind::Mismatch, "internal fields do not match the scatterer grid");
  std::vector<double> phis;
  for (const auto& s : internal.incidences) {
    if (s.kind != IncidenceKind::PlaneWave)
      fail(ErrorKind::Mismatch, "direct amplitude needs plane-wave internal fields");
    phis.push_back(s.angle);
  }
  const double k0 = k.k0();
  const Eigen::Index n = static_cast<Eigen::Index>(cells.size());
  CMatrix L(phis_prime.size(), n);
  CVector w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point r = g.center(static_cast<std::size_t>(cells[j]));
    w[j] = v.values[cells[j]] * g.cell_area() / (two_pi * two_pi);
    for (std::size_t p = 0; p < phis_prime.size(); ++p)
      L(p, j) = std::exp(-I * (k0 * (std::cos(phis_prime[p]) * r.x + std::sin(phis_prime[p]) * r.y)));
  }
  AmplitudeGrid f;
  f.phis = std::move(phis);
  f.phis_prime = phis_prime;
  f.omega = k.omega();
  f.values = (L * (w.asDiagonal() * internal.u)).transpose();
  return f;
}

AmplitudeGrid simulate_amplitude(const ScattererField& v, const std::vector<double>& angles,
                                 SolverOptions opt) {
  const ForwardSolver solver(v, opt);
  const auto internal = solve_internal_fields(solver, plane_waves(angles), v.wave);
  return scattering_amplitude_direct(v, internal, angles, v.wave);
}

}  // namespace tomolab
