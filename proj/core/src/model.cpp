#include "tomolab/model.hpp"

#include <cmath>
#include <string>

#include "tomolab/error.hpp"

namespace tomolab {

Grid2D::Grid2D(Point origin, int nx, int ny, double h, std::optional<double> support_radius)
    : origin_(origin), nx_(nx), ny_(ny), h_(h), support_(support_radius) {
  if (nx < 1 || ny < 1) fail(ErrorKind::Domain, "grid needs at least one cell per axis");
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::Domain, "grid cell size must be > 0");
  if (support_ && !(*support_ > 0.0)) fail(ErrorKind::Domain, "support radius must be > 0");
  mask_.assign(size(), 0);
  for (int iy = 0; iy < ny_; ++iy)
    for (int ix = 0; ix < nx_; ++ix) {
      const Point c = center(ix, iy);
      if (!support_ || std::hypot(c.x, c.y) < *support_) {
        const auto idx = index(ix, iy);
        mask_[idx] = 1;
        active_.push_back(static_cast<int>(idx));
      }
    }
  if (active_.empty()) fail(ErrorKind::Domain, "grid has no active cells inside the support");
}

Grid2D Grid2D::centered_square(double side, double h, std::optional<double> support_radius) {
  const int n = static_cast<int>(std::lround(side / h));
  if (n < 1) fail(ErrorKind::Domain, "grid side smaller than one cell");
  const double half = 0.5 * n * h;
  return Grid2D({-half, -half}, n, n, h, support_radius);
}

double Grid2D::reach() const {
  double r = 0.0;
  const double d = 0.5 * h_;
  for (int idx : active_) {
    const Point c = center(static_cast<std::size_t>(idx));
    r = std::max(r, std::hypot(std::abs(c.x) + d, std::abs(c.y) + d));
  }
  return r;
}

void Grid2D::require_inside(double R0) const {
  const double r = reach();
  if (!(r < R0))
    fail(ErrorKind::Domain, "scattering domain reaches radius " + std::to_string(r) +
                                ", not strictly inside the ring of radius " + std::to_string(R0));
}

bool Grid2D::operator==(const Grid2D& o) const {
  return origin_.x == o.origin_.x && origin_.y == o.origin_.y && nx_ == o.nx_ && ny_ == o.ny_ &&
         h_ == o.h_ && support_ == o.support_;
}

ScattererField::ScattererField(Grid2D g, CVector v, Wavenumber w)
    : grid(std::move(g)), values(std::move(v)), wave(w) {
  if (static_cast<std::size_t>(values.size()) != grid.size())
    fail(ErrorKind::Mismatch, "field size does not match its grid");
  if (!values.allFinite()) fail(ErrorKind::Domain, "scatterer values must be finite");
}

const char* to_string(PhantomVariant v) {
  return v == PhantomVariant::TwoBlob ? "two-blob" : "four-blob";
}

const char* to_string(ExponentForm e) { return e == ExponentForm::Squared ? "squared" : "literal"; }

PhantomSpec PhantomSpec::two_blob(double A0, double wavelength) {
  PhantomSpec s;
  s.A0 = A0;
  const double s1 = 0.8 * wavelength;
  s.blobs = {{{-10.0 / 8.0 * wavelength, 0.0}, s1, 1.0}, {{0.0, 0.0}, 1.5 * s1, -0.5}};
  s.variant = PhantomVariant::TwoBlob;
  return s;
}

PhantomSpec PhantomSpec::four_blob(double A0, double wavelength) {
  PhantomSpec s = two_blob(A0, wavelength);
  const double small = 0.4 * wavelength;
  s.blobs.push_back({{-11.0 / 8.0 * wavelength, 0.0}, small, -0.5});
  s.blobs.push_back({{0.25 * wavelength, 0.0}, small, 0.5});
  s.variant = PhantomVariant::FourBlob;
  return s;
}

void PhantomSpec::validate() const {
  if (!std::isfinite(A0)) fail(ErrorKind::Domain, "phantom amplitude must be finite");
  for (const auto& b : blobs)
    if (!(b.width > 0.0)) fail(ErrorKind::Domain, "phantom blob widths must be > 0");
}

double phantom_shape(const PhantomSpec& spec, Point r) {
  double s = 0.0;
  for (const auto& b : spec.blobs) {
    const double d2 = (r.x - b.center.x) * (r.x - b.center.x) + (r.y - b.center.y) * (r.y - b.center.y);
    const double d = spec.exponent == ExponentForm::Squared ? d2 : std::sqrt(d2);
    s += b.weight * std::exp(-d / (b.width * b.width));
  }
  return s;
}

namespace {

// Largest blob magnitude on or beyond the support boundary (or the grid edge).
void check_phantom_extent(const PhantomSpec& spec, const Grid2D& grid) {
  for (const auto& b : spec.blobs) {
    if (b.weight == 0.0) continue;
    double edge_distance;
    const double cr = std::hypot(b.center.x, b.center.y);
    if (auto R = grid.support_radius()) {
      edge_distance = *R - cr;
    } else {
      const Point o = grid.origin();
      const double x1 = o.x + grid.nx() * grid.h(), y1 = o.y + grid.ny() * grid.h();
      edge_distance = std::min({b.center.x - o.x, x1 - b.center.x, b.center.y - o.y, y1 - b.center.y});
    }
    if (edge_distance <= 0.0)
      fail(ErrorKind::SpecOutOfDomain, "phantom blob center lies outside the scattering domain");
    const double d = spec.exponent == ExponentForm::Squared ? edge_distance * edge_distance : edge_distance;
    const double level = std::abs(b.weight) * std::exp(-d / (b.width * b.width));
    if (level > phantom_edge_level)
      fail(ErrorKind::SpecOutOfDomain,
           "phantom blob reaches the domain boundary at relative level " + std::to_string(level));
  }
}

}  // namespace

ScattererField build_phantom(const PhantomSpec& spec, const Wavenumber& wave, const Grid2D& grid,
                             std::optional<Wavenumber> reference) {
  spec.validate();
  check_phantom_extent(spec, grid);
  const Wavenumber ref = reference.value_or(wave);
  const double k_ref = ref.k0();
  const double scale = (wave.omega() / ref.omega()) * (wave.omega() / ref.omega());
  ScattererField v(grid, wave);
  for (int idx : grid.active()) {
    const Point r = grid.center(static_cast<std::size_t>(idx));
    v.values[idx] = spec.A0 * k_ref * k_ref * phantom_shape(spec, r) * scale;
  }
  return v;
}

RVector v_to_speed_contrast(const ScattererField& v) {
  const double w2 = v.omega() * v.omega();
  const double c02 = v.wave.c0() * v.wave.c0();
  RVector out(v.values.size());
  for (Eigen::Index i = 0; i < v.values.size(); ++i) {
    const double rad = 1.0 - v.values[i].real() * c02 / w2;
    if (!(rad > 0.0))
      fail(ErrorKind::Nonphysical, "potential implies a nonphysical sound speed at cell " + std::to_string(i));
    out[i] = 1.0 / std::sqrt(rad) - 1.0;
  }
  return out;
}

ScattererField speed_contrast_to_v(const RVector& contrast, const Grid2D& grid, const Wavenumber& wave) {
  if (static_cast<std::size_t>(contrast.size()) != grid.size())
    fail(ErrorKind::Mismatch, "contrast size does not match grid");
  const double w2 = wave.omega() * wave.omega();
  const double c02 = wave.c0() * wave.c0();
  ScattererField v(grid, wave);
  for (Eigen::Index i = 0; i < contrast.size(); ++i) {
    const double c = 1.0 + contrast[i];
    if (!(c > 0.0)) fail(ErrorKind::Nonphysical, "speed contrast must exceed -1");
    v.values[i] = w2 * (1.0 / c02 - 1.0 / (c02 * c * c));
  }
  return v;
}

ScattererField at_frequency(const ScattererField& v, const Wavenumber& wave) {
  if (wave.c0() != v.wave.c0()) fail(ErrorKind::Mismatch, "background speed differs");
  const double s = (wave.omega() / v.omega()) * (wave.omega() / v.omega());
  return ScattererField(v.grid, CVector(v.values * s), wave);
}

}  // namespace tomolab
