#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomolab/background.hpp"
#include "tomolab/common.hpp"

namespace tomolab {

// Cartesian cell grid. Cells are indexed iy * nx + ix with x fastest; the
// origin is the lower-left corner. An optional support radius restricts the
// scattering domain to cells whose centers lie within that disk ("active").
class Grid2D {
 public:
  Grid2D(Point origin, int nx, int ny, double h, std::optional<double> support_radius = {});
  static Grid2D centered_square(double side, double h,
                                std::optional<double> support_radius = {});

  Point origin() const { return origin_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double cell_area() const { return h_ * h_; }
  std::optional<double> support_radius() const { return support_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx_ + ix; }
  Point center(int ix, int iy) const {
    return {origin_.x + (ix + 0.5) * h_, origin_.y + (iy + 0.5) * h_};
  }
  Point center(std::size_t idx) const {
    return center(static_cast<int>(idx % nx_), static_cast<int>(idx / nx_));
  }

  const std::vector<int>& active() const { return active_; }
  bool is_active(std::size_t idx) const { return mask_[idx] != 0; }
  // Largest distance from the origin reached by any active cell (corners included).
  double reach() const;
  // Throws Domain if any active cell is not strictly inside the ring.
  void require_inside(double R0) const;
  bool resolves(double wavelength) const { return h_ <= wavelength / 4.0; }

  bool operator==(const Grid2D& o) const;

 private:
  Point origin_;
  int nx_, ny_;
  double h_;
  std::optional<double> support_;
  std::vector<int> active_;
  std::vector<unsigned char> mask_;
};

// Scattering potential v = omega^2 (1/c0^2 - 1/c^2) per cell. Cells outside the
// support are held at zero.
struct ScattererField {
  Grid2D grid;
  CVector values;
  Wavenumber wave;

  ScattererField(Grid2D g, Wavenumber w) : grid(std::move(g)), values(CVector::Zero(grid.size())), wave(w) {}
  ScattererField(Grid2D g, CVector v, Wavenumber w);
  double omega() const { return wave.omega(); }
};

enum class ExponentForm { Squared, Literal };
enum class PhantomVariant { TwoBlob, FourBlob };

struct Blob {
  Point center;
  double width;   // sigma
  double weight;  // relative amplitude
};

struct PhantomSpec {
  double A0 = 0.0;
  std::vector<Blob> blobs;
  PhantomVariant variant = PhantomVariant::TwoBlob;
  ExponentForm exponent = ExponentForm::Squared;

  // Gaussian pair on the x axis used for the medium-strength scenarios.
  static PhantomSpec two_blob(double A0, double wavelength);
  // Two-blob pair plus two quarter-wavelength components of weight -0.5 and +0.5.
  static PhantomSpec four_blob(double A0, double wavelength);
  void validate() const;
};

const char* to_string(PhantomVariant v);
const char* to_string(ExponentForm e);

inline constexpr double phantom_edge_level = 1e-3;

// A0 is defined against the wavenumber `reference` (the lowest frequency). The
// potential at `wave` is obtained through the fixed sound-speed map, which
// scales v by (omega / omega_ref)^2.
ScattererField build_phantom(const PhantomSpec& spec, const Wavenumber& wave, const Grid2D& grid,
                             std::optional<Wavenumber> reference = {});

// Peak of the blob sum at a point, before the A0 k0^2 factor.
double phantom_shape(const PhantomSpec& spec, Point r);

// Relative speed contrast dc/c0 = (1 - v c0^2 / omega^2)^(-1/2) - 1 (real part of v).
RVector v_to_speed_contrast(const ScattererField& v);
ScattererField speed_contrast_to_v(const RVector& contrast, const Grid2D& grid,
                                   const Wavenumber& wave);

// Same physical medium at another frequency.
ScattererField at_frequency(const ScattererField& v, const Wavenumber& wave);

}  // namespace tomolab
