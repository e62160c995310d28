#pragma once

#include <vector>

#include "tomolab/common.hpp"

namespace tomolab {

// Background medium at one circular frequency. k0 is derived, never stored
// independently, so k0() * c0 reproduces omega to rounding.
class Wavenumber {
 public:
  Wavenumber(double omega, double c0);
  static Wavenumber from_k0(double k0, double c0) { return Wavenumber(k0 * c0, c0); }

  double omega() const { return omega_; }
  double c0() const { return c0_; }
  double k0() const { return omega_ / c0_; }
  double wavelength() const { return two_pi / k0(); }

 private:
  double omega_;
  double c0_;
};

// Transducer ring: M equispaced quasi-point transducers on a circle of radius R0.
class RingGeometry {
 public:
  RingGeometry(double R0, int M);

  double radius() const { return R0_; }
  int count() const { return M_; }
  double step() const { return two_pi / M_; }
  double angle(int m) const { return two_pi * m / M_; }
  std::vector<double> angles() const;
  Point position(int m) const;
  // Largest order resolvable by the ring sampling.
  int nyquist_order() const { return M_ / 2 - 1; }

 private:
  double R0_;
  int M_;
};

inline constexpr int default_qmax = 64;

struct CylinderPair {
  double J;
  double Y;
};

// J_q(x), Y_q(x) for integer q with |q| <= qmax and 0 < x <= 1e4.
CylinderPair cylinder_functions(int q, double x, int qmax = default_qmax);

// Orders 0..n in one pass. J and Y are resized to n + 1.
void cylinder_table(int n, double x, std::vector<double>& J, std::vector<double>& Y);

cplx hankel1(int q, double x, int qmax = default_qmax);

inline constexpr double default_separation_eps = 1e-12;

// Free-space Green's function -(i/4) H0(k|r - x|).
cplx green0(Point r, Point x, const Wavenumber& k, double eps = default_separation_eps);
cplx green0_distance(double d, double k0, double eps = default_separation_eps);

// Nonzero diagonal g(q) of the double angular spectrum of G0 on the ring.
cplx green0_double_spectrum(int q, const Wavenumber& k, const RingGeometry& geom,
                            int qmax = default_qmax);

// Angular spectrum of exp(i k.y) over the ring for incidence angle phi.
cplx planewave_spectrum(int q, double phi, const Wavenumber& k, const RingGeometry& geom,
                        int qmax = default_qmax);

// g(q) and i^q J_q(k0 R0) for q in [-Q, Q], indexed q + Q.
std::vector<cplx> green0_spectrum_table(int Q, const Wavenumber& k, const RingGeometry& geom);
std::vector<cplx> planewave_coefficient_table(int Q, const Wavenumber& k,
                                              const RingGeometry& geom);

}  // namespace tomolab
