#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include "tomolab/inversion.hpp"
#include "tomolab/model.hpp"

namespace test {

using namespace tomolab;

// Fourier data of Gaussian blobs: f(xi) = (2 pi)^-2 int v(r) exp(-i xi.r) dr.
inline cplx gaussian_ft(const PhantomSpec& s, double k0, double xx, double xy) {
  cplx sum = 0.0;
  for (const auto& b : s.blobs) {
    const double w2 = b.width * b.width;
    sum += b.weight * pi * w2 * std::exp(-w2 * (xx * xx + xy * xy) / 4.0) *
           std::exp(-I * (xx * b.center.x + xy * b.center.y));
  }
  return s.A0 * k0 * k0 * sum / (4.0 * pi * pi);
}

// Exact Born data on an n-point ring: values(i, j) at xi = l_j - k_i.
inline SpectralEstimate sampled_spectrum(const PhantomSpec& s, const Wavenumber& k, int n) {
  SpectralEstimate sv;
  for (int i = 0; i < n; ++i) sv.phis.push_back(two_pi * i / n);
  sv.phis_prime = sv.phis;
  sv.omega = k.omega();
  sv.values.resize(n, n);
  const double k0 = k.k0();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sv.values(i, j) = gaussian_ft(s, k0, k0 * (std::cos(sv.phis[j]) - std::cos(sv.phis[i])),
                                    k0 * (std::sin(sv.phis[j]) - std::sin(sv.phis[i])));
  return sv;
}

// Brute-force polar quadrature of int_{|xi| <= 2 tau k0} f(xi) exp(i xi.r) dxi.
inline cplx polar_oracle(const PhantomSpec& s, double k0, double tau, Point r) {
  static const boost::math::quadrature::gauss<double, 60> gl;
  const double rho_max = 2.0 * tau * k0;
  const int nt = 720;
  cplx total = 0.0;
  for (int t = 0; t < nt; ++t) {
    const double th = two_pi * t / nt, c = std::cos(th), sn = std::sin(th);
    const auto term = [&](double rho) {
      const double xx = rho * c, xy = rho * sn;
      return gaussian_ft(s, k0, xx, xy) * std::exp(I * (xx * r.x + xy * r.y)) * rho;
    };
    const double re = gl.integrate([&](double rho) { return term(rho).real(); }, 0.0, rho_max);
    const double im = gl.integrate([&](double rho) { return term(rho).imag(); }, 0.0, rho_max);
    total += cplx(re, im) * (two_pi / nt);
  }
  return total;
}

// Relative error of the disk transform against the polar oracle on a sparse
// set of active cells of `g`.
inline double disk_oracle_error(const PhantomSpec& s, const Wavenumber& k, const Grid2D& g, double tau, int n = 60) {
  const ScattererField v = disk_inverse_fourier(sampled_spectrum(s, k, n), tau, g, k);
  double num = 0.0, den = 0.0;
  for (int ix = 0; ix < g.nx(); ix += 3)
    for (int iy : {g.ny() * 5 / 14, g.ny() / 2, g.ny() * 5 / 8}) {
      const std::size_t idx = g.index(ix, iy);
      if (!g.is_active(idx)) continue;
      const cplx ref = polar_oracle(s, k.k0(), tau, g.center(idx));
      num += std::norm(v.values[static_cast<Eigen::Index>(idx)] - ref);
      den += std::norm(ref);
    }
  return std::sqrt(num / den);
}

}  // namespace test
