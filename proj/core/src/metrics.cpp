#include "tomolab/metrics.hpp"

#include <cmath>

#include "tomolab/error.hpp"

namespace tomolab {

double solution_discrepancy(const ScattererField& v_hat, const ScattererField& v_true) {
  if (!(v_hat.grid == v_true.grid)) fail(ErrorKind::Mismatch, "discrepancy needs identical grids");
  const double den = v_true.values.norm();
  if (den == 0.0) fail(ErrorKind::ZeroDenominator, "reference scatterer is identically zero");
  return (v_hat.values - v_true.values).norm() / den;
}

namespace {

void require_same_angles(const AmplitudeGrid& a, const AmplitudeGrid& b) {
  if (a.phis != b.phis || a.phis_prime != b.phis_prime)
    fail(ErrorKind::Mismatch, "amplitude grids use different angles");
}

}  // namespace

double data_discrepancy(const AmplitudeGrid& f_hat, const AmplitudeGrid& f_meas) {
  require_same_angles(f_hat, f_meas);
  const double den = f_meas.values.norm();
  if (den == 0.0) fail(ErrorKind::ZeroDenominator, "measured amplitude is identically zero");
  return (f_hat.values - f_meas.values).norm() / den;
}

double amplitude_norm(const AmplitudeGrid& f) {
  if (f.phis.empty() || f.phis_prime.empty()) return 0.0;
  const double w = std::sqrt((two_pi / f.phis.size()) * (two_pi / f.phis_prime.size()));
  return f.values.norm() * w;
}

double bilinear(const Grid2D& grid, const RVector& field, Point p) {
  const double fx = (p.x - grid.origin().x) / grid.h() - 0.5;
  const double fy = (p.y - grid.origin().y) / grid.h() - 0.5;
  const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy));
  const double tx = fx - ix, ty = fy - iy;
  auto at = [&](int x, int y) -> double {
    if (x < 0 || y < 0 || x >= grid.nx() || y >= grid.ny()) return 0.0;
    return field[static_cast<Eigen::Index>(grid.index(x, y))];
  };
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
         (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

PhaseShift phase_shift(const Grid2D& grid, const RVector& contrast, const Wavenumber& k, Point a,
                       Point b, double step) {
  if (static_cast<std::size_t>(contrast.size()) != grid.size())
    fail(ErrorKind::Mismatch, "contrast size does not match grid");
  if (step <= 0.0) step = 0.5 * grid.h();
  const double L = distance(a, b);
  PhaseShift out;
  if (L == 0.0) return out;
  const int n = std::max(1, static_cast<int>(std::ceil(L / step - 1e-12)));
  const double ds = L / n;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double c = bilinear(grid, contrast, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    const double w = (i == 0 || i == n) ? 0.5 * ds : ds;
    const double g = k.k0() * c / (1.0 + c) * w;
    out.total += g;
    if (c > 0.0) out.positive += g;
    if (c < 0.0) out.negative += g;
  }
  return out;
}

double NoiseRng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double NoiseRng::normal() {
  if (cached_) {
    cached_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(two_pi * u2);
  cached_ = true;
  return r * std::cos(two_pi * u2);
}

NoisyFields inject_noise(const BoundaryFields& bf, double level, NoiseRng& rng) {
  if (!(level >= 0.0)) fail(ErrorKind::Domain, "noise level must be >= 0");
  NoisyFields out{bf, 0.0, 0.0};
  if (level == 0.0) return out;
  const CMatrix sc = bf.scattered();
  const double rms = sc.norm() / std::sqrt(static_cast<double>(sc.size()));
  const double sigma = level * rms;
  CMatrix noise(sc.rows(), sc.cols());
  for (Eigen::Index m = 0; m < sc.rows(); ++m)
    for (Eigen::Index n = 0; n < sc.cols(); ++n) {
      const double re = rng.normal();
      const double im = rng.normal();
      noise(m, n) = sigma * cplx(re, im);
    }
  out.fields.G = bf.G0 + (sc + noise);
  out.sigma = sigma;
  out.noise_to_signal = sc.norm() > 0.0 ? noise.norm() / sc.norm() : 0.0;
  return out;
}

std::vector<NoisyFields> inject_noise(const std::vector<BoundaryFields>& bfs, const NoiseSpec& spec) {
  NoiseRng rng(spec.seed);
  std::vector<NoisyFields> out;
  out.reserve(bfs.size());
  for (const auto& bf : bfs) out.push_back(inject_noise(bf, spec.level, rng));
  return out;
}

ScattererField multifrequency_average(const std::vector<ScattererField>& estimates) {
  if (estimates.empty()) fail(ErrorKind::Domain, "no estimates to average");
  const ScattererField& first = estimates.front();
  const double w1 = first.omega();
  CVector acc = CVector::Zero(first.values.size());
  for (const auto& e : estimates) {
    if (!(e.grid == first.grid)) fail(ErrorKind::Mismatch, "estimates live on different grids");
    acc += e.values / (e.omega() * e.omega());
  }
  acc *= w1 * w1 / static_cast<double>(estimates.size());
  return ScattererField(first.grid, acc, first.wave);
}

}  // namespace tomolab
