#include "tomolab/background.hpp"

#include <cmath>
#include <string>

#include "tomolab/error.hpp"

namespace tomolab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::SpecOutOfDomain: return "spec-out-of-domain";
    case ErrorKind::Nonphysical: return "nonphysical-scatterer";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::ZeroDenominator: return "zero-denominator";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Wavenumber::Wavenumber(double omega, double c0) : omega_(omega), c0_(c0) {
  if (!(omega > 0.0) || !(c0 > 0.0) || !std::isfinite(omega) || !std::isfinite(c0))
    fail(ErrorKind::Domain, "wavenumber requires omega > 0 and c0 > 0");
}

RingGeometry::RingGeometry(double R0, int M) : R0_(R0), M_(M) {
  if (!(R0 > 0.0) || !std::isfinite(R0)) fail(ErrorKind::Domain, "ring radius must be > 0");
  if (M < 2) fail(ErrorKind::Domain, "ring needs at least 2 transducers");
}

std::vector<double> RingGeometry::angles() const {
  std::vector<double> a(M_);
  for (int m = 0; m < M_; ++m) a[m] = angle(m);
  return a;
}

Point RingGeometry::position(int m) const {
  const double t = angle(m);
  return {R0_ * std::cos(t), R0_ * std::sin(t)};
}

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double big = 1e250;

void check_argument(double x) {
  if (!(x > 0.0)) fail(ErrorKind::Domain, "cylinder functions need x > 0, got " + std::to_string(x));
  if (x > 1e4) fail(ErrorKind::Domain, "cylinder functions limited to x <= 1e4");
}

}  // namespace

// Miller downward recurrence for J normalized by J0 + 2 sum J_2k = 1, Neumann
// series for Y0 and Y1, then upward recurrence for Y.
namespace {

// Ascending series for tiny x, where the Miller recurrence would overflow.
void small_argument_table(int n, double x, std::vector<double>& J, std::vector<double>& Y) {
  const double h = 0.5 * x, h2 = h * h;
  J.assign(n + 1, 0.0);
  double lead = 1.0;  // (x/2)^i / i!
  for (int i = 0; i <= n; ++i) {
    if (i > 0) lead *= h / i;
    if (lead == 0.0) break;
    double term = lead, sum = 0.0;
    for (int k = 0; k < 8; ++k) {
      sum += term;
      term *= -h2 / ((k + 1.0) * (k + 1.0 + i));
    }
    J[i] = sum;
  }
  double harmonic = 0.0, term = 1.0, tail = 0.0;
  for (int k = 1; k < 8; ++k) {
    harmonic += 1.0 / k;
    term *= h2 / (static_cast<double>(k) * k);
    tail += ((k % 2) ? 1.0 : -1.0) * harmonic * term;
  }
  Y.assign(n + 1, 0.0);
  Y[0] = (2.0 / pi) * ((std::log(h) + euler_gamma) * J[0] + tail);
  Y[1] = (J[1] * Y[0] - 2.0 / (pi * x)) / J[0];  // Wronskian
  for (int i = 1; i < n; ++i) {
    Y[i + 1] = (2.0 / x) * i * Y[i] - Y[i - 1];
    if (!std::isfinite(Y[i + 1]))
      fail(ErrorKind::Overflow, "Y_" + std::to_string(i + 1) + "(" + std::to_string(x) +
                                    ") exceeds the representable range");
  }
}

}  // namespace

void cylinder_table(int n, double x, std::vector<double>& J, std::vector<double>& Y) {
  check_argument(x);
  if (n < 1) n = 1;
  if (x < 1e-3) return small_argument_table(n, x, J, Y);
  const int base = std::max(n, static_cast<int>(std::ceil(x)));
  int N = base + 30 + 6 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(base))));
  if (N % 2) ++N;

  std::vector<double> b(N + 2, 0.0);
  b[N] = 1e-300;
  double norm = 0.0;  // b0 + 2 sum b_2k
  double s0 = 0.0;    // sum (-1)^k b_2k / k
  double s1 = 0.0;    // sum (-1)^k (b_{2k-1} - b_{2k+1}) / k
  const double two_over_x = 2.0 / x;

  auto rescale = [&](int from) {
    for (int i = from; i <= N + 1; ++i) b[i] /= big;
    norm /= big;
    s0 /= big;
    s1 /= big;
  };

  for (int m = N; m >= 1; --m) {
    b[m - 1] = two_over_x * m * b[m] - b[m + 1];
    if (std::abs(b[m - 1]) > big) rescale(m - 1);
    // Accumulate terms whose indices are all available once b[m-1] is known.
    const int j = m - 1;
    if (j >= 2 && j % 2 == 0) {
      const int k = j / 2;
      const double sign = (k % 2) ? -1.0 : 1.0;
      norm += 2.0 * b[j];
      s0 += sign * b[j] / k;
    }
    if (j >= 1 && j % 2 == 1) {
      const int k = (j + 1) / 2;  // b_{2k-1} just computed, b_{2k+1} already known
      const double sign = (k % 2) ? -1.0 : 1.0;
      s1 += sign * (b[2 * k - 1] - b[2 * k + 1]) / k;
    }
  }
  norm += b[0];

  J.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) J[i] = b[i] / norm;
  const double scale0 = 1.0 / norm;
  const double lg = std::log(0.5 * x) + euler_gamma;

  Y.assign(n + 1, 0.0);
  Y[0] = (2.0 / pi) * lg * J[0] - (4.0 / pi) * s0 * scale0;
  Y[1] = (2.0 / pi) * (lg * J[1] - J[0] / x) + (2.0 / pi) * s1 * scale0;
  for (int i = 1; i < n; ++i) {
    Y[i + 1] = two_over_x * i * Y[i] - Y[i - 1];
    if (!std::isfinite(Y[i + 1]))
      fail(ErrorKind::Overflow, "Y_" + std::to_string(i + 1) + "(" + std::to_string(x) +
                                    ") exceeds the representable range");
  }
}

CylinderPair cylinder_functions(int q, double x, int qmax) {
  if (std::abs(q) > qmax)
    fail(ErrorKind::Domain, "order " + std::to_string(q) + " exceeds qmax " + std::to_string(qmax));
  check_argument(x);
  std::vector<double> J, Y;
  const int n = std::abs(q);
  cylinder_table(n, x, J, Y);
  const double sign = (q < 0 && (n % 2)) ? -1.0 : 1.0;
  return {sign * J[n], sign * Y[n]};
}

cplx hankel1(int q, double x, int qmax) {
  const auto p = cylinder_functions(q, x, qmax);
  return {p.J, p.Y};
}

cplx green0_distance(double d, double k0, double eps) {
  if (d < eps)
    fail(ErrorKind::Singularity, "green0 evaluated at coincident points; use the self-cell rule");
  return -0.25 * I * hankel1(0, k0 * d);
}

cplx green0(Point r, Point x, const Wavenumber& k, double eps) {
  return green0_distance(distance(r, x), k.k0(), eps);
}

cplx green0_double_spectrum(int q, const Wavenumber& k, const RingGeometry& geom, int qmax) {
  const auto p = cylinder_functions(q, k.k0() * geom.radius(), qmax);
  return -0.25 * I * cplx(p.J, p.Y) * p.J;
}

namespace {

cplx ipow(int q) {
  switch (((q % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

cplx planewave_spectrum(int q, double phi, const Wavenumber& k, const RingGeometry& geom,
                        int qmax) {
  const auto p = cylinder_functions(q, k.k0() * geom.radius(), qmax);
  return ipow(q) * p.J * std::exp(-I * (q * phi));
}

std::vector<cplx> green0_spectrum_table(int Q, const Wavenumber& k, const RingGeometry& geom) {
  std::vector<double> J, Y;
  cylinder_table(Q, k.k0() * geom.radius(), J, Y);
  std::vector<cplx> g(2 * Q + 1);
  for (int q = -Q; q <= Q; ++q) {
    const int n = std::abs(q);
    // H_{-q} J_{-q} = H_q J_q
    g[q + Q] = -0.25 * I * cplx(J[n], Y[n]) * J[n];
  }
  return g;
}

std::vector<cplx> planewave_coefficient_table(int Q, const Wavenumber& k,
                                              const RingGeometry& geom) {
  std::vector<double> J, Y;
  cylinder_table(Q, k.k0() * geom.radius(), J, Y);
  std::vector<cplx> c(2 * Q + 1);
  for (int q = -Q; q <= Q; ++q) {
    const int n = std::abs(q);
    const double sign = (q < 0 && (n % 2)) ? -1.0 : 1.0;
    c[q + Q] = ipow(q) * sign * J[n];
  }
  return c;
}

}  // namespace tomolab
