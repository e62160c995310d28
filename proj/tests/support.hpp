#pragma once

#include <cmath>

#include "tomolab/forward.hpp"
#include "tomolab/model.hpp"

namespace test {

using namespace tomolab;

inline double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }
inline double rel(const CVector& a, const CVector& b) { return (a - b).norm() / b.norm(); }

inline Wavenumber wave8() { return Wavenumber::from_k0(two_pi / 8.0, 1.0); }
inline RingGeometry ring60() { return RingGeometry(32.0, 60); }

// 16 x 16 cells of size 1 inside a radius-8 disk: a few hundred unknowns.
inline Grid2D small_grid() { return Grid2D::centered_square(16.0, 1.0, 8.0); }

inline PhantomSpec single_blob(double A0, Point c = {0.0, 0.0}, double width = 2.5) {
  PhantomSpec s;
  s.A0 = A0;
  s.blobs = {{c, width, 1.0}};
  return s;
}

inline ScattererField small_phantom(double A0, Point c = {0.0, 0.0}) {
  return build_phantom(single_blob(A0, c), wave8(), small_grid());
}

}  // namespace test
