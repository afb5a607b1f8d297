#pragma once

#include "gevlab/spectral.hpp"

namespace gevlab {

/// The pair (u1, u2) of physical-space grid values at time t.
struct SystemState {
  CVector u1;
  CVector u2;
  double t = 0.0;

  static SystemState zeros(const GridSpec& grid, double t = 0.0) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    return {CVector::Zero(n), CVector::Zero(n), t};
  }
  bool finite() const { return u1.allFinite() && u2.allFinite(); }
};

/// Right-hand side split into the transport part A d_x u and the
/// nonlinear part F(t, x, u) u.
struct RhsParts {
  CVector lin1, lin2;
  CVector nl1, nl2;
};

}  // namespace gevlab
