#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bicons/frame_flow.hpp"
#include "bicons/minkowski.hpp"
#include "bicons/profile.hpp"

namespace bicons::surface {

struct SurfaceParams {
  profile::ModuliParams moduli;
  double u_min = -0.5, u_max = 0.5;
  double t_min = -0.5, t_max = 0.5;
  std::size_t nu = 33, nt = 33;
  double tol = 1e-10;
};

// Surface point over the directrix state at u. The flow curve through
// sigma(u) is a conic in the plane spanned by b1, b2:
//   C = 0   sigma + t b1 + t^2 f^(3/4) b2              (parabola, t is arc length)
//   C > 0   sigma + (sin t b1 + (cos t - 1) b2) / kh   (circle, kh = kappa_hat)
//   C < 0   sigma + (sinh t b1 + (cosh t - 1) b2) / kh (hyperbola)
// For C > 0 the chart parameter t is reduced mod 2 pi before evaluation.
// Errors: OutOfSpan when u leaves the covered directrix span.
Vec5 evaluate(const frame_flow::DirectrixResult& d, double u, double t);

// Converts flow-curve arc length v at height u into the chart parameter t of
// evaluate: t = kappa_hat(f(u)) * v for C != 0 and t = v for C = 0 (the
// parabolic chart parameter already is arc length).
double coordinate_map(const frame_flow::DirectrixResult& d, double u, double v);

struct SurfaceGrid {
  SurfaceParams params;
  frame_flow::ConicCase conic = frame_flow::ConicCase::Parabolic;
  frame_flow::DirectrixResult directrix;
  std::vector<double> u_values;  // nu ascending values, u_min..u_max
  std::vector<double> t_values;  // nt ascending values, t_min..t_max
  std::vector<Vec5> points;      // row-major, row i = fixed u_values[i]

  const Vec5& at(std::size_t i, std::size_t j) const {
    return points[i * params.nt + j];
  }

  // Smooth off-grid evaluator backed by the dense directrix; the verifier's
  // finite-difference probes use this, not the stored nodes.
  std::function<Vec5(double, double)> sampler() const;
};

// Integrates the directrix over the requested u-span extended by a small
// interior-stencil pad (and always through u = 0, where the frame is
// anchored), then tabulates the surface. Errors: InvalidResolution (nu or
// nt < 2), InvalidArgument (empty spans), Inadmissible (moduli rejected, or
// the admissible flow span truncates before covering [u_min, u_max]).
SurfaceGrid generate_grid(const SurfaceParams& sp);

}  // namespace bicons::surface
