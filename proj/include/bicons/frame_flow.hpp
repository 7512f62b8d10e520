#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "bicons/minkowski.hpp"
#include "bicons/ode.hpp"
#include "bicons/profile.hpp"

namespace bicons::frame_flow {

// Geometry of the flow curves, decided by the sign of the conserved constant:
// C = 0 parabolic, C > 0 circular, C < 0 hyperbolic.
enum class ConicCase { Parabolic, Circular, Hyperbolic };

const char* to_string(ConicCase c) noexcept;
ConicCase conic_case(double C) noexcept;

// Directrix point with its adapted frame: position on the hyperboloid, unit
// tangent e1, and the parallel fields e2 (surface direction transverse to the
// flow), e3, e4 (normal directions). The Gram matrix of (position, e1..e4) is
// diag(-1, 1, 1, 1, 1) along exact solutions.
struct FrameState {
  double u = 0.0;
  double f = 0.0;
  Vec5 position;
  Vec5 e1, e2, e3, e4;

  std::array<Vec5, 5> frame() const { return {position, e1, e2, e3, e4}; }
};

struct FrameDerivative {
  double df = 0.0;
  Vec5 dposition;
  Vec5 de1, de2, de3, de4;
};

// Linear part of the flow: position' = e1, e1' = position - f e3 + c f^(3/2) e4,
// e2' = 0, e3' = f e1, e4' = -c f^(3/2) e1, coupled to f' = (4/3) f sqrt(Q).
FrameDerivative frame_derivative(const FrameState& s, const profile::ModuliParams& p);

// Frame at the flow origin: position at the hyperboloid apex (0,0,0,0,1) and
// e1..e4 the first four coordinate axes.
FrameState canonical_initial_frame(double f0);

struct DirectrixResult {
  profile::ModuliParams params;
  ConicCase conic = ConicCase::Parabolic;
  std::vector<FrameState> states;  // accepted nodes, increasing in u
  std::vector<Vec5> xi;            // xi field evaluated at each state
  Vec5 b1, b2;                     // fixed axes extracted at u = 0
  profile::TruncationReason reason_lo = profile::TruncationReason::None;
  profile::TruncationReason reason_hi = profile::TruncationReason::None;
  double max_gram_drift = 0.0;
  ode::DenseTrajectory<26> dense;

  double u_min() const { return dense.u_min(); }
  double u_max() const { return dense.u_max(); }
  bool truncated_lo() const { return reason_lo != profile::TruncationReason::None; }
  bool truncated_hi() const { return reason_hi != profile::TruncationReason::None; }

  // Interpolated state anywhere in the covered span. Errors: OutOfSpan.
  FrameState state_at(double u) const;
};

// Integrates the joint (profile, frame) system over [u_lo, u_hi] (must
// contain 0) from the canonical initial frame, both directions from 0, with
// the same truncation rules as the profile. No re-orthonormalization is ever
// applied; instead the Gram matrix of every accepted node is compared against
// diag(-1,1,1,1,1) and a deviation above 1e-6 raises DriftExceeded.
// Errors: Inadmissible, StepFailure, DriftExceeded, InvalidArgument.
DirectrixResult integrate_directrix(const profile::ModuliParams& p, double u_lo,
                                    double u_hi, double tol = 1e-10);

// xi = sqrt(Q) e1 + 3 f e3 - c f^(3/2) e4 + position, normalized by
// kappa_hat = 3 sqrt(|C|) f^(3/4) when C != 0. Its Lorentzian square is then
// sign(C); for C = 0 it is a null field. Along exact solutions xi is constant
// when C != 0 and equals 2 f^(3/4) times a fixed null vector when C = 0.
Vec5 xi_field(const FrameState& s, const profile::ModuliParams& p);

// Axes of the surface built over this directrix, from the u = 0 state:
// b1 = e2(0); b2 is the xi direction, scaled per case so that the flow-curve
// parametrizations close up (unit spacelike for C > 0, unit timelike for
// C < 0, null with <position, b2> = -1/(2 f^(3/4)) for C = 0).
std::pair<Vec5, Vec5> extract_axes(const FrameState& at_origin,
                                   const profile::ModuliParams& p);

// Value <position(u), b2> must take along the directrix: -1/(2 f^(3/4)) for
// C = 0, +1/kappa_hat for C > 0, -1/kappa_hat for C < 0.
double axis_target(double f, const profile::ModuliParams& p);

// Max over stored states of |<position, b2> - axis_target(f)|; the sharpest
// scalar witness that the integrated flow really closes into the conic model.
double constraint_residual(const DirectrixResult& r);

}  // namespace bicons::frame_flow
