#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bicons/minkowski.hpp"
#include "bicons/profile.hpp"
#include "bicons/surface.hpp"

namespace bicons::verifier {

// Black-box surface: the verifier only ever samples points, so it certifies
// the emitted geometry rather than the internals that produced it.
using SurfaceSampler = std::function<Vec5(double, double)>;

// First and second fundamental data at one stencil center, from fourth-order
// centered differences on a 5x5 sample stencil. e2 is the unit t-direction,
// e1 the unit u-direction orthogonalized against it; n3, n4 an orthonormal
// spacelike basis of the normal plane inside the hyperbolic space (picked
// from projected coordinate axes, no geometric meaning beyond spanning).
// b11, b12, b22 are the second fundamental form in the (e1, e2) frame.
struct FundamentalForms {
  Vec5 position;
  Vec5 du, dt;
  Vec5 e1, e2;
  Vec5 n3, n4;
  Vec5 b11, b12, b22;
  double g_uu = 0.0, g_ut = 0.0, g_tt = 0.0;
  double alpha1 = 0.0, beta1 = 0.0, beta2 = 0.0;  // e1 = a1 du + b1 dt, e2 = b2 dt
  double b12_asymmetry = 0.0;  // mixed-derivative order sensitivity
  double hu = 0.0, ht = 0.0;
};

// Errors: StencilOutOfDomain (sampler refused a stencil point),
// DegenerateMetric, NotOnHyperboloid (center has <P,P> >= 0).
FundamentalForms fundamental_forms(const SurfaceSampler& s, double u, double t,
                                   double h);
FundamentalForms fundamental_forms(const SurfaceSampler& s, double u, double t,
                                   double hu, double ht);

struct MeanCurvature {
  Vec5 H;
  double f = 0.0;
};

// H = (b11 + b22) / 2. Errors: NegativeNormSquared when <H,H> < -1e-12,
// which indicates a broken normal projection rather than a real surface.
MeanCurvature mean_curvature(const FundamentalForms& ff);

// Shape operators in the frame aligned with grad f (fallback: the eigenvector
// of the n3 shape operator with the smaller eigenvalue, for when f is flat to
// FD precision). A surface of this family has, in that frame,
//   A3 = diag(-f, 3f),  A4 = diag(c f^(3/2), -c f^(3/2)),
// and satisfies A3(grad f) = -f grad f; the n4 sign ambiguity is resolved so
// that sign(c) * A4[0][0] >= 0.
struct ShapeCheck {
  double f = 0.0;
  double a3[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // aligned frame
  double a4[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double grad1 = 0.0, grad2 = 0.0;  // grad f in the (e1, e2) frame
  double a3_residual = 0.0;
  double a4_residual = 0.0;
  double biconservative_residual = 0.0;  // |A3 grad f + f grad f|
  double det_a4 = 0.0;                   // frame-invariant, target -c^2 f^3
};

ShapeCheck check_shape_and_biconservative(const SurfaceSampler& s, double u, double t,
                                          double h, const profile::ModuliParams& p);

// Residual of parallelism of the normalized mean-curvature direction in the
// normal bundle: max over both coordinate directions of |<d(H/f), m>| where
// m is the unit normal orthogonal to H/f. Uses nested stencils (an f and H
// evaluation at every outer stencil point).
double check_pnmc(const SurfaceSampler& s, double u, double t, double h);

// |K_extrinsic - (-1 - 3 f^2 - c^2 f^3)| with
// K_extrinsic = -1 + <b11,b22> - <b12,b12>.
double check_gauss(const FundamentalForms& ff, double f, const profile::ModuliParams& p);

enum class ConicClass { Parabola, Circle, Hyperbola };

const char* to_string(ConicClass c) noexcept;
ConicClass expected_class(frame_flow::ConicCase c) noexcept;

struct ConicClassification {
  ConicClass conic = ConicClass::Parabola;
  CausalType accel_type = CausalType::Null;
  double planarity_ratio = 0.0;    // third/first singular value of centered samples
  double fitted_curvature = 0.0;   // sqrt|<a,a>| / <v,v>, step-doubling extrapolated
};

// Classifies one flow curve from uniformly spaced samples: planarity by SVD
// of the centered samples, conic type by the causal character of the
// acceleration (spacelike circle, timelike hyperbola, null parabola within
// null_tol relative to the Euclidean scale). Errors: TooFewSamples (< 7).
ConicClassification classify_e2_curve(const std::vector<Vec5>& samples, double t_step,
                                      double null_tol = 1e-6);

// Third/first singular value of the centered point cloud; ~0 means coplanar.
double third_singular_ratio(const std::vector<Vec5>& samples);

// Max over flow rows of the f-range along the row, with f recomputed from
// grid nodes only (stencil steps = grid steps, interior nodes). A grid whose
// stored points were tampered with row-locally fails this even if each row
// still lies on the hyperboloid. Errors: TooFewSamples (nu or nt < 5).
double check_e2f_constant(const surface::SurfaceGrid& grid);

struct NonPlanarity {
  double sv_ratio = 0.0;     // third/first singular value of directrix points
  double f_variation = 0.0;  // (max f - min f) / mean f along the directrix
};

NonPlanarity directrix_nonplanarity(const frame_flow::DirectrixResult& d);

struct CheckEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool less_is_pass = true;  // pass when value <= bound (or >= for lower bounds)
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool all_pass = true;
};

// Full certification battery for a generated grid: membership, frame drift,
// axis constraint, FD mean curvature against the profile, shape operators,
// biconservativity, normal parallelism, intrinsic curvature, flow-row
// structure, and directrix non-planarity. fd_step is the probe stencil step.
CheckReport run_checks(const surface::SurfaceGrid& grid, double fd_step = 1e-3);

}  // namespace bicons::verifier
