#pragma once

#include <cstddef>
#include <vector>

#include "bicons/error.hpp"

namespace bicons::profile {

// Moduli of one surface in the family: rotation speed c of the normal frame,
// conserved constant C of the first integral, and the profile value f0 at the
// flow origin u = 0. c must be non-zero; the sign of C selects the geometry of
// the flow curves (parabolic / circular / hyperbolic).
struct ModuliParams {
  double c = 1.0;
  double C = 0.0;
  double f0 = 0.2;
};

// Raises Inadmissible for c = 0 and InvalidArgument for non-finite entries.
void validate_moduli(const ModuliParams& p);

// Q(f) = 1 + 9 C f^(3/2) - 9 f^2 - c^2 f^3. The profile obeys
// f' = (4/3) f sqrt(Q(f)); motion exists only while Q stays positive.
// Errors: NonPositiveF for f <= 0.
double radicand(double f, const ModuliParams& p);

// dQ/df, used for the analytic second derivative of the profile.
double radicand_derivative(double f, const ModuliParams& p);

struct AdmissibleInterval {
  double f_lo = 0.0;
  double f_hi = 0.0;
};

// Component of {Q > 0} containing f0, located to 1e-12. Q(g^2) in g = sqrt(f)
// has coefficient signs +,+,-,- (one Descartes change), so Q has exactly one
// positive root and f_lo is always 0. Errors: Inadmissible when Q(f0) <= 0.
AdmissibleInterval admissible_interval(const ModuliParams& p);

// Root of Q for an f0-free query, i.e. the f_hi any admissible f0 would get.
double upper_admissible_bound(double c, double C);

struct ProfileSample {
  double u = 0.0;
  double f = 0.0;
  double fprime = 0.0;
};

enum class TruncationReason { None, RadicandVanished, ProfileUnderflow };

const char* to_string(TruncationReason r) noexcept;

// Profile f(u) over one u-span. Between samples, f interpolates by cubic
// Hermite on (f, f') and f' by cubic Hermite on (f', f''), with f'' evaluated
// analytically at the nodes; both interpolants are C1.
class ProfileCurve {
 public:
  // fsecond may be empty; it is then filled by differencing the fprime column.
  ProfileCurve(std::vector<ProfileSample> samples, std::vector<double> fsecond = {});

  double u_min() const { return samples_.front().u; }
  double u_max() const { return samples_.back().u; }
  const std::vector<ProfileSample>& samples() const { return samples_; }

  double f_at(double u) const;       // errors: OutOfSpan
  double fprime_at(double u) const;  // errors: OutOfSpan

  TruncationReason truncation_lo = TruncationReason::None;
  TruncationReason truncation_hi = TruncationReason::None;

 private:
  std::size_t segment_index(double u) const;
  std::vector<ProfileSample> samples_;
  std::vector<double> fsecond_;
};

// Integrates the profile equation over [u_lo, u_hi] (which must contain 0)
// starting from f(0) = f0. Integration halts early, recording the reason on
// the affected end, when Q drops below 1e-10 or f below 1e-12; the returned
// curve then covers the largest sub-span reached. Errors: Inadmissible,
// StepFailure, InvalidArgument (span not containing 0).
ProfileCurve integrate_profile(const ModuliParams& p, double u_lo, double u_hi,
                               double tol = 1e-10);

// Max over n_samples uniform points of the second-order form
// |f f'' - (7/4) f'^2 + (4/3) f^2 + 4 f^4 + (4/3) c^2 f^5|, with f'' obtained
// by fourth-order centered differences of the interpolated f'. A curve that
// solves the profile equation drives this to the discretization floor; a
// curve that merely looks plausible does not. Errors: TooFewSamples when the
// curve has fewer than 5 samples or n_samples < 5.
double second_order_residual(const ProfileCurve& curve, const ModuliParams& p,
                             std::size_t n_samples = 512);

// Pointwise scalar invariants of the surface with profile value f:
// gauss_K     intrinsic curvature, -1 - 3 f^2 - c^2 f^3
// kappa1      curvature of the shadow curve in the 3-dimensional slice
// kappa2      torsion of the shadow curve
// kappa_hat   curvature of the flow curves, 3 sqrt(|C|) f^(3/4)
// Errors: NonPositiveF, NegativeRadicand (kappa2 needs sqrt(Q)).
struct ScalarInvariants {
  double gauss_K = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa_hat = 0.0;
};

ScalarInvariants invariants_at(double f, const ModuliParams& p);

}  // namespace bicons::profile
