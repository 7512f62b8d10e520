#include "bicons/profile.hpp"

#include <algorithm>
#include <cmath>

#include "bicons/ode.hpp"

namespace bicons::profile {

namespace {

// Radicand without the f > 0 precondition, for use inside the integrator
// where roundoff may push f to 0 or slightly below.
double q_raw(double f, const ModuliParams& p) {
  const double fc = std::max(f, 0.0);
  return 1.0 + 9.0 * p.C * std::pow(fc, 1.5) - 9.0 * f * f - p.c * p.c * f * f * f;
}

double q_raw_derivative(double f, const ModuliParams& p) {
  const double fc = std::max(f, 0.0);
  return 13.5 * p.C * std::sqrt(fc) - 18.0 * f - 3.0 * p.c * p.c * f * f;
}

constexpr double kRadicandFloor = 1e-10;
constexpr double kProfileFloor = 1e-12;

// Unique positive root of Q for these moduli (one Descartes sign change in
// g = sqrt(f)), bracketed by doubling/halving and bisected to 1e-12.
double first_positive_root(double c, double C) {
  const ModuliParams p{c, C, 1.0};
  double hi = 1e-4;
  int guard = 0;
  while (q_raw(hi, p) <= 0.0) {
    hi *= 0.5;
    if (++guard > 600) fail(ErrorKind::Inadmissible, "admissible interval: no positive span");
  }
  double lo = hi;
  guard = 0;
  while (q_raw(hi, p) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 600) fail(ErrorKind::Inadmissible, "admissible interval: no root found");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (q_raw(mid, p) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Cubic Hermite on [0,1] matching value and derivative at both ends.
double cubic_hermite(double s, double L, double ya, double da, double yb, double db) {
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * ya + (s3 - 2.0 * s2 + s) * L * da +
         (-2.0 * s3 + 3.0 * s2) * yb + (s3 - s2) * L * db;
}

}  // namespace

void validate_moduli(const ModuliParams& p) {
  if (!std::isfinite(p.c) || !std::isfinite(p.C) || !std::isfinite(p.f0))
    fail(ErrorKind::InvalidArgument, "moduli must be finite");
  if (p.c == 0.0) fail(ErrorKind::Inadmissible, "c must be non-zero");
  if (p.f0 <= 0.0) fail(ErrorKind::NonPositiveF, "f0 must be positive");
}

double radicand(double f, const ModuliParams& p) {
  if (f <= 0.0) fail(ErrorKind::NonPositiveF, "radicand: f must be positive");
  return q_raw(f, p);
}

double radicand_derivative(double f, const ModuliParams& p) {
  if (f <= 0.0) fail(ErrorKind::NonPositiveF, "radicand derivative: f must be positive");
  return q_raw_derivative(f, p);
}

AdmissibleInterval admissible_interval(const ModuliParams& p) {
  validate_moduli(p);
  if (radicand(p.f0, p) <= 0.0)
    fail(ErrorKind::Inadmissible, "Q(f0) <= 0: f0 outside the admissible interval");
  return {0.0, first_positive_root(p.c, p.C)};
}

double upper_admissible_bound(double c, double C) {
  if (c == 0.0) fail(ErrorKind::Inadmissible, "c must be non-zero");
  return first_positive_root(c, C);
}

const char* to_string(TruncationReason r) noexcept {
  switch (r) {
    case TruncationReason::None: return "None";
    case TruncationReason::RadicandVanished: return "RadicandVanished";
    case TruncationReason::ProfileUnderflow: return "ProfileUnderflow";
  }
  return "?";
}

ProfileCurve::ProfileCurve(std::vector<ProfileSample> samples, std::vector<double> fsecond)
    : samples_(std::move(samples)), fsecond_(std::move(fsecond)) {
  if (samples_.empty()) fail(ErrorKind::TooFewSamples, "profile curve: no samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].u > samples_[i - 1].u))
      fail(ErrorKind::InvalidArgument, "profile curve: samples not increasing in u");
  }
  if (fsecond_.empty()) {
    // Fall back to differencing the stored f' column (non-uniform 3-point).
    const std::size_t n = samples_.size();
    fsecond_.resize(n, 0.0);
    if (n >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
          fsecond_[i] = (samples_[1].fprime - samples_[0].fprime) /
                        (samples_[1].u - samples_[0].u);
        } else if (i == n - 1) {
          fsecond_[i] = (samples_[n - 1].fprime - samples_[n - 2].fprime) /
                        (samples_[n - 1].u - samples_[n - 2].u);
        } else {
          const double hl = samples_[i].u - samples_[i - 1].u;
          const double hr = samples_[i + 1].u - samples_[i].u;
          const double dl = (samples_[i].fprime - samples_[i - 1].fprime) / hl;
          const double dr = (samples_[i + 1].fprime - samples_[i].fprime) / hr;
          fsecond_[i] = (hr * dl + hl * dr) / (hl + hr);
        }
      }
    }
  }
  if (fsecond_.size() != samples_.size())
    fail(ErrorKind::InvalidArgument, "profile curve: fsecond length mismatch");
}

std::size_t ProfileCurve::segment_index(double u) const {
  const double lo = u_min(), hi = u_max();
  const double fuzz = 1e-12 * std::max(1.0, hi - lo);
  if (u < lo - fuzz || u > hi + fuzz)
    fail(ErrorKind::OutOfSpan, "profile curve: query outside covered span");
  auto it = std::upper_bound(samples_.begin(), samples_.end(), u,
                             [](double a, const ProfileSample& s) { return a < s.u; });
  std::size_t k = static_cast<std::size_t>(it - samples_.begin());
  k = (k == 0) ? 0 : k - 1;
  if (k + 1 >= samples_.size()) k = samples_.size() - 2;
  return k;
}

double ProfileCurve::f_at(double u) const {
  if (samples_.size() == 1) {
    segment_index(u);  // span check only
    return samples_.front().f;
  }
  const std::size_t k = segment_index(u);
  const ProfileSample& a = samples_[k];
  const ProfileSample& b = samples_[k + 1];
  const double L = b.u - a.u;
  return cubic_hermite((u - a.u) / L, L, a.f, a.fprime, b.f, b.fprime);
}

double ProfileCurve::fprime_at(double u) const {
  if (samples_.size() == 1) {
    segment_index(u);
    return samples_.front().fprime;
  }
  const std::size_t k = segment_index(u);
  const ProfileSample& a = samples_[k];
  const ProfileSample& b = samples_[k + 1];
  const double L = b.u - a.u;
  return cubic_hermite((u - a.u) / L, L, a.fprime, fsecond_[k], b.fprime,
                       fsecond_[k + 1]);
}

ProfileCurve integrate_profile(const ModuliParams& p, double u_lo, double u_hi,
                               double tol) {
  validate_moduli(p);
  if (!(u_lo <= 0.0 && 0.0 <= u_hi))
    fail(ErrorKind::InvalidArgument, "profile span must contain u = 0");
  if (radicand(p.f0, p) <= 0.0)
    fail(ErrorKind::Inadmissible, "Q(f0) <= 0: f0 outside the admissible interval");

  auto rhs = [&p](double, const ode::State<1>& y) -> ode::State<1> {
    return {(4.0 / 3.0) * y[0] * std::sqrt(std::max(q_raw(y[0], p), 0.0))};
  };
  // f'' = (16/9) f Q + (8/9) f^2 Q', obtained by substituting the first-order
  // equation into d/du of itself; no division by sqrt(Q), so it stays smooth
  // where the radicand vanishes.
  auto rhs2 = [&p](double, const ode::State<1>& y) -> ode::State<1> {
    const double f = y[0];
    const double q = q_raw(f, p);
    return {(16.0 / 9.0) * f * std::max(q, 0.0) + (8.0 / 9.0) * f * f * q_raw_derivative(f, p)};
  };

  TruncationReason sweep_reason = TruncationReason::None;
  auto stop = [&p, &sweep_reason](double, const ode::State<1>& y) {
    if (q_raw(y[0], p) < kRadicandFloor) {
      sweep_reason = TruncationReason::RadicandVanished;
      return true;
    }
    if (y[0] < kProfileFloor) {
      sweep_reason = TruncationReason::ProfileUnderflow;
      return true;
    }
    return false;
  };

  ode::Options opt;
  opt.tol = tol;
  opt.h_max = 0.004;
  opt.h_init = 0.005;
  const ode::State<1> y0{p.f0};

  sweep_reason = TruncationReason::None;
  auto bwd = ode::integrate<1>(rhs, rhs2, y0, 0.0, u_lo, opt, stop);
  const TruncationReason reason_lo = bwd.halted ? sweep_reason : TruncationReason::None;

  sweep_reason = TruncationReason::None;
  auto fwd = ode::integrate<1>(rhs, rhs2, y0, 0.0, u_hi, opt, stop);
  const TruncationReason reason_hi = fwd.halted ? sweep_reason : TruncationReason::None;

  std::vector<ProfileSample> samples;
  std::vector<double> fsecond;
  samples.reserve(bwd.nodes.size() + fwd.nodes.size());
  for (auto it = bwd.nodes.rbegin(); it != bwd.nodes.rend(); ++it) {
    samples.push_back({it->u, it->y[0], it->dy[0]});
    fsecond.push_back(it->ddy[0]);
  }
  if (!samples.empty()) {
    samples.pop_back();  // origin appears in both sweeps
    fsecond.pop_back();
  }
  for (const auto& n : fwd.nodes) {
    samples.push_back({n.u, n.y[0], n.dy[0]});
    fsecond.push_back(n.ddy[0]);
  }

  ProfileCurve curve(std::move(samples), std::move(fsecond));
  curve.truncation_lo = reason_lo;
  curve.truncation_hi = reason_hi;
  return curve;
}

double second_order_residual(const ProfileCurve& curve, const ModuliParams& p,
                             std::size_t n_samples) {
  if (curve.samples().size() < 5 || n_samples < 5)
    fail(ErrorKind::TooFewSamples, "second-order residual needs at least 5 samples");
  const double lo = curve.u_min(), hi = curve.u_max();
  const double h = (hi - lo) / static_cast<double>(n_samples - 1);
  std::vector<double> f(n_samples), fp(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = lo + h * static_cast<double>(i);
    f[i] = curve.f_at(u);
    fp[i] = curve.fprime_at(u);
  }
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n_samples; ++i) {
    const double fpp =
        (fp[i - 2] - 8.0 * fp[i - 1] + 8.0 * fp[i + 1] - fp[i + 2]) / (12.0 * h);
    const double fi = f[i], fi2 = fi * fi;
    const double r = fi * fpp - 1.75 * fp[i] * fp[i] + (4.0 / 3.0) * fi2 +
                     4.0 * fi2 * fi2 + (4.0 / 3.0) * p.c * p.c * fi2 * fi2 * fi;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ScalarInvariants invariants_at(double f, const ModuliParams& p) {
  if (f <= 0.0) fail(ErrorKind::NonPositiveF, "invariants: f must be positive");
  const double q = radicand(f, p);
  if (q < 0.0)
    fail(ErrorKind::NegativeRadicand, "invariants: Q(f) < 0, kappa2 undefined");
  ScalarInvariants s;
  const double c2 = p.c * p.c;
  s.gauss_K = -1.0 - 3.0 * f * f - c2 * f * f * f;
  s.kappa1 = f * std::sqrt(1.0 + c2 * f);
  s.kappa2 = 2.0 * std::abs(p.c) * std::sqrt(f) / (3.0 * (1.0 + c2 * f)) * std::sqrt(q);
  s.kappa_hat = 3.0 * std::sqrt(std::abs(p.C)) * std::pow(f, 0.75);
  return s;
}

}  // namespace bicons::profile
