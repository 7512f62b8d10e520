#include "bicons/frame_flow.hpp"

#include <algorithm>
#include <cmath>

namespace bicons::frame_flow {

namespace {

using ode::State;

double q_clamped(double f, const profile::ModuliParams& p) {
  const double fc = std::max(f, 0.0);
  const double q =
      1.0 + 9.0 * p.C * std::pow(fc, 1.5) - 9.0 * f * f - p.c * p.c * f * f * f;
  return std::max(q, 0.0);
}

// State packing: [0] f, [1..5] position, [6..10] e1, [11..15] e2,
// [16..20] e3, [21..25] e4.
State<26> pack(const FrameState& s) {
  State<26> y{};
  y[0] = s.f;
  for (std::size_t i = 0; i < 5; ++i) {
    y[1 + i] = s.position[i];
    y[6 + i] = s.e1[i];
    y[11 + i] = s.e2[i];
    y[16 + i] = s.e3[i];
    y[21 + i] = s.e4[i];
  }
  return y;
}

FrameState unpack(double u, const State<26>& y) {
  FrameState s;
  s.u = u;
  s.f = y[0];
  for (std::size_t i = 0; i < 5; ++i) {
    s.position[i] = y[1 + i];
    s.e1[i] = y[6 + i];
    s.e2[i] = y[11 + i];
    s.e3[i] = y[16 + i];
    s.e4[i] = y[21 + i];
  }
  return s;
}

State<26> rhs(const State<26>& y, const profile::ModuliParams& p) {
  const double f = y[0];
  const double fc = std::max(f, 0.0);
  const double g = p.c * fc * std::sqrt(fc);  // c f^(3/2)
  State<26> d{};
  d[0] = (4.0 / 3.0) * f * std::sqrt(q_clamped(f, p));
  for (std::size_t i = 0; i < 5; ++i) {
    const double pos = y[1 + i], e1 = y[6 + i], e3 = y[16 + i], e4 = y[21 + i];
    d[1 + i] = e1;
    d[6 + i] = pos - f * e3 + g * e4;
    d[11 + i] = 0.0;
    d[16 + i] = f * e1;
    d[21 + i] = -g * e1;
  }
  return d;
}

// Second derivative of the joint state, by substituting the system into
// itself; powers the quintic dense output.
State<26> rhs2(const State<26>& y, const profile::ModuliParams& p) {
  const double f = y[0];
  const double fc = std::max(f, 0.0);
  const double q = q_clamped(f, p);
  const double qp = 13.5 * p.C * std::sqrt(fc) - 18.0 * f - 3.0 * p.c * p.c * f * f;
  const double fp = (4.0 / 3.0) * f * std::sqrt(q);
  const double g = p.c * fc * std::sqrt(fc);
  const double gp = 1.5 * p.c * std::sqrt(fc) * fp;
  State<26> d{};
  d[0] = (16.0 / 9.0) * f * q + (8.0 / 9.0) * f * f * qp;
  for (std::size_t i = 0; i < 5; ++i) {
    const double pos = y[1 + i], e1 = y[6 + i], e3 = y[16 + i], e4 = y[21 + i];
    const double de1 = pos - f * e3 + g * e4;
    d[1 + i] = de1;
    d[6 + i] = (1.0 - f * f - g * g) * e1 - fp * e3 + gp * e4;
    d[11 + i] = 0.0;
    d[16 + i] = fp * e1 + f * de1;
    d[21 + i] = -gp * e1 - g * de1;
  }
  return d;
}

}  // namespace

const char* to_string(ConicCase c) noexcept {
  switch (c) {
    case ConicCase::Parabolic: return "Parabolic";
    case ConicCase::Circular: return "Circular";
    case ConicCase::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

ConicCase conic_case(double C) noexcept {
  if (C == 0.0) return ConicCase::Parabolic;
  return C > 0.0 ? ConicCase::Circular : ConicCase::Hyperbolic;
}

FrameDerivative frame_derivative(const FrameState& s, const profile::ModuliParams& p) {
  if (profile::radicand(s.f, p) < 0.0)
    fail(ErrorKind::NegativeRadicand, "frame derivative: Q(f) < 0");
  const State<26> d = rhs(pack(s), p);
  const FrameState ds = unpack(s.u, d);
  return {ds.f, ds.position, ds.e1, ds.e2, ds.e3, ds.e4};
}

FrameState canonical_initial_frame(double f0) {
  if (f0 <= 0.0) fail(ErrorKind::NonPositiveF, "initial frame: f0 must be positive");
  FrameState s;
  s.u = 0.0;
  s.f = f0;
  s.position[4] = 1.0;
  s.e1[0] = 1.0;
  s.e2[1] = 1.0;
  s.e3[2] = 1.0;
  s.e4[3] = 1.0;
  return s;
}

FrameState DirectrixResult::state_at(double u) const {
  return unpack(u, dense.value(u));
}

DirectrixResult integrate_directrix(const profile::ModuliParams& p, double u_lo,
                                    double u_hi, double tol) {
  profile::validate_moduli(p);
  if (!(u_lo <= 0.0 && 0.0 <= u_hi) || !(u_lo < u_hi))
    fail(ErrorKind::InvalidArgument, "directrix span must contain u = 0");
  if (profile::radicand(p.f0, p) <= 0.0)
    fail(ErrorKind::Inadmissible, "Q(f0) <= 0: f0 outside the admissible interval");

  auto f_rhs = [&p](double, const State<26>& y) { return rhs(y, p); };
  auto f_rhs2 = [&p](double, const State<26>& y) { return rhs2(y, p); };

  profile::TruncationReason sweep_reason = profile::TruncationReason::None;
  auto stop = [&p, &sweep_reason](double, const State<26>& y) {
    const double f = y[0];
    const double q =
        1.0 + 9.0 * p.C * std::pow(std::max(f, 0.0), 1.5) - 9.0 * f * f -
        p.c * p.c * f * f * f;
    if (q < 1e-10) {
      sweep_reason = profile::TruncationReason::RadicandVanished;
      return true;
    }
    if (f < 1e-12) {
      sweep_reason = profile::TruncationReason::ProfileUnderflow;
      return true;
    }
    return false;
  };

  ode::Options opt;
  opt.tol = tol;
  opt.h_max = 0.02;
  opt.h_init = 0.01;
  const State<26> y0 = pack(canonical_initial_frame(p.f0));

  sweep_reason = profile::TruncationReason::None;
  auto bwd = ode::integrate<26>(f_rhs, f_rhs2, y0, 0.0, u_lo, opt, stop);
  const auto reason_lo = bwd.halted ? sweep_reason : profile::TruncationReason::None;

  sweep_reason = profile::TruncationReason::None;
  auto fwd = ode::integrate<26>(f_rhs, f_rhs2, y0, 0.0, u_hi, opt, stop);
  const auto reason_hi = fwd.halted ? sweep_reason : profile::TruncationReason::None;

  DirectrixResult r;
  r.params = p;
  r.conic = conic_case(p.C);
  r.reason_lo = reason_lo;
  r.reason_hi = reason_hi;

  std::vector<ode::Node<26>> nodes(bwd.nodes.rbegin(), bwd.nodes.rend());
  if (!nodes.empty()) nodes.pop_back();  // origin appears in both sweeps
  nodes.insert(nodes.end(), fwd.nodes.begin(), fwd.nodes.end());

  r.states.reserve(nodes.size());
  r.xi.reserve(nodes.size());
  std::size_t origin_index = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    FrameState s = unpack(nodes[i].u, nodes[i].y);
    r.max_gram_drift = std::max(r.max_gram_drift, max_gram_deviation(s.frame()));
    if (r.max_gram_drift > 1e-6)
      fail(ErrorKind::DriftExceeded, "frame orthonormality drift above 1e-6");
    if (nodes[i].u == 0.0) origin_index = i;
    r.states.push_back(std::move(s));
  }
  for (const auto& s : r.states) r.xi.push_back(xi_field(s, p));

  auto [b1, b2] = extract_axes(r.states[origin_index], p);
  r.b1 = b1;
  r.b2 = b2;
  r.dense = ode::DenseTrajectory<26>(std::move(nodes));
  return r;
}

Vec5 xi_field(const FrameState& s, const profile::ModuliParams& p) {
  const double fc = std::max(s.f, 0.0);
  const double sq = std::sqrt(q_clamped(s.f, p));
  Vec5 w = sq * s.e1 + (3.0 * s.f) * s.e3 - (p.c * fc * std::sqrt(fc)) * s.e4 +
           s.position;
  if (p.C == 0.0) return w;
  const double kappa_hat = 3.0 * std::sqrt(std::abs(p.C)) * std::pow(fc, 0.75);
  return (1.0 / kappa_hat) * w;
}

std::pair<Vec5, Vec5> extract_axes(const FrameState& at_origin,
                                   const profile::ModuliParams& p) {
  const Vec5 xi0 = xi_field(at_origin, p);
  Vec5 b2;
  switch (conic_case(p.C)) {
    case ConicCase::Parabolic:
      b2 = (0.5 / std::pow(at_origin.f, 0.75)) * xi0;
      break;
    case ConicCase::Circular:
      b2 = -xi0;
      break;
    case ConicCase::Hyperbolic:
      b2 = xi0;
      break;
  }
  return {at_origin.e2, b2};
}

double axis_target(double f, const profile::ModuliParams& p) {
  switch (conic_case(p.C)) {
    case ConicCase::Parabolic:
      return -0.5 / std::pow(f, 0.75);
    case ConicCase::Circular:
      return 1.0 / (3.0 * std::sqrt(p.C) * std::pow(f, 0.75));
    case ConicCase::Hyperbolic:
      return -1.0 / (3.0 * std::sqrt(-p.C) * std::pow(f, 0.75));
  }
  return 0.0;
}

double constraint_residual(const DirectrixResult& r) {
  double worst = 0.0;
  for (const auto& s : r.states) {
    worst = std::max(worst,
                     std::abs(inner(s.position, r.b2) - axis_target(s.f, r.params)));
  }
  return worst;
}

}  // namespace bicons::frame_flow
