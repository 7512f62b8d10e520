#include "bicons/surface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bicons::surface {

namespace {

double kappa_hat_of(double f, const profile::ModuliParams& p) {
  return 3.0 * std::sqrt(std::abs(p.C)) * std::pow(f, 0.75);
}

}  // namespace

Vec5 evaluate(const frame_flow::DirectrixResult& d, double u, double t) {
  const frame_flow::FrameState s = d.state_at(u);
  if (t == 0.0) return s.position;
  switch (d.conic) {
    case frame_flow::ConicCase::Parabolic:
      return s.position + t * d.b1 + (t * t * std::pow(s.f, 0.75)) * d.b2;
    case frame_flow::ConicCase::Circular: {
      const double kh = kappa_hat_of(s.f, d.params);
      const double tr = std::remainder(t, 2.0 * std::numbers::pi);
      return s.position + (std::sin(tr) / kh) * d.b1 +
             ((std::cos(tr) - 1.0) / kh) * d.b2;
    }
    case frame_flow::ConicCase::Hyperbolic: {
      const double kh = kappa_hat_of(s.f, d.params);
      return s.position + (std::sinh(t) / kh) * d.b1 +
             ((std::cosh(t) - 1.0) / kh) * d.b2;
    }
  }
  return s.position;
}

double coordinate_map(const frame_flow::DirectrixResult& d, double u, double v) {
  if (d.conic == frame_flow::ConicCase::Parabolic) return v;
  return kappa_hat_of(d.state_at(u).f, d.params) * v;
}

std::function<Vec5(double, double)> SurfaceGrid::sampler() const {
  const frame_flow::DirectrixResult* dir = &directrix;
  return [dir](double u, double t) { return evaluate(*dir, u, t); };
}

SurfaceGrid generate_grid(const SurfaceParams& sp) {
  profile::validate_moduli(sp.moduli);
  if (sp.nu < 2 || sp.nt < 2)
    fail(ErrorKind::InvalidResolution, "grid needs nu >= 2 and nt >= 2");
  if (!(sp.u_min < sp.u_max) || !(sp.t_min < sp.t_max))
    fail(ErrorKind::InvalidArgument, "grid spans must be non-empty");
  if (!(sp.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tol must be positive");

  // The pad keeps finite-difference stencils around interior probe points
  // inside the dense span; the directrix always passes through u = 0 where
  // the canonical frame lives.
  const double pad = 0.05;
  const double lo = std::min(sp.u_min - pad, 0.0);
  const double hi = std::max(sp.u_max + pad, 0.0);

  SurfaceGrid g;
  g.params = sp;
  g.conic = frame_flow::conic_case(sp.moduli.C);
  g.directrix = frame_flow::integrate_directrix(sp.moduli, lo, hi, sp.tol);

  if (g.directrix.u_min() > sp.u_min || g.directrix.u_max() < sp.u_max) {
    std::ostringstream msg;
    msg << "requested u-span [" << sp.u_min << ", " << sp.u_max
        << "] exceeds the admissible flow span [" << g.directrix.u_min() << ", "
        << g.directrix.u_max() << "]";
    if (g.directrix.truncated_lo())
      msg << "; low end: " << profile::to_string(g.directrix.reason_lo);
    if (g.directrix.truncated_hi())
      msg << "; high end: " << profile::to_string(g.directrix.reason_hi);
    fail(ErrorKind::Inadmissible, msg.str());
  }

  g.u_values.resize(sp.nu);
  g.t_values.resize(sp.nt);
  const double du = (sp.u_max - sp.u_min) / static_cast<double>(sp.nu - 1);
  const double dt = (sp.t_max - sp.t_min) / static_cast<double>(sp.nt - 1);
  for (std::size_t i = 0; i < sp.nu; ++i)
    g.u_values[i] = sp.u_min + du * static_cast<double>(i);
  for (std::size_t j = 0; j < sp.nt; ++j)
    g.t_values[j] = sp.t_min + dt * static_cast<double>(j);
  g.u_values.back() = sp.u_max;
  g.t_values.back() = sp.t_max;

  g.points.reserve(sp.nu * sp.nt);
  for (std::size_t i = 0; i < sp.nu; ++i)
    for (std::size_t j = 0; j < sp.nt; ++j)
      g.points.push_back(evaluate(g.directrix, g.u_values[i], g.t_values[j]));
  return g;
}

}  // namespace bicons::surface
