#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "bicons/error.hpp"
#include "bicons/surface.hpp"
#include "bicons/verifier.hpp"

using namespace bicons;
using namespace bicons::verifier;

namespace {

ErrorKind kind_of(const std::function<void()>& op) {
  try {
    op();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

// Product of a circle of radius r with a hyperbolic line, sitting in the
// hyperboloid because a^2 = 1 + r^2. CMC with parallel mean curvature
// direction, f = (a^2 + r^2) / (2 a r), flat in the extrinsic sense, and not
// a member of the certified family.
constexpr double kR = 1.0;
const double kA = std::sqrt(2.0);
const double kCylF = (kA * kA + kR * kR) / (2.0 * kA * kR);

Vec5 cylinder(double u, double t) {
  return {kR * std::cos(t), kR * std::sin(t), 0.0, kA * std::sinh(u),
          kA * std::cosh(u)};
}

// Totally geodesic hyperbolic plane: f = 0, extrinsic curvature -1.
Vec5 geodesic_h2(double u, double t) {
  return {std::sinh(u), std::cosh(u) * std::sinh(t), 0.0, 0.0,
          std::cosh(u) * std::cosh(t)};
}

const CheckEntry& find_entry(const CheckReport& rep, const std::string& name) {
  for (const auto& e : rep.entries)
    if (e.name == name) return e;
  FAIL("missing report entry: ", name);
  return rep.entries.front();
}

}  // namespace

TEST_CASE("analytic cylinder oracle") {
  const FundamentalForms ff = fundamental_forms(cylinder, 0.3, 0.7, 1e-3);
  const MeanCurvature mc = mean_curvature(ff);

  CHECK(mc.f == doctest::Approx(kCylF).epsilon(1e-6));
  const double k_extr = -1.0 + inner(ff.b11, ff.b22) - inner(ff.b12, ff.b12);
  CHECK(std::abs(k_extr) <= 1e-6);
  CHECK(inner(ff.b11, ff.b22) == doctest::Approx(1.0).epsilon(1e-6));

  SUBCASE("mean curvature direction is parallel") {
    CHECK(check_pnmc(cylinder, 0.3, 0.7, 1e-3) <= 1e-4);
  }

  SUBCASE("but the family shape profile is violated") {
    const ShapeCheck sc =
        check_shape_and_biconservative(cylinder, 0.3, 0.7, 1e-3, {1.0, 0.0, 0.2});
    CHECK(sc.a3_residual >= 0.1);
  }
}

TEST_CASE("totally geodesic plane oracle") {
  const FundamentalForms ff = fundamental_forms(geodesic_h2, 0.3, 0.4, 1e-3);
  const MeanCurvature mc = mean_curvature(ff);
  CHECK(std::abs(mc.f) <= 1e-8);
  const double k_extr = -1.0 + inner(ff.b11, ff.b22) - inner(ff.b12, ff.b12);
  CHECK(k_extr == doctest::Approx(-1.0).epsilon(1e-8));

  SUBCASE("shape check refuses to normalize a vanishing mean curvature") {
    CHECK(kind_of([&] {
            check_shape_and_biconservative(geodesic_h2, 0.3, 0.4, 1e-3, {1.0, 0.0, 0.2});
          }) == ErrorKind::ZeroMeanCurvature);
  }
}

TEST_CASE("finite differences converge at fourth order") {
  auto err_at = [](double h) {
    const MeanCurvature mc = mean_curvature(fundamental_forms(cylinder, 0.3, 0.7, h));
    return std::abs(mc.f - kCylF);
  };
  const double e1 = err_at(0.1), e2 = err_at(0.05), e3 = err_at(0.025);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("full battery passes on generated grids") {
  surface::SurfaceParams sp;
  sp.moduli = {1.0, 0.0, 0.2};
  SUBCASE("parabolic") {}
  SUBCASE("circular") { sp.moduli = {1.0, 1.0, 0.16}; }
  SUBCASE("hyperbolic") { sp.moduli = {1.0, -1.0, 0.1}; }

  const surface::SurfaceGrid g = surface::generate_grid(sp);
  const CheckReport rep = run_checks(g);
  for (const auto& e : rep.entries) {
    INFO(e.name, " = ", e.value, " vs ", e.bound);
    CHECK(e.pass);
  }
  CHECK(rep.all_pass);

  SUBCASE("second fundamental form is diagonal in the grid frame") {
    const auto smp = g.sampler();
    for (double u : {-0.2, 0.1}) {
      const FundamentalForms ff = fundamental_forms(smp, u, 0.25, 1e-3);
      CHECK(euclidean_norm(ff.b12) <= 1e-5);
    }
  }
}

TEST_CASE("shape residuals are invariant under reversing the u-direction") {
  const surface::SurfaceGrid g = surface::generate_grid({{1.0, 0.0, 0.2}});
  const auto smp = g.sampler();
  const auto mirrored = [&smp](double u, double t) { return smp(-u, t); };

  const ShapeCheck a =
      check_shape_and_biconservative(smp, 0.2, 0.3, 1e-3, g.params.moduli);
  const ShapeCheck b =
      check_shape_and_biconservative(mirrored, -0.2, 0.3, 1e-3, g.params.moduli);
  // The mirrored stencil sums the same sample values in reversed order, so
  // the residuals agree only up to rounding noise amplified by 1/h^2.
  CHECK(std::abs(a.a3_residual - b.a3_residual) <= 1e-7);
  CHECK(std::abs(a.a4_residual - b.a4_residual) <= 1e-7);
  CHECK(std::abs(check_pnmc(smp, 0.2, 0.3, 1e-3) -
                 check_pnmc(mirrored, -0.2, 0.3, 1e-3)) <= 1e-7);
}

TEST_CASE("a height-dependent normal rotation breaks parallelism") {
  const surface::SurfaceGrid g = surface::generate_grid({{1.0, 0.0, 0.2}});
  const auto smp = g.sampler();
  const auto rotated = [&smp](double u, double t) {
    const Vec5 x = smp(u, t);
    const double th = 0.3 * u, cs = std::cos(th), sn = std::sin(th);
    Vec5 y = x;
    y[2] = cs * x[2] - sn * x[3];
    y[3] = sn * x[2] + cs * x[3];
    return y;
  };
  CHECK(check_pnmc(rotated, 0.1, 0.2, 1e-3) >= 0.01);
}

TEST_CASE("single tampered node fails the battery") {
  surface::SurfaceGrid g = surface::generate_grid({{1.0, 0.0, 0.2}});
  const std::size_t mid = (g.params.nu / 2) * g.params.nt + g.params.nt / 2;
  g.points[mid][0] += 1e-2;
  const CheckReport rep = run_checks(g);
  CHECK_FALSE(rep.all_pass);
  CHECK_FALSE(find_entry(rep, "hyperboloid").pass);
  CHECK_FALSE(find_entry(rep, "e2f_zero").pass);
}

TEST_CASE("conic classification of synthetic curves") {
  std::vector<Vec5> circle, parabola, hyperbola;
  for (int j = 0; j <= 24; ++j) {
    const double t = 0.1 * j;
    circle.push_back({std::cos(t), std::sin(t), 0.0, 0.0, 2.0});
    parabola.push_back({t, 0.7 * t * t, 0.0, 0.0, 3.0 + 0.7 * t * t});
    hyperbola.push_back({std::sinh(t), 0.5, 0.0, 0.0, std::cosh(t)});
  }
  const ConicClassification cc = classify_e2_curve(circle, 0.1);
  CHECK(cc.conic == ConicClass::Circle);
  CHECK(cc.accel_type == CausalType::Spacelike);
  CHECK(cc.planarity_ratio <= 1e-12);
  CHECK(cc.fitted_curvature == doctest::Approx(1.0).epsilon(1e-6));

  const ConicClassification cp = classify_e2_curve(parabola, 0.1);
  CHECK(cp.conic == ConicClass::Parabola);
  CHECK(cp.accel_type == CausalType::Null);

  const ConicClassification ch = classify_e2_curve(hyperbola, 0.1);
  CHECK(ch.conic == ConicClass::Hyperbola);
  CHECK(ch.accel_type == CausalType::Timelike);

  SUBCASE("too few samples") {
    circle.resize(5);
    CHECK(kind_of([&] { classify_e2_curve(circle, 0.1); }) == ErrorKind::TooFewSamples);
  }
}

TEST_CASE("flow rows of generated grids classify by the sign of C") {
  struct Case {
    profile::ModuliParams m;
    ConicClass expect;
  };
  for (const Case& c : {Case{{1.0, 0.0, 0.2}, ConicClass::Parabola},
                        Case{{1.0, 1.0, 0.16}, ConicClass::Circle},
                        Case{{1.0, -1.0, 0.1}, ConicClass::Hyperbola}}) {
    surface::SurfaceParams sp;
    sp.moduli = c.m;
    const surface::SurfaceGrid g = surface::generate_grid(sp);
    std::vector<Vec5> row;
    for (std::size_t j = 0; j < sp.nt; ++j) row.push_back(g.at(sp.nu / 2, j));
    const ConicClassification cls =
        classify_e2_curve(row, g.t_values[1] - g.t_values[0]);
    CHECK(cls.conic == c.expect);
    CHECK(cls.planarity_ratio <= 1e-8);
    if (c.m.C > 0.0) {
      const double f = g.directrix.state_at(g.u_values[sp.nu / 2]).f;
      const double kh = 3.0 * std::sqrt(c.m.C) * std::pow(f, 0.75);
      CHECK(std::abs(cls.fitted_curvature - kh) <= 1e-5);
    }
  }
}

TEST_CASE("third singular ratio flags non-planar clouds") {
  std::vector<Vec5> planar, bent;
  for (int i = 0; i < 40; ++i) {
    const double s = 0.1 * i;
    planar.push_back({s, std::sin(s), 0.0, 0.0, 0.0});
    bent.push_back({s, std::sin(s), 0.05 * s * s, 0.0, 0.0});
  }
  CHECK(third_singular_ratio(planar) <= 1e-12);
  CHECK(third_singular_ratio(bent) >= 1e-3);
}

TEST_CASE("sampler domain and metric guards") {
  const surface::SurfaceGrid g = surface::generate_grid({{1.0, 0.0, 0.2}});
  const auto smp = g.sampler();

  SUBCASE("stencil runs off the covered span") {
    CHECK(kind_of([&] { fundamental_forms(smp, 0.49, 0.0, 0.1); }) ==
          ErrorKind::StencilOutOfDomain);
  }

  SUBCASE("flow-degenerate parametrization") {
    const auto collapsed = [](double u, double) {
      return Vec5{std::sinh(u), 0.0, 0.0, 0.0, std::cosh(u)};
    };
    CHECK(kind_of([&] { fundamental_forms(collapsed, 0.1, 0.2, 1e-3); }) ==
          ErrorKind::DegenerateMetric);
  }

  SUBCASE("center off the hyperboloid") {
    const auto flat = [](double u, double t) { return Vec5{2.0 + u, t, 0.0, 0.0, 0.0}; };
    CHECK(kind_of([&] { fundamental_forms(flat, 0.0, 0.0, 1e-3); }) ==
          ErrorKind::NotOnHyperboloid);
  }

  SUBCASE("battery needs a minimum resolution") {
    surface::SurfaceParams sp;
    sp.moduli = {1.0, 0.0, 0.2};
    sp.nu = 4;
    sp.nt = 6;
    const surface::SurfaceGrid tiny = surface::generate_grid(sp);
    CHECK(kind_of([&] { run_checks(tiny); }) == ErrorKind::TooFewSamples);
  }
}
