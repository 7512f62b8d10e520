#include <cmath>
#include <functional>

#include "doctest.h"

#include "bicons/error.hpp"
#include "bicons/frame_flow.hpp"

using namespace bicons;
using namespace bicons::frame_flow;

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

double norm5(const Vec5& v) { return euclidean_norm(v); }

}  // namespace

TEST_CASE("conic case from the sign of C") {
  CHECK(conic_case(0.0) == ConicCase::Parabolic);
  CHECK(conic_case(2.5) == ConicCase::Circular);
  CHECK(conic_case(-1e-9) == ConicCase::Hyperbolic);
}

TEST_CASE("canonical initial frame") {
  const FrameState s = canonical_initial_frame(0.2);
  CHECK(s.u == 0.0);
  CHECK(s.f == 0.2);
  CHECK(max_gram_deviation(s.frame()) == 0.0);
  CHECK(s.position[4] == 1.0);
  CHECK(kind_of([] { canonical_initial_frame(0.0); }) == ErrorKind::NonPositiveF);
}

TEST_CASE("frame derivative at the origin") {
  const profile::ModuliParams p{1.0, 0.0, 0.2};
  const FrameState s = canonical_initial_frame(0.2);
  const FrameDerivative d = frame_derivative(s, p);
  const double g = std::pow(0.2, 1.5);

  CHECK(d.df == doctest::Approx((4.0 / 3.0) * 0.2 * std::sqrt(0.632)).epsilon(1e-15));
  CHECK(norm5(d.dposition - s.e1) == 0.0);
  // e1' = position - f e3 + c f^(3/2) e4.
  CHECK(d.de1[0] == 0.0);
  CHECK(d.de1[2] == -0.2);
  CHECK(d.de1[3] == doctest::Approx(g).epsilon(1e-15));
  CHECK(d.de1[4] == 1.0);
  CHECK(norm5(d.de2) == 0.0);
  CHECK(norm5(d.de3 - 0.2 * s.e1) == 0.0);
  CHECK(norm5(d.de4 + g * s.e1) <= 1e-16);

  SUBCASE("outside the admissible interval") {
    FrameState far = s;
    far.f = 0.4;
    CHECK(kind_of([&] { frame_derivative(far, p); }) == ErrorKind::NegativeRadicand);
  }
}

TEST_CASE("directrix integration, parabolic moduli") {
  const profile::ModuliParams p{1.0, 0.0, 0.2};
  const DirectrixResult d = integrate_directrix(p, -0.5, 0.5);

  SUBCASE("frame stays orthonormal without re-orthonormalization") {
    CHECK(d.max_gram_drift <= 1e-8);
    for (const auto& s : d.states)
      CHECK(std::abs(inner(s.position, s.position) + 1.0) <= 1e-8);
  }

  SUBCASE("directrix is orthogonal to the b1 axis") {
    for (const auto& s : d.states) CHECK(std::abs(inner(s.position, d.b1)) <= 1e-8);
  }

  SUBCASE("e2 is a constant of the motion, bitwise") {
    const FrameState origin = d.state_at(0.0);
    for (const auto& s : d.states) CHECK(norm5(s.e2 - origin.e2) == 0.0);
  }

  SUBCASE("anchor state is the seed") {
    const FrameState s0 = d.state_at(0.0);
    CHECK(s0.f == 0.2);
    CHECK(s0.position[4] == 1.0);
    CHECK(norm5(s0.e1 - Vec5{1.0, 0.0, 0.0, 0.0, 0.0}) == 0.0);
  }

  SUBCASE("interpolated states agree with stored nodes") {
    for (const auto& s : d.states) {
      const FrameState r = d.state_at(s.u);
      CHECK(norm5(r.position - s.position) == 0.0);
      CHECK(r.f == s.f);
    }
  }

  SUBCASE("span validation") {
    CHECK(kind_of([&] { integrate_directrix(p, 0.2, 0.5); }) ==
          ErrorKind::InvalidArgument);
  }
}

TEST_CASE("directrix truncation mirrors the profile") {
  const DirectrixResult d = integrate_directrix({1.0, 0.0, 0.2}, 0.0, 1.0);
  CHECK(d.truncated_hi());
  CHECK(d.reason_hi == profile::TruncationReason::RadicandVanished);
  CHECK_FALSE(d.truncated_lo());
  CHECK(d.u_max() > 0.75);
  CHECK(d.u_max() < 0.85);
}

TEST_CASE("xi field") {
  SUBCASE("parabolic: null field proportional to 2 f^(3/4)") {
    const profile::ModuliParams p{1.0, 0.0, 0.2};
    const DirectrixResult d = integrate_directrix(p, -0.5, 0.5);
    const Vec5 xi0 = xi_field(d.state_at(0.0), p);
    CHECK(xi0[0] == doctest::Approx(std::sqrt(0.632)).epsilon(1e-15));
    CHECK(xi0[1] == 0.0);
    CHECK(xi0[2] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(xi0[3] == doctest::Approx(-std::pow(0.2, 1.5)).epsilon(1e-15));
    CHECK(xi0[4] == 1.0);
    const Vec5 dir0 = (1.0 / (2.0 * std::pow(0.2, 0.75))) * xi0;
    for (std::size_t i = 0; i < d.states.size(); ++i) {
      CHECK(std::abs(inner(d.xi[i], d.xi[i])) <= 1e-10);
      const Vec5 dir = (1.0 / (2.0 * std::pow(d.states[i].f, 0.75))) * d.xi[i];
      CHECK(norm5(dir - dir0) <= 1e-6);
    }
  }

  SUBCASE("circular: constant unit spacelike field") {
    const profile::ModuliParams p{1.0, 1.0, 0.16};
    const DirectrixResult d = integrate_directrix(p, -0.5, 0.5);
    for (std::size_t i = 0; i < d.states.size(); ++i) {
      CHECK(std::abs(inner(d.xi[i], d.xi[i]) - 1.0) <= 1e-10);
      CHECK(norm5(d.xi[i] - d.xi.front()) <= 1e-7);
    }
  }

  SUBCASE("hyperbolic: constant unit timelike field") {
    const profile::ModuliParams p{1.0, -1.0, 0.1};
    const DirectrixResult d = integrate_directrix(p, -0.5, 0.5);
    for (std::size_t i = 0; i < d.states.size(); ++i) {
      CHECK(std::abs(inner(d.xi[i], d.xi[i]) + 1.0) <= 1e-10);
      CHECK(norm5(d.xi[i] - d.xi.front()) <= 1e-7);
    }
  }

  SUBCASE("unnormalized square is the conserved 9 C f^(3/2)") {
    for (const profile::ModuliParams p :
         {profile::ModuliParams{1.0, 1.0, 0.16}, profile::ModuliParams{1.0, -1.0, 0.1},
          profile::ModuliParams{2.0, 0.0, 0.1}}) {
      const DirectrixResult d = integrate_directrix(p, -0.4, 0.4);
      for (const auto& s : d.states) {
        const double g = std::pow(s.f, 1.5);
        const Vec5 w = std::sqrt(profile::radicand(s.f, p)) * s.e1 + (3.0 * s.f) * s.e3 -
                       (p.c * g) * s.e4 + s.position;
        CHECK(std::abs(inner(w, w) - 9.0 * p.C * g) <= 1e-10);
      }
    }
  }
}

TEST_CASE("surface axes and the closing constraint") {
  auto axes_gram = [](const DirectrixResult& d, double b2sq) {
    CHECK(inner(d.b1, d.b1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner(d.b1, d.b2)) <= 1e-12);
    CHECK(inner(d.b2, d.b2) == doctest::Approx(b2sq).epsilon(1e-10));
  };

  SUBCASE("parabolic") {
    const profile::ModuliParams p{1.0, 0.0, 0.2};
    const DirectrixResult d = integrate_directrix(p, -0.5, 0.5);
    CHECK(std::abs(inner(d.b2, d.b2)) <= 1e-12);
    CHECK(std::abs(inner(d.b1, d.b2)) <= 1e-12);
    CHECK(inner(d.state_at(0.0).position, d.b2) ==
          doctest::Approx(-0.5 / std::pow(0.2, 0.75)).epsilon(1e-12));
    CHECK(constraint_residual(d) <= 1e-7);
  }

  SUBCASE("circular") {
    const DirectrixResult d = integrate_directrix({1.0, 1.0, 0.16}, -0.5, 0.5);
    axes_gram(d, 1.0);
    CHECK(constraint_residual(d) <= 1e-7);
  }

  SUBCASE("hyperbolic") {
    const DirectrixResult d = integrate_directrix({1.0, -1.0, 0.1}, -0.5, 0.5);
    axes_gram(d, -1.0);
    CHECK(constraint_residual(d) <= 1e-7);
  }

  SUBCASE("a corrupted axis is caught") {
    DirectrixResult d = integrate_directrix({1.0, 1.0, 0.16}, -0.5, 0.5);
    d.b2 = 1.1 * d.b2;
    CHECK(constraint_residual(d) >= 0.01);
  }
}
