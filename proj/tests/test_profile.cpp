#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"

#include "bicons/error.hpp"
#include "bicons/profile.hpp"

using namespace bicons;
using namespace bicons::profile;

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

// Independent root locator for Q on [f0, hi]: plain bisection against the
// closed form, no shared code with admissible_interval.
double bisect_root(const ModuliParams& p, double lo, double hi) {
  auto Q = [&](double f) {
    return 1.0 + 9.0 * p.C * std::pow(f, 1.5) - 9.0 * f * f - p.c * p.c * f * f * f;
  };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Q(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("radicand closed form") {
  const ModuliParams p10{1.0, 0.0, 0.2};
  CHECK(radicand(0.2, p10) == doctest::Approx(0.632).epsilon(1e-15));
  CHECK(radicand(1e-9, p10) == doctest::Approx(1.0).epsilon(1e-8));
  const ModuliParams p11{1.0, 1.0, 0.2};
  CHECK(radicand(0.2, p11) == doctest::Approx(1.4369844718999243).epsilon(1e-15));
  CHECK(kind_of([&] { radicand(0.0, p10); }) == ErrorKind::NonPositiveF);
  CHECK(kind_of([&] { radicand(-0.1, p10); }) == ErrorKind::NonPositiveF);
}

TEST_CASE("moduli validation") {
  CHECK_NOTHROW(validate_moduli({1.0, -1.0, 0.1}));
  CHECK(kind_of([] { validate_moduli({0.0, 0.0, 0.2}); }) == ErrorKind::Inadmissible);
  CHECK(kind_of([] { validate_moduli({1.0, 0.0, -0.2}); }) == ErrorKind::NonPositiveF);
}

TEST_CASE("admissible interval") {
  const ModuliParams p{1.0, 0.0, 0.1};
  const AdmissibleInterval iv = admissible_interval(p);
  CHECK(iv.f_lo == 0.0);
  CHECK(iv.f_hi == doctest::Approx(0.32743039467023827).epsilon(1e-12));
  CHECK(iv.f_hi == doctest::Approx(bisect_root(p, 0.1, 1.0)).epsilon(1e-10));
  CHECK(upper_admissible_bound(1.0, 0.0) == doctest::Approx(iv.f_hi).epsilon(1e-14));

  SUBCASE("other moduli, against the local bisection oracle") {
    for (const ModuliParams q : {ModuliParams{1.0, 1.0, 0.2}, ModuliParams{2.0, -1.0, 0.05},
                                 ModuliParams{0.5, 2.0, 0.3}}) {
      const AdmissibleInterval r = admissible_interval(q);
      CHECK(r.f_lo == 0.0);
      CHECK(r.f_hi == doctest::Approx(bisect_root(q, q.f0, 8.0)).epsilon(1e-10));
    }
  }

  SUBCASE("f0 outside the positivity component") {
    CHECK(kind_of([] { admissible_interval({1.0, 0.0, 0.5}); }) ==
          ErrorKind::Inadmissible);
  }
}

TEST_CASE("profile integration") {
  const ModuliParams p{1.0, 0.0, 0.2};

  SUBCASE("degenerate span keeps the seed sample") {
    const ProfileCurve c = integrate_profile(p, 0.0, 0.0);
    REQUIRE(c.samples().size() == 1);
    CHECK(c.samples()[0].u == 0.0);
    CHECK(c.samples()[0].f == 0.2);
    CHECK(c.samples()[0].fprime ==
          doctest::Approx((4.0 / 3.0) * 0.2 * std::sqrt(0.632)).epsilon(1e-15));
  }

  SUBCASE("monotone growth below the admissible bound") {
    const ProfileCurve c = integrate_profile(p, -1.0, 1.0);
    const auto& s = c.samples();
    REQUIRE(s.size() > 10);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].f > s[i - 1].f);
    // The truncation stop fires once Q(f) dips below its floor, so the last
    // node may overshoot the root of Q by about floor/|Q'| plus one step's
    // carry, well under 1e-8.
    CHECK(s.back().f <= 0.32743039467023827 + 1e-8);

    // First integral pointwise: f'^2 = (16/9) f^2 Q(f). The terminal node may
    // sit past the root where Q < 0 and the stored slope is zero by clamping.
    for (const auto& smp : s) {
      const double q = radicand(smp.f, p);
      if (q < 0.0) continue;
      const double lhs = smp.fprime * smp.fprime;
      const double rhs = (16.0 / 9.0) * smp.f * smp.f * q;
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }

  SUBCASE("upper truncation where the radicand vanishes") {
    const ProfileCurve c = integrate_profile(p, -1.0, 1.0);
    CHECK(c.truncation_hi == TruncationReason::RadicandVanished);
    CHECK(c.truncation_lo == TruncationReason::None);
    CHECK(c.u_max() > 0.75);
    CHECK(c.u_max() < 0.85);
    CHECK(c.u_min() == -1.0);
  }

  SUBCASE("self-convergence in tol") {
    const ProfileCurve fine = integrate_profile(p, 0.0, 0.5, 1e-10);
    const ProfileCurve coarse = integrate_profile(p, 0.0, 0.5, 1e-6);
    CHECK(std::abs(fine.f_at(0.5) - coarse.f_at(0.5)) <= 1e-6);
    CHECK(std::abs(fine.f_at(0.31) - coarse.f_at(0.31)) <= 1e-6);
  }

  SUBCASE("span must contain the anchor") {
    CHECK(kind_of([&] { integrate_profile(p, 0.5, 1.0); }) ==
          ErrorKind::InvalidArgument);
  }

  SUBCASE("interpolation outside the covered span") {
    const ProfileCurve c = integrate_profile(p, -0.5, 0.5);
    CHECK(kind_of([&] { c.f_at(0.7); }) == ErrorKind::OutOfSpan);
  }
}

TEST_CASE("second-order residual separates solutions from fakes") {
  const ModuliParams p{1.0, 0.0, 0.2};

  SUBCASE("integrated curves sit at the discretization floor") {
    const ProfileCurve c = integrate_profile(p, -0.5, 0.5);
    CHECK(second_order_residual(c, p) <= 1e-6);
  }

  SUBCASE("constant fake profile") {
    std::vector<ProfileSample> fake;
    for (int i = 0; i <= 20; ++i) fake.push_back({i / 20.0, 0.2, 0.0});
    const double r = second_order_residual(ProfileCurve(std::move(fake)), p);
    // (4/3) f^2 + 4 f^4 + (4/3) c^2 f^5 at f = 0.2.
    CHECK(r == doctest::Approx(0.06016).epsilon(1e-5));
  }

  SUBCASE("corrupted derivative column") {
    const ProfileCurve good = integrate_profile(p, -0.5, 0.5);
    std::vector<ProfileSample> bad = good.samples();
    for (auto& s : bad) s.fprime += 0.1;
    CHECK(second_order_residual(ProfileCurve(std::move(bad)), p) > 0.01);
  }

  SUBCASE("too few samples") {
    std::vector<ProfileSample> tiny{{0.0, 0.2, 0.1}, {0.1, 0.21, 0.1}, {0.2, 0.22, 0.1}};
    CHECK(kind_of([&] {
            second_order_residual(ProfileCurve(std::move(tiny)), {1.0, 0.0, 0.2});
          }) == ErrorKind::TooFewSamples);
  }
}

TEST_CASE("scalar invariants") {
  const ModuliParams p{1.0, 0.0, 0.2};
  const ScalarInvariants inv = invariants_at(0.2, p);
  CHECK(inv.gauss_K == doctest::Approx(-1.0 - 3.0 * 0.04 - 0.008).epsilon(1e-15));
  CHECK(inv.kappa1 == doctest::Approx(0.2 * std::sqrt(1.2)).epsilon(1e-15));
  CHECK(inv.kappa2 == doctest::Approx(0.19751543149590198).epsilon(1e-14));
  CHECK(inv.kappa_hat == 0.0);

  CHECK(invariants_at(0.1, p).gauss_K == doctest::Approx(-1.031).epsilon(1e-15));

  SUBCASE("kappa_hat vanishes exactly when C does") {
    const ScalarInvariants circ = invariants_at(0.16, {1.0, 1.0, 0.16});
    CHECK(circ.kappa_hat == doctest::Approx(3.0 * std::pow(0.16, 0.75)).epsilon(1e-15));
    CHECK(invariants_at(0.16, {2.0, 0.0, 0.16}).kappa_hat == 0.0);
  }

  SUBCASE("hyperbolic space is the curvature ceiling") {
    for (double f : {0.01, 0.1, 0.2, 0.3})
      CHECK(invariants_at(f, p).gauss_K < -1.0);
  }

  SUBCASE("invalid inputs") {
    CHECK(kind_of([&] { invariants_at(0.0, p); }) == ErrorKind::NonPositiveF);
    CHECK(kind_of([&] { invariants_at(0.4, p); }) == ErrorKind::NegativeRadicand);
  }
}
