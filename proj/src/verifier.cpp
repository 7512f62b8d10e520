#include "bicons/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bicons::verifier {

namespace {

constexpr double kW1[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double kW2[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0,
                           -1.0 / 12.0};

Vec5 sample_checked(const SurfaceSampler& s, double u, double t) {
  try {
    return s(u, t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OutOfSpan)
      fail(ErrorKind::StencilOutOfDomain,
           "finite-difference stencil leaves the sampler domain");
    throw;
  }
}

// Stencil reductions accumulate in extended precision so that the mixed
// derivative computed in both summation orders witnesses the surface's own
// smoothness, not the associativity of double addition.
Vec5 reduce_rows_then_cols(const Vec5 P[5][5], const double* wa, const double* wb) {
  Vec5 out;
  for (std::size_t i = 0; i < 5; ++i) {
    long double acc = 0.0L;
    for (int a = 0; a < 5; ++a) {
      long double row = 0.0L;
      for (int b = 0; b < 5; ++b) row += static_cast<long double>(wb[b]) * P[a][b][i];
      acc += static_cast<long double>(wa[a]) * row;
    }
    out[i] = static_cast<double>(acc);
  }
  return out;
}

Vec5 reduce_cols_then_rows(const Vec5 P[5][5], const double* wa, const double* wb) {
  Vec5 out;
  for (std::size_t i = 0; i < 5; ++i) {
    long double acc = 0.0L;
    for (int b = 0; b < 5; ++b) {
      long double col = 0.0L;
      for (int a = 0; a < 5; ++a) col += static_cast<long double>(wa[a]) * P[a][b][i];
      acc += static_cast<long double>(wb[b]) * col;
    }
    out[i] = static_cast<double>(acc);
  }
  return out;
}

// Eigenvalues of a symmetric 5x5 matrix by cyclic Jacobi, descending.
std::array<double, 5> sym_eigenvalues(Mat5 a) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, scale = 0.0;
    for (int p = 0; p < 5; ++p) {
      scale += a[p][p] * a[p][p];
      for (int q = p + 1; q < 5; ++q) off += a[p][q] * a[p][q];
    }
    if (off <= 1e-30 * std::max(scale, 1e-300)) break;
    for (int p = 0; p < 5; ++p) {
      for (int q = p + 1; q < 5; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < 5; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 5; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 5> ev{a[0][0], a[1][1], a[2][2], a[3][3], a[4][4]};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

double kappa_hat_of(double f, const profile::ModuliParams& p) {
  return 3.0 * std::sqrt(std::abs(p.C)) * std::pow(f, 0.75);
}

// A' = R^T A R for the rotation R = [[d1, -d2], [d2, d1]].
void rotate_sym(const double A[2][2], double d1, double d2, double out[2][2]) {
  const double r00 = A[0][0] * d1 + A[0][1] * d2;
  const double r10 = A[1][0] * d1 + A[1][1] * d2;
  const double r01 = -A[0][0] * d2 + A[0][1] * d1;
  const double r11 = -A[1][0] * d2 + A[1][1] * d1;
  out[0][0] = d1 * r00 + d2 * r10;
  out[1][0] = -d2 * r00 + d1 * r10;
  out[0][1] = d1 * r01 + d2 * r11;
  out[1][1] = -d2 * r01 + d1 * r11;
}

}  // namespace

FundamentalForms fundamental_forms(const SurfaceSampler& s, double u, double t,
                                   double h) {
  return fundamental_forms(s, u, t, h, h);
}

FundamentalForms fundamental_forms(const SurfaceSampler& s, double u, double t,
                                   double hu, double ht) {
  if (!(hu > 0.0) || !(ht > 0.0))
    fail(ErrorKind::InvalidArgument, "stencil steps must be positive");
  Vec5 P[5][5];
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      P[a][b] = sample_checked(s, u + (a - 2) * hu, t + (b - 2) * ht);

  FundamentalForms ff;
  ff.hu = hu;
  ff.ht = ht;
  ff.position = P[2][2];

  const double cs = -inner(ff.position, ff.position);
  if (cs <= 0.0)
    fail(ErrorKind::NotOnHyperboloid, "stencil center is not inside the light cone");
  const Vec5 chat = (1.0 / std::sqrt(cs)) * ff.position;

  Vec5 Pu, Pt, Puu, Ptt;
  for (int k = 0; k < 5; ++k) {
    Pu += kW1[k] * P[k][2];
    Pt += kW1[k] * P[2][k];
    Puu += kW2[k] * P[k][2];
    Ptt += kW2[k] * P[2][k];
  }
  Pu *= 1.0 / hu;
  Pt *= 1.0 / ht;
  Puu *= 1.0 / (hu * hu);
  Ptt *= 1.0 / (ht * ht);
  Vec5 Put = reduce_rows_then_cols(P, kW1, kW1) * (1.0 / (hu * ht));
  Vec5 Put_alt = reduce_cols_then_rows(P, kW1, kW1) * (1.0 / (hu * ht));
  ff.du = Pu;
  ff.dt = Pt;

  ff.g_uu = inner(Pu, Pu);
  ff.g_ut = inner(Pu, Pt);
  ff.g_tt = inner(Pt, Pt);
  const double det = ff.g_uu * ff.g_tt - ff.g_ut * ff.g_ut;
  if (ff.g_tt <= 1e-12 || det <= 1e-12)
    fail(ErrorKind::DegenerateMetric, "first fundamental form is degenerate");

  ff.beta2 = 1.0 / std::sqrt(ff.g_tt);
  ff.e2 = ff.beta2 * Pt;
  const Vec5 uperp = Pu - inner(Pu, ff.e2) * ff.e2;
  const double un = inner(uperp, uperp);
  if (un <= 1e-12)
    fail(ErrorKind::DegenerateMetric, "coordinate directions are parallel");
  ff.alpha1 = 1.0 / std::sqrt(un);
  ff.beta1 = -ff.g_ut / (std::sqrt(un) * ff.g_tt);
  ff.e1 = ff.alpha1 * uperp;

  // Projection onto the normal plane of the surface inside the hyperbolic
  // space: remove e1, e2 and the (timelike) radial direction.
  const Vec5 e1 = ff.e1, e2 = ff.e2;
  auto normal_part = [&e1, &e2, &chat](const Vec5& v) {
    return v - inner(v, e1) * e1 - inner(v, e2) * e2 + inner(v, chat) * chat;
  };

  // Orthonormal basis of that plane from the best-conditioned coordinate axes.
  std::array<Vec5, 5> cand;
  std::array<double, 5> cn{};
  for (std::size_t k = 0; k < 5; ++k) {
    Vec5 axis;
    axis[k] = 1.0;
    cand[k] = normal_part(axis);
    cn[k] = inner(cand[k], cand[k]);
  }
  const std::size_t k3 = static_cast<std::size_t>(
      std::max_element(cn.begin(), cn.end()) - cn.begin());
  if (cn[k3] <= 1e-12)
    fail(ErrorKind::DegenerateMetric, "normal plane collapsed");
  ff.n3 = (1.0 / std::sqrt(cn[k3])) * cand[k3];
  for (std::size_t k = 0; k < 5; ++k) {
    cand[k] -= inner(cand[k], ff.n3) * ff.n3;
    cn[k] = inner(cand[k], cand[k]);
  }
  cn[k3] = -1.0;
  const std::size_t k4 = static_cast<std::size_t>(
      std::max_element(cn.begin(), cn.end()) - cn.begin());
  if (cn[k4] <= 1e-12)
    fail(ErrorKind::DegenerateMetric, "normal plane collapsed");
  ff.n4 = (1.0 / std::sqrt(cn[k4])) * cand[k4];

  // Second derivatives along the orthonormal tangent frame, then their
  // normal components. The radial correction of the ambient hyperboloid is
  // removed by the same projection.
  const Vec5 raw11 = (ff.alpha1 * ff.alpha1) * Puu + (2.0 * ff.alpha1 * ff.beta1) * Put +
                     (ff.beta1 * ff.beta1) * Ptt;
  const Vec5 raw12 = (ff.alpha1 * ff.beta2) * Put + (ff.beta1 * ff.beta2) * Ptt;
  const Vec5 raw12_alt = (ff.alpha1 * ff.beta2) * Put_alt + (ff.beta1 * ff.beta2) * Ptt;
  const Vec5 raw22 = (ff.beta2 * ff.beta2) * Ptt;
  ff.b11 = normal_part(raw11);
  ff.b12 = normal_part(raw12);
  ff.b22 = normal_part(raw22);
  ff.b12_asymmetry = euclidean_norm(ff.b12 - normal_part(raw12_alt));
  return ff;
}

MeanCurvature mean_curvature(const FundamentalForms& ff) {
  MeanCurvature mc;
  mc.H = 0.5 * (ff.b11 + ff.b22);
  const double hs = inner(mc.H, mc.H);
  if (hs < -1e-12)
    fail(ErrorKind::NegativeNormSquared,
         "mean curvature vector has negative Lorentzian square");
  mc.f = std::sqrt(std::max(hs, 0.0));
  return mc;
}

ShapeCheck check_shape_and_biconservative(const SurfaceSampler& s, double u, double t,
                                          double h, const profile::ModuliParams& p) {
  const FundamentalForms ff = fundamental_forms(s, u, t, h);
  const MeanCurvature mc = mean_curvature(ff);
  if (mc.f < 1e-8)
    fail(ErrorKind::ZeroMeanCurvature, "mean curvature too small to normalize");
  const Vec5 n = (1.0 / mc.f) * mc.H;

  // Unit partner of n inside the normal plane, by rotating the generic basis.
  const double ca = inner(n, ff.n3), cb = inner(n, ff.n4);
  Vec5 m = ca * ff.n4 - cb * ff.n3;
  m *= 1.0 / std::sqrt(std::max(ca * ca + cb * cb, 1e-300));

  // grad f from fourth-order differences of the recomputed mean curvature at
  // shifted stencil centers.
  double fu[5] = {0, 0, 0, 0, 0}, ft[5] = {0, 0, 0, 0, 0};
  for (int k = 0; k < 5; ++k) {
    if (k == 2) continue;
    fu[k] = mean_curvature(fundamental_forms(s, u + (k - 2) * h, t, h)).f;
    ft[k] = mean_curvature(fundamental_forms(s, u, t + (k - 2) * h, h)).f;
  }
  const double dfu = (fu[0] - 8.0 * fu[1] + 8.0 * fu[3] - fu[4]) / (12.0 * h);
  const double dft = (ft[0] - 8.0 * ft[1] + 8.0 * ft[3] - ft[4]) / (12.0 * h);

  ShapeCheck sc;
  sc.f = mc.f;
  sc.grad1 = ff.alpha1 * dfu + ff.beta1 * dft;
  sc.grad2 = ff.beta2 * dft;

  double A3[2][2] = {{inner(ff.b11, n), inner(ff.b12, n)},
                     {inner(ff.b12, n), inner(ff.b22, n)}};
  double A4[2][2] = {{inner(ff.b11, m), inner(ff.b12, m)},
                     {inner(ff.b12, m), inner(ff.b22, m)}};

  {
    const double r1 = A3[0][0] * sc.grad1 + A3[0][1] * sc.grad2 + mc.f * sc.grad1;
    const double r2 = A3[1][0] * sc.grad1 + A3[1][1] * sc.grad2 + mc.f * sc.grad2;
    sc.biconservative_residual = std::hypot(r1, r2);
  }

  // Direction to align the frame with: grad f, or for a flat f the
  // eigenvector of A3 with the smaller eigenvalue (the theoretical grad f
  // direction carries eigenvalue -f < 3f).
  double d1, d2;
  const double gn = std::hypot(sc.grad1, sc.grad2);
  if (gn >= 1e-6 * std::max(1.0, mc.f)) {
    d1 = sc.grad1 / gn;
    d2 = sc.grad2 / gn;
  } else {
    const double tr = A3[0][0] + A3[1][1];
    const double det3 = A3[0][0] * A3[1][1] - A3[0][1] * A3[1][0];
    const double disc = std::sqrt(std::max(0.25 * tr * tr - det3, 0.0));
    const double lam = 0.5 * tr - disc;
    const double v1a = A3[0][1], v2a = lam - A3[0][0];
    const double v1b = lam - A3[1][1], v2b = A3[1][0];
    if (std::hypot(v1a, v2a) >= std::hypot(v1b, v2b)) {
      d1 = v1a;
      d2 = v2a;
    } else {
      d1 = v1b;
      d2 = v2b;
    }
    const double dn = std::hypot(d1, d2);
    if (dn < 1e-300) {
      d1 = 1.0;
      d2 = 0.0;
    } else {
      d1 /= dn;
      d2 /= dn;
    }
  }

  double a3p[2][2], a4p[2][2];
  rotate_sym(A3, d1, d2, a3p);
  rotate_sym(A4, d1, d2, a4p);
  if (p.c * a4p[0][0] < 0.0) {
    for (auto& row : a4p)
      for (auto& x : row) x = -x;
  }

  const double f32 = std::pow(mc.f, 1.5);
  sc.a3_residual = std::max({std::abs(a3p[0][0] + mc.f), std::abs(a3p[0][1]),
                             std::abs(a3p[1][0]), std::abs(a3p[1][1] - 3.0 * mc.f)});
  sc.a4_residual = std::max({std::abs(a4p[0][0] - p.c * f32), std::abs(a4p[0][1]),
                             std::abs(a4p[1][0]), std::abs(a4p[1][1] + p.c * f32)});
  sc.det_a4 = a4p[0][0] * a4p[1][1] - a4p[0][1] * a4p[1][0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      sc.a3[i][j] = a3p[i][j];
      sc.a4[i][j] = a4p[i][j];
    }
  return sc;
}

double check_pnmc(const SurfaceSampler& s, double u, double t, double h) {
  auto unit_mean = [&s, h](double uu, double tt) {
    const FundamentalForms ff = fundamental_forms(s, uu, tt, h);
    const MeanCurvature mc = mean_curvature(ff);
    if (mc.f < 1e-8)
      fail(ErrorKind::ZeroMeanCurvature, "mean curvature too small to normalize");
    return std::pair<Vec5, FundamentalForms>{(1.0 / mc.f) * mc.H, ff};
  };

  const auto [n0, ff0] = unit_mean(u, t);
  const double ca = inner(n0, ff0.n3), cb = inner(n0, ff0.n4);
  Vec5 m0 = ca * ff0.n4 - cb * ff0.n3;
  m0 *= 1.0 / std::sqrt(std::max(ca * ca + cb * cb, 1e-300));

  Vec5 dn_du, dn_dt;
  for (int k = 0; k < 5; ++k) {
    if (k == 2) continue;
    dn_du += kW1[k] * unit_mean(u + (k - 2) * h, t).first;
    dn_dt += kW1[k] * unit_mean(u, t + (k - 2) * h).first;
  }
  dn_du *= 1.0 / h;
  dn_dt *= 1.0 / h;
  return std::max(std::abs(inner(dn_du, m0)), std::abs(inner(dn_dt, m0)));
}

double check_gauss(const FundamentalForms& ff, double f, const profile::ModuliParams& p) {
  const double k_extr = -1.0 + inner(ff.b11, ff.b22) - inner(ff.b12, ff.b12);
  const double target = -1.0 - 3.0 * f * f - p.c * p.c * f * f * f;
  return std::abs(k_extr - target);
}

const char* to_string(ConicClass c) noexcept {
  switch (c) {
    case ConicClass::Parabola: return "Parabola";
    case ConicClass::Circle: return "Circle";
    case ConicClass::Hyperbola: return "Hyperbola";
  }
  return "?";
}

ConicClass expected_class(frame_flow::ConicCase c) noexcept {
  switch (c) {
    case frame_flow::ConicCase::Parabolic: return ConicClass::Parabola;
    case frame_flow::ConicCase::Circular: return ConicClass::Circle;
    case frame_flow::ConicCase::Hyperbolic: return ConicClass::Hyperbola;
  }
  return ConicClass::Parabola;
}

double third_singular_ratio(const std::vector<Vec5>& samples) {
  if (samples.size() < 3)
    fail(ErrorKind::TooFewSamples, "singular value ratio needs at least 3 points");
  Vec5 mean;
  for (const auto& s : samples) mean += s;
  mean *= 1.0 / static_cast<double>(samples.size());

  // Euclidean scatter matrix; its eigenvalues are squared singular values.
  Mat5 a{};
  for (const auto& s : samples) {
    const Vec5 d = s - mean;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) a[i][j] += d[i] * d[j];
  }
  const auto ev = sym_eigenvalues(a);
  const double s1 = std::sqrt(std::max(ev[0], 0.0));
  const double s3 = std::sqrt(std::max(ev[2], 0.0));
  if (s1 <= 0.0) return 0.0;
  return s3 / s1;
}

ConicClassification classify_e2_curve(const std::vector<Vec5>& samples, double t_step,
                                      double null_tol) {
  if (samples.size() < 7)
    fail(ErrorKind::TooFewSamples, "flow-curve classification needs >= 7 samples");
  if (!(t_step > 0.0)) fail(ErrorKind::InvalidArgument, "t_step must be positive");

  const std::size_t mid = samples.size() / 2;
  Vec5 v, a;
  for (int k = 0; k < 5; ++k) {
    v += kW1[k] * samples[mid + k - 2];
    a += kW2[k] * samples[mid + k - 2];
  }
  v *= 1.0 / t_step;
  a *= 1.0 / (t_step * t_step);

  ConicClassification cls;
  cls.planarity_ratio = third_singular_ratio(samples);
  const double qa = inner(a, a);
  const double scale = euclidean_norm(a) * euclidean_norm(a);
  if (std::abs(qa) <= null_tol * std::max(scale, 1e-300)) {
    cls.accel_type = CausalType::Null;
    cls.conic = ConicClass::Parabola;
  } else if (qa > 0.0) {
    cls.accel_type = CausalType::Spacelike;
    cls.conic = ConicClass::Circle;
  } else {
    cls.accel_type = CausalType::Timelike;
    cls.conic = ConicClass::Hyperbola;
  }
  // The fit at stride s carries an h^4 truncation term; combining strides 1
  // and 2 cancels it, leaving h^6. Falls back to the plain fit when the
  // stride-2 stencil does not fit inside the sample window.
  const auto fit_at = [&](long stride) {
    Vec5 vs, as;
    for (int k = 0; k < 5; ++k) {
      const auto idx = static_cast<std::size_t>(static_cast<long>(mid) + (k - 2) * stride);
      vs += kW1[k] * samples[idx];
      as += kW2[k] * samples[idx];
    }
    const double hs = t_step * static_cast<double>(stride);
    vs *= 1.0 / hs;
    as *= 1.0 / (hs * hs);
    return std::sqrt(std::abs(inner(as, as))) / inner(vs, vs);
  };
  if (mid >= 4 && mid + 4 < samples.size())
    cls.fitted_curvature = (16.0 * fit_at(1) - fit_at(2)) / 15.0;
  else
    cls.fitted_curvature = std::sqrt(std::abs(qa)) / inner(v, v);
  return cls;
}

double check_e2f_constant(const surface::SurfaceGrid& grid) {
  const std::size_t nu = grid.params.nu, nt = grid.params.nt;
  if (nu < 5 || nt < 5)
    fail(ErrorKind::TooFewSamples, "flow-constancy check needs nu >= 5 and nt >= 5");
  const double du = grid.u_values[1] - grid.u_values[0];
  const double dt = grid.t_values[1] - grid.t_values[0];
  const double u0 = grid.u_values.front(), t0 = grid.t_values.front();

  // Grid nodes only: the checked data is exactly what was emitted.
  SurfaceSampler node_sampler = [&grid, du, dt, u0, t0, nu, nt](double uu, double tt) {
    const long i = std::lround((uu - u0) / du);
    const long j = std::lround((tt - t0) / dt);
    if (i < 0 || i >= static_cast<long>(nu) || j < 0 || j >= static_cast<long>(nt))
      fail(ErrorKind::StencilOutOfDomain, "grid-node stencil outside the grid");
    return grid.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < nu; ++i) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    for (std::size_t j = 2; j + 2 < nt; ++j) {
      const FundamentalForms ff =
          fundamental_forms(node_sampler, grid.u_values[i], grid.t_values[j], du, dt);
      const double f = mean_curvature(ff).f;
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }
    worst = std::max(worst, fmax - fmin);
  }
  return worst;
}

NonPlanarity directrix_nonplanarity(const frame_flow::DirectrixResult& d) {
  std::vector<Vec5> pts;
  pts.reserve(d.states.size());
  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -fmin, fsum = 0.0;
  for (const auto& s : d.states) {
    pts.push_back(s.position);
    fmin = std::min(fmin, s.f);
    fmax = std::max(fmax, s.f);
    fsum += s.f;
  }
  NonPlanarity np;
  np.sv_ratio = third_singular_ratio(pts);
  const double fmean = fsum / static_cast<double>(d.states.size());
  np.f_variation = (fmax - fmin) / std::max(fmean, 1e-300);
  return np;
}

CheckReport run_checks(const surface::SurfaceGrid& grid, double fd_step) {
  if (!(fd_step > 0.0)) fail(ErrorKind::InvalidArgument, "fd_step must be positive");
  const std::size_t nu = grid.params.nu, nt = grid.params.nt;
  if (nu < 5 || nt < 7)
    fail(ErrorKind::TooFewSamples, "verification needs nu >= 5 and nt >= 7");
  const auto& d = grid.directrix;
  const auto& p = grid.params.moduli;

  CheckReport rep;
  auto push = [&rep](const char* name, double value, double bound, bool less_is_pass) {
    CheckEntry e{name, value, bound, less_is_pass,
                 less_is_pass ? value <= bound : value >= bound};
    rep.all_pass = rep.all_pass && e.pass;
    rep.entries.push_back(std::move(e));
  };

  double membership = 0.0;
  for (const auto& pt : grid.points)
    membership = std::max(membership, std::abs(inner(pt, pt) + 1.0));
  push("hyperboloid", membership, 1e-7, true);

  push("gram_drift", d.max_gram_drift, 1e-6, true);

  double dir_norm = 0.0;
  for (const auto& s : d.states)
    dir_norm = std::max(dir_norm, std::abs(inner(s.position, s.position) + 1.0));
  push("directrix_membership", dir_norm, 1e-8, true);

  push("axis_constraint", frame_flow::constraint_residual(d), 1e-7, true);

  const SurfaceSampler smp = grid.sampler();
  auto interior = [](std::size_t n, std::size_t k) {
    return std::clamp<std::size_t>(k, 2, n - 3);
  };
  std::vector<std::size_t> iu{interior(nu, nu / 4), interior(nu, nu / 2),
                              interior(nu, (3 * nu) / 4)};
  std::vector<std::size_t> jt{interior(nt, nt / 4), interior(nt, nt / 2),
                              interior(nt, (3 * nt) / 4)};
  iu.erase(std::unique(iu.begin(), iu.end()), iu.end());
  jt.erase(std::unique(jt.begin(), jt.end()), jt.end());

  struct ProbeMaxima {
    double mc_match = 0.0, a3r = 0.0, a4r = 0.0, bic = 0.0, pnmc = 0.0,
           gauss = 0.0, det_res = 0.0, b12a = 0.0;
  };
  auto probe_battery = [&](double h) {
    ProbeMaxima m;
    for (std::size_t i : iu) {
      for (std::size_t j : jt) {
        const double u = grid.u_values[i], t = grid.t_values[j];
        const FundamentalForms ff = fundamental_forms(smp, u, t, h);
        const MeanCurvature mc = mean_curvature(ff);
        m.mc_match = std::max(m.mc_match, std::abs(mc.f - d.state_at(u).f));
        const ShapeCheck sc = check_shape_and_biconservative(smp, u, t, h, p);
        m.a3r = std::max(m.a3r, sc.a3_residual);
        m.a4r = std::max(m.a4r, sc.a4_residual);
        m.bic = std::max(m.bic, sc.biconservative_residual);
        m.det_res = std::max(
            m.det_res, std::abs(sc.det_a4 + p.c * p.c * sc.f * sc.f * sc.f));
        m.pnmc = std::max(m.pnmc, check_pnmc(smp, u, t, h));
        m.gauss = std::max(m.gauss, check_gauss(ff, mc.f, p));
        m.b12a = std::max(m.b12a, ff.b12_asymmetry);
      }
    }
    return m;
  };

  ProbeMaxima pm = probe_battery(fd_step);
  // Richardson-style fallback: residuals close to their bound are retried at
  // half the step; a genuine defect stays large while truncation error drops.
  const bool marginal = pm.mc_match > 1e-5 || pm.a3r > 1e-4 || pm.a4r > 1e-4 ||
                        pm.bic > 1e-4 || pm.pnmc > 1e-4 || pm.gauss > 1e-4 ||
                        pm.det_res > 1e-5 || pm.b12a > 1e-9;
  if (marginal) {
    const ProbeMaxima ph = probe_battery(fd_step * 0.5);
    pm.mc_match = std::min(pm.mc_match, ph.mc_match);
    pm.a3r = std::min(pm.a3r, ph.a3r);
    pm.a4r = std::min(pm.a4r, ph.a4r);
    pm.bic = std::min(pm.bic, ph.bic);
    pm.pnmc = std::min(pm.pnmc, ph.pnmc);
    pm.gauss = std::min(pm.gauss, ph.gauss);
    pm.det_res = std::min(pm.det_res, ph.det_res);
    pm.b12a = std::min(pm.b12a, ph.b12a);
  }
  push("mean_curvature_match", pm.mc_match, 1e-4, true);
  push("shape_A3", pm.a3r, 1e-3, true);
  push("shape_A4", pm.a4r, 1e-3, true);
  push("biconservative", pm.bic, 1e-3, true);
  push("pnmc", pm.pnmc, 1e-3, true);
  push("gauss_K", pm.gauss, 1e-3, true);
  push("A4_determinant", pm.det_res, 1e-4, true);
  push("B12_symmetry", pm.b12a, 1e-8, true);

  // Tampered stored points can make the node-stencil mean curvature
  // undefined; that is a failed check on the data, not a verifier crash.
  double e2f_range;
  try {
    e2f_range = check_e2f_constant(grid);
  } catch (const Error&) {
    e2f_range = std::numeric_limits<double>::infinity();
  }
  push("e2f_zero", e2f_range, 1e-5, true);

  std::vector<std::size_t> rows{2, nu / 2, nu - 3};
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  const double dt_step = grid.t_values[1] - grid.t_values[0];
  double planarity = 0.0, fit_res = 0.0;
  double mismatches = 0.0;
  for (std::size_t i : rows) {
    std::vector<Vec5> row;
    row.reserve(nt);
    for (std::size_t j = 0; j < nt; ++j) row.push_back(grid.at(i, j));
    const ConicClassification cls = classify_e2_curve(row, dt_step);
    planarity = std::max(planarity, cls.planarity_ratio);
    if (cls.conic != expected_class(grid.conic)) mismatches += 1.0;
    if (p.C != 0.0) {
      const double kh = kappa_hat_of(d.state_at(grid.u_values[i]).f, p);
      fit_res = std::max(fit_res, std::abs(cls.fitted_curvature - kh));
    }
  }
  push("e2_planarity", planarity, 1e-8, true);
  push("conic_class", mismatches, 0.0, true);
  if (p.C != 0.0) push("conic_curvature_fit", fit_res, 1e-5, true);

  const NonPlanarity np = directrix_nonplanarity(d);
  {
    CheckEntry e{"directrix_nonplanarity", np.sv_ratio, 1e-4, false,
                 np.f_variation < 0.1 || np.sv_ratio >= 1e-4};
    rep.all_pass = rep.all_pass && e.pass;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace bicons::verifier
