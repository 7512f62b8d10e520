#include "bicons/minkowski.hpp"

#include <cmath>

namespace bicons {

double inner(const Vec5& a, const Vec5& b) noexcept {
  return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2] + a.v[3] * b.v[3] -
         a.v[4] * b.v[4];
}

double euclidean_norm(const Vec5& a) noexcept {
  double s = 0.0;
  for (double x : a.v) s += x * x;
  return std::sqrt(s);
}

const char* to_string(CausalType t) noexcept {
  switch (t) {
    case CausalType::Spacelike: return "Spacelike";
    case CausalType::Timelike: return "Timelike";
    case CausalType::Null: return "Null";
  }
  return "?";
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NonPositiveF: return "NonPositiveF";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::Inadmissible: return "Inadmissible";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::DriftExceeded: return "DriftExceeded";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::OutOfSpan: return "OutOfSpan";
    case ErrorKind::InvalidResolution: return "InvalidResolution";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::ZeroMeanCurvature: return "ZeroMeanCurvature";
    case ErrorKind::NegativeNormSquared: return "NegativeNormSquared";
    case ErrorKind::NotOnHyperboloid: return "NotOnHyperboloid";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "?";
}

CausalType causal_type(const Vec5& x, double tol) {
  bool all_small = true;
  for (double c : x.v) {
    if (std::abs(c) > tol) {
      all_small = false;
      break;
    }
  }
  if (all_small) fail(ErrorKind::ZeroVector, "causal_type: zero vector");
  const double q = inner(x, x);
  if (std::abs(q) <= tol) return CausalType::Null;
  return q > 0.0 ? CausalType::Spacelike : CausalType::Timelike;
}

bool on_hyperboloid(const Vec5& x, double tol) noexcept {
  return std::abs(inner(x, x) + 1.0) <= tol && x.v[4] > 0.0;
}

Mat5 gram(const std::array<Vec5, 5>& frame) noexcept {
  Mat5 g{};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) g[i][j] = inner(frame[i], frame[j]);
  return g;
}

double max_gram_deviation(const std::array<Vec5, 5>& frame) noexcept {
  const Mat5 g = gram(frame);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double want = 0.0;
      if (i == j) want = (i == 0) ? -1.0 : 1.0;
      worst = std::max(worst, std::abs(g[i][j] - want));
    }
  }
  return worst;
}

}  // namespace bicons
