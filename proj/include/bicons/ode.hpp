#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "bicons/error.hpp"

namespace bicons::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(double a, const State<N>& x, const State<N>& y) {
  State<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a * x[i] + y[i];
  return r;
}

// One accepted integration node: value plus first and second derivative of the
// exact solution through it, as supplied by the right-hand sides.
template <std::size_t N>
struct Node {
  double u = 0.0;
  State<N> y{};
  State<N> dy{};
  State<N> ddy{};
};

struct Options {
  double tol = 1e-10;    // used for both absolute and relative error weights
  double h_max = 0.05;   // hard cap on the step size
  double h_init = 0.01;  // first attempted step (clamped to h_max and the span)
};

template <std::size_t N>
struct IntegrationResult {
  std::vector<Node<N>> nodes;  // in sweep order, starting at u0
  bool halted = false;         // stop predicate fired before reaching u1
};

namespace detail {

// Quintic Hermite cardinal basis on [0,1]: matches value, first and second
// derivative at both ends, so a chain of segments built from C2 node data is
// globally C2.
inline void quintic_basis(double s, double out[6]) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  out[0] = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  out[1] = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  out[2] = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
  out[3] = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  out[4] = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  out[5] = 0.5 * (s3 - 2.0 * s4 + s5);
}

}  // namespace detail

// Piecewise-quintic interpolant through integration nodes ordered by
// increasing u. Evaluation outside the covered span raises OutOfSpan.
template <std::size_t N>
class DenseTrajectory {
 public:
  DenseTrajectory() = default;

  explicit DenseTrajectory(std::vector<Node<N>> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) fail(ErrorKind::InvalidArgument, "dense trajectory: no nodes");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      if (!(nodes_[i].u > nodes_[i - 1].u))
        fail(ErrorKind::InvalidArgument, "dense trajectory: nodes not increasing");
    }
  }

  double u_min() const { return nodes_.front().u; }
  double u_max() const { return nodes_.back().u; }
  const std::vector<Node<N>>& nodes() const { return nodes_; }

  State<N> value(double u) const {
    const double lo = u_min(), hi = u_max();
    const double fuzz = 1e-12 * std::max(1.0, hi - lo);
    if (u < lo - fuzz || u > hi + fuzz)
      fail(ErrorKind::OutOfSpan, "dense trajectory: query outside covered span");
    u = std::clamp(u, lo, hi);
    if (nodes_.size() == 1) return nodes_.front().y;

    // Rightmost node with node.u <= u; the segment [k, k+1] contains u.
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u,
                               [](double a, const Node<N>& n) { return a < n.u; });
    std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
    k = (k == 0) ? 0 : k - 1;
    if (k + 1 >= nodes_.size()) k = nodes_.size() - 2;

    const Node<N>& a = nodes_[k];
    const Node<N>& b = nodes_[k + 1];
    const double L = b.u - a.u;
    const double s = (u - a.u) / L;
    double w[6];
    detail::quintic_basis(s, w);
    State<N> r;
    for (std::size_t i = 0; i < N; ++i) {
      r[i] = w[0] * a.y[i] + w[1] * L * a.dy[i] + w[2] * L * L * a.ddy[i] +
             w[3] * b.y[i] + w[4] * L * b.dy[i] + w[5] * L * L * b.ddy[i];
    }
    return r;
  }

 private:
  std::vector<Node<N>> nodes_;
};

// Dormand-Prince 5(4) with FSAL and a standard step controller. rhs supplies
// y', rhs2 supplies y'' (used only for the dense-output nodes), stop is
// checked at every accepted node and halts the sweep when it returns true.
// u1 may be smaller than u0; nodes then come out in decreasing order.
template <std::size_t N, class Rhs, class Rhs2, class Stop>
IntegrationResult<N> integrate(Rhs&& rhs, Rhs2&& rhs2, const State<N>& y0, double u0,
                               double u1, const Options& opt, Stop&& stop) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  IntegrationResult<N> res;
  State<N> y = y0;
  double u = u0;
  res.nodes.push_back({u, y, rhs(u, y), rhs2(u, y)});
  if (u0 == u1) return res;
  if (stop(u, y)) {
    res.halted = true;
    return res;
  }

  const double dir = (u1 > u0) ? 1.0 : -1.0;
  double h = dir * std::min({opt.h_max, opt.h_init, std::abs(u1 - u0)});
  State<N> k1 = res.nodes.front().dy;
  std::size_t steps = 0;

  while (dir * (u1 - u) > 0.0) {
    if (++steps > 1000000)
      fail(ErrorKind::StepFailure, "integrate: step budget exhausted");
    if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u)))
      fail(ErrorKind::StepFailure, "integrate: step size underflow");
    if (dir * (u + h - u1) > 0.0) h = u1 - u;

    State<N> t;
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    const State<N> k2 = rhs(u + c2 * h, t);
    for (std::size_t i = 0; i < N; ++i)
      t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State<N> k3 = rhs(u + c3 * h, t);
    for (std::size_t i = 0; i < N; ++i)
      t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State<N> k4 = rhs(u + c4 * h, t);
    for (std::size_t i = 0; i < N; ++i)
      t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State<N> k5 = rhs(u + c5 * h, t);
    for (std::size_t i = 0; i < N; ++i)
      t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i]);
    const State<N> k6 = rhs(u + h, t);
    State<N> ynew;
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    const State<N> k7 = rhs(u + h, ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double d = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double q = d / sc;
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0) {
      u += h;
      y = ynew;
      k1 = k7;  // first-same-as-last
      res.nodes.push_back({u, y, k7, rhs2(u, y)});
      if (stop(u, y)) {
        res.halted = true;
        break;
      }
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
    h *= factor;
    if (std::abs(h) > opt.h_max) h = dir * opt.h_max;
  }
  return res;
}

template <std::size_t N, class Rhs, class Rhs2>
IntegrationResult<N> integrate(Rhs&& rhs, Rhs2&& rhs2, const State<N>& y0, double u0,
                               double u1, const Options& opt) {
  return integrate<N>(std::forward<Rhs>(rhs), std::forward<Rhs2>(rhs2), y0, u0, u1,
                      opt, [](double, const State<N>&) { return false; });
}

// Builds the interpolant for a completed sweep; a decreasing node sequence
// (backward sweep) is reversed first.
template <std::size_t N>
DenseTrajectory<N> make_dense(std::vector<Node<N>> nodes) {
  if (nodes.size() >= 2 && nodes.front().u > nodes.back().u)
    std::reverse(nodes.begin(), nodes.end());
  return DenseTrajectory<N>(std::move(nodes));
}

// Merges a backward sweep from some origin with a forward sweep from the same
// origin into one trajectory; both must start at the shared origin node.
template <std::size_t N>
DenseTrajectory<N> merge_sweeps(const std::vector<Node<N>>& backward,
                                const std::vector<Node<N>>& forward) {
  std::vector<Node<N>> all(backward.rbegin(), backward.rend());
  if (!all.empty() && !forward.empty()) all.pop_back();  // shared origin
  all.insert(all.end(), forward.begin(), forward.end());
  return DenseTrajectory<N>(std::move(all));
}

}  // namespace bicons::ode
