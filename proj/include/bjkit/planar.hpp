#pragma once

// Zero membership for a compact convex set K in the complex plane that is
// only accessible through a support oracle.
//
// An oracle type provides
//
//   using Handle = ...;                 // whatever realizes a point of K
//   Sample<Handle> support(double theta) const;
//       a point p of K maximizing Re(e^{-i theta} p), with its handle
//   std::optional<Sample<Handle>> realize(const Sample<Handle>& a,
//                                         const Sample<Handle>& b,
//                                         cplx target) const;
//       an element realizing `target`, which lies on the segment
//       [a.point, b.point]; the returned point is recomputed from the handle
//
// 0 is in K iff the support function h(theta) = max Re(e^{-i theta} K) is
// nonnegative everywhere. The minimum of h is located on a uniform angle grid
// and refined by golden section; h is Lipschitz with constant max|K|, so the
// grid minimum is within (pi / grid) * max|K| of the true one before
// refinement. When 0 is in K a witness is assembled from boundary points:
//   * boundary case: 0 sits on the supporting line at the minimizing angle,
//     and the chord between the one-sided boundary points at theta +- delta
//     passes within O(delta^2) of it;
//   * interior case: the line through the boundary point p(theta*) and 0
//     leaves K at a second boundary point q, found by bisection on the signed
//     distance of p(theta) to that line; 0 lies on [p(theta*), q].
// A few Gilbert steps polish whatever candidate is best.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace bjkit::planar {

using cplx = std::complex<double>;

template <class Handle>
struct Sample {
  double theta = 0.0;
  double support = 0.0;  // Re(e^{-i theta} point)
  cplx point;
  Handle handle;
};

struct Options {
  int grid = 720;
  double tol = 1e-8;  // 0 counts as a member iff min support >= -tol
  int golden_iterations = 80;
  int bisection_iterations = 60;
  int polish_iterations = 100;
};

template <class Handle>
struct Result {
  bool contains = false;
  double min_support = 0.0;
  double min_angle = 0.0;  // in [0, 2 pi)
  double scale = 0.0;      // max |p| over the grid
  std::optional<Sample<Handle>> witness;
  int evaluations = 0;
};

inline double wrap_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

// Point of the segment [a, b] closest to the origin.
inline cplx closest_to_origin(cplx a, cplx b) {
  const cplx d = b - a;
  const double dd = std::norm(d);
  if (dd == 0.0) return a;
  const double t = std::clamp(-(std::conj(d) * a).real() / dd, 0.0, 1.0);
  return a + t * d;
}

template <class Oracle>
Result<typename Oracle::Handle> zero_membership(const Oracle& oracle, const Options& opt) {
  using H = typename Oracle::Handle;
  using S = Sample<H>;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int n = std::max(opt.grid, 8);
  const double step = two_pi / n;

  Result<H> res;
  auto eval = [&](double theta) {
    ++res.evaluations;
    return oracle.support(theta);
  };

  std::vector<S> grid;
  grid.reserve(n);
  for (int k = 0; k < n; ++k) grid.push_back(eval(step * k));

  double scale = 0.0;
  std::size_t kmin = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    scale = std::max(scale, std::abs(grid[k].point));
    if (grid[k].support < grid[kmin].support) kmin = k;
  }
  res.scale = scale;

  // golden section on the bracket around the grid minimum
  S best = grid[kmin];
  {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best.theta - step, b = best.theta + step;
    double c = b - g * (b - a), d = a + g * (b - a);
    S fc = eval(c), fd = eval(d);
    for (int it = 0; it < opt.golden_iterations && b - a > 1e-15; ++it) {
      if (fc.support < fd.support) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = eval(d);
      }
    }
    if (fc.support < best.support) best = fc;
    if (fd.support < best.support) best = fd;
  }
  res.min_support = best.support;
  res.min_angle = wrap_angle(best.theta);
  if (best.support < -opt.tol) {
    res.contains = false;
    return res;
  }
  res.contains = true;

  S witness = best;
  auto consider = [&](const std::optional<S>& s) {
    if (s && std::abs(s->point) < std::abs(witness.point)) witness = *s;
  };
  for (const S& s : grid) consider(s);
  const double target = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  auto done = [&] { return std::abs(witness.point) <= target; };

  // Boundary case. h'(theta) = Im(e^{-i theta} p(theta)) changes sign at the
  // minimizing angle; bisection pins that angle to rounding level.
  auto slope = [](const S& s) { return (std::polar(1.0, -s.theta) * s.point).imag(); };
  S center = best;
  if (!done()) {
    S lo = eval(best.theta - step), hi = eval(best.theta + step);
    if (slope(lo) <= 0.0 && slope(hi) >= 0.0) {
      for (int it = 0; it < opt.bisection_iterations; ++it) {
        S mid = eval(0.5 * (lo.theta + hi.theta));
        (slope(mid) < 0.0 ? lo : hi) = mid;
      }
      center = eval(0.5 * (lo.theta + hi.theta));
      consider(lo);
      consider(hi);
      consider(center);
    }
    for (double delta : {1e-4, 1e-6, 1e-8}) {
      if (done()) break;
      const S l = eval(center.theta - delta), r = eval(center.theta + delta);
      consider(oracle.realize(l, r, closest_to_origin(l.point, r.point)));
    }
  }

  // Interior case: walk the line from p0 = p(theta*) through 0.
  const S& p0 = center;
  const double r0 = std::abs(p0.point);
  if (!done() && r0 > target) {
    const cplx dir = -p0.point / r0;
    auto offset = [&](const S& s) { return (std::conj(dir) * (s.point - p0.point)).imag(); };
    auto position = [&](const S& s) { return (std::conj(dir) * (s.point - p0.point)).real(); };
    int best_k = -1;
    double best_pos = -1.0;
    for (int k = 0; k < n; ++k) {
      const S& s0 = grid[k];
      const S& s1 = grid[(k + 1) % n];
      const double o0 = offset(s0), o1 = offset(s1);
      if ((o0 > 0.0 && o1 > 0.0) || (o0 < 0.0 && o1 < 0.0) || o0 == o1) continue;
      const double w = o0 / (o0 - o1);
      const double pos = position(s0) + w * (position(s1) - position(s0));
      if (pos > best_pos) {
        best_pos = pos;
        best_k = k;
      }
    }
    if (best_k >= 0 && best_pos > r0) {
      S lo = grid[best_k];
      S hi = eval(lo.theta + step);
      const bool lo_positive = offset(lo) > 0.0;
      for (int it = 0; it < opt.bisection_iterations; ++it) {
        S mid = eval(0.5 * (lo.theta + hi.theta));
        ((offset(mid) > 0.0) == lo_positive ? lo : hi) = mid;
      }
      const double olo = offset(lo), ohi = offset(hi);
      const cplx q = olo == ohi ? lo.point : lo.point + (hi.point - lo.point) * (olo / (olo - ohi));
      if (auto far = oracle.realize(lo, hi, q)) {
        consider(oracle.realize(p0, *far, closest_to_origin(p0.point, far->point)));
      }
    }
  }

  // Gilbert steps toward the origin.
  for (int it = 0; it < opt.polish_iterations && !done(); ++it) {
    const cplx z = witness.point;
    const S s = eval(std::arg(-z));
    const cplx q = closest_to_origin(z, s.point);
    if (std::abs(q) >= std::abs(z) * (1.0 - 1e-12)) break;
    auto next = oracle.realize(witness, s, q);
    if (!next || std::abs(next->point) >= std::abs(z)) break;
    witness = *next;
  }

  res.witness = witness;
  return res;
}

}  // namespace bjkit::planar
