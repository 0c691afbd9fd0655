#include "bjkit/ortho.hpp"

#include <cmath>

#include "bjkit/error.hpp"

namespace bjkit {
namespace {

struct Objective {
  const Vec& x;
  const Vec& y;
  mutable std::vector<cplx> buf;
  mutable int evaluations = 0;

  double operator()(cplx lambda) const {
    ++evaluations;
    buf = x.coords;
    kernels::axpy(lambda, y.coords, buf);
    return norm(x.space, buf);
  }
};

struct Min1D {
  double arg;
  double value;
};

// Golden section for a convex function on [a, b], stopping at width <= eps.
template <class F>
Min1D golden(F&& f, double a, double b, double eps) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > eps; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Min1D{c, fc} : Min1D{d, fd};
}

}  // namespace

double bj_objective(const Vec& x, const Vec& y, cplx lambda) {
  if (!(x.space == y.space)) throw Error(ErrorCode::dimension_mismatch, "bj_objective: different spaces");
  return Objective{x, y, {}}(lambda);
}

Verdict bj_margin(const Vec& x, const Vec& y, double tol) {
  if (!(x.space == y.space)) {
    throw Error(ErrorCode::dimension_mismatch,
                "bj_margin: x in " + x.space.describe() + " but y in " + y.space.describe());
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "bj_margin: tol must be positive");
  const double nx = norm(x);
  if (nx == 0.0) throw Error(ErrorCode::invalid_argument, "bj_margin: x = 0");

  Verdict v;
  v.tol = tol;
  v.norm_x = nx;
  const double ny = norm(y);
  if (ny == 0.0) {
    v.orthogonal = true;
    v.evaluations = 0;
    return v;
  }

  const Objective g{x, y, {}};
  const double radius = 2.0 * nx / ny;
  const double eps = 1e-12 * radius;
  double best = nx;
  cplx best_lambda = 0.0;

  if (x.space.field() == Field::real) {
    const Min1D m = golden([&](double s) { return g(s); }, -radius, radius, eps);
    if (m.value < best) {
      best = m.value;
      best_lambda = m.arg;
    }
  } else {
    double inner_arg = 0.0;
    auto inner = [&](double s) {
      const Min1D m = golden([&](double t) { return g(cplx(s, t)); }, -radius, radius, eps);
      inner_arg = m.arg;
      return m.value;
    };
    const Min1D outer = golden(inner, -radius, radius, eps);
    inner(outer.arg);
    if (outer.value < best) {
      best = g(cplx(outer.arg, inner_arg));
      best_lambda = cplx(outer.arg, inner_arg);
      if (best > nx) {
        best = nx;
        best_lambda = 0.0;
      }
    }
  }

  v.margin = std::min(0.0, best - nx);
  v.lambda_star = best_lambda;
  v.evaluations = g.evaluations;
  v.orthogonal = v.margin >= -tol * nx;
  v.borderline = v.margin > -tol * nx && v.margin < -tol * nx / 10.0;
  return v;
}

bool hilbert_coincidence(const Vec& x, const Vec& y, double tol) {
  if (!x.space.is_hilbert() || !(x.space == y.space)) {
    throw Error(ErrorCode::invalid_argument, "hilbert_coincidence needs two vectors of the same l^2 space");
  }
  const double ip = std::abs(kernels::dot_conj(x.coords, y.coords));
  return ip <= tol * norm(x) * norm(y);
}

}  // namespace bjkit
