#include "bjkit/numrange.hpp"

#include <cmath>

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"
#include "bjkit/planar.hpp"

namespace bjkit {
namespace {

class NumRangeOracle {
 public:
  using Handle = std::vector<cplx>;
  using S = planar::Sample<Handle>;

  explicit NumRangeOracle(const CMatrix& a) : a_(a) {}

  S support(double theta) const {
    const CMatrix h = hermitian_part(a_ * std::polar(1.0, -theta));
    TopEigen top = top_eigen(h);
    S s;
    s.theta = theta;
    s.point = quadratic_form(a_, top.vector);
    s.support = (std::polar(1.0, -theta) * s.point).real();
    s.handle = std::move(top.vector);
    return s;
  }

  // u + t e^{i phi} v with <h, (A - q) h> = 0, where the Rayleigh values of u
  // and v sit on opposite sides of q along one line.
  std::optional<S> realize(const S& a, const S& b, cplx q) const {
    const cplx ap = a.point - q, bp = b.point - q;
    const double scale = std::max(std::abs(a.point), std::abs(b.point));
    const double tiny = 1e-15 * std::max(scale, 1e-300);
    if (std::abs(ap) <= tiny) return a;
    if (std::abs(bp) <= tiny) return b;

    const Handle& u = a.handle;
    const Handle& v = b.handle;
    const cplx w = std::conj(phase(bp));  // w * bp > 0, w * ap < 0
    const double c0 = (w * ap).real();
    const double c2 = (w * bp).real();
    if (c0 > 0.0 || c2 < 0.0) return std::nullopt;

    const std::vector<cplx> au = a_.apply(u), av = a_.apply(v);
    const cplx uv = kernels::dot_conj(u, v);
    const cplx alpha = w * (kernels::dot_conj(u, av) - q * uv);
    const cplx beta = w * (kernels::dot_conj(v, au) - q * std::conj(uv));
    const cplx m = alpha - std::conj(beta);
    const cplx e = std::abs(m) > 0.0 ? std::conj(m) / std::abs(m) : cplx(1.0);
    const double c1 = (e * alpha + std::conj(e) * beta).real();

    std::vector<double> roots;
    if (c2 == 0.0) {
      if (c1 != 0.0) roots.push_back(-c0 / c1);
    } else {
      const double disc = c1 * c1 - 4.0 * c0 * c2;
      if (disc < 0.0) return std::nullopt;
      const double sq = std::sqrt(disc);
      const double qq = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
      if (qq != 0.0) {
        roots.push_back(qq / c2);
        roots.push_back(c0 / qq);
      } else {
        roots.push_back(0.0);
      }
    }
    std::optional<S> best;
    for (double t : roots) {
      Handle h(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) h[i] = u[i] + t * e * v[i];
      const double nh = norm2(h);
      if (!(nh > 0.0) || !std::isfinite(nh)) continue;
      for (auto& z : h) z /= nh;
      S s;
      s.theta = a.theta;
      s.point = quadratic_form(a_, h);
      s.support = (std::polar(1.0, -s.theta) * s.point).real();
      s.handle = std::move(h);
      if (!best || std::abs(s.point - q) < std::abs(best->point - q)) best = std::move(s);
    }
    return best;
  }

 private:
  const CMatrix& a_;
};

}  // namespace

NumRangeResult numrange_zero(const CMatrix& a, double tol) {
  if (!a.square() || a.rows() == 0) throw Error(ErrorCode::dimension_mismatch, "numrange_zero: matrix is not square");
  NumRangeOracle oracle(a);
  planar::Options opt;
  opt.tol = tol;
  const auto r = planar::zero_membership(oracle, opt);

  NumRangeResult out;
  out.evaluations = r.evaluations;
  if (!r.contains) {
    out.contains_zero = false;
    out.separating_angle = planar::wrap_angle(r.min_angle + std::numbers::pi);
    out.boundary_gap = -r.min_support;
    return out;
  }
  out.contains_zero = true;
  out.boundary_gap = r.min_support;
  out.witness_residual = std::abs(r.witness->point);
  if (out.witness_residual > tol) {
    throw Error(ErrorCode::inconclusive,
                "numrange_zero: support function admits 0 but no witness within tolerance was assembled");
  }
  out.witness = r.witness->handle;
  return out;
}

NumRangeResult numrange_zero_real(const CMatrix& a, double tol) {
  if (!a.square() || a.rows() == 0) throw Error(ErrorCode::dimension_mismatch, "numrange_zero_real: matrix is not square");
  if (!a.is_real()) throw Error(ErrorCode::invalid_argument, "numrange_zero_real: matrix has complex entries");
  const EigResult e = hermitian_eig(hermitian_part(a));
  const double hi = e.values.front(), lo = e.values.back();
  NumRangeResult out;
  out.evaluations = 1;
  if (lo > tol) {
    out.separating_angle = 0.0;
    out.boundary_gap = lo;
    return out;
  }
  if (hi < -tol) {
    out.separating_angle = std::numbers::pi;
    out.boundary_gap = -hi;
    return out;
  }
  out.contains_zero = true;
  out.boundary_gap = std::min(hi, -lo);
  // cos^2(t) hi + sin^2(t) lo = 0 on the span of the extreme eigenvectors
  std::vector<cplx> h = e.vectors.column(0);
  if (hi > 0.0 && lo < 0.0) {
    const double c = std::sqrt(-lo / (hi - lo)), s = std::sqrt(hi / (hi - lo));
    const std::vector<cplx> vlo = e.vectors.column(e.values.size() - 1);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = c * h[i] + s * vlo[i];
  } else if (std::abs(lo) < std::abs(hi)) {
    h = e.vectors.column(e.values.size() - 1);
  }
  for (auto& z : h) z = z.real();
  const double nh = norm2(h);
  for (auto& z : h) z /= nh;
  out.witness_residual = std::abs(quadratic_form(a, h));
  if (out.witness_residual > tol) {
    throw Error(ErrorCode::inconclusive, "numrange_zero_real: witness residual above tolerance");
  }
  out.witness = std::move(h);
  return out;
}

}  // namespace bjkit
