#include "bjkit/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"

namespace bjkit {
namespace {

bool is_l1(const SpaceSpec& s) { return s.is_lp() && s.p() == 1.0; }

void consider(FormNorm& r, const CMatrix& m, std::vector<cplx> a, std::vector<cplx> b) {
  const double v = std::abs(bilinear(m, a, b));
  if (v > r.lower || r.a.empty()) {
    r.lower = v;
    r.a = std::move(a);
    r.b = std::move(b);
  }
}

// max over a in the row ball with b fixed, and vice versa
std::vector<cplx> best_a(const CMatrix& m, const SpaceSpec& rows, std::span<const cplx> b) {
  return norming_vector(rows, conj(m.apply(b)));
}
std::vector<cplx> best_b(const CMatrix& mt, const SpaceSpec& cols, std::span<const cplx> a) {
  return norming_vector(cols, conj(mt.apply(a)));
}

void ascend(FormNorm& r, const CMatrix& m, const CMatrix& mt, const SpaceSpec& rows, const SpaceSpec& cols,
            std::vector<cplx> b) {
  double prev = -1.0;
  std::vector<cplx> a;
  for (int it = 0; it < 200; ++it) {
    a = best_a(m, rows, b);
    b = best_b(mt, cols, a);
    const double v = std::abs(bilinear(m, a, b));
    if (v <= prev * (1.0 + 1e-15)) break;
    prev = v;
  }
  consider(r, m, std::move(a), std::move(b));
}

}  // namespace

cplx bilinear(const CMatrix& m, std::span<const cplx> a, std::span<const cplx> b) {
  return kernels::dot(a, m.apply(b));
}

cplx sesquilinear(const CMatrix& g, std::span<const cplx> u, std::span<const cplx> v) {
  return kernels::dot_conj(v, g.apply(u));
}

FormNorm form_norm(const CMatrix& m, const SpaceSpec& rows, const SpaceSpec& cols, int restarts,
                   std::uint64_t seed) {
  if (m.rows() != rows.dim() || m.cols() != cols.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "form_norm: matrix shape does not match the spaces");
  }
  if ((rows.field() == Field::real || cols.field() == Field::real) && !m.is_real()) {
    throw Error(ErrorCode::invalid_argument, "form_norm: complex form on a real space");
  }
  FormNorm r;
  const CMatrix mt = m.transpose();

  if (is_l1(rows) || is_l1(cols)) {
    // sup over the l^1 ball is attained at +-e_i
    const bool by_rows = is_l1(rows);
    const SpaceSpec& other = by_rows ? cols : rows;
    const CMatrix& src = by_rows ? m : mt;
    for (std::size_t i = 0; i < src.rows(); ++i) {
      std::vector<cplx> e(src.rows());
      e[i] = 1.0;
      std::vector<cplx> w = norming_vector(other, conj(src.row(i)));
      if (by_rows) consider(r, m, std::move(e), std::move(w));
      else consider(r, m, std::move(w), std::move(e));
    }
    r.exact = true;
    r.upper = r.lower;
    r.method = "l1-slices";
    return r;
  }

  if (rows.is_hilbert() && cols.is_hilbert()) {
    const SvdResult d = svd(m);
    if (!d.values.empty()) {
      consider(r, m, conj(d.left.column(0)), d.right.column(0));
    } else {
      r.a.assign(rows.dim(), 0.0);
      r.b.assign(cols.dim(), 0.0);
    }
    r.exact = true;
    r.upper = d.values.empty() ? 0.0 : d.values[0];
    r.method = "spectral";
    return r;
  }

  {
    auto er = real_extreme_points(rows, 1u << 14);
    auto ec = real_extreme_points(cols, 1u << 14);
    if (er || ec) {
      const bool use_rows = er && (!ec || er->size() <= ec->size());
      if (use_rows) {
        for (auto& a : *er) {
          auto b = best_b(mt, cols, a);
          consider(r, m, std::move(a), std::move(b));
        }
      } else {
        for (auto& b : *ec) {
          auto a = best_a(m, rows, b);
          consider(r, m, std::move(a), std::move(b));
        }
      }
      r.exact = true;
      r.upper = r.lower;
      r.method = "extreme-points";
      return r;
    }
  }

  // certified upper bound from the singular value expansion
  const SvdResult d = svd(m);
  double upper = 0.0;
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    if (d.values[k] == 0.0) continue;
    upper += d.values[k] * dual_norm(rows, d.left.column(k)) * dual_norm(cols, d.right.column(k));
  }
  r.upper = upper;
  r.method = "ascent";

  if (!d.values.empty()) {
    ascend(r, m, mt, rows, cols, d.right.column(0));
    if (cols.field() == Field::real) {
      std::vector<cplx> b = d.right.column(0);
      for (auto& z : b) z = z.real();
      if (norm(cols, b) > 0.0) ascend(r, m, mt, rows, cols, scaled(b, 1.0 / norm(cols, b)));
    }
  }
  for (std::size_t j = 0; j < std::min<std::size_t>(cols.dim(), 16); ++j) {
    std::vector<cplx> e(cols.dim());
    e[j] = 1.0;
    ascend(r, m, mt, rows, cols, scaled(e, 1.0 / norm(cols, e)));
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < restarts; ++k) ascend(r, m, mt, rows, cols, random_unit_vector(cols, rng));

  if (upper <= r.lower * (1.0 + 1e-12)) {
    r.exact = true;
    r.upper = std::max(upper, r.lower);
  }
  return r;
}

FormNorm sesquilinear_norm(const CMatrix& g, const SpaceSpec& space, int restarts, std::uint64_t seed) {
  // |v* G u| = |conj(v)^T G u| and every unit ball here is closed under
  // entrywise conjugation.
  FormNorm r = form_norm(g, space, space, restarts, seed);
  std::vector<cplx> u = std::move(r.b), v = conj(r.a);
  r.a = std::move(u);
  r.b = std::move(v);
  return r;
}

}  // namespace bjkit
