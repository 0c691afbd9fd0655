#include "bjkit/ptp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bjkit/error.hpp"
#include "bjkit/forms.hpp"
#include "bjkit/linalg.hpp"

namespace bjkit {
namespace {

constexpr std::size_t kMaxFactorDim = 4;

std::vector<cplx> unit(std::size_t n, std::size_t i) {
  std::vector<cplx> e(n);
  e[i] = 1.0;
  return e;
}

CMatrix sum_of_terms(std::size_t m, std::size_t n, const std::vector<Term>& d) {
  CMatrix s(m, n);
  for (const Term& t : d) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) s(i, j) += t.x[i] * t.y[j];
    }
  }
  return s;
}

// Completes a near-decomposition to an exact one by adding the residual as
// row slices.
std::vector<Term> close_up(const TensorElem& u, std::vector<Term> d) {
  const std::size_t m = u.coeff.rows(), n = u.coeff.cols();
  const CMatrix r = u.coeff - sum_of_terms(m, n, d);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cplx> row(r.row(i).begin(), r.row(i).end());
    if (kernels::max_abs(row) > 0.0) d.push_back({unit(m, i), std::move(row)});
  }
  return d;
}

// Minimizer of sum_k c_k |z_k|_2^2 subject to X Z = U (z_k the rows of Z).
CMatrix weighted_min_norm(const CMatrix& x, std::span<const double> c, const CMatrix& u) {
  const std::size_t m = x.rows(), k = x.cols();
  CMatrix xc = x;  // X C^{-1}
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) xc(i, j) /= c[j];
  }
  CMatrix gram = xc * x.adjoint();
  double tr = 0.0;
  for (std::size_t i = 0; i < m; ++i) tr += gram(i, i).real();
  for (std::size_t i = 0; i < m; ++i) gram(i, i) += 1e-13 * std::max(tr, 1e-300);
  return xc.adjoint() * solve(gram, u);
}

void rebalance(std::vector<Term>& d, const TensorElem& u) {
  for (Term& t : d) {
    const double nx = norm(u.left, t.x), ny = norm(u.right, t.y);
    if (nx == 0.0 || ny == 0.0) continue;
    const double s = std::sqrt(nx / ny);
    for (auto& z : t.x) z /= s;
    for (auto& z : t.y) z *= s;
  }
}

std::vector<Term> from_factors(const CMatrix& x, const CMatrix& zy) {
  std::vector<Term> d;
  for (std::size_t k = 0; k < x.cols(); ++k) {
    Term t{x.column(k), {zy.row(k).begin(), zy.row(k).end()}};
    if (kernels::max_abs(t.x) == 0.0 || kernels::max_abs(t.y) == 0.0) continue;
    d.push_back(std::move(t));
  }
  return d;
}

std::size_t numerical_rank(const CMatrix& a) {
  const SvdResult d = svd(a);
  if (d.values.empty() || d.values[0] == 0.0) return 0;
  std::size_t r = 0;
  for (double s : d.values) r += s > 1e-12 * d.values[0];
  return r;
}

// Certified upper bound on the form norm of M over the two factor balls.
double certified_form_norm(const TensorElem& u, const CMatrix& mform, int restarts, std::uint64_t seed) {
  const FormNorm fn = form_norm(mform, u.left, u.right, restarts, seed);
  return fn.exact ? std::max(fn.lower, fn.upper.value_or(fn.lower)) : fn.upper.value_or(0.0);
}

CMatrix realify(CMatrix m) {
  for (auto& z : m.data()) z = z.real();
  m.set_field(Field::real);
  return m;
}

}  // namespace

TensorElem::TensorElem(SpaceSpec l, SpaceSpec r, CMatrix c) : left(std::move(l)), right(std::move(r)), coeff(std::move(c)) {
  if (coeff.rows() != left.dim() || coeff.cols() != right.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "tensor coefficients must be dim(left) x dim(right)");
  }
  if (left.field() != right.field()) throw Error(ErrorCode::invalid_argument, "tensor factors over different fields");
  if (left.field() == Field::real && !coeff.is_real()) {
    throw Error(ErrorCode::invalid_argument, "complex coefficients for real factors");
  }
  if (left.dim() > kMaxFactorDim || right.dim() > kMaxFactorDim) {
    throw Error(ErrorCode::invalid_argument, "tensor factors are limited to dimension 4");
  }
  if (left.field() == Field::real) coeff.set_field(Field::real);
}

double decomposition_cost(const TensorElem& u, const std::vector<Term>& d) {
  double s = 0.0;
  for (const Term& t : d) s += norm(u.left, t.x) * norm(u.right, t.y);
  return s;
}

double decomposition_error(const TensorElem& u, const std::vector<Term>& d) {
  for (const Term& t : d) {
    if (t.x.size() != u.left.dim() || t.y.size() != u.right.dim()) {
      throw Error(ErrorCode::dimension_mismatch, "decomposition term does not match the factors");
    }
  }
  return (u.coeff - sum_of_terms(u.coeff.rows(), u.coeff.cols(), d)).max_abs();
}

PiUpper pi_upper(const TensorElem& u, int rank_cap, int restarts, std::uint64_t seed) {
  const std::size_t m = u.coeff.rows(), n = u.coeff.cols();
  const std::size_t rank = numerical_rank(u.coeff);
  if (rank_cap < 0 || static_cast<std::size_t>(rank_cap) < rank) {
    throw Error(ErrorCode::invalid_argument, "rank_cap " + std::to_string(rank_cap) + " is below the rank " +
                                                 std::to_string(rank) + " of the tensor");
  }
  PiUpper best;
  best.upper = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<Term> d, const char* method) {
    const double c = decomposition_cost(u, d);
    if (c < best.upper) {
      best.upper = c;
      best.decomposition = std::move(d);
      best.method = method;
    }
  };
  if (rank == 0) {
    best.upper = 0.0;
    best.method = "svd";
    return best;
  }
  const bool real = u.left.field() == Field::real;

  // singular value decomposition: U = sum sigma_k w_k conj(v_k)^T
  const SvdResult s = svd(u.coeff);
  {
    std::vector<Term> d;
    for (std::size_t k = 0; k < rank; ++k) {
      Term t{scaled(s.left.column(k), s.values[k]), conj(s.right.column(k))};
      if (real) {
        for (auto& z : t.x) z = z.real();
        for (auto& z : t.y) z = z.real();
      }
      d.push_back(std::move(t));
    }
    consider(close_up(u, std::move(d)), "svd");
  }
  {
    std::vector<Term> d;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<cplx> row(u.coeff.row(i).begin(), u.coeff.row(i).end());
      if (kernels::max_abs(row) > 0.0) d.push_back({unit(m, i), std::move(row)});
    }
    consider(std::move(d), "rows");
  }
  {
    std::vector<Term> d;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cplx> col = u.coeff.column(j);
      if (kernels::max_abs(col) > 0.0) d.push_back({std::move(col), unit(n, j)});
    }
    consider(std::move(d), "columns");
  }

  // alternating reweighted least squares over rank_cap terms
  const std::size_t k = std::max<std::size_t>(static_cast<std::size_t>(rank_cap), 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const CMatrix ut = u.coeff.transpose();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    CMatrix x(m, k);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (r == 0 && j < rank) {
          x(i, j) = s.left(i, j) * std::sqrt(s.values[j]);
        } else {
          x(i, j) = real ? cplx(gauss(rng), 0.0) : cplx(gauss(rng), gauss(rng));
          if (r == 0) x(i, j) *= 1e-3 * std::sqrt(s.values[0]);
        }
        if (real) x(i, j) = x(i, j).real();
      }
    }
    std::vector<double> c(k, 1.0);
    std::vector<Term> d;
    for (int it = 0; it < 100; ++it) {
      CMatrix zy;
      try {
        zy = weighted_min_norm(x, c, u.coeff);
      } catch (const Error&) {
        break;
      }
      if (real) zy = realify(zy);
      d = from_factors(x, zy);
      rebalance(d, u);
      consider(close_up(u, d), "alternating");
      if (d.empty()) break;

      // swap roles: U^T = Y X^T
      const std::size_t kk = d.size();
      CMatrix y(n, kk);
      std::vector<double> cx(kk);
      for (std::size_t j = 0; j < kk; ++j) {
        y.set_column(j, d[j].y);
        cx[j] = std::max(norm(u.right, d[j].y), 1e-300) / std::max(norm(u.left, d[j].x), 1e-300);
      }
      CMatrix zx;
      try {
        zx = weighted_min_norm(y, cx, ut);
      } catch (const Error&) {
        break;
      }
      if (real) zx = realify(zx);
      std::vector<Term> e = from_factors(y, zx);
      for (Term& t : e) std::swap(t.x, t.y);
      rebalance(e, u);
      consider(close_up(u, e), "alternating");
      if (e.empty()) break;

      x = CMatrix(m, e.size());
      c.assign(e.size(), 1.0);
      for (std::size_t j = 0; j < e.size(); ++j) {
        x.set_column(j, e[j].x);
        c[j] = std::max(norm(u.left, e[j].x), 1e-300) / std::max(norm(u.right, e[j].y), 1e-300);
      }
    }
  }
  return best;
}

PiLower pi_lower(const TensorElem& u, int restarts, std::uint64_t seed) {
  const std::size_t m = u.coeff.rows(), n = u.coeff.cols();
  const bool real = u.left.field() == Field::real;
  PiLower best;
  best.form = CMatrix(m, n, real ? Field::real : Field::complex);
  if (u.coeff.max_abs() == 0.0) {
    best.method = "zero";
    return best;
  }
  const int fr = std::max(restarts, 4);
  auto consider = [&](CMatrix mform, const char* method) {
    if (real) mform = realify(std::move(mform));
    const cplx v = kernels::dot(mform.data(), u.coeff.data());
    if (v == 0.0) return;
    const double bound = certified_form_norm(u, mform, fr, seed);
    if (!(bound > 0.0) || std::abs(v) / bound <= best.lower) return;
    best.lower = std::abs(v) / bound;
    // scaled so that |M| <= 1 and <M, U> = lower
    best.form = mform * (std::conj(phase(v)) / bound);
    if (real) best.form = realify(std::move(best.form));
    best.method = method;
  };

  const SvdResult s = svd(u.coeff);
  {
    std::vector<cplx> w = s.left.column(0), v = conj(s.right.column(0));
    if (real) {
      for (auto& z : w) z = z.real();
      for (auto& z : v) z = z.real();
    }
    if (norm(u.left, w) > 0.0 && norm(u.right, v) > 0.0) {
      const std::vector<cplx> f = norming_functional(Vec(u.left, w)).coords;
      const std::vector<cplx> g = norming_functional(Vec(u.right, v)).coords;
      CMatrix mform(m, n);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) mform(i, j) = std::conj(f[i] * g[j]);
      }
      consider(std::move(mform), "rank-one");
    }
  }
  {
    CMatrix mform(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<cplx> row(u.coeff.row(i).begin(), u.coeff.row(i).end());
      if (kernels::max_abs(row) == 0.0) continue;
      const std::vector<cplx> g = norming_functional(Vec(u.right, row)).coords;
      for (std::size_t j = 0; j < n; ++j) mform(i, j) = std::conj(g[j]);
    }
    consider(std::move(mform), "rows");
  }
  {
    CMatrix mform(m, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cplx> col = u.coeff.column(j);
      if (kernels::max_abs(col) == 0.0) continue;
      const std::vector<cplx> f = norming_functional(Vec(u.left, col)).coords;
      for (std::size_t i = 0; i < m; ++i) mform(i, j) = std::conj(f[i]);
    }
    consider(std::move(mform), "columns");
  }
  {
    // conj(W V*) pairs with U to the trace norm
    CMatrix polar(m, n);
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
      if (s.values[k] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) polar(i, j) += std::conj(s.left(i, k) * std::conj(s.right(j, k)));
      }
    }
    consider(std::move(polar), "polar");
  }

  // projected ascent on <M, U>: step toward conj(U), renormalize every 10 steps
  {
    CMatrix mform = best.form;
    const CMatrix dir = u.coeff.conj() * (1.0 / u.coeff.frobenius());
    for (int step = 1; step <= 500; ++step) {
      const cplx v = kernels::dot(mform.data(), u.coeff.data());
      // keep <M, U> real positive so the step direction is an ascent
      if (v != 0.0) mform *= std::conj(phase(v));
      mform += dir * (0.05 * std::max(mform.frobenius(), 1e-300));
      if (step % 10 == 0) {
        const FormNorm fn = form_norm(real ? realify(mform) : mform, u.left, u.right, 2, seed + step);
        if (fn.lower > 0.0) mform *= 1.0 / fn.lower;
        if (step % 50 == 0) consider(mform, "ascent");
      }
    }
  }
  return best;
}

PiBounds pi_bounds(const TensorElem& u, int rank_cap, int restarts, std::uint64_t seed) {
  PiUpper up = pi_upper(u, rank_cap, restarts, seed);
  PiLower lo = pi_lower(u, restarts, seed);
  PiBounds b;
  b.upper = up.upper;
  b.decomposition = std::move(up.decomposition);
  b.upper_method = std::move(up.method);
  b.lower = lo.lower;
  b.dual_form = std::move(lo.form);
  b.lower_method = std::move(lo.method);
  return b;
}

cplx lift_apply(const CMatrix& b, const std::vector<Term>& d) {
  cplx s = 0.0;
  for (const Term& t : d) {
    if (t.x.size() != b.rows() || t.y.size() != b.cols()) {
      throw Error(ErrorCode::dimension_mismatch, "lift_apply: term shape does not match the form");
    }
    s += bilinear(b, t.x, t.y);
  }
  return s;
}

}  // namespace bjkit
