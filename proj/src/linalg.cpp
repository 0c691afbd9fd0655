#include "bjkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bjkit/error.hpp"

namespace bjkit {
namespace {

// Zeroes entry (p, q) of the Hermitian matrix a with one complex Jacobi
// rotation J = diag(1, e^{-i phi}) R(c, s): a <- J* a J, v <- v J.
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx e = apq / mag;  // e^{i phi}
  const double app = a(p, p).real(), aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx ec = std::conj(e);

  const std::size_t n = a.rows();
  // columns: col_p <- c col_p - s e^{-i phi} col_q ; col_q <- s col_p + c e^{-i phi} col_q
  for (std::size_t k = 0; k < n; ++k) {
    const cplx xp = a(k, p), xq = a(k, q);
    a(k, p) = c * xp - s * ec * xq;
    a(k, q) = s * xp + c * ec * xq;
  }
  // rows: row_p <- c row_p - s e^{i phi} row_q ; row_q <- s row_p + c e^{i phi} row_q
  kernels::rotate(a.row(p), a.row(q), c, -s * e, s, c * e);
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;
  for (std::size_t k = 0; k < v.rows(); ++k) {
    const cplx xp = v(k, p), xq = v(k, q);
    v(k, p) = c * xp - s * ec * xq;
    v(k, q) = s * xp + c * ec * xq;
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(2.0 * s);
}

}  // namespace

EigResult hermitian_eig(const CMatrix& a_in, double tol) {
  if (!a_in.square()) throw Error(ErrorCode::dimension_mismatch, "hermitian_eig: matrix is not square");
  const std::size_t n = a_in.rows();
  const double scale = a_in.max_abs();
  if (hermitian_deviation(a_in) > tol * scale) {
    throw Error(ErrorCode::not_hermitian, "hermitian_eig: input deviates from its adjoint beyond tolerance");
  }
  CMatrix a = hermitian_part(a_in);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  CMatrix v = CMatrix::identity(n, a_in.field());
  v.set_field(Field::complex);

  const double fro = a.frobenius();
  if (fro > 0.0) {
    int sweep = 0;
    for (; sweep < kIterationCap; ++sweep) {
      const double off = off_diagonal_norm(a);
      if (off <= 1e-15 * fro) break;
      bool rotated = false;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          // entries below this threshold are already at rounding level
          if (std::abs(a(p, q)) <= 1e-18 * fro) continue;
          jacobi_rotate(a, v, p, q);
          rotated = true;
        }
      }
      if (!rotated) break;
    }
    if (sweep == kIterationCap) throw Error(ErrorCode::inconclusive, "hermitian_eig: sweep cap reached");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigResult out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  if (a_in.field() == Field::real && out.vectors.is_real()) out.vectors.set_field(Field::real);
  return out;
}

TopEigen top_eigen(const CMatrix& hermitian) {
  EigResult e = hermitian_eig(hermitian);
  const double next = e.values.size() > 1 ? e.values[1] : e.values[0];
  return {e.values[0], next, e.vectors.column(0)};
}

void orthonormalize_columns(CMatrix& q) {
  const std::size_t m = q.rows(), n = q.cols();
  std::size_t next_unit = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> col = q.column(j);
    const double original = norm2(col);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const std::vector<cplx> qk = q.column(k);
        const cplx r = kernels::dot_conj(qk, col);
        kernels::axpy(-r, qk, col);
      }
    }
    double nrm = norm2(col);
    // dependent column: replace with the next standard basis vector that survives
    while ((nrm <= 1e-10 * std::max(original, 1e-300) || nrm == 0.0) && next_unit < m) {
      col.assign(m, 0.0);
      col[next_unit++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          const std::vector<cplx> qk = q.column(k);
          const cplx r = kernels::dot_conj(qk, col);
          kernels::axpy(-r, qk, col);
        }
      }
      nrm = norm2(col);
      if (nrm > 0.5) break;
    }
    if (!(nrm > 0.0)) throw Error(ErrorCode::invalid_argument, "orthonormalize_columns: more columns than rows");
    for (auto& z : col) z /= nrm;
    q.set_column(j, col);
  }
}

SvdResult svd(const CMatrix& a, double tol) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t k = std::min(m, n);

  // One-sided Jacobi: rotate column pairs of W = A V until they are mutually
  // orthogonal. Small singular values keep full relative accuracy, which the
  // eigenvalues of A*A would not.
  std::vector<std::vector<cplx>> w(n, std::vector<cplx>(m)), v(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }
  const double eps = static_cast<double>(std::max<std::size_t>(m, 1)) * std::numeric_limits<double>::epsilon();
  const double floor = eps * eps * a.frobenius() * a.frobenius();
  int sweep = 0;
  for (; sweep < kIterationCap; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = kernels::sum_sq(w[p]), beta = kernels::sum_sq(w[q]);
        const cplx gamma = kernels::dot_conj(w[p], w[q]);
        const double mag = std::abs(gamma);
        if (mag <= floor || mag <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx ec = std::conj(gamma / mag);
        const double zeta = (beta - alpha) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        // (w_p, w_q) <- (c w_p - s e^{-i phi} w_q, s w_p + c e^{-i phi} w_q)
        kernels::rotate(w[p], w[q], c, -s * ec, s, c * ec);
        kernels::rotate(v[p], v[q], c, -s * ec, s, c * ec);
      }
    }
    if (!rotated) break;
  }
  if (sweep == kIterationCap) throw Error(ErrorCode::inconclusive, "svd: sweep cap reached");

  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = norm2(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

  SvdResult out{std::vector<double>(k), CMatrix(m, m), CMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) out.right.set_column(j, v[order[j]]);
  // phase-fix right vectors: largest-magnitude entry real positive
  std::vector<cplx> phases(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(out.right(i, j)) > std::abs(out.right(arg, j)) * (1.0 + 1e-12)) arg = i;
    phases[j] = std::conj(phase(out.right(arg, j)));
    for (std::size_t i = 0; i < n; ++i) out.right(i, j) *= phases[j];
  }

  const double smax = n > 0 ? sig[order[0]] : 0.0;
  std::size_t filled = 0;
  for (std::size_t j = 0; j < k; ++j) out.values[j] = sig[order[j]];
  for (std::size_t j = 0; j < k; ++j) {
    if (out.values[j] <= tol * smax || out.values[j] == 0.0) break;
    std::vector<cplx> u = scaled(w[order[j]], phases[j] / out.values[j]);
    out.left.set_column(j, u);
    ++filled;
  }
  // complete the left basis
  for (std::size_t j = filled; j < m; ++j) {
    std::vector<cplx> unit(m, 0.0);
    unit[j] = 1.0;
    out.left.set_column(j, unit);
  }
  orthonormalize_columns(out.left);
  if (a.field() == Field::real && out.left.is_real() && out.right.is_real()) {
    out.left.set_field(Field::real);
    out.right.set_field(Field::real);
  }
  return out;
}

double spectral_norm(const CMatrix& a) {
  if (a.empty()) return 0.0;
  // largest eigenvalue of the smaller Gram matrix
  const CMatrix gram = a.rows() < a.cols() ? a * a.adjoint() : a.adjoint() * a;
  EigResult e = hermitian_eig(gram, 1e-8);
  return std::sqrt(std::max(e.values[0], 0.0));
}

double trace_norm(const CMatrix& a) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (double x : svd(a).values) s += x;
  return s;
}

CMatrix solve(const CMatrix& a_in, const CMatrix& b_in) {
  if (!a_in.square() || a_in.rows() != b_in.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "solve: shape mismatch");
  }
  const std::size_t n = a_in.rows();
  CMatrix a = a_in, b = b_in;
  const double scale = a.max_abs();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-14 * scale || scale == 0.0) {
      throw Error(ErrorCode::invalid_argument, "solve: matrix is numerically singular");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(piv, j), b(col, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      kernels::axpy(-f, a.row(col), a.row(r));
      kernels::axpy(-f, b.row(col), b.row(r));
    }
  }
  CMatrix x(n, b.cols());
  for (std::size_t ri = n; ri-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = b(ri, j);
      for (std::size_t c = ri + 1; c < n; ++c) s -= a(ri, c) * x(c, j);
      x(ri, j) = s / a(ri, ri);
    }
  }
  return x;
}

std::vector<double> project_simplex(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += sorted[i];
    const double t = (running - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) tau = t;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

std::vector<double> project_l1_ball_nonneg(std::span<const double> v, double radius) {
  double s = 0.0;
  for (double x : v) s += std::max(x, 0.0);
  std::vector<double> out(v.size());
  if (s <= radius) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i], 0.0);
    return out;
  }
  std::vector<double> scaled_v(v.begin(), v.end());
  for (auto& x : scaled_v) x /= radius;
  out = project_simplex(scaled_v);
  for (auto& x : out) x *= radius;
  return out;
}

}  // namespace bjkit
