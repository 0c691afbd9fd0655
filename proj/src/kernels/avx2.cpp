#include "bjkit/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

// Compiled with -mavx2 -mfma. One __m256d holds two complex<double> values
// laid out as [re0, im0, re1, im1].

namespace bjkit::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// lanes (even - odd) summed: v0 - v1 + v2 - v3
inline double hsum_alternating(__m256d v) {
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  return hsum(_mm256_mul_pd(v, sign));
}

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// alpha * v for two packed complex values.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(ar, v), _mm256_mul_pd(ai, swapped));
}

double sum_abs_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(dp(a + i));
    const __m256d v1 = _mm256_loadu_pd(dp(a + i + 2));
    const __m256d m = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(m));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

double sum_sq_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(dp(a + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    s += re * re + im * im;
  }
  return s;
}

double max_abs_avx2(const cplx* a, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(dp(a + i));
    const __m256d v1 = _mm256_loadu_pd(dp(a + i + 2));
    best = _mm256_max_pd(best, _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d direct = _mm256_setzero_pd();   // [ar br, ai bi, ...]
  __m256d crossed = _mm256_setzero_pd();  // [ar bi, ai br, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + i));
    const __m256d vb = _mm256_loadu_pd(dp(b + i));
    direct = _mm256_fmadd_pd(va, vb, direct);
    crossed = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), crossed);
  }
  double re = hsum(direct);
  double im = hsum_alternating(crossed);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d direct = _mm256_setzero_pd();
  __m256d crossed = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + i));
    const __m256d vb = _mm256_loadu_pd(dp(b + i));
    direct = _mm256_fmadd_pd(va, vb, direct);
    crossed = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), crossed);
  }
  double re = hsum_alternating(direct);
  double im = hsum(crossed);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(dp(x + i));
    const __m256d vy = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(vy, cmul(ar, ai, vx)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i];
    y[i] += cplx(alpha.real() * xi.real() - alpha.imag() * xi.imag(),
                 alpha.real() * xi.imag() + alpha.imag() * xi.real());
  }
}

void rotate_avx2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
  const __m256d a_r = _mm256_set1_pd(a.real()), a_i = _mm256_set1_pd(a.imag());
  const __m256d b_r = _mm256_set1_pd(b.real()), b_i = _mm256_set1_pd(b.imag());
  const __m256d c_r = _mm256_set1_pd(c.real()), c_i = _mm256_set1_pd(c.imag());
  const __m256d d_r = _mm256_set1_pd(d.real()), d_i = _mm256_set1_pd(d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(dp(x + i));
    const __m256d vy = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(x + i), _mm256_add_pd(cmul(a_r, a_i, vx), cmul(b_r, b_i, vy)));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(cmul(c_r, c_i, vx), cmul(d_r, d_i, vy)));
  }
  auto mul = [](cplx p, cplx q) {
    return cplx(p.real() * q.real() - p.imag() * q.imag(), p.real() * q.imag() + p.imag() * q.real());
  };
  for (; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2",        sum_abs_avx2, sum_sq_avx2, max_abs_avx2,
                                 dot_conj_avx2, dot_avx2,     axpy_avx2,   rotate_avx2};
  return table;
}

}  // namespace bjkit::kernels
