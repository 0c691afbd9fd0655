#include "bjkit/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace bjkit::kernels {
namespace {

// Reference kernels. Complex products are spelled out so that the scalar and
// vector variants evaluate the same real expressions.

double sum_abs_scalar(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

double sum_sq_scalar(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    s += re * re + im * im;
  }
  return s;
}

double max_abs_scalar(const cplx* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += mul(alpha, x[i]);
}

void rotate_scalar(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",         sum_abs_scalar, sum_sq_scalar, max_abs_scalar,
                                 dot_conj_scalar,  dot_scalar,     axpy_scalar,   rotate_scalar};
  return table;
}

}  // namespace bjkit::kernels
