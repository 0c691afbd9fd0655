#pragma once

// Data-parallel inner loops over interleaved complex<double> arrays.
//
// Every kernel has a scalar reference implementation. When the library is
// built with BJKIT_HAVE_AVX2 and the CPU reports avx2+fma, an AVX2 table is
// selected on first use. Setting BJKIT_KERNELS=scalar in the environment
// forces the reference table.

#include <complex>
#include <cstddef>
#include <span>

namespace bjkit {

using cplx = std::complex<double>;

namespace kernels {

struct KernelTable {
  const char* name;
  double (*sum_abs)(const cplx* a, std::size_t n);           // sum |a_i|
  double (*sum_sq)(const cplx* a, std::size_t n);            // sum |a_i|^2
  double (*max_abs)(const cplx* a, std::size_t n);           // max |a_i|
  cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a_i) b_i
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);       // sum a_i b_i
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);  // y += alpha x
  // (x, y) <- (a x + b y, c x + d y), elementwise.
  void (*rotate)(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable& active();

inline double sum_abs(std::span<const cplx> a) { return active().sum_abs(a.data(), a.size()); }
inline double sum_sq(std::span<const cplx> a) { return active().sum_sq(a.data(), a.size()); }
inline double max_abs(std::span<const cplx> a) { return active().max_abs(a.data(), a.size()); }
inline cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dot_conj(a.data(), b.data(), a.size());
}
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void rotate(std::span<cplx> x, std::span<cplx> y, cplx a, cplx b, cplx c, cplx d) {
  active().rotate(x.data(), y.data(), x.size(), a, b, c, d);
}

}  // namespace kernels
}  // namespace bjkit
