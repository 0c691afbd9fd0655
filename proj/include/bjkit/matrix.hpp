#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "bjkit/kernels.hpp"

namespace bjkit {

using cplx = std::complex<double>;

enum class Field : std::uint8_t { real, complex };

inline Field common_field(Field a, Field b) {
  return (a == Field::real && b == Field::real) ? Field::real : Field::complex;
}

/// Dense row-major complex matrix with a field tag.
///
/// A real-tagged matrix is constructed only from entries whose imaginary
/// parts are exactly zero. Element access does not re-check the tag; code
/// that writes complex values must use a complex-tagged matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, Field field = Field::complex);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries, Field field = Field::complex);

  static CMatrix identity(std::size_t n, Field field = Field::complex);
  static CMatrix diagonal(std::span<const cplx> d, Field field = Field::complex);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows,
                           Field field = Field::complex);
  // Column vector / matrix whose columns are the given vectors.
  static CMatrix from_columns(const std::vector<std::vector<cplx>>& columns, Field field = Field::complex);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }
  Field field() const noexcept { return field_; }
  void set_field(Field f);

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }
  const std::vector<cplx>& entries() const noexcept { return data_; }

  std::vector<cplx> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;

  double max_abs() const;
  double frobenius() const;
  bool is_real() const;  // every imaginary part is exactly zero

  std::vector<cplx> apply(std::span<const cplx> x) const;          // A x
  std::vector<cplx> apply_adjoint(std::span<const cplx> x) const;  // A* x

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
  Field field_ = Field::complex;
};

// Small vector helpers shared across modules.
double norm2(std::span<const cplx> v);
std::vector<cplx> scaled(std::span<const cplx> v, cplx s);
std::vector<cplx> conj(std::span<const cplx> v);
// v* A v for square A.
cplx quadratic_form(const CMatrix& a, std::span<const cplx> v);
// (A + A*) / 2
CMatrix hermitian_part(const CMatrix& a);
// max |A - A*|
double hermitian_deviation(const CMatrix& a);
// B* A B
CMatrix compress(const CMatrix& a, const CMatrix& basis);
// e^{i arg z} with the convention phase(0) = 1.
inline cplx phase(cplx z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : cplx(1.0, 0.0);
}

}  // namespace bjkit
