#include "bjkit/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "bjkit/error.hpp"

namespace bjkit {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), data_(rows * cols), field_(field) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries, Field field)
    : rows_(rows), cols_(cols), data_(std::move(entries)), field_(field) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::dimension_mismatch, "matrix entry count does not match rows x cols");
  }
  if (field_ == Field::real && !is_real()) {
    throw Error(ErrorCode::invalid_argument, "real-tagged matrix has nonzero imaginary parts");
  }
}

CMatrix CMatrix::identity(std::size_t n, Field field) {
  CMatrix m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d, Field field) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  m.set_field(field);
  return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows, Field field) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<cplx> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::dimension_mismatch, "ragged matrix rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return CMatrix(r, c, std::move(entries), field);
}

CMatrix CMatrix::from_columns(const std::vector<std::vector<cplx>>& columns, Field field) {
  const std::size_t c = columns.size();
  const std::size_t r = c == 0 ? 0 : columns.front().size();
  CMatrix m(r, c);
  for (std::size_t j = 0; j < c; ++j) {
    if (columns[j].size() != r) throw Error(ErrorCode::dimension_mismatch, "ragged matrix columns");
    m.set_column(j, columns[j]);
  }
  m.set_field(field);
  return m;
}

void CMatrix::set_field(Field f) {
  if (f == Field::real && !is_real()) {
    throw Error(ErrorCode::invalid_argument, "cannot tag a matrix with complex entries as real");
  }
  field_ = f;
}

std::vector<cplx> CMatrix::column(std::size_t j) const {
  std::vector<cplx> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void CMatrix::set_column(std::size_t j, std::span<const cplx> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::adjoint() const {
  CMatrix t(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

CMatrix CMatrix::conj() const {
  CMatrix t = *this;
  for (auto& z : t.data_) z = std::conj(z);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double CMatrix::frobenius() const { return std::sqrt(kernels::sum_sq(data_)); }

bool CMatrix::is_real() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) { return z.imag() == 0.0; });
}

std::vector<cplx> CMatrix::apply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::dimension_mismatch, "matrix-vector size mismatch");
  std::vector<cplx> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = kernels::dot(row(i), x);
  return y;
}

std::vector<cplx> CMatrix::apply_adjoint(std::span<const cplx> x) const {
  if (x.size() != rows_) throw Error(ErrorCode::dimension_mismatch, "matrix-vector size mismatch");
  std::vector<cplx> y(cols_);
  // y = sum_i conj(row_i) x_i, accumulated row by row
  std::vector<cplx> rc(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) rc[j] = std::conj(r[j]);
    kernels::axpy(x[i], rc, y);
  }
  return y;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::dimension_mismatch, "matrix sum shape");
  kernels::axpy(1.0, o.data_, data_);
  field_ = common_field(field_, o.field_);
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::dimension_mismatch, "matrix difference shape");
  kernels::axpy(-1.0, o.data_, data_);
  field_ = common_field(field_, o.field_);
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  if (s.imag() != 0.0) field_ = Field::complex;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product shape");
  CMatrix c(a.rows_, b.cols_, common_field(a.field_, b.field_));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), out);
    }
  }
  return c;
}

double norm2(std::span<const cplx> v) { return std::sqrt(kernels::sum_sq(v)); }

std::vector<cplx> scaled(std::span<const cplx> v, cplx s) {
  std::vector<cplx> out(v.begin(), v.end());
  for (auto& z : out) z *= s;
  return out;
}

std::vector<cplx> conj(std::span<const cplx> v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
  return out;
}

cplx quadratic_form(const CMatrix& a, std::span<const cplx> v) {
  return kernels::dot_conj(v, a.apply(v));
}

CMatrix hermitian_part(const CMatrix& a) {
  if (!a.square()) throw Error(ErrorCode::dimension_mismatch, "hermitian part of a non-square matrix");
  CMatrix h(a.rows(), a.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

double hermitian_deviation(const CMatrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

CMatrix compress(const CMatrix& a, const CMatrix& basis) { return basis.adjoint() * (a * basis); }

}  // namespace bjkit
