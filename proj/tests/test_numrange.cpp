#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"
#include "bjkit/numrange.hpp"
#include "oracles.hpp"

using namespace bjkit;

namespace {

void check_witness(const CMatrix& a, const NumRangeResult& r, double tol) {
  REQUIRE(r.witness.has_value());
  CHECK(norm2(*r.witness) == doctest::Approx(1.0).epsilon(tol));
  CHECK(std::abs(quadratic_form(a, *r.witness)) <= tol);
}

}  // namespace

TEST_CASE("documented numerical range cases") {
  SUBCASE("diag(1,-1) contains 0") {
    const CMatrix a = CMatrix::from_rows({{1, 0}, {0, -1}});
    const NumRangeResult r = numrange_zero(a);
    CHECK(r.contains_zero);
    check_witness(a, r, 1e-10);
    CHECK(std::abs((*r.witness)[0]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  }
  SUBCASE("diag(1,2) excludes 0") {
    const NumRangeResult r = numrange_zero(CMatrix::from_rows({{1, 0}, {0, 2}}));
    CHECK_FALSE(r.contains_zero);
    CHECK_FALSE(r.witness.has_value());
    REQUIRE(r.separating_angle.has_value());
    CHECK(r.boundary_gap == doctest::Approx(1.0).epsilon(1e-8));
    const double t = *r.separating_angle;
    CHECK(std::min(t, 2.0 * std::numbers::pi - t) < 1e-6);
  }
  SUBCASE("nilpotent: e1 is a witness") {
    const CMatrix a = CMatrix::from_rows({{0, 1}, {0, 0}});
    const NumRangeResult r = numrange_zero(a);
    CHECK(r.contains_zero);
    check_witness(a, r, 1e-10);
  }
  SUBCASE("non-square") { CHECK_THROWS_AS(numrange_zero(CMatrix(2, 3)), Error); }
}

TEST_CASE("separating angle certifies a gap") {
  std::mt19937_64 rng(21);
  int separated = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rep % 4;
    CMatrix a = oracle::gauss_matrix(rng, n, n);
    a += CMatrix::identity(n) * cplx(oracle::uniform(rng, 0.0, 4.0), oracle::uniform(rng, -3.0, 3.0));
    const NumRangeResult r = numrange_zero(a, 1e-10);
    if (r.contains_zero) {
      check_witness(a, r, 1e-10);
      continue;
    }
    ++separated;
    REQUIRE(r.separating_angle.has_value());
    // min over the sphere of Re(e^{-i t} <h, A h>) is the smallest eigenvalue
    const CMatrix h = hermitian_part(a * std::polar(1.0, -*r.separating_angle));
    const double lmin = hermitian_eig(h).values.back();
    CHECK(lmin >= r.boundary_gap * (1.0 - 1e-6) - 1e-12);
    CHECK(r.boundary_gap > 0.0);
  }
  CHECK(separated > 20);
}

TEST_CASE("agreement with dense sampling on 2x2 and 3x3") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rep % 2;
    CMatrix a = oracle::gauss_matrix(rng, n, n);
    a += CMatrix::identity(n) * cplx(oracle::uniform(rng, -2.0, 2.0), oracle::uniform(rng, -2.0, 2.0));
    const NumRangeResult r = numrange_zero(a, 1e-6);
    const double sampled = oracle::min_abs_rayleigh(a, rng, 100000);
    if (sampled < 1e-4) CHECK(r.contains_zero);
    if (n == 2) {
      const double hmin = oracle::support_min_2x2(a);
      if (hmin < -1e-3) CHECK_FALSE(r.contains_zero);
      if (hmin > 1e-3) CHECK(r.contains_zero);
    }
    if (r.contains_zero) check_witness(a, r, 1e-6);
  }
}

TEST_CASE("membership is invariant under rotation") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t n = 2 + rep % 4;
    CMatrix a = oracle::gauss_matrix(rng, n, n);
    a += CMatrix::identity(n) * cplx(oracle::uniform(rng, -3.0, 3.0), 0.0);
    const NumRangeResult r = numrange_zero(a, 1e-9);
    if (std::abs(r.boundary_gap) < 1e-6) continue;  // too close to call both ways
    const double alpha = oracle::uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const NumRangeResult s = numrange_zero(a * std::polar(1.0, alpha), 1e-9);
    CHECK(r.contains_zero == s.contains_zero);
  }
}

TEST_CASE("degenerate top eigenspaces still produce witnesses") {
  // W(I) = {1}; W(0) = {0}; a normal matrix with repeated eigenvalues
  CHECK_FALSE(numrange_zero(CMatrix::identity(3)).contains_zero);
  const CMatrix z(3, 3);
  const NumRangeResult r0 = numrange_zero(z);
  CHECK(r0.contains_zero);
  check_witness(z, r0, 1e-10);
  const std::vector<cplx> d = {1, 1, cplx(-1, 0), cplx(0, 1), cplx(0, 1)};
  const CMatrix a = CMatrix::diagonal(d);
  const NumRangeResult r = numrange_zero(a);
  CHECK(r.contains_zero);
  check_witness(a, r, 1e-10);
}

TEST_CASE("real numerical range") {
  const CMatrix a = CMatrix::from_rows({{2, 0}, {0, -1}}, Field::real);
  const NumRangeResult r = numrange_zero_real(a);
  CHECK(r.contains_zero);
  REQUIRE(r.witness.has_value());
  for (const cplx& z : *r.witness) CHECK(z.imag() == 0.0);
  CHECK(std::abs(quadratic_form(a, *r.witness)) < 1e-12);
  // a rotation has the real range {0} but the complex range is a segment
  const CMatrix rot = CMatrix::from_rows({{0, -1}, {1, 0}}, Field::real);
  CHECK(numrange_zero_real(rot).contains_zero);
  CHECK_FALSE(numrange_zero_real(CMatrix::from_rows({{1, 5}, {-5, 1}}, Field::real)).contains_zero);
}
