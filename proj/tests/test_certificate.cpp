#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bjkit/certificate.hpp"
#include "bjkit/error.hpp"
#include "bjkit/gram_dykstra.hpp"
#include "bjkit/linalg.hpp"
#include "oracles.hpp"

using namespace bjkit;

namespace {

const Clause* find_clause(const VerifyReport& r, const std::string& name) {
  for (const Clause& c : r.clauses) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool clause_passes(const VerifyReport& r, const std::string& name) {
  const Clause* c = find_clause(r, name);
  return c != nullptr && c->pass;
}

std::vector<cplx> kill_along(const Vec& x, std::vector<cplx> y) {
  const Functional f = norming_functional(x);
  const cplx c = pair(f, Vec(x.space, y)) / pair(f, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * x.coords[i];
  return y;
}

std::vector<SpaceSpec> spaces() {
  std::vector<SpaceSpec> out;
  for (Field f : {Field::real, Field::complex}) {
    for (double p : {1.0, 1.5, 2.0, 3.0, oracle::kInf}) out.push_back(SpaceSpec::lp(p, 3, f));
    out.push_back(SpaceSpec::sum_inf(SpaceSpec::lp(1, 1, f), SpaceSpec::lp(oracle::kInf, 2, f)));
  }
  out.push_back(SpaceSpec::spectral(2));
  return out;
}

void check_axioms(const CMatrix& g, Field field, std::mt19937_64& rng) {
  const std::size_t n = g.rows();
  const double scale = std::max(1.0, g.max_abs());
  for (int rep = 0; rep < 20; ++rep) {
    const auto u = oracle::gauss_vector(rng, n, field), v = oracle::gauss_vector(rng, n, field),
               w = oracle::gauss_vector(rng, n, field);
    const cplx a = oracle::gauss_scalar(rng, field), b = oracle::gauss_scalar(rng, field);
    std::vector<cplx> comb(n);
    for (std::size_t i = 0; i < n; ++i) comb[i] = a * u[i] + b * v[i];
    const cplx lhs = sesquilinear(g, comb, w);
    const cplx rhs = a * sesquilinear(g, u, w) + b * sesquilinear(g, v, w);
    const double mag = 1.0 + std::abs(a) + std::abs(b);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale * mag * mag * 10.0);
    CHECK(std::abs(sesquilinear(g, u, v) - std::conj(sesquilinear(g, v, u))) <= 1e-10 * scale * 10.0);
    CHECK(sesquilinear(g, u, u).real() >= -1e-10 * scale);
  }
}

}  // namespace

TEST_CASE("norming functional search examples") {
  SUBCASE("l2 orthonormal pair") {
    const SpaceSpec s = SpaceSpec::lp(2, 2);
    const SearchResult r = norming_functional_search(Vec(s, {1, 0}), Vec(s, {0, 1}));
    REQUIRE(r.status == SearchStatus::found);
    CHECK(std::abs(r.f->coords[0] - 1.0) <= 1e-12);
    CHECK(std::abs(r.f->coords[1]) <= 1e-12);
  }
  SUBCASE("l-infinity diagonal pair") {
    const SpaceSpec s = SpaceSpec::lp(oracle::kInf, 2);
    const Vec x(s, {1, 1}), y(s, {1, -1});
    const SearchResult r = norming_functional_search(x, y);
    REQUIRE(r.status == SearchStatus::found);
    CHECK(std::abs(r.f->coords[0] - 0.5) <= 1e-9);
    CHECK(std::abs(r.f->coords[1] - 0.5) <= 1e-9);
    CHECK(dual_norm(*r.f) == doctest::Approx(1.0));
    CHECK(pair(*r.f, x).real() == doctest::Approx(1.0));
    CHECK(std::abs(pair(*r.f, y)) <= 1e-9);
  }
  SUBCASE("parallel pair has none") {
    const SpaceSpec s = SpaceSpec::lp(2, 2);
    const SearchResult r = norming_functional_search(Vec(s, {1, 0}), Vec(s, {1, 0}));
    CHECK(r.status == SearchStatus::infeasible);
    CHECK_FALSE(r.f.has_value());
    CHECK(r.min_support < 0.0);
  }
  CHECK_THROWS_AS(norming_functional_search(Vec(SpaceSpec::lp(2, 2), {0, 0}), Vec(SpaceSpec::lp(2, 2), {1, 0})),
                  Error);
}

TEST_CASE("build certificate examples") {
  SUBCASE("l2") {
    const SpaceSpec s = SpaceSpec::lp(2, 2);
    const Certificate c = build_certificate(Functional(s, {1, 0}), Vec(s, {1, 0}), Vec(s, {0, 1}));
    CHECK((c.g - CMatrix::from_rows({{1, 0}, {0, 0}})).max_abs() <= 1e-15);
  }
  SUBCASE("l-infinity") {
    const SpaceSpec s = SpaceSpec::lp(oracle::kInf, 2);
    const Certificate c = build_certificate(Functional(s, {0.5, 0.5}), Vec(s, {1, 1}), Vec(s, {1, -1}));
    CHECK((c.g - CMatrix::from_rows({{0.25, 0.25}, {0.25, 0.25}})).max_abs() <= 1e-15);
    CHECK(oracle::sign_enumeration(c.g) == doctest::Approx(1.0));
  }
  SUBCASE("global phase cancels") {
    std::mt19937_64 rng(1);
    const SpaceSpec s = SpaceSpec::lp(3, 3, Field::complex);
    const Vec x(s, oracle::gauss_vector(rng, 3, Field::complex));
    const Functional f = norming_functional(x);
    const Vec y(s, kill_along(x, oracle::gauss_vector(rng, 3, Field::complex)));
    const Certificate a = build_certificate(f, x, y);
    for (double theta : {0.3, 1.7, 3.1, -2.2}) {
      const Functional g(s, scaled(f.coords, std::polar(1.0, theta)));
      CHECK((build_certificate(g, x, y).g - a.g).max_abs() <= 1e-15);
    }
  }
  SUBCASE("preconditions") {
    const SpaceSpec s = SpaceSpec::lp(2, 2);
    CHECK_THROWS_AS(build_certificate(Functional(s, {2, 0}), Vec(s, {1, 0}), Vec(s, {0, 1})), Error);
    CHECK_THROWS_AS(build_certificate(Functional(s, {0, 1}), Vec(s, {1, 0}), Vec(s, {0, 1})), Error);
  }
}

TEST_CASE("certify examples") {
  SUBCASE("l2 in three dimensions") {
    const SpaceSpec s = SpaceSpec::lp(2, 3);
    const CertifyResult r = certify(Vec(s, {1, 0, 0}), Vec(s, {0, 1, 1}));
    REQUIRE(r.certificate.has_value());
    CHECK((r.certificate->g - CMatrix::diagonal(std::vector<cplx>{1, 0, 0})).max_abs() <= 1e-12);
  }
  SUBCASE("l1 flat segment") {
    const SpaceSpec s = SpaceSpec::lp(1, 2);
    const Vec x(s, {1, 0}), y(s, {1, 1});
    const CertifyResult r = certify(x, y);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(r.certificate->g, x, y, 1e-7).pass);
  }
  SUBCASE("parallel pair") {
    const SpaceSpec s = SpaceSpec::lp(2, 2);
    const CertifyResult r = certify(Vec(s, {1, 0}), Vec(s, {1, 0}));
    CHECK_FALSE(r.certificate.has_value());
    CHECK_FALSE(r.inconsistency.has_value());
    CHECK_FALSE(r.verdict.orthogonal);
  }
  CHECK_THROWS_AS(certify(Vec(SpaceSpec::lp(2, 2), {0, 0}), Vec(SpaceSpec::lp(2, 2), {1, 0})), Error);
}

TEST_CASE("verify examples") {
  const SpaceSpec s = SpaceSpec::lp(2, 2, Field::complex);
  const CMatrix e11 = CMatrix::from_rows({{1, 0}, {0, 0}});
  SUBCASE("all clauses pass") {
    const VerifyReport r = verify_certificate(e11, Vec(s, {1, 0}), Vec(s, {0, 1}));
    CHECK(r.pass);
    for (const Clause& c : r.clauses) CHECK(c.pass);
    CHECK(r.norm_check == "exact");
  }
  SUBCASE("negative eigenvalue fails positivity") {
    const CMatrix g = CMatrix::from_rows({{1, 0}, {0, -0.1}});
    const VerifyReport r = verify_certificate(g, Vec(s, {1, 0}), Vec(s, {0, 1}));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(clause_passes(r, "positive"));
  }
  SUBCASE("cross term fails") {
    const VerifyReport r = verify_certificate(e11, Vec(s, {1, 0}), Vec(s, {1, 1}));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(clause_passes(r, "cross"));
    CHECK(r.residuals.cross_dev == doctest::Approx(1.0));
  }
  SUBCASE("doubled form fails the norm clause") {
    const VerifyReport r = verify_certificate(e11 * 2.0, Vec(s, {1, 0}), Vec(s, {0, 1}));
    CHECK_FALSE(clause_passes(r, "norm"));
    CHECK(r.residuals.bilinear_norm_lb >= 2.0 - 1e-12);
  }
  SUBCASE("complex form on a real space fails the field clause") {
    const SpaceSpec r2 = SpaceSpec::lp(2, 2);
    const CMatrix g = CMatrix::from_rows({{1, cplx(0, 0.1)}, {cplx(0, -0.1), 0}});
    CHECK_FALSE(clause_passes(verify_certificate(g, Vec(r2, {1, 0}), Vec(r2, {0, 1})), "field"));
  }
}

TEST_CASE("norm check uses extreme points where they are finite") {
  // G = 1/4 ones on real l-infinity: exhaustive sign check gives exactly 1
  const SpaceSpec s = SpaceSpec::lp(oracle::kInf, 2);
  const CMatrix g = CMatrix::from_rows({{0.25, 0.25}, {0.25, 0.25}}, Field::real);
  const VerifyReport r = verify_certificate(g, Vec(s, {1, 1}), Vec(s, {1, -1}));
  CHECK(r.pass);
  CHECK(r.norm_check == "exact");
  CHECK(r.residuals.bilinear_norm_lb == doctest::Approx(oracle::sign_enumeration(g)));
}

TEST_CASE("forward direction on manufactured orthogonal pairs") {
  std::mt19937_64 rng(3);
  for (const SpaceSpec& s : spaces()) {
    for (int rep = 0; rep < 6; ++rep) {
      const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      const Vec y(s, kill_along(x, oracle::gauss_vector(rng, s.dim(), s.field())));
      const CertifyResult r = certify(x, y, {1e-7, 64, 0});
      INFO(s.describe() << " rep " << rep);
      CHECK(r.verdict.orthogonal);
      REQUIRE(r.certificate.has_value());
      CHECK_FALSE(r.inconsistency.has_value());
      const VerifyReport v = verify_certificate(r.certificate->g, x, y, 1e-5);
      CHECK(v.pass);
      check_axioms(r.certificate->g, s.field(), rng);
      // normed correctly, so the pair (x/|x|, x/|x|) reaches 1
      CHECK(v.residuals.bilinear_norm_lb >= 1.0 - 1e-5);
    }
  }
}

TEST_CASE("no certificate for clearly non-orthogonal pairs") {
  std::mt19937_64 rng(5);
  for (const SpaceSpec& s : spaces()) {
    for (int rep = 0; rep < 4; ++rep) {
      const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      auto yc = kill_along(x, oracle::gauss_vector(rng, s.dim(), s.field()));
      for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += 0.3 * x.coords[i];
      const Vec y(s, yc);
      const CertifyResult r = certify(x, y, {1e-7, 64, 0});
      INFO(s.describe());
      CHECK_FALSE(r.verdict.orthogonal);
      CHECK_FALSE(r.certificate.has_value());
    }
  }
}

TEST_CASE("converse on handcrafted Gram matrices") {
  std::mt19937_64 rng(7);
  int passed = 0;
  for (const SpaceSpec& s : spaces()) {
    for (int rep = 0; rep < 8; ++rep) {
      const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      const Vec y(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      const Functional f = norming_functional(x);
      // f f* plus a small cross perturbation of varying size, plus a PSD bump
      const double eps = std::pow(10.0, -2.0 - rep);
      std::vector<cplx> fc = f.coords;
      const auto pert = oracle::gauss_vector(rng, s.dim(), s.field());
      for (std::size_t i = 0; i < fc.size(); ++i) fc[i] += eps * pert[i];
      CMatrix g(s.dim(), s.dim());
      for (std::size_t i = 0; i < s.dim(); ++i) {
        for (std::size_t j = 0; j < s.dim(); ++j) g(i, j) = fc[i] * std::conj(fc[j]);
      }
      if (s.field() == Field::real) g.set_field(Field::real);
      const double tol = 1e-6;
      const VerifyReport r = verify_certificate(g, x, y, tol);
      if (!r.pass) continue;
      ++passed;
      const Verdict v = bj_margin(x, y, tol);
      CHECK(v.margin >= -10.0 * tol * norm(x));
    }
  }
  // a kill_along pair always verifies with the exact norming functional
  for (const SpaceSpec& s : spaces()) {
    const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
    const Vec y(s, kill_along(x, oracle::gauss_vector(rng, s.dim(), s.field())));
    const Certificate c = build_certificate(norming_functional(x), x, y);
    const VerifyReport r = verify_certificate(c.g, x, y, 1e-6);
    CHECK(r.pass);
    REQUIRE(r.implication.has_value());
    CHECK(r.implication->margin >= -1e-5 * norm(x));
    passed += r.pass;
  }
  CHECK(passed >= 11);
}

TEST_CASE("Gram fallback produces a verifiable certificate") {
  const SpaceSpec s = SpaceSpec::lp(oracle::kInf, 3);
  const Vec x(s, {1, 1, 0.5}), y(s, {1, -1, 0.25});
  const GramResult r = gram_dykstra(x, y, GramOptions{1e-6, 50, 2000, 3, 32, 0});
  REQUIRE(r.g.has_value());
  const VerifyReport v = verify_certificate(*r.g, x, y, 1e-5);
  CHECK(v.pass);
  std::mt19937_64 rng(11);
  check_axioms(*r.g, Field::real, rng);
}
