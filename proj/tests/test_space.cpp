#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bjkit/error.hpp"
#include "bjkit/space.hpp"
#include "oracles.hpp"

using namespace bjkit;

namespace {

std::vector<SpaceSpec> sample_spaces() {
  std::vector<SpaceSpec> out;
  for (Field f : {Field::real, Field::complex}) {
    for (double p : {1.0, 1.5, 2.0, 3.0, oracle::kInf}) out.push_back(SpaceSpec::lp(p, 3, f));
  }
  out.push_back(SpaceSpec::spectral(2));
  out.push_back(SpaceSpec::spectral(3));
  out.push_back(SpaceSpec::spectral(2, Field::real));
  out.push_back(SpaceSpec::sum_inf(SpaceSpec::lp(1.0, 2), SpaceSpec::lp(2.0, 2)));
  out.push_back(SpaceSpec::sum_inf(SpaceSpec::lp(3.0, 2, Field::complex), SpaceSpec::lp(oracle::kInf, 1, Field::complex)));
  return out;
}

double dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("norm examples") {
  CHECK(norm(Vec(SpaceSpec::lp(2, 2), {3, 4})) == doctest::Approx(5.0));
  CHECK(norm(Vec(SpaceSpec::lp(oracle::kInf, 2), {1, -2})) == doctest::Approx(2.0));
  CHECK(norm(Vec(SpaceSpec::spectral(2), {1, 0, 0, 2})) == doctest::Approx(2.0));
  const SpaceSpec s = SpaceSpec::sum_inf(SpaceSpec::lp(1, 2), SpaceSpec::lp(2, 2));
  CHECK(norm(Vec(s, {1, 1, 3, 4})) == doctest::Approx(5.0));
}

TEST_CASE("dual norm examples") {
  CHECK(dual_norm(Functional(SpaceSpec::lp(1, 2), {1, -2})) == doctest::Approx(2.0));
  CHECK(dual_norm(Functional(SpaceSpec::lp(2, 2), {3, 4})) == doctest::Approx(5.0));
  CHECK(dual_norm(Functional(SpaceSpec::spectral(2), {1, 0, 0, 2})) == doctest::Approx(3.0));
  const SpaceSpec s = SpaceSpec::sum_inf(SpaceSpec::lp(1, 2), SpaceSpec::lp(2, 2));
  CHECK(dual_norm(Functional(s, {1, -2, 3, 4})) == doctest::Approx(7.0));
}

TEST_CASE("pair examples and conjugation convention") {
  CHECK(pair(Functional(SpaceSpec::lp(2, 2), {1, 2}), Vec(SpaceSpec::lp(2, 2), {3, 4})) == cplx(11, 0));
  const SpaceSpec c = SpaceSpec::lp(2, 2, Field::complex);
  CHECK(pair(Functional(c, {cplx(0, 1), 0}), Vec(c, {1, 0})) == cplx(0, -1));
  CHECK(pair(Functional(c, {cplx(3, 1), 7}), Vec(c, {0, 0})) == cplx(0, 0));
  CHECK_THROWS_AS(pair(Functional(c, {1, 0}), Vec(SpaceSpec::lp(2, 3, Field::complex), {1, 0, 0})), Error);
}

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(Vec(SpaceSpec::lp(2, 2), {1, 2, 3}), Error);
  CHECK_THROWS_AS(Vec(SpaceSpec::lp(2, 2), {cplx(1, 1), 0}), Error);
  CHECK_THROWS_AS(SpaceSpec::lp(0.5, 2), Error);
  CHECK_THROWS_AS(SpaceSpec::lp(2, 0), Error);
  CHECK_THROWS_AS(SpaceSpec::sum_inf(SpaceSpec::lp(2, 1), SpaceSpec::lp(2, 1, Field::complex)), Error);
  CHECK(SpaceSpec::lp(1, 2).dual_exponent() == oracle::kInf);
  CHECK(SpaceSpec::lp(oracle::kInf, 2).dual_exponent() == 1.0);
  CHECK(SpaceSpec::lp(3, 2).dual_exponent() == doctest::Approx(1.5));
  CHECK(SpaceSpec::spectral(3).dim() == 9);
}

TEST_CASE("dual ball projection examples") {
  const auto a = dual_ball_project(Functional(SpaceSpec::lp(1, 2), {2, 0.5}));
  CHECK(a.coords[0].real() == doctest::Approx(1.0));
  CHECK(a.coords[1].real() == doctest::Approx(0.5));
  const auto b = dual_ball_project(Functional(SpaceSpec::lp(2, 2), {3, 4}));
  CHECK(b.coords[0].real() == doctest::Approx(0.6));
  CHECK(b.coords[1].real() == doctest::Approx(0.8));
  const auto c = dual_ball_project(Functional(SpaceSpec::spectral(2), {2, 0, 0, 0}));
  CHECK(std::abs(c.coords[0] - 1.0) < 1e-12);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(c.coords[i]) < 1e-12);
}

TEST_CASE("trace-ball projection of diagonal matrices matches a grid search") {
  // nearest point of {|d1| + |d2| <= 1} to (a, b), searched on a fine grid
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const double a = oracle::uniform(rng, -2, 2), b = oracle::uniform(rng, -2, 2);
    const auto got = dual_ball_project(Functional(SpaceSpec::spectral(2, Field::real), {a, 0, 0, b}));
    double best = oracle::kInf, ba = 0, bb = 0;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double d1 = -1.0 + 2.0 * i / n;
      const double r = 1.0 - std::abs(d1);
      const double d2 = std::clamp(b, -r, r);
      const double e = (d1 - a) * (d1 - a) + (d2 - b) * (d2 - b);
      if (e < best) {
        best = e;
        ba = d1;
        bb = d2;
      }
    }
    CHECK(std::abs(got.coords[0].real() - ba) < 2e-3);
    CHECK(std::abs(got.coords[3].real() - bb) < 2e-3);
    CHECK(std::abs(got.coords[1]) < 1e-12);
  }
}

TEST_CASE("norms match the definitions") {
  std::mt19937_64 rng(1);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto v = oracle::gauss_vector(rng, s.dim(), s.field());
      CHECK(norm(s, v) == doctest::Approx(oracle::norm(s, v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Hoelder inequality on random pairs") {
  std::mt19937_64 rng(17);
  for (const SpaceSpec& s : sample_spaces()) {
    double worst = oracle::kInf;
    for (int rep = 0; rep < 10000; ++rep) {
      const auto v = oracle::gauss_vector(rng, s.dim(), s.field());
      const auto f = oracle::gauss_vector(rng, s.dim(), s.field());
      const double slack = dual_norm(s, f) * norm(s, v) - std::abs(pair(Functional(s, f), Vec(s, v)));
      worst = std::min(worst, slack);
    }
    INFO(s.describe());
    CHECK(worst >= -1e-10);
  }
}

TEST_CASE("dual norm is attained on the unit ball") {
  std::mt19937_64 rng(23);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto f = oracle::gauss_vector(rng, s.dim(), s.field());
      const auto v = norming_vector(s, f);
      INFO(s.describe());
      CHECK(norm(s, v) <= 1.0 + 1e-10);
      CHECK(std::abs(pair(Functional(s, f), Vec(s, v))) >= (1.0 - 1e-6) * dual_norm(s, f));
    }
  }
}

TEST_CASE("norming functional norms x") {
  std::mt19937_64 rng(29);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 30; ++rep) {
      const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      const Functional f = norming_functional(x);
      INFO(s.describe());
      CHECK(dual_norm(f) <= 1.0 + 1e-10);
      const cplx fx = pair(f, x);
      CHECK(std::abs(fx.imag()) <= 1e-10 * norm(x));
      CHECK(fx.real() == doctest::Approx(norm(x)).epsilon(1e-10));
    }
  }
  // centroid of the face at a tie: l^inf, x = (1, 1) gives (1/2, 1/2)
  const Functional f = norming_functional(Vec(SpaceSpec::lp(oracle::kInf, 2), {1, 1}));
  CHECK(f.coords[0].real() == doctest::Approx(0.5));
  CHECK(f.coords[1].real() == doctest::Approx(0.5));
}

TEST_CASE("face LMO stays on the norming face") {
  std::mt19937_64 rng(31);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 30; ++rep) {
      const Vec x(s, oracle::gauss_vector(rng, s.dim(), s.field()));
      const auto w = oracle::gauss_vector(rng, s.dim(), s.field());
      const Functional g = face_lmo(x, w);
      INFO(s.describe());
      CHECK(dual_norm(g) <= 1.0 + 1e-9);
      CHECK(pair(g, x).real() >= norm(x) * (1.0 - 1e-9));
      // no point of the face does better than g, in particular the centroid
      const Functional c = norming_functional(x);
      CHECK(pair(g, Vec(s, w)).real() >= pair(c, Vec(s, w)).real() - 1e-9 * (1.0 + oracle::lp(w, 2)));
    }
  }
}

TEST_CASE("dual ball projection is idempotent and nonexpansive") {
  std::mt19937_64 rng(37);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<cplx> f = oracle::gauss_vector(rng, s.dim(), s.field());
      std::vector<cplx> g = oracle::gauss_vector(rng, s.dim(), s.field());
      for (auto& z : g) z *= 0.5;
      const auto pf = dual_ball_project(s, f);
      const auto pg = dual_ball_project(s, g);
      INFO(s.describe());
      CHECK(dual_norm(s, pf) <= 1.0 + 1e-9);
      CHECK(dist(dual_ball_project(s, pf), pf) <= 1e-9);
      CHECK(dist(pf, pg) <= dist(f, g) + 1e-9);
      const auto qf = primal_ball_project(s, f);
      CHECK(norm(s, qf) <= 1.0 + 1e-9);
      CHECK(dist(primal_ball_project(s, qf), qf) <= 1e-9);
    }
  }
}

TEST_CASE("projection points beat random ball points") {
  std::mt19937_64 rng(41);
  for (double p : {1.0, 1.5, 3.0, oracle::kInf}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto v = oracle::gauss_vector(rng, 3, Field::complex);
      const auto pv = lp_ball_project(v, p);
      CHECK(oracle::lp(pv, p) <= 1.0 + 1e-9);
      const double d = dist(pv, v);
      for (int k = 0; k < 200; ++k) {
        auto u = oracle::gauss_vector(rng, 3, Field::complex);
        const double nu = oracle::lp(u, p) / oracle::uniform(rng, 0.0, 1.0);
        for (auto& z : u) z /= nu;
        CHECK(dist(u, v) >= d - 1e-9);
      }
    }
  }
}

TEST_CASE("l2 is self-dual") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rep % 6;
    const SpaceSpec s = SpaceSpec::lp(2, n, rep % 2 ? Field::complex : Field::real);
    const auto v = oracle::gauss_vector(rng, n, s.field());
    CHECK(dual_norm(s, v) == doctest::Approx(norm(s, v)).epsilon(1e-14));
  }
}

TEST_CASE("norm properties: homogeneity, triangle, definiteness") {
  std::mt19937_64 rng(47);
  for (const SpaceSpec& s : sample_spaces()) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto u = oracle::gauss_vector(rng, s.dim(), s.field());
      const auto v = oracle::gauss_vector(rng, s.dim(), s.field());
      const cplx a = oracle::gauss_scalar(rng, s.field());
      CHECK(norm(s, oracle::axpy(std::vector<cplx>(s.dim()), a, u)) ==
            doctest::Approx(std::abs(a) * norm(s, u)).epsilon(1e-10));
      CHECK(norm(s, oracle::axpy(u, 1.0, v)) <= norm(s, u) + norm(s, v) + 1e-10);
    }
    CHECK(norm(s, std::vector<cplx>(s.dim())) == 0.0);
  }
}

TEST_CASE("finitely many real extreme points") {
  const auto l1 = real_extreme_points(SpaceSpec::lp(1, 3));
  REQUIRE(l1.has_value());
  CHECK(l1->size() == 6);
  const auto li = real_extreme_points(SpaceSpec::lp(oracle::kInf, 3));
  REQUIRE(li.has_value());
  CHECK(li->size() == 8);
  CHECK_FALSE(real_extreme_points(SpaceSpec::lp(2, 3)).has_value());
  CHECK_FALSE(real_extreme_points(SpaceSpec::lp(1, 3, Field::complex)).has_value());
  const auto s = real_extreme_points(SpaceSpec::sum_inf(SpaceSpec::lp(1, 2), SpaceSpec::lp(oracle::kInf, 2)));
  REQUIRE(s.has_value());
  CHECK(s->size() == 16);
}

TEST_CASE("matrix flattening is row-major") {
  const CMatrix m = CMatrix::from_rows({{1, 2}, {3, 4}});
  const auto f = flatten(m);
  CHECK(f[1] == cplx(2));
  CHECK(f[2] == cplx(3));
  CHECK(as_matrix(2, f)(1, 0) == cplx(3));
}

TEST_CASE("random unit vectors are unit") {
  std::mt19937_64 rng(53);
  for (const SpaceSpec& s : sample_spaces()) {
    CHECK(norm(s, random_unit_vector(s, rng)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
