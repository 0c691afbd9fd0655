#include "bjkit/cstar.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bjkit/error.hpp"
#include "bjkit/forms.hpp"

namespace bjkit {
namespace {

void require_matrix_space(const SpaceSpec& s, const char* what) {
  if (!s.is_spectral()) throw Error(ErrorCode::invalid_argument, std::string(what) + ": needs a matrix space");
}

}  // namespace

Vec adjoint(const Vec& a) {
  require_matrix_space(a.space, "adjoint");
  const std::size_t n = a.space.n();
  std::vector<cplx> out(a.coords.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * n + i] = std::conj(a.coords[i * n + j]);
  }
  return Vec(a.space, std::move(out));
}

cplx psi(const CMatrix& g, const Vec& u, const Vec& v) {
  return sesquilinear(g, u.coords, adjoint(v).coords);
}

CStarResult cstar_certify(const Vec& a, const Vec& b, const CertifyOptions& opt) {
  require_matrix_space(a.space, "cstar_certify");
  if (!(a.space == b.space)) throw Error(ErrorCode::dimension_mismatch, "cstar_certify: a and b in different spaces");
  if (a.space.field() != Field::complex) {
    throw Error(ErrorCode::invalid_argument, "cstar_certify: only complex matrix algebras are supported");
  }
  CStarResult out;
  out.certify = certify(a, b, opt);
  if (!out.certify.certificate) return out;
  const CMatrix& g = out.certify.certificate->g;
  const double na = norm(a);
  CStarWitness w{*out.certify.certificate, {}};
  w.residuals.norming_dev = std::abs(psi(g, a, adjoint(a)) - na * na);
  w.residuals.cross_dev = std::abs(psi(g, a, adjoint(b)));
  w.residuals.norm_lb = w.phi.residuals.bilinear_norm_lb;
  out.witness = std::move(w);
  return out;
}

VerifyReport verify_cstar(const CMatrix& g, const Vec& a, const Vec& b, double tol, int restarts,
                          std::uint64_t seed) {
  require_matrix_space(a.space, "verify_cstar");
  if (!(a.space == b.space)) throw Error(ErrorCode::dimension_mismatch, "verify_cstar: a and b in different spaces");
  const std::size_t d = a.space.dim();
  if (g.rows() != d || g.cols() != d) throw Error(ErrorCode::dimension_mismatch, "verify_cstar: G has the wrong shape");

  VerifyReport rep;
  auto add = [&](std::string name, double value, double bound, bool pass) {
    rep.clauses.push_back({std::move(name), pass, value, bound});
  };
  const double na = norm(a), nb = norm(b);
  const Vec astar = adjoint(a), bstar = adjoint(b);

  const double norming = std::abs(psi(g, a, astar) - na * na);
  add("norming", norming, tol * na * na, norming <= tol * na * na);
  const double cross = std::abs(psi(g, a, bstar));
  add("cross", cross, tol * na * nb, cross <= tol * na * nb);

  // |psi| = |phi| because v -> v* maps the unit ball onto itself
  const SpaceSpec space = SpaceSpec::spectral(a.space.n(), Field::complex);
  const FormNorm fn = sesquilinear_norm(g, space, restarts, seed);
  double norm_value = fn.lower;
  if (fn.exact) {
    rep.norm_check = "exact";
    norm_value = std::max(fn.lower, fn.upper.value_or(fn.lower));
  } else if (fn.upper && *fn.upper <= 1.0 + tol) {
    rep.norm_check = "certified-upper";
    norm_value = *fn.upper;
  } else {
    rep.norm_check = "empirical";
  }
  rep.norm_upper = fn.upper;
  add("norm", norm_value, 1.0 + tol, norm_value <= 1.0 + tol);

  // bilinearity probes in both slots
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto rvec = [&] { return Vec(space, random_unit_vector(space, rng)); };
  auto rscalar = [&] { return cplx(gauss(rng), gauss(rng)); };
  auto combo = [&](cplx al, const Vec& u, cplx be, const Vec& v) {
    std::vector<cplx> c(u.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = al * u.coords[i] + be * v.coords[i];
    return Vec(space, std::move(c));
  };
  const double scale = std::max(g.max_abs(), 1e-300) * static_cast<double>(d);
  double left_dev = 0.0, right_dev = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Vec u = rvec(), v = rvec(), w = rvec();
    const cplx al = rscalar(), be = rscalar();
    const double mag = (std::abs(al) + std::abs(be)) * scale;
    left_dev = std::max(left_dev, std::abs(psi(g, combo(al, u, be, v), w) - al * psi(g, u, w) - be * psi(g, v, w)) / mag);
    right_dev = std::max(right_dev, std::abs(psi(g, u, combo(al, v, be, w)) - al * psi(g, u, v) - be * psi(g, u, w)) / mag);
  }
  add("bilinear-left", left_dev, 1e-12, left_dev <= 1e-12);
  add("bilinear-right", right_dev, 1e-12, right_dev <= 1e-12);

  bool all = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const Clause& c) { return c.pass; });
  if (all) {
    const Verdict v = bj_margin(a, b, tol);
    rep.implication = v;
    const bool ok = v.margin >= -10.0 * tol * na;
    add("implication", v.margin, -10.0 * tol * na, ok);
    all = ok;
  }
  rep.pass = all;
  rep.residuals.norming_dev = norming;
  rep.residuals.cross_dev = cross;
  rep.residuals.bilinear_norm_lb = fn.lower;
  rep.residuals.bilinear_norm_claimed = fn.upper.value_or(fn.lower);
  return rep;
}

}  // namespace bjkit
