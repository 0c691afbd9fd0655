#include "bjkit/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "bjkit/error.hpp"
#include "bjkit/gram_dykstra.hpp"
#include "bjkit/linalg.hpp"
#include "bjkit/planar.hpp"

namespace bjkit {
namespace {

constexpr double kFaceTie = 1e-9;

// Support oracle for K = { pair(f, y) : f in J(x) }.
class FaceOracle {
 public:
  using Handle = std::vector<cplx>;
  using S = planar::Sample<Handle>;

  FaceOracle(const Vec& x, const Vec& y) : x_(x), y_(y) {}

  S support(double theta) const {
    const std::vector<cplx> w = scaled(y_.coords, std::polar(1.0, -theta));
    S s;
    s.theta = theta;
    s.handle = face_lmo(x_, w, kFaceTie).coords;
    s.point = kernels::dot_conj(s.handle, y_.coords);
    s.support = (std::polar(1.0, -theta) * s.point).real();
    return s;
  }

  std::optional<S> realize(const S& a, const S& b, cplx target) const {
    const cplx d = b.point - a.point;
    const double dd = std::norm(d);
    const double t = dd == 0.0 ? 0.0 : std::clamp((std::conj(d) * (target - a.point)).real() / dd, 0.0, 1.0);
    S s;
    s.theta = a.theta;
    s.handle.resize(a.handle.size());
    for (std::size_t i = 0; i < s.handle.size(); ++i) s.handle[i] = (1.0 - t) * a.handle[i] + t * b.handle[i];
    s.point = kernels::dot_conj(s.handle, y_.coords);
    s.support = (std::polar(1.0, -s.theta) * s.point).real();
    return s;
  }

 private:
  const Vec& x_;
  const Vec& y_;
};

std::vector<cplx> realified(std::vector<cplx> v, Field f) {
  if (f == Field::real) {
    for (auto& z : v) z = z.real();
  }
  return v;
}

Vec shifted(const Vec& x, const Vec& y, cplx lambda) {
  std::vector<cplx> z = x.coords;
  kernels::axpy(lambda, y.coords, z);
  return Vec(x.space, realified(std::move(z), x.space.field()));
}

CMatrix rank_one(std::span<const cplx> f, Field field) {
  const std::size_t d = f.size();
  CMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = f[i] * std::conj(f[j]);
  }
  if (field == Field::real) g.set_field(Field::real);
  return g;
}

SpaceSpec complexified(const SpaceSpec& s) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return SpaceSpec::lp(s.p(), s.dim(), Field::complex);
    case SpaceSpec::Kind::spectral: return SpaceSpec::spectral(s.n(), Field::complex);
    case SpaceSpec::Kind::suminf: return SpaceSpec::sum_inf(complexified(s.left()), complexified(s.right()));
  }
  return s;
}

VerifyReport verify_impl(const CMatrix& g, const Vec& x, const Vec& y, double tol, int restarts,
                         std::uint64_t seed, const Verdict* known);

}  // namespace

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::infeasible: return "infeasible";
    case SearchStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

SearchResult norming_functional_search(const Vec& x, const Vec& y, double tol, int max_iter) {
  if (!(x.space == y.space)) throw Error(ErrorCode::dimension_mismatch, "norming search: different spaces");
  const double nx = norm(x);
  if (nx == 0.0) throw Error(ErrorCode::invalid_argument, "norming search: x = 0");
  const double ny = norm(y);
  SearchResult out;
  if (ny == 0.0) {
    out.status = SearchStatus::found;
    out.f = norming_functional(x);
    return out;
  }
  const double accept = tol * ny;

  if (x.space.field() == Field::real) {
    // K is the interval [lo, hi].
    const Functional fhi = face_lmo(x, y.coords, kFaceTie);
    const Functional flo = face_lmo(x, scaled(y.coords, -1.0), kFaceTie);
    const double hi = pair(fhi, y).real(), lo = pair(flo, y).real();
    out.evaluations = 2;
    out.min_support = std::min(hi, -lo);
    if (lo > accept || hi < -accept) {
      out.status = SearchStatus::infeasible;
      out.diagnostic = "every norming functional pairs with y away from 0";
      return out;
    }
    const double t = hi > lo ? std::clamp(-lo / (hi - lo), 0.0, 1.0) : 0.0;
    std::vector<cplx> f(flo.coords.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (1.0 - t) * flo.coords[i] + t * fhi.coords[i];
    Functional fn(x.space, realified(std::move(f), Field::real));
    if (std::abs(pair(fn, y)) <= accept) {
      out.status = SearchStatus::found;
      out.f = std::move(fn);
    } else {
      out.diagnostic = "interval endpoints bracket 0 but the combination missed it";
    }
    return out;
  }

  planar::Options po;
  po.tol = 0.5 * accept;
  po.polish_iterations = std::min(100, max_iter);
  const FaceOracle oracle(x, y);
  const auto res = planar::zero_membership(oracle, po);
  out.evaluations = res.evaluations;
  out.min_support = res.min_support;
  if (!res.contains) {
    out.status = SearchStatus::infeasible;
    out.diagnostic = "a direction separates 0 from the pairings of norming functionals with y";
    return out;
  }
  if (res.witness && std::abs(res.witness->point) <= accept) {
    out.status = SearchStatus::found;
    out.f = Functional(x.space, res.witness->handle);
  } else {
    out.diagnostic = "0 is within tolerance of the pairing set but no functional realizing it was assembled";
  }
  return out;
}

Certificate build_certificate(const Functional& f, const Vec& x, const Vec& y, double tol) {
  if (!(f.space == x.space) || !(x.space == y.space)) {
    throw Error(ErrorCode::dimension_mismatch, "build_certificate: operands live in different spaces");
  }
  const double nx = norm(x);
  const double df = dual_norm(f);
  const cplx fx = pair(f, x);
  if (df > 1.0 + tol) throw Error(ErrorCode::invalid_argument, "build_certificate: dual norm of f exceeds 1");
  if (std::abs(fx) < nx * (1.0 - tol)) throw Error(ErrorCode::invalid_argument, "build_certificate: f does not norm x");

  // pair(c f, x) = conj(c) pair(f, x), so c = phase(pair(f, x)) makes it >= 0
  const std::vector<cplx> fr = scaled(f.coords, phase(fx));
  Certificate c{rank_one(fr, x.space.field()), x.space, {}, "search"};
  auto& r = c.residuals;
  r.hermitian_dev = hermitian_deviation(c.g);
  r.min_eig = 0.0;
  const cplx gxx = quadratic_form(c.g, x.coords);
  r.norming_dev = std::abs(gxx - nx * nx);
  r.cross_dev = std::abs(sesquilinear(c.g, x.coords, y.coords));
  r.bilinear_norm_claimed = df * df;
  // (x/|x|, x/|x|) is a unit pair for the form
  r.bilinear_norm_lb = std::abs(gxx) / (nx * nx);
  return c;
}

CertificateResiduals compute_residuals(const CMatrix& g, const Vec& x, const Vec& y, int restarts,
                                       std::uint64_t seed) {
  if (g.rows() != x.space.dim() || g.cols() != x.space.dim() || !(x.space == y.space)) {
    throw Error(ErrorCode::dimension_mismatch, "certificate shape does not match the space");
  }
  CertificateResiduals r;
  const double nx = norm(x);
  r.hermitian_dev = hermitian_deviation(g);
  r.min_eig = hermitian_eig(hermitian_part(g), 1.0).values.back();
  r.norming_dev = std::abs(quadratic_form(g, x.coords) - nx * nx);
  r.cross_dev = std::abs(sesquilinear(g, x.coords, y.coords));
  // a complex G on a real space is measured on the complexification
  const SpaceSpec space = x.space.field() == Field::real && !g.is_real() ? complexified(x.space) : x.space;
  const FormNorm fn = sesquilinear_norm(g, space, restarts, seed);
  r.bilinear_norm_lb = fn.lower;
  r.bilinear_norm_claimed = fn.upper.value_or(fn.lower);
  return r;
}

namespace {

VerifyReport verify_impl(const CMatrix& g, const Vec& x, const Vec& y, double tol, int restarts,
                         std::uint64_t seed, const Verdict* known) {
  if (!(x.space == y.space)) throw Error(ErrorCode::dimension_mismatch, "verify: x and y in different spaces");
  const std::size_t d = x.space.dim();
  if (g.rows() != d || g.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch, "verify: G must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  VerifyReport rep;
  auto& r = rep.residuals;
  const double nx = norm(x), ny = norm(y);
  auto add = [&](std::string name, double value, double bound, bool pass) {
    rep.clauses.push_back({std::move(name), pass, value, bound});
  };

  const bool real_space = x.space.field() == Field::real;
  double imag_max = 0.0;
  for (const cplx& z : g.entries()) imag_max = std::max(imag_max, std::abs(z.imag()));
  add("field", imag_max, 0.0, !real_space || imag_max == 0.0);

  r.hermitian_dev = hermitian_deviation(g);
  const double hbound = tol * std::max(1.0, g.max_abs());
  add("hermitian", r.hermitian_dev, hbound, r.hermitian_dev <= hbound);

  r.min_eig = hermitian_eig(hermitian_part(g), 1.0).values.back();
  add("positive", r.min_eig, -tol, r.min_eig >= -tol);

  r.norming_dev = std::abs(quadratic_form(g, x.coords) - nx * nx);
  add("norming", r.norming_dev, tol * nx * nx, r.norming_dev <= tol * nx * nx);

  r.cross_dev = std::abs(sesquilinear(g, x.coords, y.coords));
  add("cross", r.cross_dev, tol * nx * ny, r.cross_dev <= tol * nx * ny);

  const SpaceSpec space = real_space && imag_max != 0.0 ? complexified(x.space) : x.space;
  const FormNorm fn = sesquilinear_norm(g, space, restarts, seed);
  r.bilinear_norm_lb = fn.lower;
  r.bilinear_norm_claimed = fn.upper.value_or(fn.lower);
  rep.norm_upper = fn.upper;
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
  add("norm", norm_value, 1.0 + tol, norm_value <= 1.0 + tol);

  bool all = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const Clause& c) { return c.pass; });
  if (all) {
    const Verdict v = known ? *known : bj_margin(x, y, tol);
    rep.implication = v;
    const bool ok = v.margin >= -10.0 * tol * nx;
    add("implication", v.margin, -10.0 * tol * nx, ok);
    all = ok;
  }
  rep.pass = all;
  return rep;
}

}  // namespace

VerifyReport verify_certificate(const CMatrix& g, const Vec& x, const Vec& y, double tol, int restarts,
                                std::uint64_t seed) {
  return verify_impl(g, x, y, tol, restarts, seed, nullptr);
}

CertifyResult certify(const Vec& x, const Vec& y, const CertifyOptions& opt) {
  if (!(x.space == y.space)) throw Error(ErrorCode::dimension_mismatch, "certify: x and y in different spaces");
  const double nx = norm(x);
  if (nx == 0.0) throw Error(ErrorCode::invalid_argument, "certify: x = 0");
  const double tol = opt.tol;

  CertifyResult out;
  out.verdict = bj_margin(x, y, tol);
  const Vec z = shifted(x, y, out.verdict.lambda_star);
  const double ny = norm(y);

  auto accept = [&](const Functional& f, const char* stage) {
    if (dual_norm(f) > 1.0 + tol) return false;
    if (std::abs(pair(f, x)) < nx * (1.0 - tol)) return false;
    if (std::abs(pair(f, y)) > tol * ny) return false;
    Certificate c = build_certificate(f, x, y, tol);
    c.stage = stage;
    const VerifyReport rep = verify_impl(c.g, x, y, tol, opt.restarts, opt.seed, &out.verdict);
    if (!rep.pass) return false;
    c.residuals.bilinear_norm_lb = rep.residuals.bilinear_norm_lb;
    c.residuals.min_eig = rep.residuals.min_eig;
    out.certificate = std::move(c);
    return true;
  };

  const bool z_nonzero = norm(z) > 0.0;
  if (is_smooth(x.space) && z_nonzero) {
    out.stages_tried.push_back("smooth");
    if (accept(norming_functional(z), "smooth")) return out;
  }

  bool inconclusive = false;
  std::vector<const Vec*> anchors;
  if (z_nonzero) anchors.push_back(&z);
  if (out.verdict.lambda_star != 0.0 || !z_nonzero) anchors.push_back(&x);
  for (const Vec* a : anchors) {
    out.stages_tried.push_back(a == &x ? "search(x)" : "search(z)");
    const SearchResult s = norming_functional_search(*a, y, tol);
    if (a == anchors.front() || s.status == SearchStatus::found) out.search = s.status;
    if (s.status == SearchStatus::inconclusive) inconclusive = true;
    if (s.f && accept(*s.f, "search")) {
      out.search = SearchStatus::found;
      return out;
    }
  }

  if (inconclusive || out.verdict.orthogonal) {
    out.stages_tried.push_back("gram");
    GramOptions go;
    go.tol = tol;
    go.restarts = opt.restarts;
    go.seed = opt.seed;
    const GramResult gr = gram_dykstra(x, y, go);
    if (gr.g) {
      const VerifyReport rep = verify_impl(*gr.g, x, y, tol, opt.restarts, opt.seed, &out.verdict);
      if (rep.pass) {
        out.certificate = Certificate{*gr.g, x.space, rep.residuals, "gram"};
        return out;
      }
    }
  }

  if (out.verdict.orthogonal && !out.verdict.borderline) {
    out.inconsistency = "the direct margin " + std::to_string(out.verdict.margin) +
                        " says orthogonal but no certificate was found (stages: " +
                        std::to_string(out.stages_tried.size()) + ")";
  }
  return out;
}

}  // namespace bjkit
