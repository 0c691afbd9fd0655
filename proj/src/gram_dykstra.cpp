#include "bjkit/gram_dykstra.hpp"

#include <algorithm>
#include <cmath>

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"

namespace bjkit {
namespace {

// Real Frobenius inner product Re tr(A* B).
double frob(const CMatrix& a, const CMatrix& b) {
  return kernels::dot_conj(a.data(), b.data()).real();
}

CMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
  CMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  }
  return m;
}

void axpy(CMatrix& y, double alpha, const CMatrix& x) { kernels::axpy(alpha, x.data(), y.data()); }

CMatrix psd_project(const CMatrix& g) {
  const EigResult e = hermitian_eig(hermitian_part(g), 1.0);
  const std::size_t d = g.rows();
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (e.values[k] <= 0.0) continue;
    const std::vector<cplx> v = e.vectors.column(k);
    axpy(out, e.values[k], outer(v, v));
  }
  return out;
}

struct Affine {
  std::vector<CMatrix> a;
  std::vector<double> b;
  CMatrix gram;  // Frobenius Gram matrix of the constraint matrices
};

CMatrix affine_project(const Affine& af, const CMatrix& g) {
  const std::size_t k = af.a.size();
  CMatrix rhs(k, 1);
  for (std::size_t i = 0; i < k; ++i) rhs(i, 0) = frob(g, af.a[i]) - af.b[i];
  const CMatrix mu = solve(af.gram, rhs);
  CMatrix out = g;
  for (std::size_t i = 0; i < k; ++i) axpy(out, -mu(i, 0).real(), af.a[i]);
  return out;
}

CMatrix halfspace_project(const CMatrix& c, double cc, const CMatrix& g) {
  const double v = frob(g, c);
  if (v <= 1.0) return g;
  CMatrix out = g;
  axpy(out, -(v - 1.0) / cc, c);
  return out;
}

}  // namespace

GramResult gram_dykstra(const Vec& x, const Vec& y, const GramOptions& opt) {
  GramResult out;
  const std::size_t d = x.space.dim();
  const double nx = norm(x), ny = norm(y);
  const bool real = x.space.field() == Field::real;

  Affine af;
  af.a.push_back(outer(x.coords, x.coords));
  af.b.push_back(nx * nx);
  if (ny > 0.0) {
    // y* G x = tr(G x y*); its real and imaginary parts are linear in G
    const CMatrix m = outer(x.coords, y.coords);
    af.a.push_back(hermitian_part(m));
    af.b.push_back(0.0);
    if (!real) {
      af.a.push_back(hermitian_part(m * cplx(0.0, -1.0)));
      af.b.push_back(0.0);
    }
  }
  // drop constraints that vanish identically
  for (std::size_t i = af.a.size(); i-- > 1;) {
    if (af.a[i].max_abs() == 0.0) {
      af.a.erase(af.a.begin() + static_cast<long>(i));
      af.b.erase(af.b.begin() + static_cast<long>(i));
    }
  }
  af.gram = CMatrix(af.a.size(), af.a.size());
  for (std::size_t i = 0; i < af.a.size(); ++i) {
    for (std::size_t j = 0; j < af.a.size(); ++j) af.gram(i, j) = frob(af.a[i], af.a[j]);
  }
  try {
    (void)affine_project(af, CMatrix(d, d));
  } catch (const Error&) {
    out.diagnostic = "the constraints phi(x,x) = |x|^2 and phi(x,y) = 0 are inconsistent";
    return out;
  }

  const std::vector<cplx> f = norming_functional(x).coords;
  CMatrix g = outer(f, f);

  std::vector<CMatrix> cuts;
  std::vector<double> cut_norms;
  int clean = 0;
  for (int round = 0; round < opt.max_rounds; ++round) {
    out.rounds = round + 1;
    const std::size_t sets = 2 + cuts.size();
    std::vector<CMatrix> incr(sets, CMatrix(d, d));
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      const CMatrix before = g;
      for (std::size_t s = 0; s < sets; ++s) {
        CMatrix shifted = g + incr[s];
        CMatrix next = s == 0                  ? affine_project(af, shifted)
                       : s + 1 == sets         ? psd_project(shifted)
                                               : halfspace_project(cuts[s - 1], cut_norms[s - 1], shifted);
        incr[s] = shifted - next;
        g = std::move(next);
      }
      if ((g - before).max_abs() <= 1e-14 * std::max(1.0, g.max_abs())) break;
    }
    g = hermitian_part(g);
    if (real) {
      for (auto& z : g.data()) z = z.real();
    }

    const double min_eig = hermitian_eig(g, 1.0).values.back();
    const double norming = std::abs(quadratic_form(g, x.coords) - nx * nx);
    const double cross = std::abs(sesquilinear(g, x.coords, y.coords));
    const bool feasible = min_eig >= -0.5 * opt.tol && norming <= 0.5 * opt.tol * nx * nx &&
                          cross <= 0.5 * opt.tol * nx * std::max(ny, 1e-300);

    CMatrix gt = g;
    if (real) gt.set_field(Field::real);
    const FormNorm fn = sesquilinear_norm(gt, x.space, opt.restarts, opt.seed + static_cast<std::uint64_t>(round));
    if (fn.lower > 1.0 + 0.5 * opt.tol) {
      // rotate u so that v* G u is real and positive
      const cplx val = sesquilinear(g, fn.a, fn.b);
      const std::vector<cplx> u = scaled(fn.a, std::conj(phase(val)));
      CMatrix c = hermitian_part(outer(u, fn.b));
      cut_norms.push_back(frob(c, c));
      cuts.push_back(std::move(c));
      ++out.cuts;
      clean = 0;
      continue;
    }
    if (!feasible) {
      clean = 0;
      continue;
    }
    const bool certified = fn.upper && *fn.upper <= 1.0 + 0.5 * opt.tol;
    if (certified || ++clean >= opt.clean_rounds) {
      out.g = std::move(gt);
      return out;
    }
  }
  out.diagnostic = "no feasible Gram matrix after " + std::to_string(out.rounds) + " rounds";
  return out;
}

}  // namespace bjkit
