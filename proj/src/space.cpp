#include "bjkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"

namespace bjkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-12;

void check_coords(const SpaceSpec& s, std::span<const cplx> c, const char* what) {
  if (c.size() != s.dim()) {
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": expected " + std::to_string(s.dim()) +
                                                   " coordinates for " + s.describe() + ", got " +
                                                   std::to_string(c.size()));
  }
  for (const cplx& z : c) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::invalid_argument, std::string(what) + ": non-finite coordinate");
    }
    if (s.field() == Field::real && z.imag() != 0.0) {
      throw Error(ErrorCode::invalid_argument, std::string(what) + ": complex coordinate in a real space");
    }
  }
}

double lp_norm(std::span<const cplx> v, double p) {
  if (p == 1.0) return kernels::sum_abs(v);
  if (p == 2.0) return std::sqrt(kernels::sum_sq(v));
  const double m = kernels::max_abs(v);
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  for (const cplx& z : v) s += std::pow(std::abs(z) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

// Moduli s >= 0 with s + mu p s^{p-1} = r, s in [0, r].
double lp_prox_coordinate(double r, double mu, double p) {
  if (r == 0.0 || mu == 0.0) return r;
  double lo = 0.0, hi = r;
  double s = r / (1.0 + mu * p * std::pow(r, p - 2.0));  // fixed-point guess
  s = std::clamp(s, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double phi = s + mu * p * std::pow(s, p - 1.0) - r;
    if (phi > 0.0) hi = s; else lo = s;
    if (std::abs(phi) <= 1e-15 * r) break;
    const double dphi = 1.0 + mu * p * (p - 1.0) * std::pow(s, p - 2.0);
    double next = s - phi / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
  }
  return s;
}

std::vector<double> moduli(std::span<const cplx> v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = std::abs(v[i]);
  return r;
}

std::vector<cplx> with_phases(std::span<const cplx> v, std::span<const double> s) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s[i] == 0.0 ? cplx(0.0) : s[i] * phase(v[i]);
  return out;
}

std::vector<cplx> rebuild(const SvdResult& d, std::span<const double> sigma, std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ui = d.left(i, k) * sigma[k];
      for (std::size_t j = 0; j < n; ++j) m(i, j) += ui * std::conj(d.right(j, k));
    }
  }
  return m.entries();
}

std::vector<cplx> realify(std::vector<cplx> v, Field f) {
  if (f == Field::real) {
    for (auto& z : v) z = cplx(z.real(), 0.0);
  }
  return v;
}

std::span<const cplx> left_part(const SpaceSpec& s, std::span<const cplx> v) {
  return v.subspan(0, s.left().dim());
}
std::span<const cplx> right_part(const SpaceSpec& s, std::span<const cplx> v) {
  return v.subspan(s.left().dim());
}

std::vector<cplx> concat(std::vector<cplx> a, const std::vector<cplx>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<cplx> norming_coords(const SpaceSpec& s, std::span<const cplx> x);

std::vector<cplx> norming_coords_lp(double p, std::span<const cplx> x) {
  std::vector<cplx> f(x.size());
  const double nx = lp_norm(x, p);
  if (nx == 0.0) return f;
  if (p == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = x[i] == 0.0 ? cplx(0.0) : phase(x[i]);
  } else if (std::isinf(p)) {
    std::size_t count = 0;
    for (const cplx& z : x) count += std::abs(z) >= (1.0 - kTie) * nx;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) >= (1.0 - kTie) * nx) f[i] = phase(x[i]) / static_cast<double>(count);
    }
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) f[i] = phase(x[i]) * std::pow(std::abs(x[i]) / nx, p - 1.0);
    }
  }
  return f;
}

std::vector<cplx> norming_coords(const SpaceSpec& s, std::span<const cplx> x) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp:
      return realify(norming_coords_lp(s.p(), x), s.field());
    case SpaceSpec::Kind::spectral: {
      const std::size_t n = s.n();
      const SvdResult d = svd(as_matrix(n, x));
      if (d.values.empty() || d.values[0] == 0.0) return std::vector<cplx>(x.size());
      std::vector<double> sigma(d.values.size(), 0.0);
      std::size_t k = 0;
      while (k < sigma.size() && d.values[k] >= (1.0 - kTie) * d.values[0]) ++k;
      for (std::size_t i = 0; i < k; ++i) sigma[i] = 1.0 / static_cast<double>(k);
      return realify(rebuild(d, sigma, n), s.field());
    }
    case SpaceSpec::Kind::suminf: {
      const auto xl = left_part(s, x), xr = right_part(s, x);
      const double nl = norm(s.left(), xl), nr = norm(s.right(), xr);
      const double nx = std::max(nl, nr);
      std::vector<cplx> fl(xl.size()), fr(xr.size());
      if (nx == 0.0) return concat(fl, fr);
      const bool al = nl >= (1.0 - kTie) * nx, ar = nr >= (1.0 - kTie) * nx;
      const double w = (al && ar) ? 0.5 : 1.0;
      if (al) fl = scaled(norming_coords(s.left(), xl), w);
      if (ar) fr = scaled(norming_coords(s.right(), xr), w);
      return concat(fl, fr);
    }
  }
  return {};
}

std::vector<cplx> norming_vector_lp(double p, std::span<const cplx> f) {
  std::vector<cplx> v(f.size());
  if (std::isinf(p)) {
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = phase(f[i]);
    return v;
  }
  if (f.empty()) return v;
  if (p == 1.0) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (std::abs(f[i]) > std::abs(f[k])) k = i;
    }
    v[k] = phase(f[k]);
    return v;
  }
  const double q = conjugate_exponent(p);
  const double nf = lp_norm(f, q);
  if (nf == 0.0) return v;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) v[i] = phase(f[i]) * std::pow(std::abs(f[i]) / nf, q - 1.0);
  }
  return v;
}

std::vector<cplx> lmo_coords(const SpaceSpec& s, std::span<const cplx> x, std::span<const cplx> w,
                             double rel_tie, double* value) {
  std::vector<cplx> f(x.size());
  const double nx = norm(s, x);
  if (nx == 0.0) {
    *value = 0.0;  // x = 0 is rejected by callers
    return f;
  }
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: {
      const double p = s.p();
      if (p == 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (std::abs(x[i]) > rel_tie * nx) f[i] = phase(x[i]);
          else if (w[i] != 0.0) f[i] = phase(w[i]);
        }
      } else if (std::isinf(p)) {
        std::size_t best = x.size();
        double bv = -kInf;
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (std::abs(x[i]) < (1.0 - rel_tie) * nx) continue;
          const double val = (std::conj(phase(x[i])) * w[i]).real();
          if (val > bv) {
            bv = val;
            best = i;
          }
        }
        f[best] = phase(x[best]);
      } else {
        f = norming_coords_lp(p, x);
      }
      f = realify(std::move(f), s.field());
      break;
    }
    case SpaceSpec::Kind::spectral: {
      const std::size_t n = s.n();
      const SvdResult d = svd(as_matrix(n, x));
      std::size_t k = 0;
      while (k < d.values.size() && d.values[k] >= (1.0 - rel_tie) * d.values[0]) ++k;
      CMatrix u1(n, k), v1(n, k);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          u1(i, j) = d.left(i, j);
          v1(i, j) = d.right(i, j);
        }
      }
      const CMatrix c = u1.adjoint() * as_matrix(n, w) * v1;
      std::vector<cplx> g = top_eigen(hermitian_part(c)).vector;
      if (s.field() == Field::real) {
        // A real top eigenvector exists; rotate the computed one onto it.
        std::size_t m = 0;
        for (std::size_t i = 1; i < g.size(); ++i) {
          if (std::abs(g[i]) > std::abs(g[m])) m = i;
        }
        const cplx ph = std::conj(phase(g[m]));
        for (auto& z : g) z *= ph;
      }
      const std::vector<cplx> a = u1.apply(g), b = v1.apply(g);
      CMatrix fm(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) fm(i, j) = a[i] * std::conj(b[j]);
      }
      f = realify(fm.entries(), s.field());
      break;
    }
    case SpaceSpec::Kind::suminf: {
      const auto xl = left_part(s, x), xr = right_part(s, x);
      const auto wl = left_part(s, w), wr = right_part(s, w);
      const double nl = norm(s.left(), xl), nr = norm(s.right(), xr);
      double vl = -kInf, vr = -kInf;
      std::vector<cplx> fl, fr;
      if (nl >= (1.0 - rel_tie) * nx) fl = lmo_coords(s.left(), xl, wl, rel_tie, &vl);
      if (nr >= (1.0 - rel_tie) * nx) fr = lmo_coords(s.right(), xr, wr, rel_tie, &vr);
      if (vl >= vr) {
        f = concat(fl, std::vector<cplx>(xr.size()));
      } else {
        f = concat(std::vector<cplx>(xl.size()), fr);
      }
      break;
    }
  }
  *value = kernels::dot_conj(f, w).real();
  return f;
}

}  // namespace

SpaceSpec SpaceSpec::lp(double p, std::size_t dim, Field field) {
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "lp space needs p >= 1");
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "lp space needs dim >= 1");
  SpaceSpec s;
  s.kind_ = Kind::lp;
  s.p_ = p;
  s.dim_ = dim;
  s.field_ = field;
  return s;
}

SpaceSpec SpaceSpec::spectral(std::size_t n, Field field) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "matrix space needs n >= 1");
  SpaceSpec s;
  s.kind_ = Kind::spectral;
  s.n_ = n;
  s.dim_ = n * n;
  s.field_ = field;
  return s;
}

SpaceSpec SpaceSpec::sum_inf(const SpaceSpec& left, const SpaceSpec& right) {
  if (left.field() != right.field()) {
    throw Error(ErrorCode::invalid_argument, "direct sum of spaces over different fields");
  }
  SpaceSpec s;
  s.kind_ = Kind::suminf;
  s.field_ = left.field();
  s.dim_ = left.dim() + right.dim();
  s.left_ = std::make_shared<const SpaceSpec>(left);
  s.right_ = std::make_shared<const SpaceSpec>(right);
  return s;
}

double SpaceSpec::dual_exponent() const noexcept { return conjugate_exponent(p_); }

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  const char* f = field_ == Field::real ? "R" : "C";
  switch (kind_) {
    case Kind::lp:
      os << "l^" << (std::isinf(p_) ? std::string("inf") : (std::ostringstream() << p_).str()) << "(" << f
         << "^" << dim_ << ")";
      break;
    case Kind::spectral:
      os << "M_" << n_ << "(" << f << ")";
      break;
    case Kind::suminf:
      os << "(" << left_->describe() << " (+)inf " << right_->describe() << ")";
      break;
  }
  return os.str();
}

bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.kind_ != b.kind_ || a.field_ != b.field_ || a.dim_ != b.dim_) return false;
  switch (a.kind_) {
    case SpaceSpec::Kind::lp: return a.p_ == b.p_;
    case SpaceSpec::Kind::spectral: return a.n_ == b.n_;
    case SpaceSpec::Kind::suminf: return *a.left_ == *b.left_ && *a.right_ == *b.right_;
  }
  return false;
}

Vec::Vec(SpaceSpec s, std::vector<cplx> c) : space(std::move(s)), coords(std::move(c)) {
  check_coords(space, coords, "vector");
}

Functional::Functional(SpaceSpec s, std::vector<cplx> c) : space(std::move(s)), coords(std::move(c)) {
  check_coords(space, coords, "functional");
}

double norm(const SpaceSpec& s, std::span<const cplx> v) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return lp_norm(v, s.p());
    case SpaceSpec::Kind::spectral: return spectral_norm(as_matrix(s.n(), v));
    case SpaceSpec::Kind::suminf:
      return std::max(norm(s.left(), left_part(s, v)), norm(s.right(), right_part(s, v)));
  }
  return 0.0;
}

double dual_norm(const SpaceSpec& s, std::span<const cplx> f) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return lp_norm(f, s.dual_exponent());
    case SpaceSpec::Kind::spectral: return trace_norm(as_matrix(s.n(), f));
    case SpaceSpec::Kind::suminf:
      return dual_norm(s.left(), left_part(s, f)) + dual_norm(s.right(), right_part(s, f));
  }
  return 0.0;
}

double norm(const Vec& v) { return norm(v.space, v.coords); }
double dual_norm(const Functional& f) { return dual_norm(f.space, f.coords); }

cplx pair(const Functional& f, const Vec& v) {
  if (!(f.space == v.space)) {
    throw Error(ErrorCode::dimension_mismatch,
                "pairing a functional on " + f.space.describe() + " with a vector of " + v.space.describe());
  }
  return kernels::dot_conj(f.coords, v.coords);
}

std::vector<cplx> lp_ball_project(std::span<const cplx> v, double p) {
  const std::vector<double> r = moduli(v);
  if (std::isinf(p)) {
    std::vector<double> s(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) s[i] = std::min(r[i], 1.0);
    return with_phases(v, s);
  }
  const double nr = lp_norm(v, p);
  if (nr <= 1.0) return {v.begin(), v.end()};
  if (p == 2.0) return scaled(v, 1.0 / nr);
  if (p == 1.0) return with_phases(v, project_l1_ball_nonneg(r, 1.0));

  // Sum s_i(mu)^p = 1 with s_i from the per-coordinate stationarity equation.
  std::vector<double> s(r.size());
  auto evaluate = [&](double mu, double* deriv) {
    double total = 0.0, d = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s[i] = lp_prox_coordinate(r[i], mu, p);
      if (s[i] == 0.0) continue;
      const double sp1 = std::pow(s[i], p - 1.0);
      total += sp1 * s[i];
      const double ds = -p * sp1 / (1.0 + mu * p * (p - 1.0) * std::pow(s[i], p - 2.0));
      d += p * sp1 * ds;
    }
    if (deriv) *deriv = d;
    return total - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (evaluate(hi, nullptr) > 0.0 && hi < 1e300) hi *= 2.0;
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double d = 0.0;
    const double g = evaluate(mu, &d);
    if (std::abs(g) <= 1e-12) break;
    if (g > 0.0) lo = mu; else hi = mu;
    double next = d < 0.0 ? mu - g / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    mu = next;
  }
  evaluate(mu, nullptr);
  return with_phases(v, s);
}

std::vector<cplx> primal_ball_project(const SpaceSpec& s, std::span<const cplx> v) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return realify(lp_ball_project(v, s.p()), s.field());
    case SpaceSpec::Kind::spectral: {
      const SvdResult d = svd(as_matrix(s.n(), v));
      if (d.values.empty() || d.values[0] <= 1.0) return {v.begin(), v.end()};
      std::vector<double> sigma(d.values);
      for (double& x : sigma) x = std::min(x, 1.0);
      return realify(rebuild(d, sigma, s.n()), s.field());
    }
    case SpaceSpec::Kind::suminf:
      return concat(primal_ball_project(s.left(), left_part(s, v)),
                    primal_ball_project(s.right(), right_part(s, v)));
  }
  return {};
}

std::vector<cplx> dual_ball_project(const SpaceSpec& s, std::span<const cplx> f) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return realify(lp_ball_project(f, s.dual_exponent()), s.field());
    case SpaceSpec::Kind::spectral: {
      const SvdResult d = svd(as_matrix(s.n(), f));
      double total = 0.0;
      for (double x : d.values) total += x;
      if (total <= 1.0) return {f.begin(), f.end()};
      return realify(rebuild(d, project_l1_ball_nonneg(d.values, 1.0), s.n()), s.field());
    }
    case SpaceSpec::Kind::suminf: {
      if (dual_norm(s, f) <= 1.0) return {f.begin(), f.end()};
      const auto fl = left_part(s, f), fr = right_part(s, f);
      // Projection onto { |g_l|_* + |g_r|_* <= 1 }: g_c = prox_{mu |.|_*}(f_c)
      // = f_c - mu P_c(f_c / mu), P_c the primal ball projection.
      auto prox = [](const SpaceSpec& c, std::span<const cplx> fc, double mu) {
        std::vector<cplx> g(fc.begin(), fc.end());
        if (mu == 0.0) return g;
        const std::vector<cplx> p = primal_ball_project(c, scaled(fc, 1.0 / mu));
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= mu * p[i];
        return g;
      };
      double lo = 0.0, hi = std::max(norm(s.left(), fl), norm(s.right(), fr));
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mu = 0.5 * (lo + hi);
        const double t = dual_norm(s.left(), prox(s.left(), fl, mu)) + dual_norm(s.right(), prox(s.right(), fr, mu));
        (t > 1.0 ? lo : hi) = mu;
      }
      return concat(prox(s.left(), fl, hi), prox(s.right(), fr, hi));
    }
  }
  return {};
}

Functional dual_ball_project(const Functional& f) {
  return Functional(f.space, dual_ball_project(f.space, f.coords));
}

Functional norming_functional(const Vec& x) { return Functional(x.space, norming_coords(x.space, x.coords)); }

std::vector<cplx> norming_vector(const SpaceSpec& s, std::span<const cplx> f) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: return realify(norming_vector_lp(s.p(), f), s.field());
    case SpaceSpec::Kind::spectral: {
      const SvdResult d = svd(as_matrix(s.n(), f));
      std::vector<double> ones(d.values.size(), 1.0);
      return realify(rebuild(d, ones, s.n()), s.field());
    }
    case SpaceSpec::Kind::suminf:
      return concat(norming_vector(s.left(), left_part(s, f)), norming_vector(s.right(), right_part(s, f)));
  }
  return {};
}

Functional face_lmo(const Vec& x, std::span<const cplx> w, double rel_tie) {
  if (w.size() != x.coords.size()) throw Error(ErrorCode::dimension_mismatch, "face_lmo: direction size");
  double value = 0.0;
  return Functional(x.space, lmo_coords(x.space, x.coords, w, rel_tie, &value));
}

bool is_smooth(const SpaceSpec& s) {
  return s.is_lp() && s.p() > 1.0 && !std::isinf(s.p());
}

std::optional<std::vector<std::vector<cplx>>> real_extreme_points(const SpaceSpec& s, std::size_t max_points) {
  if (s.field() != Field::real) return std::nullopt;
  std::vector<std::vector<cplx>> pts;
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: {
      const std::size_t d = s.dim();
      if (s.p() == 1.0) {
        if (2 * d > max_points) return std::nullopt;
        for (std::size_t i = 0; i < d; ++i) {
          for (double sg : {1.0, -1.0}) {
            std::vector<cplx> e(d);
            e[i] = sg;
            pts.push_back(std::move(e));
          }
        }
        return pts;
      }
      if (std::isinf(s.p())) {
        if (d >= 63 || (std::size_t{1} << d) > max_points) return std::nullopt;
        for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
          std::vector<cplx> e(d);
          for (std::size_t i = 0; i < d; ++i) e[i] = (mask >> i) & 1 ? -1.0 : 1.0;
          pts.push_back(std::move(e));
        }
        return pts;
      }
      return std::nullopt;
    }
    case SpaceSpec::Kind::spectral:
      return std::nullopt;
    case SpaceSpec::Kind::suminf: {
      auto l = real_extreme_points(s.left(), max_points);
      auto r = real_extreme_points(s.right(), max_points);
      if (!l || !r || l->size() * r->size() > max_points) return std::nullopt;
      for (const auto& a : *l) {
        for (const auto& b : *r) pts.push_back(concat(a, b));
      }
      return pts;
    }
  }
  return std::nullopt;
}

std::vector<cplx> random_unit_vector(const SpaceSpec& s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(s.dim());
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (auto& z : v) z = s.field() == Field::real ? cplx(g(rng), 0.0) : cplx(g(rng), g(rng));
    const double n = norm(s, v);
    if (n > 0.0) {
      for (auto& z : v) z /= n;
      return v;
    }
  }
  throw Error(ErrorCode::inconclusive, "random_unit_vector: could not draw a nonzero vector");
}

CMatrix as_matrix(std::size_t n, std::span<const cplx> coords) {
  if (coords.size() != n * n) throw Error(ErrorCode::dimension_mismatch, "as_matrix: expected n*n coordinates");
  return CMatrix(n, n, std::vector<cplx>(coords.begin(), coords.end()));
}

std::vector<cplx> flatten(const CMatrix& m) { return m.entries(); }

}  // namespace bjkit
