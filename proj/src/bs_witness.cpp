#include "bjkit/bs_witness.hpp"

#include <cmath>

#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"
#include "bjkit/space.hpp"

namespace bjkit {

MaxSingularSubspace max_singular_subspace(const CMatrix& s, double rel_tol) {
  const std::size_t n = s.cols();
  MaxSingularSubspace out;
  const SvdResult d = svd(s);
  out.sigma_max = d.values.empty() ? 0.0 : d.values[0];
  if (out.sigma_max == 0.0) {
    out.degenerate = true;
    out.basis = CMatrix::identity(n, s.field());
    return out;
  }
  // right singular values beyond min(rows, cols) are zero
  std::vector<double> sigma(n, 0.0);
  for (std::size_t i = 0; i < d.values.size() && i < n; ++i) sigma[i] = d.values[i];
  std::size_t k = 0;
  while (k < n && sigma[k] >= out.sigma_max * (1.0 - rel_tol)) ++k;
  out.gap = out.sigma_max - (k < n ? sigma[k] : 0.0);
  out.basis = CMatrix(n, k, s.field());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = d.right(i, j);
      out.basis(i, j) = s.field() == Field::real ? cplx(z.real(), 0.0) : z;
    }
  }
  return out;
}

BSResult bs_decide(const CMatrix& s, const CMatrix& t, double tol) {
  if (!s.square() || !t.square() || s.rows() != t.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "bs_witness: S and T must be square of the same size");
  }
  BSResult out;
  out.subspace = max_singular_subspace(s);
  if (out.subspace.degenerate) throw Error(ErrorCode::invalid_argument, "bs_witness: S = 0");

  const double ns = out.subspace.sigma_max;
  const double nt = spectral_norm(t);
  const double scaled_tol = tol * (1.0 + ns * nt);
  const CMatrix& b = out.subspace.basis;
  const CMatrix a = compress(s.adjoint() * t, b);
  const bool real = s.is_real() && t.is_real();
  out.range = real ? numrange_zero_real(a, scaled_tol) : numrange_zero(a, scaled_tol);
  if (!out.range.contains_zero) return out;

  BSWitness w;
  w.h = b.apply(*out.range.witness);
  const double nh = norm2(w.h);
  for (auto& z : w.h) z /= nh;
  const std::vector<cplx> sh = s.apply(w.h), th = t.apply(w.h);
  w.attainment_residual = std::abs(norm2(sh) - ns);
  w.pairing_residual = std::abs(kernels::dot_conj(sh, th));
  out.witness = std::move(w);
  return out;
}

std::optional<BSWitness> bs_witness(const CMatrix& s, const CMatrix& t, double tol) {
  return bs_decide(s, t, tol).witness;
}

BSChecked bs_witness_checked(const CMatrix& s, const CMatrix& t, double tol, double margin_tol) {
  BSChecked out{bs_decide(s, t, tol), {}};
  const Field f = common_field(s.field(), t.field());
  const SpaceSpec space = SpaceSpec::spectral(s.rows(), (s.is_real() && t.is_real()) ? Field::real : f);
  out.verdict = bj_margin(Vec(space, s.entries()), Vec(space, t.entries()), margin_tol);

  const bool exists = out.result.witness.has_value();
  if (exists == out.verdict.orthogonal || out.verdict.borderline) return out;
  const double scale = out.result.subspace.sigma_max * spectral_norm(t);
  if (!exists && out.result.range.boundary_gap <= std::sqrt(tol) * (1.0 + scale)) return out;
  throw Error(ErrorCode::inconsistency,
              std::string("operator pair: numerical-range witness ") + (exists ? "exists" : "does not exist") +
                  " but the direct margin is " + std::to_string(out.verdict.margin));
}

}  // namespace bjkit
