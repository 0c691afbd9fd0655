#pragma once

// Bilinear witnesses on the matrix algebra M_n(C) with the spectral norm.
// A sesquilinear certificate phi turns into the bilinear form
// psi(u, v) = phi(u, v*), which has the same norm because v -> v* is an
// isometry.

#include <cstdint>
#include <optional>

#include "bjkit/certificate.hpp"

namespace bjkit {

/// Conjugate transpose under row-major flattening. Throws invalid_argument
/// unless the vector lives in a matrix space.
Vec adjoint(const Vec& a);

struct CStarResiduals {
  double norming_dev = 0.0;  // |psi(a, a*) - |a|^2|
  double cross_dev = 0.0;    // |psi(a, b*)|
  double norm_lb = 0.0;      // attained lower bound on |psi|
};

struct CStarWitness {
  Certificate phi;  // the underlying sesquilinear certificate
  CStarResiduals residuals;
};

/// psi(u, v) = phi(u, v*) for the Gram matrix G of phi.
cplx psi(const CMatrix& g, const Vec& u, const Vec& v);

struct CStarResult {
  std::optional<CStarWitness> witness;
  CertifyResult certify;
};

/// Runs certify(a, b) on M_n(C) and wraps the result with the adjoint twist.
/// Throws invalid_argument for a = 0, for non-matrix spaces and for the real
/// field.
CStarResult cstar_certify(const Vec& a, const Vec& b, const CertifyOptions& opt = {});

/// Clauses: norming (psi(a, a*) = |a|^2), cross (psi(a, b*) = 0), norm
/// (|psi| <= 1), bilinear-left and bilinear-right (random probes, 1e-12
/// relative), and when those pass, implication (bj margin >= -10 tol |a|).
VerifyReport verify_cstar(const CMatrix& g, const Vec& a, const Vec& b, double tol = 1e-8, int restarts = 64,
                          std::uint64_t seed = 0);

}  // namespace bjkit
