#pragma once

// Semi-inner-product certificates for Birkhoff-James orthogonality.
//
// A certificate is a Hermitian positive semidefinite Gram matrix G on the
// coordinates of X, read as phi(u, v) = v* G u (linear in u, conjugate-linear
// in v). It proves x _|_B y once phi(x, x) = |x|^2, phi(x, y) = 0 and
// |phi(u, v)| <= |u| |v|: then |x|^2 = |phi(x + lambda y, x)| <= |x + lambda y| |x|.
//
// Rank-one certificates G = f f* come from a functional f of dual norm 1 with
// pair(f, x) = |x| and pair(f, y) = 0. The verifier does not assume rank one.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bjkit/error.hpp"
#include "bjkit/forms.hpp"
#include "bjkit/matrix.hpp"
#include "bjkit/ortho.hpp"
#include "bjkit/space.hpp"

namespace bjkit {

struct CertificateResiduals {
  double hermitian_dev = 0.0;          // max |G - G*|
  double min_eig = 0.0;                // smallest eigenvalue of (G + G*) / 2
  double norming_dev = 0.0;            // |phi(x, x) - |x|^2|
  double cross_dev = 0.0;              // |phi(x, y)|
  double bilinear_norm_lb = 0.0;       // attained lower bound on |phi|
  double bilinear_norm_claimed = 0.0;  // the bound the producer vouches for
};

struct Certificate {
  CMatrix g;
  SpaceSpec space;
  CertificateResiduals residuals;
  std::string stage;  // "smooth", "search", "gram" or "external"
};

enum class SearchStatus { found, infeasible, inconclusive };
const char* to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<Functional> f;
  // Smallest value of the support function of { pair(g, y) : g norming }
  // found; negative means 0 is outside, i.e. no norming functional kills y.
  double min_support = 0.0;
  int evaluations = 0;
  std::string diagnostic;
};

/// Looks for f with dual_norm(f) <= 1, pair(f, x) = |x| and
/// |pair(f, y)| <= tol |y|.
///
/// The set K = { pair(f, y) : f norming x } is convex and compact; its support
/// function is evaluated by maximizing over the norming face (face_lmo), so
/// 0 in K is decided by planar zero membership and a realizing f is a convex
/// combination of face points. Over the reals K is an interval and two face
/// points suffice. Throws invalid_argument for x = 0.
SearchResult norming_functional_search(const Vec& x, const Vec& y, double tol = 1e-8,
                                       int max_iter = kIterationCap);

/// G = f f* after rotating f so that pair(f, x) >= 0. Throws invalid_argument
/// unless dual_norm(f) <= 1 + tol and |pair(f, x)| >= |x| (1 - tol).
Certificate build_certificate(const Functional& f, const Vec& x, const Vec& y, double tol = 1e-8);

struct CertifyOptions {
  double tol = 1e-8;
  int restarts = 64;
  std::uint64_t seed = 0;
};

struct CertifyResult {
  std::optional<Certificate> certificate;
  Verdict verdict;
  SearchStatus search = SearchStatus::inconclusive;
  std::vector<std::string> stages_tried;
  std::optional<std::string> inconsistency;  // set when bj says orthogonal but nothing was found
};

/// Staged pipeline. The direct verdict supplies a minimizer lambda*; the
/// stages then work at z = x + lambda* y, where some norming functional of z
/// always kills y, and accept a functional f only if it also norms x within
/// tol (which happens exactly when the margin is within tol):
///   1. smooth l^p: the unique norming functional of z;
///   2. norming_functional_search at z, then at x;
///   3. Gram-matrix Dykstra projections with cutting planes, only when the
///      search was inconclusive.
/// Throws invalid_argument for x = 0.
CertifyResult certify(const Vec& x, const Vec& y, const CertifyOptions& opt = {});

struct Clause {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct VerifyReport {
  bool pass = false;
  std::vector<Clause> clauses;
  CertificateResiduals residuals;
  // How |phi| <= 1 was checked: "exact" (extreme points, l1 slices, l2
  // spectral norm or matching certified bounds), "certified-upper" (singular
  // value bound) or "empirical" (multi-start ascent only).
  std::string norm_check;
  std::optional<double> norm_upper;
  // Converse check: the direct margin on the same pair.
  std::optional<Verdict> implication;
};

/// Checks a Gram matrix clause by clause, independently of its origin.
/// Clauses: field (real G on real spaces), hermitian, positive, norming,
/// cross, norm, and, when all of those pass, implication
/// (bj margin >= -10 tol |x|).
VerifyReport verify_certificate(const CMatrix& g, const Vec& x, const Vec& y, double tol = 1e-8,
                                int restarts = 64, std::uint64_t seed = 0);

/// Residual record for an arbitrary Gram matrix.
CertificateResiduals compute_residuals(const CMatrix& g, const Vec& x, const Vec& y, int restarts = 64,
                                       std::uint64_t seed = 0);

}  // namespace bjkit
