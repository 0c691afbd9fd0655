#pragma once

#include "bjkit/space.hpp"

namespace bjkit {

/// Outcome of minimizing g(lambda) = |x + lambda y| over the scalar field.
///
/// Tolerances are relative to |x|: the pair is reported orthogonal when
/// margin >= -tol |x|, and borderline when margin lies in
/// (-tol |x|, -tol |x| / 10).
struct Verdict {
  bool orthogonal = false;
  bool borderline = false;
  double margin = 0.0;  // min g - |x|, never positive
  cplx lambda_star;     // a minimizer
  int evaluations = 0;
  double tol = 0.0;
  double norm_x = 0.0;
};

/// |x + lambda y|
double bj_objective(const Vec& x, const Vec& y, cplx lambda);

/// Decides x _|_B y directly from the definition. The search is confined to
/// |lambda| <= 2|x|/|y|, where g is convex. Real field: golden section.
/// Complex field: golden section over Re lambda of the function
/// s -> min_t g(s + i t), the inner minimum again by golden section (partial
/// minimization keeps it convex). Throws invalid_argument for x = 0 and
/// dimension_mismatch for vectors of different spaces; y = 0 is orthogonal.
Verdict bj_margin(const Vec& x, const Vec& y, double tol = 1e-8);

/// On l^2: |<x, y>| <= tol |x| |y|. Throws invalid_argument elsewhere.
bool hilbert_coincidence(const Vec& x, const Vec& y, double tol = 1e-8);

}  // namespace bjkit
