#pragma once

// Projective tensor norm bounds at desk scale.
//
// u in X (x) Y is stored as its coefficient matrix U (dim X x dim Y), so a
// decomposition u = sum x_k (x) y_k means U = sum x_k y_k^T. Bilinear forms
// B(x, y) = x^T M y act on u through the linearization <M, U> = sum M_ij U_ij,
// and |<M, U>| <= |M| sum |x_k| |y_k| for every decomposition.

#include <cstdint>
#include <string>
#include <vector>

#include "bjkit/matrix.hpp"
#include "bjkit/space.hpp"

namespace bjkit {

struct TensorElem {
  TensorElem(SpaceSpec left, SpaceSpec right, CMatrix coeff);
  SpaceSpec left;
  SpaceSpec right;
  CMatrix coeff;
};

struct Term {
  std::vector<cplx> x;
  std::vector<cplx> y;
};

/// sum |x_k| |y_k|
double decomposition_cost(const TensorElem& u, const std::vector<Term>& d);
/// max |U - sum x_k y_k^T|
double decomposition_error(const TensorElem& u, const std::vector<Term>& d);

struct PiUpper {
  double upper = 0.0;
  std::vector<Term> decomposition;  // exact: sum x_k y_k^T = U up to rounding
  std::string method;               // "svd", "rows", "columns" or "alternating"
};

/// Best of the singular value decomposition, row slices, column slices and
/// alternating reweighted minimization with rank_cap terms (random restarts,
/// norms rebalanced per term, residual folded back in as row slices). Throws
/// invalid_argument when rank_cap is below the rank of U.
PiUpper pi_upper(const TensorElem& u, int rank_cap, int restarts = 8, std::uint64_t seed = 0);

struct PiLower {
  double lower = 0.0;
  CMatrix form;      // M with certified form norm <= 1 and |<M, U>| = lower
  std::string method;  // "rank-one", "rows", "columns", "polar" or "ascent"
};

/// Largest |<M, U>| / |M| over candidate forms, where |M| is only ever a
/// certified upper bound on the form norm, so lower <= |u|_pi always.
PiLower pi_lower(const TensorElem& u, int restarts = 8, std::uint64_t seed = 0);

struct PiBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Term> decomposition;
  CMatrix dual_form;
  std::string upper_method;
  std::string lower_method;
};

PiBounds pi_bounds(const TensorElem& u, int rank_cap, int restarts = 8, std::uint64_t seed = 0);

/// sum_k x_k^T B y_k, the value of the linearized form on the tensor.
cplx lift_apply(const CMatrix& b, const std::vector<Term>& d);

}  // namespace bjkit
