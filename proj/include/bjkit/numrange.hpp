#pragma once

#include <optional>
#include <vector>

#include "bjkit/matrix.hpp"

namespace bjkit {

/// Outcome of deciding whether 0 lies in the numerical range
/// W(A) = { <h, A h> : |h|_2 = 1 }.
struct NumRangeResult {
  bool contains_zero = false;
  std::optional<std::vector<cplx>> witness;  // unit h with |<h, A h>| <= tol
  std::optional<double> separating_angle;    // theta with Re(e^{-i theta} W(A)) >= boundary_gap
  // Not containing: the positive gap at separating_angle. Containing: the
  // minimum of the support function (>= -tol).
  double boundary_gap = 0.0;
  double witness_residual = 0.0;  // |<h, A h>| when a witness is present
  int evaluations = 0;
};

/// Decides 0 in W(A) for square A.
///
/// contains_zero holds iff min over theta of lambda_max(Re(e^{-i theta} A))
/// is >= -tol. The witness is assembled from top eigenvectors of
/// Re(e^{-i theta} A) at bracketing angles: two unit vectors u, v whose
/// Rayleigh values straddle the target on a segment are combined as
/// u + t e^{i phi} v, where phi makes the cross term real and t solves a real
/// quadratic. Throws dimension_mismatch for non-square input and inconclusive
/// when no witness within tol could be assembled.
NumRangeResult numrange_zero(const CMatrix& a, double tol = 1e-10);

/// Real variant: 0 in { h^T A h : h real unit } (the range of the symmetric
/// part), with a real witness.
NumRangeResult numrange_zero_real(const CMatrix& a, double tol = 1e-10);

}  // namespace bjkit
