#pragma once

// Norms of bilinear and sesquilinear forms on products of unit balls.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bjkit/matrix.hpp"
#include "bjkit/space.hpp"

namespace bjkit {

struct FormNorm {
  double lower = 0.0;           // |a^T M b| at the witness pair, never above the true norm
  std::optional<double> upper;  // certified upper bound when one is available
  bool exact = false;           // lower is the true norm up to rounding
  std::string method;           // "l1-slices", "spectral", "extreme-points", "ascent"
  std::vector<cplx> a, b;       // unit-ball witness pair
};

/// sup { |a^T M b| : a in the unit ball of rows, b in the unit ball of cols }.
///
/// Exact when one side is l^1 (max over slices), both sides are l^2 (largest
/// singular value) or one side has finitely many real extreme points.
/// Otherwise the lower bound comes from alternating maximization (fix b, take
/// the norming vector of Mb; swap; at most 200 steps) from `restarts` random
/// starts plus a few deterministic ones, and the upper bound from
/// sum_k sigma_k |u_k|_* |v_k|_* over the singular triples of M.
/// Throws invalid_argument when a real space meets a non-real M.
FormNorm form_norm(const CMatrix& m, const SpaceSpec& rows, const SpaceSpec& cols, int restarts = 64,
                   std::uint64_t seed = 0);

/// Norm of the sesquilinear form phi(u, v) = v* G u on X (+)_inf X, i.e.
/// sup |v* G u| over the unit ball of X. The witness pair is returned with
/// a = u, b = v so that |b* G a| = lower.
FormNorm sesquilinear_norm(const CMatrix& g, const SpaceSpec& space, int restarts = 64, std::uint64_t seed = 0);

/// v* G u
cplx sesquilinear(const CMatrix& g, std::span<const cplx> u, std::span<const cplx> v);
/// a^T M b
cplx bilinear(const CMatrix& m, std::span<const cplx> a, std::span<const cplx> b);

}  // namespace bjkit
