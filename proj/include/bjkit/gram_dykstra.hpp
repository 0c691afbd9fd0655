#pragma once

// Full Gram-matrix search for a certificate: Dykstra's alternating
// projections onto the PSD cone, the affine set
// { x*Gx = |x|^2, y*Gx = 0 } and a growing list of half-spaces
// { Re v_k* G u_k <= 1 } cut from unit pairs where the form is too large.

#include <cstdint>
#include <optional>

#include "bjkit/certificate.hpp"

namespace bjkit {

struct GramOptions {
  double tol = 1e-8;
  int max_rounds = 50;    // cutting-plane rounds
  int max_sweeps = 2000;  // Dykstra sweeps per round
  int clean_rounds = 3;   // consecutive rounds below tol / 2 to accept
  int restarts = 64;
  std::uint64_t seed = 0;
};

struct GramResult {
  std::optional<CMatrix> g;
  int rounds = 0;
  int cuts = 0;
  std::string diagnostic;
};

GramResult gram_dykstra(const Vec& x, const Vec& y, const GramOptions& opt = {});

}  // namespace bjkit
