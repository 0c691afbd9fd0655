#pragma once

// Operator pairs on a finite-dimensional Hilbert space: S _|_B T in the
// operator norm iff some unit h has |Sh| = |S| and <Sh, Th> = 0.

#include <optional>
#include <vector>

#include "bjkit/matrix.hpp"
#include "bjkit/numrange.hpp"
#include "bjkit/ortho.hpp"

namespace bjkit {

struct MaxSingularSubspace {
  double sigma_max = 0.0;
  CMatrix basis;       // n x k, orthonormal columns
  double gap = 0.0;    // sigma_max - sigma_{k+1}, or sigma_max when k = n
  bool degenerate = false;  // S = 0: every unit vector attains
};

/// Right-singular subspace for all sigma >= sigma_max (1 - rel_tol).
MaxSingularSubspace max_singular_subspace(const CMatrix& s, double rel_tol = 1e-9);

struct BSWitness {
  std::vector<cplx> h;
  double attainment_residual = 0.0;  // | |Sh| - |S| |
  double pairing_residual = 0.0;     // |<Sh, Th>|
};

struct BSResult {
  std::optional<BSWitness> witness;
  NumRangeResult range;  // zero membership for the compressed matrix
  MaxSingularSubspace subspace;
};

/// Compresses A = B*(S*T)B to the maximal singular subspace and decides
/// 0 in W(A) at tolerance tol (1 + |S||T|). The witness is h = B g. Real
/// matrices get a real witness. Throws dimension_mismatch unless S and T are
/// square of the same size, and invalid_argument for S = 0.
BSResult bs_decide(const CMatrix& s, const CMatrix& t, double tol = 1e-10);
std::optional<BSWitness> bs_witness(const CMatrix& s, const CMatrix& t, double tol = 1e-10);

/// bs_decide cross-checked against bj_margin on the spectral-norm matrix
/// space. Throws inconsistency when the two disagree outside the borderline
/// band (bj margin near the threshold, or 0 within sqrt(tol) of the boundary
/// of the compressed numerical range).
struct BSChecked {
  BSResult result;
  Verdict verdict;
};
BSChecked bs_witness_checked(const CMatrix& s, const CMatrix& t, double tol = 1e-10, double margin_tol = 1e-8);

}  // namespace bjkit
