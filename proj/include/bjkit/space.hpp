#pragma once

// Finite-dimensional normed spaces: l^p (1 <= p <= inf), matrices under the
// spectral norm, and the max-norm direct sum X (+)_inf Y.
//
// Everything is stored as a coordinate vector. Matrix spaces use row-major
// flattening. Functionals act by pair(f, v) = sum conj(f_i) v_i, so they are
// conjugate-linear in f and linear in v; functional coordinates live in the
// conjugate space and no separate conjugate-space object exists.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bjkit/matrix.hpp"

namespace bjkit {

class SpaceSpec {
 public:
  enum class Kind : std::uint8_t { lp, spectral, suminf };

  static SpaceSpec lp(double p, std::size_t dim, Field field = Field::real);
  static SpaceSpec spectral(std::size_t n, Field field = Field::complex);
  static SpaceSpec sum_inf(const SpaceSpec& left, const SpaceSpec& right);

  Kind kind() const noexcept { return kind_; }
  Field field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }  // lp only; +inf for the max norm
  double dual_exponent() const noexcept;    // lp only
  std::size_t n() const noexcept { return n_; }  // spectral only
  const SpaceSpec& left() const { return *left_; }
  const SpaceSpec& right() const { return *right_; }

  bool is_lp() const noexcept { return kind_ == Kind::lp; }
  bool is_hilbert() const noexcept { return kind_ == Kind::lp && p_ == 2.0; }
  bool is_spectral() const noexcept { return kind_ == Kind::spectral; }
  bool is_suminf() const noexcept { return kind_ == Kind::suminf; }

  std::string describe() const;
  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b);

 private:
  SpaceSpec() = default;
  Kind kind_ = Kind::lp;
  Field field_ = Field::real;
  double p_ = 2.0;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::shared_ptr<const SpaceSpec> left_, right_;
};

/// A vector of a space.
struct Vec {
  Vec(SpaceSpec s, std::vector<cplx> c);
  SpaceSpec space;
  std::vector<cplx> coords;
};

/// A functional on the (primal) space it names.
struct Functional {
  Functional(SpaceSpec s, std::vector<cplx> c);
  SpaceSpec space;
  std::vector<cplx> coords;
};

double norm(const Vec& v);
double norm(const SpaceSpec& s, std::span<const cplx> v);
double dual_norm(const Functional& f);
double dual_norm(const SpaceSpec& s, std::span<const cplx> f);
/// sum conj(f_i) v_i. Throws dimension_mismatch on size mismatch.
cplx pair(const Functional& f, const Vec& v);

/// Euclidean-nearest point of the dual unit ball.
Functional dual_ball_project(const Functional& f);
std::vector<cplx> dual_ball_project(const SpaceSpec& s, std::span<const cplx> f);
/// Euclidean-nearest point of the primal unit ball.
std::vector<cplx> primal_ball_project(const SpaceSpec& s, std::span<const cplx> v);

/// Projection of a vector of moduli-with-phases onto the unit l^p ball. For
/// 1 < p < inf, p != 2, the Lagrange multiplier is found by safeguarded
/// Newton iteration (tolerance 1e-12, at most 100 steps).
std::vector<cplx> lp_ball_project(std::span<const cplx> v, double p);

/// Some f in the dual unit ball with pair(f, x) = |x|. At non-smooth points
/// the centroid of the norming face is returned (ties within 1e-12 relative).
Functional norming_functional(const Vec& x);

/// A maximizer of Re pair(f, v) over the primal unit ball; the maximum equals
/// dual_norm(f).
std::vector<cplx> norming_vector(const SpaceSpec& s, std::span<const cplx> f);

/// A maximizer of Re pair(f, w) over the norming face
/// J(x) = { f : dual_norm(f) <= 1, pair(f, x) = |x| }. Ties and zero entries
/// are detected with relative tolerance rel_tie, which enlarges the face by
/// at most that amount.
Functional face_lmo(const Vec& x, std::span<const cplx> w, double rel_tie = 1e-9);

/// True when the norm is differentiable away from 0 (l^p with 1 < p < inf).
bool is_smooth(const SpaceSpec& s);

/// Extreme points of the real unit ball when there are finitely many (real
/// l^1, real l^inf and max-sums of those), capped at max_points.
std::optional<std::vector<std::vector<cplx>>> real_extreme_points(const SpaceSpec& s,
                                                                   std::size_t max_points = 1u << 16);

/// Uniformly oriented random point of the unit sphere (Gaussian, normalized).
std::vector<cplx> random_unit_vector(const SpaceSpec& s, std::mt19937_64& rng);

// Matrix-space helpers: row-major flattening.
CMatrix as_matrix(std::size_t n, std::span<const cplx> coords);
std::vector<cplx> flatten(const CMatrix& m);

}  // namespace bjkit
