#pragma once

// Regularizer catalog on the probability simplex.
//
// For a separable regularizer R(x) = sum_i r(x[i]) this module provides
//   * the two-action response map F_{eta,R}(E), i.e. the first coordinate of
//     argmin_{x in [0,1]} { x E + R([x, 1 - x]) / eta },
//   * its inverse for eta = 1,
//   * the constants (L, c1, c2, c3, delta') certifying the slow-convergence
//     conditions for the hard 2x2 instance,
//   * the d-dimensional FTRL argmin and the Bregman proximal step.
//
// Every d-dimensional solve reduces to the scalar dual equation
//   sum_i phi(theta[i] - mu) = 1,   phi = (r')^{-1},
// which is closed form for the entropy (softmax) and the squared Euclidean
// norm (sort-and-threshold projection) and solved numerically for the
// log barrier and the Tsallis family (safeguarded Newton on mu).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "optimist/games.hpp"
#include "optimist/numerics.hpp"

namespace optimist {

class RegularizerKind {
 public:
  enum class Family { NegativeEntropy, SquaredEuclidean, LogBarrier, Tsallis };

  static RegularizerKind entropy() { return RegularizerKind(Family::NegativeEntropy); }
  static RegularizerKind euclidean() { return RegularizerKind(Family::SquaredEuclidean); }
  static RegularizerKind log_barrier() { return RegularizerKind(Family::LogBarrier); }
  /// Throws std::invalid_argument unless 0 < beta < 1.
  static RegularizerKind tsallis(std::string_view beta);

  Family family() const { return family_; }
  /// Decimal text of beta; empty for non-Tsallis kinds.
  const std::string& beta_text() const { return beta_; }
  bool is_legendre() const { return family_ != Family::SquaredEuclidean; }

  /// CLI name: entropy | euclid | logbar | tsallis:<beta>
  std::string name() const;

  friend bool operator==(const RegularizerKind&, const RegularizerKind&) = default;

 private:
  explicit RegularizerKind(Family f, std::string beta = {})
      : family_(f), beta_(std::move(beta)) {}

  Family family_;
  std::string beta_;
};

/// Parses entropy | euclid | logbar | tsallis:<beta>; throws
/// std::invalid_argument on unknown names or beta outside (0, 1).
RegularizerKind parse_regularizer(std::string_view name);

struct RegularizerConstants {
  Real L;            // Lipschitz constant of F_{1,R}
  Real c1;           // 1/2 - F_{1,R}(1/(20 L))
  Real c2;
  Real c3;
  Real delta_prime;  // largest delta for which the certificate holds
};

/// A regularizer bound to a numeric context.
class Regularizer {
 public:
  Regularizer(const Context& ctx, RegularizerKind kind);

  const Context& context() const { return ctx_; }
  const RegularizerKind& kind() const { return kind_; }

  /// F_{1,R}(E), in [0, 1], non-increasing, F(0) = 1/2.
  Real f_one(const Real& e) const;
  /// F_{eta,R}(E) = F_{1,R}(eta E). Throws std::invalid_argument if eta <= 0.
  Real f_eta(const Real& eta, const Real& e) const;
  /// F_{1,R}^{-1}(x) for x in (0, 1); throws std::domain_error otherwise.
  Real f_inverse(const Real& x) const;

  RegularizerConstants constants() const;

  /// Exponent alpha of the duplication lift that keeps OFTRL dynamics
  /// equivalent: Euclidean 1, entropy 0, Tsallis beta - 1, log barrier -1.
  Real lift_alpha() const;

  /// argmin over the simplex of <x, G> + R(x) / eta. `clamp_events`, when
  /// given, is incremented for every coordinate lifted off an exact zero.
  SimplexPoint ftrl_argmin(const Real& eta, const RealVector& cumulative,
                           std::size_t* clamp_events = nullptr) const;

  /// argmin over the simplex of eta <x, loss> + D_R(x, anchor). Throws
  /// std::domain_error when a Legendre kind is given a boundary anchor.
  SimplexPoint bregman_prox(const Real& eta, const RealVector& loss,
                            const SimplexPoint& anchor,
                            std::size_t* clamp_events = nullptr) const;

 private:
  Real derivative(const Real& x) const;   // r'(x)
  Real mirror_inverse(const Real& s) const;  // (r')^{-1}(s)
  SimplexPoint solve_dual(RealVector theta, std::size_t* clamp_events) const;
  SimplexPoint finish(RealVector coords, std::size_t* clamp_events) const;
  Real tsallis_forward(const Real& e) const;

  Context ctx_;
  RegularizerKind kind_;
  Real half_;
  Real boundary_eps_;           // bracket for the Tsallis forward map
  Real underflow_floor_;        // 10^-digits
  std::optional<Real> beta_;
};

/// Euclidean projection onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

}  // namespace optimist
