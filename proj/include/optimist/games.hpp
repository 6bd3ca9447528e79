#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>

#include "optimist/numerics.hpp"

namespace optimist {

/// Probability vector over d actions.
class SimplexPoint {
 public:
  /// Validates non-negativity and |sum - 1| <= default tolerance.
  SimplexPoint(RealVector coords, const Context& ctx);

  static SimplexPoint uniform(const Context& ctx, std::size_t dim);
  static SimplexPoint vertex(const Context& ctx, std::size_t dim,
                             std::size_t index);

  std::size_t dim() const { return coords_.size(); }
  const Real& operator[](std::size_t i) const { return coords_[i]; }
  const RealVector& coords() const { return coords_; }

 private:
  RealVector coords_;
};

/// Loss matrix of a two-player zero-sum game. The row (x) player minimizes
/// x^T A y, the column (y) player maximizes it. Entries lie in
/// [0, entry_bound].
class MatrixGame {
 public:
  MatrixGame(const Context& ctx, std::size_t rows, std::size_t cols,
             RealVector entries, Real entry_bound);

  const Context& context() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Real& at(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const Real& entry_bound() const { return entry_bound_; }

  /// A y
  RealVector times(const RealVector& y) const;
  /// A^T x
  RealVector transpose_times(const RealVector& x) const;

 private:
  Context ctx_;
  std::size_t rows_;
  std::size_t cols_;
  RealVector entries_;
  Real entry_bound_;
};

/// Parameter of the hard 2x2 family; 0 < delta < 1/2.
class HardInstanceParams {
 public:
  explicit HardInstanceParams(Real delta);
  const Real& delta() const { return delta_; }

 private:
  Real delta_;
};

/// max_j (x^T A)[j] - min_i (A y)[i], computed by pure best responses.
/// Throws std::invalid_argument on dimension mismatch.
Real duality_gap(const MatrixGame& game, const SimplexPoint& x,
                 const SimplexPoint& y);

/// [[1/2 + delta, 1/2], [0, 1]]
MatrixGame hard_instance(const Context& ctx, const HardInstanceParams& params);

/// Unique equilibrium of the hard instance:
/// x* = [1, delta] / (1 + delta), y* = [1, 1 + 2 delta] / (2 (1 + delta)).
std::pair<SimplexPoint, SimplexPoint> hard_instance_nash(
    const Context& ctx, const HardInstanceParams& params);

/// Is `game` the hard instance for `delta` (exact entries, within tolerance)?
bool is_hard_instance(const MatrixGame& game, const Real& delta);

struct LossVectors {
  RealVector x;  // A y
  RealVector y;  // -A^T x
};

LossVectors loss_vectors(const MatrixGame& game, const SimplexPoint& x,
                         const SimplexPoint& y);

/// 2x2 -> 2n x 2n block duplication, every entry divided by n^alpha.
MatrixGame duplicate_lift(const MatrixGame& game2, long n, const Real& alpha);

/// [a, b] -> [a/n, ..., a/n, b/n, ..., b/n]
SimplexPoint duplicate_strategy(const Context& ctx, const SimplexPoint& x2,
                                long n);

/// Plain-text game file: "d1 d2 entry_bound" then d1 rows of d2 decimals.
MatrixGame read_game(std::istream& in, const Context& ctx);
MatrixGame read_game_file(const std::string& path, const Context& ctx);
void write_game(std::ostream& out, const MatrixGame& game);

}  // namespace optimist
