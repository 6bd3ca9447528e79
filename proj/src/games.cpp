#include "optimist/games.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace optimist {

SimplexPoint::SimplexPoint(RealVector coords, const Context& ctx)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("empty simplex point");
  for (const Real& c : coords_) {
    if (c < 0) {
      throw std::invalid_argument("simplex coordinate is negative: " + c.str(20));
    }
  }
  const Tolerance tol = default_tolerance(ctx);
  if (!approx_equal(sum(coords_), ctx.one(), tol)) {
    throw std::invalid_argument("simplex coordinates sum to " +
                                sum(coords_).str(20));
  }
}

SimplexPoint SimplexPoint::uniform(const Context& ctx, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("simplex dimension must be >= 1");
  const Real share = ctx.one() / static_cast<long>(dim);
  return SimplexPoint(RealVector(dim, share), ctx);
}

SimplexPoint SimplexPoint::vertex(const Context& ctx, std::size_t dim,
                                  std::size_t index) {
  RealVector c = zeros(ctx, dim);
  c.at(index) = ctx.one();
  return SimplexPoint(std::move(c), ctx);
}

MatrixGame::MatrixGame(const Context& ctx, std::size_t rows, std::size_t cols,
                       RealVector entries, Real entry_bound)
    : ctx_(ctx),
      rows_(rows),
      cols_(cols),
      entries_(std::move(entries)),
      entry_bound_(std::move(entry_bound)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("game dimensions must be positive");
  }
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("game has " + std::to_string(entries_.size()) +
                                " entries, expected " +
                                std::to_string(rows_ * cols_));
  }
  if (entry_bound_ <= 0) {
    throw std::invalid_argument("entry bound must be positive");
  }
  for (const Real& a : entries_) {
    if (a < 0 || a > entry_bound_) {
      throw std::invalid_argument("game entry " + a.str(20) +
                                  " outside [0, " + entry_bound_.str(20) + "]");
    }
  }
}

RealVector MatrixGame::times(const RealVector& y) const {
  if (y.size() != cols_) throw std::invalid_argument("A y: dimension mismatch");
  RealVector out = zeros(ctx_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * y[j];
  }
  return out;
}

RealVector MatrixGame::transpose_times(const RealVector& x) const {
  if (x.size() != rows_) {
    throw std::invalid_argument("A^T x: dimension mismatch");
  }
  RealVector out = zeros(ctx_, cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i < rows_; ++i) out[j] += at(i, j) * x[i];
  }
  return out;
}

HardInstanceParams::HardInstanceParams(Real delta) : delta_(std::move(delta)) {
  if (!(delta_ > 0) || !(delta_ * 2 < 1)) {
    throw std::invalid_argument("delta must lie in (0, 1/2), got " +
                                delta_.str(20));
  }
}

Real duality_gap(const MatrixGame& game, const SimplexPoint& x,
                 const SimplexPoint& y) {
  if (x.dim() != game.rows() || y.dim() != game.cols()) {
    throw std::invalid_argument("duality_gap: strategy dimensions " +
                                std::to_string(x.dim()) + "x" +
                                std::to_string(y.dim()) + " do not match game");
  }
  const RealVector col_values = game.transpose_times(x.coords());
  const RealVector row_values = game.times(y.coords());
  Real best_col = col_values[0];
  for (const Real& v : col_values) best_col = max(best_col, v);
  Real best_row = row_values[0];
  for (const Real& v : row_values) best_row = min(best_row, v);
  Real gap = best_col - best_row;
  // Rounding at an exact equilibrium can leave a negative residue.
  if (gap < 0) return game.context().zero();
  return gap;
}

MatrixGame hard_instance(const Context& ctx, const HardInstanceParams& params) {
  const Real half = ctx.ratio(1, 2);
  RealVector entries{half + params.delta(), half, ctx.zero(), ctx.one()};
  return MatrixGame(ctx, 2, 2, std::move(entries), ctx.one());
}

std::pair<SimplexPoint, SimplexPoint> hard_instance_nash(
    const Context& ctx, const HardInstanceParams& params) {
  const Real& d = params.delta();
  const Real denom = d + 1;
  SimplexPoint x({1 / denom, d / denom}, ctx);
  SimplexPoint y({1 / (denom * 2), (d * 2 + 1) / (denom * 2)}, ctx);
  return {std::move(x), std::move(y)};
}

bool is_hard_instance(const MatrixGame& game, const Real& delta) {
  if (game.rows() != 2 || game.cols() != 2) return false;
  const Context& ctx = game.context();
  const MatrixGame expected = hard_instance(ctx, HardInstanceParams(delta));
  const Tolerance tol = default_tolerance(ctx);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (!approx_equal(game.at(i, j), expected.at(i, j), tol)) return false;
    }
  }
  return true;
}

LossVectors loss_vectors(const MatrixGame& game, const SimplexPoint& x,
                         const SimplexPoint& y) {
  LossVectors out{game.times(y.coords()), game.transpose_times(x.coords())};
  for (Real& v : out.y) v = -v;
  return out;
}

MatrixGame duplicate_lift(const MatrixGame& game2, long n, const Real& alpha) {
  if (game2.rows() != 2 || game2.cols() != 2) {
    throw std::invalid_argument("duplicate_lift expects a 2x2 game");
  }
  if (n < 1) throw std::invalid_argument("lift factor n must be >= 1");
  const Context& ctx = game2.context();
  const Real scale = pow(ctx.integer(n), alpha);
  const std::size_t dim = 2 * static_cast<std::size_t>(n);
  const auto block = [n](std::size_t k) { return k < static_cast<std::size_t>(n) ? 0U : 1U; };
  RealVector entries;
  entries.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      entries.push_back(game2.at(block(i), block(j)) / scale);
    }
  }
  return MatrixGame(ctx, dim, dim, std::move(entries), game2.entry_bound() / scale);
}

SimplexPoint duplicate_strategy(const Context& ctx, const SimplexPoint& x2,
                                long n) {
  if (x2.dim() != 2) throw std::invalid_argument("duplicate_strategy expects dim 2");
  if (n < 1) throw std::invalid_argument("lift factor n must be >= 1");
  RealVector coords;
  coords.reserve(2 * static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) coords.push_back(x2[0] / n);
  for (long k = 0; k < n; ++k) coords.push_back(x2[1] / n);
  return SimplexPoint(std::move(coords), ctx);
}

MatrixGame read_game(std::istream& in, const Context& ctx) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string bound_text;
  if (!(in >> rows >> cols >> bound_text)) {
    throw std::runtime_error("game file: malformed header (expected 'd1 d2 entry_bound')");
  }
  RealVector entries;
  entries.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    std::string token;
    if (!(in >> token)) {
      throw std::runtime_error("game file: expected " + std::to_string(rows * cols) +
                               " entries, found " + std::to_string(k));
    }
    entries.push_back(ctx.parse(token));
  }
  return MatrixGame(ctx, rows, cols, std::move(entries), ctx.parse(bound_text));
}

MatrixGame read_game_file(const std::string& path, const Context& ctx) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  return read_game(in, ctx);
}

void write_game(std::ostream& out, const MatrixGame& game) {
  out << game.rows() << ' ' << game.cols() << ' ' << game.entry_bound().str() << '\n';
  for (std::size_t i = 0; i < game.rows(); ++i) {
    for (std::size_t j = 0; j < game.cols(); ++j) {
      if (j) out << ' ';
      out << game.at(i, j).str();
    }
    out << '\n';
  }
}

}  // namespace optimist
