#include "optimist/regularizers.hpp"

#include <algorithm>
#include <stdexcept>

namespace optimist {

namespace {

using Family = RegularizerKind::Family;

// Root of a decreasing function g on [lo, hi], where `eval(x)` returns
// (g(x), g'(x)). Newton steps are kept inside the shrinking bracket and
// replaced by bisection whenever they would leave it.
template <typename Eval>
Real decreasing_root(Real lo, Real hi, Eval eval) {
  const long max_steps = static_cast<long>(lo.bits()) + 64;
  Real x = (lo + hi) / 2;
  for (long step = 0; step < max_steps; ++step) {
    auto [g, slope] = eval(x);
    if (g.is_zero()) return x;
    if (g > 0) {
      lo = x;
    } else {
      hi = x;
    }
    Real next = slope.is_zero() ? x : x - g / slope;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (next == lo || next == hi || next == x) break;
    x = std::move(next);
  }
  return x;
}

}  // namespace

RegularizerKind RegularizerKind::tsallis(std::string_view beta) {
  const Context probe(32);
  Real b = [&] {
    try {
      return probe.parse(beta);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("tsallis beta is not a number: '" +
                                  std::string(beta) + "'");
    }
  }();
  if (!(b > 0) || !(b < 1)) {
    throw std::invalid_argument("tsallis beta must lie in (0, 1), got " +
                                std::string(beta));
  }
  return RegularizerKind(Family::Tsallis, std::string(beta));
}

std::string RegularizerKind::name() const {
  switch (family_) {
    case Family::NegativeEntropy: return "entropy";
    case Family::SquaredEuclidean: return "euclid";
    case Family::LogBarrier: return "logbar";
    case Family::Tsallis: return "tsallis:" + beta_;
  }
  return "?";
}

RegularizerKind parse_regularizer(std::string_view name) {
  if (name == "entropy") return RegularizerKind::entropy();
  if (name == "euclid") return RegularizerKind::euclidean();
  if (name == "logbar") return RegularizerKind::log_barrier();
  constexpr std::string_view kTsallis = "tsallis:";
  if (name.substr(0, kTsallis.size()) == kTsallis) {
    return RegularizerKind::tsallis(name.substr(kTsallis.size()));
  }
  throw std::invalid_argument("unknown regularizer '" + std::string(name) +
                              "' (expected entropy | euclid | logbar | tsallis:<beta>)");
}

Regularizer::Regularizer(const Context& ctx, RegularizerKind kind)
    : ctx_(ctx),
      kind_(std::move(kind)),
      half_(ctx.ratio(1, 2)),
      boundary_eps_(ctx.pow10(-(ctx.digits() - 4))),
      underflow_floor_(ctx.pow10(-ctx.digits())) {
  if (kind_.family() == Family::Tsallis) beta_ = ctx.parse(kind_.beta_text());
}

Real Regularizer::f_one(const Real& e) const {
  if (e.is_zero()) return half_;
  switch (kind_.family()) {
    case Family::NegativeEntropy:
      if (e > 0) {
        const Real t = exp(-e);
        return t / (t + 1);
      }
      return 1 / (exp(e) + 1);
    case Family::SquaredEuclidean: {
      if (e <= -1) return ctx_.one();
      if (e >= 1) return ctx_.zero();
      return (1 - e) / 2;
    }
    case Family::LogBarrier: {
      if (e > 0) {
        // 1/2 + u - sqrt(1/4 + u^2) with u = 1/E, rationalized.
        const Real u = 1 / e;
        return u / (half_ + u + sqrt(half_ * half_ + u * u));
      }
      return 1 - f_one(-e);
    }
    case Family::Tsallis:
      return tsallis_forward(e);
  }
  throw std::logic_error("unreachable");
}

Real Regularizer::tsallis_forward(const Real& e) const {
  // R is symmetric, so F(-E) = 1 - F(E); solving on the E > 0 side keeps
  // Newton away from the steep end near x = 1.
  if (e < 0) return 1 - tsallis_forward(-e);
  const Real lo = boundary_eps_;
  const Real hi = 1 - boundary_eps_;
  // f_inverse is decreasing in x.
  if (f_inverse(lo) <= e) return lo;
  if (f_inverse(hi) >= e) return hi;
  const Real& b = *beta_;
  const Real scale = b / (1 - b);
  return decreasing_root(lo, hi, [&](const Real& x) {
    const Real px = pow(x, b - 2);
    const Real qx = pow(1 - x, b - 2);
    Real g = scale * (px * x - qx * (1 - x)) - e;
    Real slope = -(b * (px + qx));
    return std::pair{std::move(g), std::move(slope)};
  });
}

Real Regularizer::f_eta(const Real& eta, const Real& e) const {
  if (!(eta > 0)) {
    throw std::invalid_argument("stepsize must be positive, got " + eta.str(20));
  }
  return f_one(eta * e);
}

Real Regularizer::f_inverse(const Real& x) const {
  if (!(x > 0) || !(x < 1)) {
    throw std::domain_error("F^{-1} is defined on (0, 1), got " + x.str(20));
  }
  switch (kind_.family()) {
    case Family::NegativeEntropy:
      return log((1 - x) / x);
    case Family::SquaredEuclidean:
      return 1 - x * 2;
    case Family::LogBarrier:
      return (x * 2 - 1) / (x * x - x);
    case Family::Tsallis: {
      const Real& b = *beta_;
      const Real p = b - 1;
      return b / (1 - b) * (pow(x, p) - pow(1 - x, p));
    }
  }
  throw std::logic_error("unreachable");
}

RegularizerConstants Regularizer::constants() const {
  const Real one = ctx_.one();
  switch (kind_.family()) {
    case Family::SquaredEuclidean: {
      const Real L = half_;
      const Real c1 = ctx_.ratio(1, 20);
      return {L, c1, c1 * c1 / (L * 960), half_, c1 * c1 / (L * 480)};
    }
    case Family::NegativeEntropy: {
      const Real L = half_;
      const Real c1 = half_ - f_one(one / (L * 20));
      const Real c2 = f_one(-(c1 * c1) / (L * 480)) - half_;
      // Item 2 of the certificate only goes through for delta up to
      // c1^2/(960L), half the value usually quoted; report the safe one.
      return {L, c1, c2, half_, c1 * c1 / (L * 960)};
    }
    case Family::LogBarrier: {
      const Real L = half_;
      const Real c1 = sqrt(ctx_.ratio(1, 4) + L * L * 400) - L * 20;
      const Real c3 = c1 * c1 / (L * 60);
      const Real c2 = f_one(-(c3 * c1 * c1) / (L * 240)) - half_;
      return {L, c1, c2, c3, c3 * c1 * c1 / (L * 2160)};
    }
    case Family::Tsallis: {
      const Real& b = *beta_;
      const Real L = one / (b * 2);
      const Real c1 = half_ - f_one(one / (L * 20));
      const Real c3 = half_;
      const Real c2 = f_one(-(c3 * c1 * c1) / (L * 240)) - half_;
      const Real d1 = pow(c1 * c1 * (1 - b) / (L * b * 120 * pow(c3, 1 - b)), one / b);
      const Real d2 = c3 * c1 * c1 / 120;
      const Real d3 = (1 - b) / (b * 8) * (c3 * c1 * c1 / (L * 480));
      return {L, c1, c2, c3, min(d1, min(d2, d3))};
    }
  }
  throw std::logic_error("unreachable");
}

Real Regularizer::lift_alpha() const {
  switch (kind_.family()) {
    case Family::SquaredEuclidean: return ctx_.one();
    case Family::NegativeEntropy: return ctx_.zero();
    case Family::LogBarrier: return ctx_.integer(-1);
    case Family::Tsallis: return *beta_ - 1;
  }
  throw std::logic_error("unreachable");
}

Real Regularizer::derivative(const Real& x) const {
  switch (kind_.family()) {
    case Family::NegativeEntropy: return log(x) + 1;
    case Family::SquaredEuclidean: return x;
    case Family::LogBarrier: return -1 / x;
    case Family::Tsallis: {
      const Real& b = *beta_;
      return -(b / (1 - b)) * pow(x, b - 1);
    }
  }
  throw std::logic_error("unreachable");
}

Real Regularizer::mirror_inverse(const Real& s) const {
  switch (kind_.family()) {
    case Family::NegativeEntropy: return exp(s - 1);
    case Family::SquaredEuclidean: return s > 0 ? s : ctx_.zero();
    case Family::LogBarrier: return -1 / s;
    case Family::Tsallis: {
      const Real& b = *beta_;
      return pow(-s * (1 - b) / b, 1 / (b - 1));
    }
  }
  throw std::logic_error("unreachable");
}

SimplexPoint Regularizer::finish(RealVector coords,
                                 std::size_t* clamp_events) const {
  const bool clampable = kind_.family() == Family::NegativeEntropy ||
                         kind_.family() == Family::Tsallis;
  if (clampable) {
    for (Real& c : coords) {
      if (c.is_zero()) {
        c = underflow_floor_;
        if (clamp_events) ++*clamp_events;
      }
    }
  }
  const Tolerance tol = default_tolerance(ctx_);
  const Real total = sum(coords);
  if (!approx_equal(total, ctx_.one(), tol)) {
    for (Real& c : coords) c /= total;
  }
  return SimplexPoint(std::move(coords), ctx_);
}

SimplexPoint Regularizer::solve_dual(RealVector theta,
                                     std::size_t* clamp_events) const {
  const std::size_t d = theta.size();
  switch (kind_.family()) {
    case Family::NegativeEntropy: {
      Real top = theta[0];
      for (const Real& t : theta) top = max(top, t);
      for (Real& t : theta) t = exp(t - top);
      const Real z = sum(theta);
      for (Real& t : theta) t /= z;
      return finish(std::move(theta), clamp_events);
    }
    case Family::SquaredEuclidean:
      return finish(project_to_simplex(theta), clamp_events);
    case Family::LogBarrier:
    case Family::Tsallis: {
      Real top = theta[0];
      for (const Real& t : theta) top = max(top, t);
      // mu_lo puts the largest coordinate at 1; mu_hi puts every coordinate
      // at or below 1/d.
      const Real mu_lo = top - derivative(ctx_.one());
      const Real mu_hi = top - derivative(ctx_.one() / static_cast<long>(d));
      const auto residual = [&](const Real& mu) {
        Real total = ctx_.zero() - 1;
        Real slope = ctx_.zero();
        for (const Real& t : theta) {
          const Real s = t - mu;
          const Real x = mirror_inverse(s);
          total += x;
          // d x / d mu = -1 / r''(x), which is x^2 for the log barrier and
          // x / ((1 - beta) |s|) for Tsallis.
          if (kind_.family() == Family::LogBarrier) {
            slope -= x * x;
          } else {
            slope += x / ((1 - *beta_) * s);
          }
        }
        return std::pair{std::move(total), std::move(slope)};
      };
      const Real mu = decreasing_root(mu_lo, mu_hi, residual);
      RealVector coords;
      coords.reserve(d);
      for (const Real& t : theta) coords.push_back(mirror_inverse(t - mu));
      const Real z = sum(coords);
      for (Real& c : coords) c /= z;
      return finish(std::move(coords), clamp_events);
    }
  }
  throw std::logic_error("unreachable");
}

SimplexPoint Regularizer::ftrl_argmin(const Real& eta, const RealVector& cumulative,
                                      std::size_t* clamp_events) const {
  if (!(eta > 0)) {
    throw std::invalid_argument("stepsize must be positive, got " + eta.str(20));
  }
  if (cumulative.size() < 2) {
    throw std::invalid_argument("ftrl_argmin needs at least 2 actions");
  }
  for (const Real& g : cumulative) {
    if (!g.is_finite()) throw std::invalid_argument("non-finite cumulative loss");
  }
  if (cumulative.size() == 2) {
    const Real diff = cumulative[0] - cumulative[1];
    return finish({f_eta(eta, diff), f_eta(eta, -diff)}, clamp_events);
  }
  RealVector theta;
  theta.reserve(cumulative.size());
  for (const Real& g : cumulative) theta.push_back(-(eta * g));
  return solve_dual(std::move(theta), clamp_events);
}

SimplexPoint Regularizer::bregman_prox(const Real& eta, const RealVector& loss,
                                       const SimplexPoint& anchor,
                                       std::size_t* clamp_events) const {
  if (!(eta > 0)) {
    throw std::invalid_argument("stepsize must be positive, got " + eta.str(20));
  }
  if (loss.size() != anchor.dim()) {
    throw std::invalid_argument("bregman_prox: dimension mismatch");
  }
  switch (kind_.family()) {
    case Family::NegativeEntropy: {
      Real lowest = loss[0];
      for (const Real& l : loss) lowest = min(lowest, l);
      RealVector w;
      w.reserve(loss.size());
      for (std::size_t i = 0; i < loss.size(); ++i) {
        if (!(anchor[i] > 0)) {
          throw std::domain_error("entropy prox needs an interior anchor");
        }
        w.push_back(anchor[i] * exp(-(eta * (loss[i] - lowest))));
      }
      const Real z = sum(w);
      for (Real& c : w) c /= z;
      return finish(std::move(w), clamp_events);
    }
    case Family::SquaredEuclidean: {
      RealVector v;
      v.reserve(loss.size());
      for (std::size_t i = 0; i < loss.size(); ++i) v.push_back(anchor[i] - eta * loss[i]);
      return finish(project_to_simplex(v), clamp_events);
    }
    case Family::LogBarrier:
    case Family::Tsallis: {
      RealVector theta;
      theta.reserve(loss.size());
      for (std::size_t i = 0; i < loss.size(); ++i) {
        if (!(anchor[i] > 0)) {
          throw std::domain_error(kind_.name() + " prox needs an interior anchor");
        }
        theta.push_back(derivative(anchor[i]) - eta * loss[i]);
      }
      return solve_dual(std::move(theta), clamp_events);
    }
  }
  throw std::logic_error("unreachable");
}

RealVector project_to_simplex(const RealVector& v) {
  if (v.empty()) throw std::invalid_argument("cannot project an empty vector");
  RealVector sorted = v;
  std::sort(sorted.begin(), sorted.end(),
            [](const Real& a, const Real& b) { return a > b; });
  Real running = sorted[0] - sorted[0];
  Real threshold = running;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    Real t = (running - 1) / static_cast<long>(j + 1);
    // Coordinates sitting exactly at the threshold stay in the support.
    if (sorted[j] >= t) threshold = std::move(t);
  }
  RealVector out;
  out.reserve(v.size());
  for (const Real& c : v) {
    Real shifted = c - threshold;
    out.push_back(shifted > 0 ? std::move(shifted) : threshold - threshold);
  }
  return out;
}

}  // namespace optimist
