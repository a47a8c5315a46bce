#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsid/error.hpp"
#include "qsid/optimizer.hpp"

namespace qsid {

void OptimizerConfig::validate() const {
  if (!(g_tol > 0.0)) fail(ErrorCode::kInvalidArgument, "optimizer: g_tol must be positive");
  if (max_iter < 1) fail(ErrorCode::kInvalidArgument, "optimizer: max_iter must be positive");
  if (!(step_size >= 0.0)) fail(ErrorCode::kInvalidArgument, "optimizer: step_size must be non-negative");
  if (!(temperature > 0.0)) fail(ErrorCode::kInvalidArgument, "optimizer: temperature must be positive");
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "optimizer: Wolfe constants must satisfy 0 < c1 < c2 < 1");
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct NonFinite {};

// Counts evaluations and turns non-finite output into a NonFinite throw.
class CountingObjective {
 public:
  explicit CountingObjective(const ObjectiveFunction& f) : f_(f) {}

  double operator()(std::span<const double> x, std::span<double> g) {
    ++evals_;
    const double v = f_(x, g);
    if (!std::isfinite(v)) throw NonFinite{};
    for (double gi : g)
      if (!std::isfinite(gi)) throw NonFinite{};
    return v;
  }

  std::size_t evals() const { return evals_; }

 private:
  const ObjectiveFunction& f_;
  std::size_t evals_ = 0;
};

struct LinePoint {
  double alpha = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
};

struct LineSearchOutcome {
  bool ok = false;
  double alpha = 0.0;
  double phi = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

// Strong-Wolfe search along p (bracketing phase followed by zoom with
// safeguarded cubic interpolation).
class WolfeLineSearch {
 public:
  WolfeLineSearch(CountingObjective& f, std::span<const double> x, std::span<const double> p, double phi0,
                  double dphi0, double c1, double c2)
      : f_(f), x0_(x), p_(p), phi0_(phi0), dphi0_(dphi0), c1_(c1), c2_(c2),
        x_(x.size()), g_(x.size()) {}

  LineSearchOutcome run(double alpha_init) {
    constexpr int kMaxBracket = 40;
    constexpr double kMaxAlpha = 1e10;
    LinePoint prev{0.0, phi0_, dphi0_};
    double alpha = alpha_init;
    for (int i = 0; i < kMaxBracket; ++i) {
      LinePoint cur;
      try {
        cur = probe(alpha);
      } catch (const NonFinite&) {
        // Overshot into a region the objective cannot represent: back off.
        alpha = 0.5 * (prev.alpha + alpha);
        if (alpha - prev.alpha <= 1e-16 * std::max(1.0, alpha)) return {};
        continue;
      }
      if (cur.phi > phi0_ + c1_ * alpha * dphi0_ || (i > 0 && cur.phi >= prev.phi)) return zoom(prev, cur);
      if (std::abs(cur.dphi) <= -c2_ * dphi0_) return accept(cur);
      if (cur.dphi >= 0.0) return zoom(cur, prev);
      prev = cur;
      alpha = std::min(2.0 * alpha, kMaxAlpha);
    }
    return {};
  }

 private:
  LinePoint probe(double alpha) {
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = x0_[i] + alpha * p_[i];
    const double phi = f_(x_, g_);
    return {alpha, phi, dot(g_, p_)};
  }

  // Only ever called on the most recent probe, so x_ and g_ match `pt`.
  LineSearchOutcome accept(const LinePoint& pt) { return {true, pt.alpha, pt.phi, x_, g_}; }

  static double cubic_min(const LinePoint& a, const LinePoint& b) {
    const double d1 = a.dphi + b.dphi - 3.0 * (a.phi - b.phi) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.dphi * b.dphi;
    if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    return b.alpha - (b.alpha - a.alpha) * (b.dphi + d2 - d1) / (b.dphi - a.dphi + 2.0 * d2);
  }

  LineSearchOutcome zoom(LinePoint lo, LinePoint hi) {
    constexpr int kMaxZoom = 40;
    for (int i = 0; i < kMaxZoom; ++i) {
      const double lo_a = std::min(lo.alpha, hi.alpha);
      const double hi_a = std::max(lo.alpha, hi.alpha);
      const double width = hi_a - lo_a;
      if (width <= 1e-16 * std::max(1.0, hi_a)) return {};
      double alpha = cubic_min(lo, hi);
      if (!std::isfinite(alpha) || alpha < lo_a + 0.1 * width || alpha > hi_a - 0.1 * width) {
        alpha = 0.5 * (lo.alpha + hi.alpha);
      }
      LinePoint cur;
      try {
        cur = probe(alpha);
      } catch (const NonFinite&) {
        hi = {alpha, std::numeric_limits<double>::max(), 0.0};
        continue;
      }
      if (cur.phi > phi0_ + c1_ * alpha * dphi0_ || cur.phi >= lo.phi) {
        hi = cur;
      } else {
        if (std::abs(cur.dphi) <= -c2_ * dphi0_) return accept(cur);
        if (cur.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
    return {};
  }

  CountingObjective& f_;
  std::span<const double> x0_;
  std::span<const double> p_;
  double phi0_;
  double dphi0_;
  double c1_;
  double c2_;
  std::vector<double> x_;
  std::vector<double> g_;
};

}  // namespace

OptimizationResult bfgs_minimize(const ObjectiveFunction& f, std::span<const double> x0,
                                 const OptimizerConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = f.dimension();
  if (x0.size() != dim) fail(ErrorCode::kDimensionMismatch, "bfgs_minimize: x0 has wrong length");

  CountingObjective obj(f);
  OptimizationResult res;
  res.local_runs = 1;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> g(dim);
  double fx = 0.0;

  auto finish = [&](bool converged, std::string message) {
    res.best_params = x;
    res.best_value = fx;
    res.best_grad_norm = norm(g);
    res.converged = converged;
    res.total_evals = obj.evals();
    res.message = std::move(message);
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  };

  try {
    fx = obj(x, g);
  } catch (const NonFinite&) {
    res.best_params = x;
    res.best_value = std::numeric_limits<double>::infinity();
    res.best_grad_norm = std::numeric_limits<double>::infinity();
    res.total_evals = obj.evals();
    res.message = "non-finite objective at starting point";
    return res;
  }

  // Row-major inverse Hessian approximation.
  std::vector<double> hinv(dim * dim, 0.0);
  auto reset_hessian = [&](double scale) {
    std::fill(hinv.begin(), hinv.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) hinv[i * dim + i] = scale;
  };
  reset_hessian(1.0);
  bool fresh_hessian = true;
  bool scaled = false;
  bool retried = false;

  std::vector<double> p(dim);
  std::vector<double> s(dim);
  std::vector<double> y(dim);
  std::vector<double> hy(dim);

  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    const double gnorm = norm(g);
    if (gnorm <= cfg.g_tol) return finish(true, "gradient norm below tolerance");
    res.iterations = iter + 1;

    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc -= hinv[i * dim + j] * g[j];
      p[i] = acc;
    }
    double dphi0 = dot(g, p);
    if (!(dphi0 < 0.0)) {
      reset_hessian(1.0);
      fresh_hessian = true;
      scaled = false;
      for (std::size_t i = 0; i < dim; ++i) p[i] = -g[i];
      dphi0 = -gnorm * gnorm;
    }

    const double alpha_init = fresh_hessian ? std::min(1.0, 1.0 / gnorm) : 1.0;
    WolfeLineSearch search(obj, x, p, fx, dphi0, cfg.wolfe_c1, cfg.wolfe_c2);
    LineSearchOutcome ls;
    try {
      ls = search.run(alpha_init);
    } catch (const NonFinite&) {
      return finish(false, "non-finite objective during line search");
    }

    if (!ls.ok) {
      if (retried || fresh_hessian) return finish(false, "line search failed");
      reset_hessian(1.0);
      fresh_hessian = true;
      scaled = false;
      retried = true;
      continue;
    }
    retried = false;
    fresh_hessian = false;

    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = ls.x[i] - x[i];
      y[i] = ls.g[i] - g[i];
    }
    x = std::move(ls.x);
    g = std::move(ls.g);
    fx = ls.phi;

    const double sy = dot(s, y);
    if (sy <= 1e-12 * norm(s) * norm(y)) continue;  // curvature condition failed; keep H
    if (!scaled) {
      reset_hessian(sy / dot(y, y));
      scaled = true;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += hinv[i * dim + j] * y[j];
      hy[i] = acc;
    }
    const double yhy = dot(y, hy);
    const double rho = 1.0 / sy;
    const double coef = (sy + yhy) * rho * rho;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        const double upd = coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        hinv[i * dim + j] += upd;
        if (j != i) hinv[j * dim + i] = hinv[i * dim + j];
      }
    }
  }
  const bool converged = norm(g) <= cfg.g_tol;
  return finish(converged, converged ? "gradient norm below tolerance" : "iteration limit reached");
}

std::vector<double> finite_diff_gradient(const ObjectiveFunction& f, std::span<const double> x, double h,
                                         bool relative) {
  if (!(h > 0.0)) fail(ErrorCode::kInvalidArgument, "finite_diff_gradient: h must be positive");
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = relative ? h * (1.0 + std::abs(x[i])) : h;
    xp[i] = x[i] + step;
    const double fp = f(xp);
    xp[i] = x[i] - step;
    const double fm = f(xp);
    xp[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

}  // namespace qsid
