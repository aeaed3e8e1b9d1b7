#pragma once

#include "slcl/types.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <deque>
#include <vector>

namespace slcl {

enum class BoundStatus { Converged, Unbounded, IterationLimit };

template <typename Scalar>
struct BoundSolveOptions {
  Scalar tol = Scalar(1e-6);
  Index max_iters = 5000;
  int memory = 10;               // nonmonotone window
  Scalar sufficient_decrease = Scalar(1e-4);
  Scalar backtrack = Scalar(0.5);
  Scalar step_min = Scalar(1e-12);
  Scalar step_max = Scalar(1e10);
  Scalar unbounded_objective = Scalar(-1e15);
  Scalar unbounded_norm = Scalar(1e10);
  /// Take BFGS steps on the free variables when curvature information allows.
  bool quasi_newton = true;
  /// Stop as soon as the objective drops to this value.
  Scalar f_target = -inf<Scalar>;
};

template <typename Scalar>
struct BoundSolveResult {
  Vec<Scalar> x;
  Scalar f = 0;
  Vec<Scalar> g;
  BoundStatus status = BoundStatus::IterationLimit;
  Index iterations = 0;
  Index evaluations = 0;
  Scalar pg_norm = 0;
};

/// Gradient with components removed where they point out of the box at an active bound.
template <typename Scalar>
Vec<Scalar> projected_gradient(const Bounds<Scalar>& box, const Vec<Scalar>& x, const Vec<Scalar>& g) {
  Vec<Scalar> pg = g;
  for (Index j = 0; j < x.size(); ++j) {
    const bool at_lo = x[j] <= box.lower[j];
    const bool at_hi = x[j] >= box.upper[j];
    if (at_lo && at_hi)
      pg[j] = 0;
    else if (at_lo)
      pg[j] = std::min(g[j], Scalar(0));
    else if (at_hi)
      pg[j] = std::max(g[j], Scalar(0));
  }
  return pg;
}

/// Minimizes a smooth function over a box.
///
/// `fg(x, g)` returns f(x) and writes the gradient into g; a non-finite
/// value rejects the trial point. Each iteration tries a projected BFGS step
/// on the variables away from their bounds and falls back to a spectral
/// (Barzilai-Borwein) projected-gradient step with nonmonotone backtracking.
template <typename Scalar, typename Fn>
BoundSolveResult<Scalar> bound_solve(Fn&& fg, const Bounds<Scalar>& box, const Vec<Scalar>& start,
                                     const BoundSolveOptions<Scalar>& opts) {
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  const Index n = start.size();

  BoundSolveResult<Scalar> res;
  res.x = project(box, start);
  res.g.resize(n);
  res.f = fg(res.x, res.g);
  res.evaluations = 1;
  if (!std::isfinite(res.f) || !all_finite(res.g))
    throw EvaluationError("bound_solve: non-finite objective at the starting point");

  std::deque<Scalar> history{res.f};
  Vector pg = projected_gradient(box, res.x, res.g);
  res.pg_norm = norm_inf(pg);
  Scalar alpha = res.pg_norm > 0 ? std::clamp(Scalar(1) / res.pg_norm, opts.step_min, opts.step_max) : 1;

  Matrix B;  // BFGS Hessian approximation
  bool have_curvature = false;

  // Near a minimizer the decrease drops below rounding in f; there a step is
  // also accepted on the directional derivative alone (approximate Wolfe).
  auto acceptable = [&](Scalar f_new, const Vector& g_new, const Vector& step, Scalar f_ref, Scalar armijo) {
    if (!std::isfinite(f_new)) return false;
    if (f_new <= f_ref + armijo) return true;
    const Scalar noise = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (1 + std::abs(res.f));
    if (f_new > res.f + noise) return false;
    const Scalar d0 = res.g.dot(step), d1 = g_new.dot(step);
    return d0 < 0 && d1 >= Scalar(0.9) * d0 && d1 <= Scalar(-0.8) * d0;
  };

  Vector x_trial(n), g_trial(n), d(n);
  for (;;) {
    if (res.pg_norm <= opts.tol || res.f <= opts.f_target) {
      res.status = BoundStatus::Converged;
      return res;
    }
    if (res.iterations >= opts.max_iters) {
      res.status = BoundStatus::IterationLimit;
      return res;
    }
    ++res.iterations;
    const Scalar f_ref = *std::max_element(history.begin(), history.end());
    Scalar f_trial = inf<Scalar>;
    bool accepted = false;

    if (opts.quasi_newton && have_curvature) {
      // Variables within eps of a bound with the gradient pushing outward are held.
      const Scalar eps = std::min(Scalar(1e-3), norm_inf(Vector(project(box, res.x - res.g) - res.x)));
      std::vector<Index> free_idx;
      d.setZero();
      for (Index j = 0; j < n; ++j) {
        if (box.lower[j] == box.upper[j]) continue;
        const bool held = (res.x[j] - box.lower[j] <= eps && res.g[j] > 0) ||
                          (box.upper[j] - res.x[j] <= eps && res.g[j] < 0);
        if (held)
          d[j] = -alpha * res.g[j];
        else
          free_idx.push_back(j);
      }
      if (!free_idx.empty()) {
        const Index nf = static_cast<Index>(free_idx.size());
        Matrix Bff(nf, nf);
        Vector gf(nf);
        for (Index a = 0; a < nf; ++a) {
          gf[a] = res.g[free_idx[a]];
          for (Index b = 0; b < nf; ++b) Bff(a, b) = B(free_idx[a], free_idx[b]);
        }
        Eigen::LDLT<Matrix> ldlt(Bff);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
          const Vector df = ldlt.solve(-gf);
          for (Index a = 0; a < nf; ++a) d[free_idx[a]] = df[a];
          if (all_finite(d) && res.g.dot(d) < 0) {
            Scalar t = 1;
            for (int ls = 0; ls < 40; ++ls, t *= opts.backtrack) {
              x_trial = project(box, res.x + t * d);
              const Scalar slope = res.g.dot(x_trial - res.x);
              if (!(slope < 0)) continue;
              f_trial = fg(x_trial, g_trial);
              ++res.evaluations;
              if (acceptable(f_trial, g_trial, Vector(x_trial - res.x), f_ref, opts.sufficient_decrease * slope)) {
                accepted = true;
                break;
              }
            }
          }
        }
      }
    }

    if (!accepted) {
      d = project(box, res.x - alpha * res.g) - res.x;
      const Scalar slope = res.g.dot(d);
      Scalar lambda = 1;
      for (int ls = 0; ls < 60 && slope < 0; ++ls, lambda *= opts.backtrack) {
        x_trial = res.x + lambda * d;
        f_trial = fg(x_trial, g_trial);
        ++res.evaluations;
        if (acceptable(f_trial, g_trial, Vector(lambda * d), f_ref, opts.sufficient_decrease * lambda * slope)) {
          accepted = true;
          break;
        }
      }
    }

    if (!accepted) {
      // No decrease possible at working precision.
      res.status = BoundStatus::IterationLimit;
      return res;
    }

    const Vector s = x_trial - res.x;
    const Vector yv = g_trial - res.g;
    const Scalar sy = s.dot(yv);
    const Scalar f_prev = res.f;
    res.x = x_trial;
    res.f = f_trial;
    res.g = g_trial;
    pg = projected_gradient(box, res.x, res.g);
    res.pg_norm = norm_inf(pg);
    history.push_back(res.f);
    if (static_cast<int>(history.size()) > opts.memory) history.pop_front();

    if (res.f < opts.unbounded_objective || (norm_inf(res.x) > opts.unbounded_norm && res.f < f_prev)) {
      res.status = BoundStatus::Unbounded;
      return res;
    }

    const Scalar ss = s.squaredNorm();
    if (sy > std::numeric_limits<Scalar>::epsilon() * std::sqrt(ss) * yv.norm() && sy > 0) {
      alpha = std::clamp(ss / sy, opts.step_min, opts.step_max);
      if (!have_curvature) {
        B = Matrix::Identity(n, n) * (yv.squaredNorm() / sy);
        have_curvature = true;
      }
      // Damped BFGS keeps B positive definite.
      const Vector Bs = B * s;
      const Scalar sBs = s.dot(Bs);
      Vector r = yv;
      Scalar sr = sy;
      if (sy < Scalar(0.2) * sBs) {
        const Scalar theta = Scalar(0.8) * sBs / (sBs - sy);
        r = theta * yv + (1 - theta) * Bs;
        sr = s.dot(r);
      }
      if (sBs > 0 && sr > 0) B += (r * r.transpose()) / sr - (Bs * Bs.transpose()) / sBs;
    } else {
      // Linear or concave along s: spectral step at its cap, and forget curvature.
      alpha = opts.step_max;
      have_curvature = false;
    }
  }
}

}  // namespace slcl
