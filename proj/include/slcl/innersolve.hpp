#pragma once

#include "slcl/bound_solve.hpp"
#include "slcl/linearize.hpp"

#include <optional>

namespace slcl {

enum class InnerStatus { Converged, Unbounded, IterationLimit };

inline const char* to_string(InnerStatus s) {
  switch (s) {
    case InnerStatus::Converged: return "Converged";
    case InnerStatus::Unbounded: return "Unbounded";
    case InnerStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

template <typename Scalar>
struct InnerOptions {
  Scalar omega = Scalar(1e-6);           // optimality tolerance
  Scalar delta_lin = Scalar(1e-6);       // linearized-feasibility tolerance
  Index max_inner_iters = 5000;
  int max_restarts = 3;
  Scalar unbounded_objective = Scalar(-1e15);
  Scalar unbounded_norm = Scalar(1e10);
  Scalar al_rho_init = 10;
  Scalar al_rho_growth = 10;
  bool quasi_newton = true;

  void validate() const {
    if (!(omega >= std::numeric_limits<Scalar>::epsilon()) || !(delta_lin > 0) || max_inner_iters <= 0 ||
        max_restarts <= 0 || !(unbounded_norm > 0) || !(al_rho_init > 0) || !(al_rho_growth > 1))
      throw std::invalid_argument("InnerOptions: invalid value");
  }
};

template <typename Scalar>
struct SubproblemSolution {
  Vec<Scalar> x_star;   // extended point X
  Vec<Scalar> delta_y;  // multipliers of the lifted rows
  Vec<Scalar> z_star;   // reduced costs for X
  Vec<Scalar> v_star;
  Vec<Scalar> w_star;
  InnerStatus status = InnerStatus::IterationLimit;
  Index inner_iterations = 0;
  Index function_evals = 0;
};

namespace detail {

template <typename Scalar>
struct LinearAlResult {
  Vec<Scalar> u;
  Vec<Scalar> multipliers;  // mu - rho_in * r at u
  Scalar residual_norm = 0;
  InnerStatus status = InnerStatus::IterationLimit;
  Index iterations = 0;
  Index evaluations = 0;
};

/// min phi(u) s.t. B u = b, u in box, by an augmented Lagrangian on the rows
/// with each bound-constrained subproblem handled by bound_solve.
///
/// Stops once bound_solve meets `tol` and |B u - b|_inf <= feas_tol.
/// `phi(u, grad*)` returns the objective; the returned multipliers satisfy
/// grad phi(u) - B' multipliers = projected-gradient-small reduced costs.
template <typename Scalar, typename Phi>
LinearAlResult<Scalar> linear_al_solve(Phi&& phi, const Mat<Scalar>& B, const Vec<Scalar>& b,
                                       const Bounds<Scalar>& box, const Vec<Scalar>& u0,
                                       Vec<Scalar> mu, const InnerOptions<Scalar>& opts, Scalar tol,
                                       Scalar feas_tol) {
  using Vector = Vec<Scalar>;
  LinearAlResult<Scalar> out;
  out.u = project(box, u0);
  Scalar rho_in = opts.al_rho_init;
  Scalar prev_r = inf<Scalar>;
  const Index budget = static_cast<Index>(opts.max_restarts) * opts.max_inner_iters;
  int restarts = 0;

  BoundSolveOptions<Scalar> bopts;
  bopts.tol = tol;
  bopts.unbounded_objective = opts.unbounded_objective;
  bopts.unbounded_norm = opts.unbounded_norm;
  bopts.quasi_newton = opts.quasi_newton;

  Vector r = B * out.u - b;
  for (;;) {
    auto merit = [&](const Vector& u, Vector& g) {
      Vector gphi;
      const Scalar val = phi(u, &gphi);
      if (!std::isfinite(val)) return inf<Scalar>;
      const Vector ru = B * u - b;
      const Vector yhat = mu - rho_in * ru;
      g = gphi - B.transpose() * yhat;
      return val - mu.dot(ru) + Scalar(0.5) * rho_in * ru.squaredNorm();
    };
    bopts.max_iters = std::min(opts.max_inner_iters, budget - out.iterations);
    auto res = bound_solve(merit, box, out.u, bopts);
    out.u = std::move(res.x);
    out.iterations += res.iterations;
    out.evaluations += res.evaluations;
    r = B * out.u - b;
    out.residual_norm = norm_inf(r);
    out.multipliers = mu - rho_in * r;

    if (res.status == BoundStatus::Unbounded) {
      out.status = InnerStatus::Unbounded;
      return out;
    }
    if (res.status == BoundStatus::IterationLimit) {
      if (++restarts > opts.max_restarts || out.iterations >= budget) {
        out.status = InnerStatus::IterationLimit;
        return out;
      }
      continue;
    }
    if (out.residual_norm <= feas_tol) {
      out.status = InnerStatus::Converged;
      return out;
    }
    if (out.iterations >= budget || rho_in > Scalar(1e20)) {
      out.status = InnerStatus::IterationLimit;
      return out;
    }
    mu = out.multipliers;
    if (out.residual_norm > Scalar(0.1) * prev_r) rho_in *= opts.al_rho_growth;
    prev_r = out.residual_norm;
  }
}

}  // namespace detail

/// Solves the lifted elastic subproblem to the relaxed first-order conditions
/// with optimality tolerance opts.omega.
///
/// The warm start supplies the initial X and row multipliers. On return
/// v, w are complementary, nonlinear-row multipliers lie in
/// [-(sigma + omega), sigma + omega] and z_star = grad L_k(X) - J_k' delta_y.
template <typename Scalar>
SubproblemSolution<Scalar> solve_lc(const ElasticSubproblem<Scalar>& sub, const InnerOptions<Scalar>& opts,
                                    const SubproblemSolution<Scalar>* warm_start = nullptr) {
  using Vector = Vec<Scalar>;
  opts.validate();
  const auto& dims = sub.dims;
  const Index m = dims.m, m_c = sub.m_c();
  const auto box = sub.lifted_bounds();

  Vector u(dims.size());
  dims.X(u) = project(sub.form->bounds(), warm_start ? warm_start->x_star : sub.lin.x_k);
  auto e = optimal_elastics<Scalar>(sub.lin(dims.X(u)));
  e.v.tail(m - m_c).setZero();
  e.w.tail(m - m_c).setZero();
  dims.v(u) = e.v;
  dims.w(u) = e.w;
  Vector mu = warm_start ? warm_start->delta_y : Vector::Zero(m);

  auto phi = [&sub](const Vector& x, Vector* g) { return sub.objective(x, g); };
  auto al = detail::linear_al_solve<Scalar>(phi, sub.lifted_jacobian(), Vector(-sub.lin.offset), box, u,
                                            mu, opts, opts.omega, opts.delta_lin);

  SubproblemSolution<Scalar> sol;
  sol.status = al.status;
  sol.inner_iterations = al.iterations;
  sol.function_evals = al.evaluations;
  sol.x_star = dims.X(al.u);
  // Same residual with min(v_i, w_i) = 0 and no larger l1 cost.
  const Vector net = dims.v(al.u) - dims.w(al.u);
  sol.v_star = net.cwiseMax(Scalar(0));
  sol.w_star = (-net).cwiseMax(Scalar(0));
  sol.delta_y = al.multipliers;
  const Scalar cap = sub.sigma_k + opts.omega;
  sol.delta_y.head(m_c) = sol.delta_y.head(m_c).cwiseMax(-cap).cwiseMin(cap);

  const auto p = sub.form->evaluate(sol.x_star);
  sol.z_star = aug_lagrangian_grad<Scalar>(p, sub.y_k, sub.rho_k) - sub.lin.J_k.transpose() * sol.delta_y;
  return sol;
}

/// Checks the relaxed subproblem optimality conditions:
///   X in box and v, w >= 0;  |J_k X + offset + v - w| <= delta_lin;
///   z = grad L_k(X) - J_k' dy;  complementarity <= omega (for X, v and w);
///   |dy| <= sigma + omega on the nonlinear rows.
template <typename Scalar>
bool verify_relaxed_kkt(const ElasticSubproblem<Scalar>& sub, const SubproblemSolution<Scalar>& sol,
                        Scalar omega, Scalar delta_lin) {
  using Vector = Vec<Scalar>;
  const auto& dims = sub.dims;
  const Index m_c = sub.m_c();
  if (sol.x_star.size() != dims.n_ext || sol.v_star.size() != dims.m || sol.w_star.size() != dims.m ||
      sol.delta_y.size() != dims.m || sol.z_star.size() != dims.n_ext)
    return false;

  Vector u(dims.size());
  dims.X(u) = sol.x_star;
  dims.v(u) = sol.v_star;
  dims.w(u) = sol.w_star;
  const auto box = sub.lifted_bounds();
  if (bound_violation(box, u) > 0) return false;

  if (norm_inf(sub.lifted_residual(u)) > delta_lin) return false;

  const auto p = sub.form->evaluate(sol.x_star);
  if (!p.finite()) return false;
  const Vector z = aug_lagrangian_grad<Scalar>(p, sub.y_k, sub.rho_k) - sub.lin.J_k.transpose() * sol.delta_y;
  const Scalar scale = 1 + norm_inf(z);
  if (norm_inf(Vector(z - sol.z_star)) > Scalar(1e-9) * scale) return false;

  Vector z_lift(dims.size());
  dims.X(z_lift) = sol.z_star;
  dims.v(z_lift) = Vector::Constant(dims.m, sub.sigma_k) - sol.delta_y;
  dims.w(z_lift) = Vector::Constant(dims.m, sub.sigma_k) + sol.delta_y;
  if (norm_inf(complementarity(box, u, z_lift)) > omega) return false;

  return norm_inf(sol.delta_y.head(m_c)) <= sub.sigma_k + omega;
}

enum class ProximalVariant { PP1, PP2 };

/// Starting point near x_tilde that satisfies the bounds and linear rows.
///
/// PP2 minimizes 0.5 |x - x_tilde|^2, PP1 minimizes |x - x_tilde|_1 through the
/// split x - x_tilde = p - q. Both are solved loosely (tolerance `tol`) after a
/// feasibility phase. Slacks on nonlinear rows are c(x0) projected onto their
/// bounds. Throws ProximalInfeasible when no point satisfies the linear rows.
template <typename Scalar>
Vec<Scalar> solve_proximal(const SlackForm<Scalar>& form, const Vec<Scalar>& x_tilde,
                           ProximalVariant variant = ProximalVariant::PP2, Scalar tol = Scalar(1e-2),
                           const InnerOptions<Scalar>& opts = {}) {
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  const auto& nlp = form.nlp();
  const Index n = nlp.n, mA = nlp.m_A();
  if (x_tilde.size() != n) throw DimensionError("solve_proximal: x_tilde has wrong size");

  // Variables (x, s_A), rows A x - s_A = 0.
  const Bounds<Scalar> box = Bounds<Scalar>::concat({&nlp.bounds_x, &nlp.bounds_A});
  Matrix B(mA, n + mA);
  B << nlp.A, -Matrix::Identity(mA, mA);
  Vector u(n + mA);
  u.head(n) = project(nlp.bounds_x, x_tilde);
  u.tail(mA) = project(nlp.bounds_A, Vector(nlp.A * u.head(n)));

  if (mA > 0) {
    BoundSolveOptions<Scalar> p1;
    p1.tol = Scalar(1e-14);
    p1.max_iters = 20 * opts.max_inner_iters;
    p1.f_target = Scalar(0.5) * Scalar(1e-2) * opts.delta_lin * opts.delta_lin;
    auto phase1 = [&B](const Vector& v, Vector& g) {
      const Vector r = B * v;
      g = B.transpose() * r;
      return Scalar(0.5) * r.squaredNorm();
    };
    u = bound_solve(phase1, box, u, p1).x;
    if (norm_inf(Vector(B * u)) > opts.delta_lin)
      throw ProximalInfeasible("bounds and linear constraints admit no feasible point");
  }

  InnerOptions<Scalar> popts = opts;
  popts.omega = tol;
  Vector x0;
  if (variant == ProximalVariant::PP2) {
    auto phi = [&](const Vector& v, Vector* g) {
      const Vector dx = v.head(n) - x_tilde;
      if (g) {
        g->setZero(v.size());
        g->head(n) = dx;
      }
      return Scalar(0.5) * dx.squaredNorm();
    };
    auto res = detail::linear_al_solve<Scalar>(phi, B, Vector::Zero(mA), box, u, Vector::Zero(mA), popts, tol,
                                                opts.delta_lin);
    if (res.residual_norm > opts.delta_lin)
      throw ProximalInfeasible("proximal-point problem did not reach linear feasibility");
    x0 = res.u.head(n);
  } else {
    // Variables (x, s_A, p, q), rows A x - s_A = 0 and x - p + q = x_tilde.
    const Index N = n + mA + 2 * n;
    Bounds<Scalar> pq = Bounds<Scalar>::nonnegative(2 * n);
    const Bounds<Scalar> box1 = Bounds<Scalar>::concat({&box, &pq});
    Matrix B1 = Matrix::Zero(mA + n, N);
    B1.topLeftCorner(mA, n + mA) = B;
    B1.block(mA, 0, n, n).setIdentity();
    B1.block(mA, n + mA, n, n) = -Matrix::Identity(n, n);
    B1.block(mA, n + mA + n, n, n).setIdentity();
    Vector b1 = Vector::Zero(mA + n);
    b1.tail(n) = x_tilde;
    Vector u1(N);
    u1.head(n + mA) = u;
    u1.segment(n + mA, n) = (u.head(n) - x_tilde).cwiseMax(Scalar(0));
    u1.tail(n) = (x_tilde - u.head(n)).cwiseMax(Scalar(0));
    auto phi = [&](const Vector& v, Vector* g) {
      if (g) {
        g->setZero(v.size());
        g->tail(2 * n).setOnes();
      }
      return v.tail(2 * n).sum();
    };
    auto res = detail::linear_al_solve<Scalar>(phi, B1, b1, box1, u1, Vector::Zero(mA + n), popts, tol,
                                                opts.delta_lin);
    // Only the A-rows must hold; the split rows just define the objective.
    if (norm_inf(Vector(B * res.u.head(n + mA))) > opts.delta_lin)
      throw ProximalInfeasible("proximal-point problem did not reach linear feasibility");
    x0 = res.u.head(n);
  }

  Vector X(form.n_ext());
  X.head(n) = x0;
  const Vector c0 = nlp.c(x0);
  if (!all_finite(c0)) throw EvaluationError("solve_proximal: non-finite constraint value at x0");
  X.segment(n, nlp.m_c) = project(nlp.bounds_c, c0);
  X.tail(mA) = nlp.A * x0;
  // A x0 may sit just outside the row bounds (within delta_lin).
  X.tail(mA) = project(nlp.bounds_A, Vector(X.tail(mA)));
  return X;
}

}  // namespace slcl
