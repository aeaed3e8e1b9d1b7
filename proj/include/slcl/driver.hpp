#pragma once

#include "slcl/innersolve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slcl {

enum class Mode { Stabilized, Canonical, BCL };
enum class MultiplierUpdate { FirstOrder, Direct };
enum class ZUpdate { FromSubproblem, Recompute };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, CannotImprove };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Stabilized: return "stabilized";
    case Mode::Canonical: return "canonical";
    case Mode::BCL: return "bcl";
  }
  return "?";
}

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::IterationLimit: return "IterationLimit";
    case Status::CannotImprove: return "CannotImprove";
  }
  return "?";
}

template <typename Scalar>
struct OuterOptions {
  Scalar omega_star = Scalar(1e-6);
  Scalar eta_star = Scalar(1e-6);
  Scalar omega_0 = Scalar(1e-3);
  Scalar eta_0 = 1;
  Scalar sigma_lo = 1;
  Scalar sigma_hi = Scalar(1e4);
  Scalar sigma_0 = Scalar(1e2);  // multiplied by 1 + |y_0|_inf
  Scalar tau_rho = 10;
  Scalar tau_sigma = 10;
  Scalar alpha = Scalar(0.1);
  Scalar beta = Scalar(0.9);
  /// Unset means 10^2.5 / m_c.
  std::optional<Scalar> rho_0;
  Scalar rho_bar = Scalar(1e8);
  Index max_major = 500;
  Mode mode = Mode::Stabilized;
  MultiplierUpdate multiplier_update = MultiplierUpdate::FirstOrder;
  ZUpdate z_update = ZUpdate::FromSubproblem;
  ProximalVariant proximal = ProximalVariant::PP2;
  Scalar proximal_tol = Scalar(1e-2);
  /// Initial multipliers for the slack-form rows; zero when unset.
  std::optional<Vec<Scalar>> y_0;
  bool check_derivatives = true;
  InnerOptions<Scalar> inner;

  void validate() const {
    auto need = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("OuterOptions: ") + what);
    };
    need(omega_star > 0 && eta_star > 0, "tolerances must be positive");
    need(omega_0 >= omega_star, "omega_0 must be >= omega_star");
    need(eta_0 > 0, "eta_0 must be positive");
    need(sigma_lo > 0 && sigma_lo < sigma_hi, "need 0 < sigma_lo < sigma_hi");
    need(tau_rho > 1 && tau_sigma > 1, "tau_rho and tau_sigma must exceed 1");
    need(alpha > 0 && alpha < 1 && beta > 0, "need 0 < alpha < 1 and beta > 0");
    need(!rho_0 || *rho_0 > 0, "rho_0 must be positive");
    need(max_major > 0, "max_major must be positive");
  }

  /// 10^2.5 / m_c (or the override), floored at 1.001.
  Scalar initial_rho(Index m_c) const {
    const Scalar raw = rho_0 ? *rho_0 : std::pow(Scalar(10), Scalar(2.5)) / Scalar(std::max<Index>(m_c, 1));
    return std::max(raw, Scalar(1.001));
  }
};

enum class Branch { Success, Failure, Unbounded };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Success: return "success";
    case Branch::Failure: return "failure";
    case Branch::Unbounded: return "unbounded";
  }
  return "?";
}

/// One major iteration. The plain parameter fields hold the values used in
/// iteration k; the *_next fields hold those handed to iteration k + 1.
template <typename Scalar>
struct TraceRecord {
  Index k = 0;
  Branch branch = Branch::Failure;
  InnerStatus inner_status = InnerStatus::Converged;
  Scalar rho = 0, sigma = 0, eta = 0, omega = 0;
  Scalar rho_next = 0, sigma_next = 0, eta_next = 0, omega_next = 0;
  Scalar c_norm = 0;        // |c(x*_k)|_inf on the slack form
  Scalar f_norm = 0;        // |F(x_{k+1}, y_{k+1}, z_{k+1})|_inf
  Scalar dy_norm = 0;       // |delta y*| on the nonlinear rows
  Scalar elastic_norm = 0;  // |v*|_inf + |w*|_inf
  Scalar objective = 0;     // f(x_{k+1})
  Index inner_iterations = 0;
};

template <typename Scalar>
struct OuterState {
  Index k = 0;
  Vec<Scalar> x, y, z;
  Scalar rho = 0, sigma = 0, eta = 0, omega = 0;
  std::vector<TraceRecord<Scalar>> trace;
};

template <typename Scalar>
struct SolveReport {
  Status status = Status::IterationLimit;
  Vec<Scalar> x, y, z;  // x is the extended point (x, s_c, s_A)
  KktResidual<Scalar> residual;
  Scalar objective = 0;
  Scalar rho = 0;
  Scalar initial_f_norm = 0;
  Index majors = 0;
  Index minors = 0;
  std::size_t fevals = 0;
  std::vector<TraceRecord<Scalar>> trace;
  std::string message;
};

/// Successful iteration: accept the subproblem point, update y, z and reset sigma.
template <typename Scalar>
OuterState<Scalar> update_on_success(OuterState<Scalar> state, const SubproblemSolution<Scalar>& sol,
                                     const Vec<Scalar>& c_val, const OuterOptions<Scalar>& opts,
                                     Index m_c, const Vec<Scalar>* recomputed_z = nullptr) {
  const Vec<Scalar> y_star = state.y + sol.delta_y;
  state.x = sol.x_star;
  state.y = opts.multiplier_update == MultiplierUpdate::FirstOrder
                ? first_order_multiplier(c_val, y_star, state.rho)
                : y_star;
  state.z = (opts.z_update == ZUpdate::Recompute && recomputed_z) ? *recomputed_z : sol.z_star;
  const Scalar dy = norm_inf(sol.delta_y.head(m_c));
  state.sigma = std::max(opts.sigma_lo, std::min(dy, opts.sigma_hi));
  state.eta = state.eta / std::pow(state.rho, opts.beta);
  return state;
}

/// Failed iteration: keep the estimates, raise rho, shrink sigma, reset eta.
template <typename Scalar>
OuterState<Scalar> update_on_failure(OuterState<Scalar> state, const OuterOptions<Scalar>& opts) {
  state.rho *= opts.tau_rho;
  state.sigma /= opts.tau_sigma;
  state.eta = opts.eta_0 / std::pow(state.rho, opts.alpha);
  return state;
}

/// omega <- min(omega_k, |F|^2); omega_{k+1} = max(omega / 2, omega_star)
template <typename Scalar>
Scalar next_omega(Scalar omega_k, Scalar f_norm, Scalar omega_star) {
  const Scalar omega = std::min(omega_k, f_norm * f_norm);
  return std::max(Scalar(0.5) * omega, omega_star);
}

template <typename Scalar>
bool detect_infeasible(Scalar nonlinear_violation, Scalar rho, Scalar eta_star, Scalar rho_bar) {
  return nonlinear_violation > eta_star && rho > rho_bar;
}

inline bool detect_unbounded(bool x_feasible, InnerStatus inner_status) {
  return inner_status == InnerStatus::Unbounded && x_feasible;
}

namespace detail {

template <typename Scalar>
Vec<Scalar> recompute_z(const SlackForm<Scalar>& form, const Vec<Scalar>& X, const Vec<Scalar>& y) {
  const auto p = form.evaluate(X);
  return p.g - p.J.transpose() * y;
}

template <typename Scalar>
void finish(SolveReport<Scalar>& rep, const SlackForm<Scalar>& form, Status status, const Vec<Scalar>& x,
            const Vec<Scalar>& y, const Vec<Scalar>& z) {
  rep.status = status;
  rep.x = x;
  rep.y = y;
  rep.z = z;
  rep.residual = kkt_residual(form, x, y, z);
  rep.objective = form.objective(x);
}

}  // namespace detail

/// Stabilized LCL method (and its canonical-LCL and BCL special cases).
///
///  1. proximal-point start feasible for bounds and linear rows
///  2. linearize at x_k and form the elastic subproblem
///  3. solve it to tolerance omega_k
///  4. unbounded subproblem at a feasible point: stop; otherwise a failure
///  5. |c(x*_k)| <= max(eta_star, eta_k) decides success
///  6-7. success: update estimates, reset sigma, test convergence
///  8. failure: stop as infeasible once rho > rho_bar, else raise rho, cut sigma
///  9. update eta, omega
template <typename Scalar>
SolveReport<Scalar> solve(const NlpProblem<Scalar>& problem, const OuterOptions<Scalar>& opts = {}) {
  using Vector = Vec<Scalar>;
  opts.validate();
  opts.inner.validate();
  problem.validate();

  if (opts.check_derivatives) {
    const auto rep = check_derivatives(problem, project(problem.bounds_x, problem.x_tilde));
    if (!rep.passed)
      throw std::invalid_argument("solve: derivative check failed at x_tilde (worst error " +
                                  std::to_string(static_cast<double>(std::max(rep.max_rel_err_g, rep.max_rel_err_J))) + ")");
  }

  auto counter = std::make_shared<EvalCounter>();
  const SlackForm<Scalar> form = build_slack_form(instrument(problem, counter));
  const Index m = form.m(), m_c = form.m_c();

  SolveReport<Scalar> rep;
  auto close = [&](SolveReport<Scalar>& r) -> SolveReport<Scalar>& {
    r.fevals = counter->function_evals();
    return r;
  };

  Vector x0;
  try {
    x0 = solve_proximal(form, problem.x_tilde, opts.proximal, opts.proximal_tol, opts.inner);
  } catch (const ProximalInfeasible& e) {
    const Vector X = form.extend(project(problem.bounds_x, problem.x_tilde));
    rep.status = Status::Infeasible;
    rep.x = X;
    rep.y = Vector::Zero(m);
    rep.z = Vector::Zero(form.n_ext());
    rep.message = e.what();
    return close(rep);
  }

  Vector y0 = opts.y_0 ? *opts.y_0 : Vector::Zero(m);
  if (y0.size() != m) throw DimensionError("solve: y_0 has wrong size");

  // Only linear rows: one linearly constrained solve is the whole method.
  if (m_c == 0) {
    auto lin = linearize_constraints(form, x0);
    const auto sub = assemble_elastic(form, std::move(lin), y0, Scalar(0), Scalar(0));
    InnerOptions<Scalar> iopts = opts.inner;
    iopts.omega = opts.omega_star;
    const auto sol = solve_lc(sub, iopts);
    rep.majors = 1;
    rep.minors = sol.inner_iterations;
    const Vector y = y0 + sol.delta_y;
    const Vector z = opts.z_update == ZUpdate::Recompute ? detail::recompute_z(form, sol.x_star, y) : sol.z_star;
    Status st = Status::IterationLimit;
    if (sol.status == InnerStatus::Unbounded) st = Status::Unbounded;
    detail::finish(rep, form, st, sol.x_star, y, z);
    if (sol.status == InnerStatus::Converged)
      rep.status = is_optimal(rep.residual, opts.omega_star, opts.eta_star) ? Status::Optimal : Status::CannotImprove;
    return close(rep);
  }

  OuterState<Scalar> st;
  st.x = x0;
  st.y = y0;
  st.z = detail::recompute_z(form, x0, y0);
  st.rho = opts.initial_rho(m_c);
  st.eta = opts.eta_0;
  st.omega = opts.omega_0;
  switch (opts.mode) {
    case Mode::Stabilized: st.sigma = opts.sigma_0 * (1 + norm_inf(y0)); break;
    case Mode::Canonical: st.sigma = opts.sigma_hi; break;
    case Mode::BCL: st.sigma = 0; break;
  }
  OuterOptions<Scalar> eff = opts;
  if (opts.mode == Mode::Canonical) eff.multiplier_update = MultiplierUpdate::Direct;

  rep.initial_f_norm = kkt_residual(form, st.x, st.y, st.z).f_norm;

  std::optional<SubproblemSolution<Scalar>> warm;
  int stuck_at_floor = 0;

  for (st.k = 0; st.k < opts.max_major; ++st.k) {
    TraceRecord<Scalar> rec;
    rec.k = st.k;
    rec.rho = st.rho;
    rec.sigma = st.sigma;
    rec.eta = st.eta;
    rec.omega = st.omega;

    auto lin = linearize_constraints(form, st.x);
    const auto sub = assemble_elastic(form, std::move(lin), st.y, st.rho, st.sigma);
    InnerOptions<Scalar> iopts = opts.inner;
    iopts.omega = st.omega;
    const auto sol = solve_lc(sub, iopts, warm ? &*warm : nullptr);
    ++rep.majors;
    rep.minors += sol.inner_iterations;

    const Vector c_star = form.residual(sol.x_star);
    rec.inner_status = sol.status;
    rec.inner_iterations = sol.inner_iterations;
    rec.c_norm = norm_inf(c_star);
    rec.dy_norm = norm_inf(sol.delta_y.head(m_c));
    rec.elastic_norm = norm_inf(sol.v_star) + norm_inf(sol.w_star);
    const Vector y_star = st.y + sol.delta_y;

    auto record = [&](Branch b) {
      rec.branch = b;
      rec.rho_next = st.rho;
      rec.sigma_next = st.sigma;
      rec.eta_next = st.eta;
      rec.omega_next = st.omega;
      rec.objective = form.objective(st.x);
      st.trace.push_back(rec);
    };
    auto stop = [&](Status s, const Vector& x, const Vector& y, const Vector& z, std::string msg = {}) {
      rep.trace = st.trace;
      rep.rho = st.rho;
      rep.message = std::move(msg);
      detail::finish(rep, form, s, x, y, z);
      return close(rep);
    };

    const bool canonical = opts.mode == Mode::Canonical;
    bool success = false;
    if (sol.status == InnerStatus::Unbounded) {
      const bool feasible = form.nonlinear_violation(sol.x_star) <= opts.eta_star;
      if (detect_unbounded(feasible, sol.status)) {
        rec.f_norm = kkt_residual(form, sol.x_star, y_star, sol.z_star).f_norm;
        record(Branch::Unbounded);
        return stop(Status::Unbounded, sol.x_star, y_star, sol.z_star, "subproblem unbounded at a feasible point");
      }
    } else if (sol.status == InnerStatus::Converged) {
      success = canonical || rec.c_norm <= std::max(opts.eta_star, st.eta);
    }
    if (canonical && (sol.status != InnerStatus::Converged || rec.elastic_norm > opts.inner.delta_lin)) {
      rec.f_norm = kkt_residual(form, st.x, st.y, st.z).f_norm;
      record(Branch::Failure);
      return stop(Status::CannotImprove, st.x, st.y, st.z,
                  sol.status == InnerStatus::Converged ? "linearized constraints are infeasible"
                                                       : "subproblem solver failed");
    }

    if (success) {
      const Scalar eta_prev = st.eta;
      const Scalar sigma_prev = st.sigma;
      Vector z_re;
      if (eff.z_update == ZUpdate::Recompute) {
        const Vector y_next = eff.multiplier_update == MultiplierUpdate::FirstOrder
                                  ? first_order_multiplier(c_star, y_star, st.rho)
                                  : y_star;
        z_re = detail::recompute_z(form, sol.x_star, y_next);
      }
      st = update_on_success(std::move(st), sol, c_star, eff, m_c, z_re.size() ? &z_re : nullptr);
      if (opts.mode != Mode::Stabilized) st.sigma = sigma_prev;
      if (canonical) st.eta = eta_prev;
      warm = sol;
      warm->delta_y.setZero();
      stuck_at_floor = 0;

      const auto res = kkt_residual(form, st.x, st.y, st.z);
      rec.f_norm = res.f_norm;
      if (is_optimal(res, opts.omega_star, opts.eta_star)) {
        record(Branch::Success);
        return stop(Status::Optimal, st.x, st.y, st.z);
      }
      st.omega = next_omega(st.omega, res.f_norm, opts.omega_star);
      record(Branch::Success);
    } else {
      if (sol.status == InnerStatus::IterationLimit && st.omega <= opts.omega_star) {
        if (++stuck_at_floor >= 2) {
          rec.f_norm = kkt_residual(form, st.x, st.y, st.z).f_norm;
          record(Branch::Failure);
          return stop(Status::CannotImprove, st.x, st.y, st.z, "final point cannot be improved");
        }
      } else {
        stuck_at_floor = 0;
      }
      const Scalar violation = form.nonlinear_violation(sol.x_star);
      if (detect_infeasible(violation, st.rho, opts.eta_star, opts.rho_bar)) {
        rec.f_norm = kkt_residual(form, sol.x_star, y_star, sol.z_star).f_norm;
        record(Branch::Failure);
        return stop(Status::Infeasible, sol.x_star, y_star, sol.z_star,
                    "nonlinear constraints violated with rho above threshold");
      }
      const Scalar sigma_prev = st.sigma;
      st = update_on_failure(std::move(st), opts);
      if (opts.mode != Mode::Stabilized) st.sigma = sigma_prev;
      // Restart from x_k with the previous multipliers, clipped inside solve_lc.
      warm = sol;
      warm->x_star = st.x;
      const auto res = kkt_residual(form, st.x, st.y, st.z);
      rec.f_norm = res.f_norm;
      st.omega = next_omega(st.omega, res.f_norm, opts.omega_star);
      record(Branch::Failure);
    }
  }

  rep.trace = st.trace;
  rep.rho = st.rho;
  detail::finish(rep, form, Status::IterationLimit, st.x, st.y, st.z);
  rep.message = "major iteration limit reached";
  return close(rep);
}

}  // namespace slcl
