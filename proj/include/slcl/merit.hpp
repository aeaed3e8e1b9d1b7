#pragma once

#include "slcl/model.hpp"

namespace slcl {

/// y - rho * c
template <typename Scalar, typename DerivedC, typename DerivedY>
Vec<Scalar> first_order_multiplier(const Eigen::MatrixBase<DerivedC>& c_val,
                                   const Eigen::MatrixBase<DerivedY>& y, Scalar rho) {
  if (c_val.size() != y.size()) throw DimensionError("first_order_multiplier: size mismatch");
  return y - rho * c_val;
}

/// f - y'c + rho/2 |c|^2 from an evaluated point.
template <typename Scalar>
Scalar aug_lagrangian(const typename SlackForm<Scalar>::Point& p, const Vec<Scalar>& y, Scalar rho) {
  return p.f - y.dot(p.c) + Scalar(0.5) * rho * p.c.squaredNorm();
}

/// g - J' yhat from an evaluated point.
template <typename Scalar>
Vec<Scalar> aug_lagrangian_grad(const typename SlackForm<Scalar>::Point& p, const Vec<Scalar>& y,
                                Scalar rho) {
  return p.g - p.J.transpose() * first_order_multiplier(p.c, y, rho);
}

namespace detail {

template <typename Scalar>
void check_merit_args(const SlackForm<Scalar>& form, const Vec<Scalar>& X, const Vec<Scalar>& y,
                      Scalar rho) {
  if (X.size() != form.n_ext() || y.size() != form.m())
    throw DimensionError("augmented Lagrangian: argument size mismatch");
  if (!(rho >= 0)) throw std::invalid_argument("augmented Lagrangian: rho must be >= 0");
  if (bound_violation(form.bounds(), X) > Scalar(1e-8))
    throw std::invalid_argument("augmented Lagrangian: X outside its bounds");
}

template <typename Scalar>
typename SlackForm<Scalar>::Point evaluate_finite(const SlackForm<Scalar>& form, const Vec<Scalar>& X) {
  auto p = form.evaluate(X);
  if (!p.finite()) throw EvaluationError("non-finite function or derivative value");
  return p;
}

}  // namespace detail

/// Augmented Lagrangian of the slack form at X.
template <typename Scalar>
Scalar aug_lagrangian(const SlackForm<Scalar>& form, const Vec<Scalar>& X, const Vec<Scalar>& y,
                      Scalar rho) {
  detail::check_merit_args(form, X, y, rho);
  return aug_lagrangian<Scalar>(detail::evaluate_finite(form, X), y, rho);
}

template <typename Scalar>
Vec<Scalar> aug_lagrangian_grad(const SlackForm<Scalar>& form, const Vec<Scalar>& X,
                                const Vec<Scalar>& y, Scalar rho) {
  detail::check_merit_args(form, X, y, rho);
  return aug_lagrangian_grad<Scalar>(detail::evaluate_finite(form, X), y, rho);
}

/// Two-sided complementarity, componentwise:
///   max( min(x - l, z+), min(u - x, z-) )
/// which is |z| for a free variable and min(x, z) (with z >= 0 relaxed) on x >= 0.
template <typename Scalar>
Vec<Scalar> complementarity(const Bounds<Scalar>& box, const Vec<Scalar>& x, const Vec<Scalar>& z) {
  Vec<Scalar> out(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    const Scalar zp = std::max(z[j], Scalar(0));
    const Scalar zm = std::max(-z[j], Scalar(0));
    // inf - x stays inf; min(inf, 0) = 0 covers the zero-multiplier case.
    const Scalar lo_gap = x[j] - box.lower[j];
    const Scalar hi_gap = box.upper[j] - x[j];
    out[j] = std::max(std::min(lo_gap, zp), std::min(hi_gap, zm));
  }
  return out;
}

template <typename Scalar>
struct KktResidual {
  Scalar primal_inf = 0;
  Scalar dual_inf = 0;
  Scalar comp = 0;
  Scalar f_norm = 0;
};

/// Optimality measure F(x, y, z) on the slack form, rho = 0.
template <typename Scalar>
KktResidual<Scalar> kkt_residual(const SlackForm<Scalar>& form, const Vec<Scalar>& X,
                                 const Vec<Scalar>& y, const Vec<Scalar>& z) {
  if (X.size() != form.n_ext() || y.size() != form.m() || z.size() != form.n_ext())
    throw DimensionError("kkt_residual: argument size mismatch");
  const auto p = form.evaluate(X);
  KktResidual<Scalar> r;
  r.primal_inf = std::max(norm_inf(p.c), bound_violation(form.bounds(), X));
  r.dual_inf = norm_inf(Vec<Scalar>(p.g - p.J.transpose() * y - z));
  r.comp = norm_inf(complementarity(form.bounds(), X, z));
  r.f_norm = std::max({r.primal_inf, r.dual_inf, r.comp});
  return r;
}

template <typename Scalar>
bool is_optimal(const KktResidual<Scalar>& res, Scalar omega_star, Scalar eta_star) {
  return res.primal_inf <= eta_star && res.comp <= omega_star && res.dual_inf <= omega_star;
}

}  // namespace slcl
