#pragma once

#include "slcl/merit.hpp"

namespace slcl {

/// cbar(X) = J_k X + offset, the linearization of the slack-form residual at x_k.
template <typename Scalar>
struct Linearization {
  Vec<Scalar> x_k;
  Vec<Scalar> c_k;
  Mat<Scalar> J_k;
  Vec<Scalar> offset;  // c_k - J_k x_k

  template <typename Derived>
  Vec<Scalar> operator()(const Eigen::MatrixBase<Derived>& X) const {
    return J_k * X + offset;
  }
};

/// Linear rows reproduce themselves exactly; a zero Jacobian row is allowed.
template <typename Scalar>
Linearization<Scalar> linearize_constraints(const SlackForm<Scalar>& form, const Vec<Scalar>& x_k) {
  if (x_k.size() != form.n_ext()) throw DimensionError("linearize_constraints: x_k has wrong size");
  if (bound_violation(form.bounds(), x_k) > Scalar(1e-8))
    throw std::invalid_argument("linearize_constraints: x_k outside its bounds");
  Linearization<Scalar> lin;
  lin.x_k = x_k;
  lin.c_k = form.residual(x_k);
  lin.J_k = form.jacobian(x_k);
  if (!all_finite(lin.J_k) || !all_finite(lin.c_k))
    throw EvaluationError("linearize_constraints: non-finite constraint or Jacobian value");
  lin.offset = lin.c_k - lin.J_k * x_k;
  return lin;
}

template <typename Scalar>
struct ElasticPair {
  Vec<Scalar> v;
  Vec<Scalar> w;
};

/// Cheapest v, w >= 0 with cbar + v - w = 0.
template <typename Scalar>
ElasticPair<Scalar> optimal_elastics(const Vec<Scalar>& cbar) {
  return {(-cbar).cwiseMax(Scalar(0)), cbar.cwiseMax(Scalar(0))};
}

/// |delta_y|_inf < sigma, the condition under which the elastics vanish.
template <typename Scalar>
bool elastic_threshold_holds(const Vec<Scalar>& delta_y, Scalar sigma) {
  return norm_inf(delta_y) < sigma;
}

/// Variable layout of the lifted subproblem: u = (X, v, w).
struct ElasticLayout {
  Index n_ext = 0;
  Index m = 0;
  Index size() const { return n_ext + 2 * m; }

  template <typename V> auto X(V&& u) const { return u.head(n_ext); }
  template <typename V> auto v(V&& u) const { return u.segment(n_ext, m); }
  template <typename V> auto w(V&& u) const { return u.tail(m); }
};

/// Lifted elastic subproblem
///
///     min  L_k(X) + sigma e'(v + w)
///     s.t. J_k X + v - w = -offset,  X in box,  v, w >= 0,
///
/// where L_k(X) = L(X, y_k, rho_k). Elastics on linear rows are fixed at zero
/// so those rows are never relaxed; see `lifted_bounds`. Holds a non-owning
/// pointer to the slack form, which must outlive it.
template <typename Scalar>
struct ElasticSubproblem {
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;

  const SlackForm<Scalar>* form = nullptr;
  Linearization<Scalar> lin;
  Vector y_k;
  Scalar rho_k = 0;
  Scalar sigma_k = 0;
  ElasticLayout dims;

  Index m_c() const { return form->m_c(); }

  Bounds<Scalar> lifted_bounds() const {
    Bounds<Scalar> box{Vector(dims.size()), Vector(dims.size())};
    box.lower.head(dims.n_ext) = form->bounds().lower;
    box.upper.head(dims.n_ext) = form->bounds().upper;
    for (Index i = 0; i < dims.m; ++i) {
      const Scalar cap = i < m_c() ? inf<Scalar> : Scalar(0);
      box.lower[dims.n_ext + i] = 0;
      box.upper[dims.n_ext + i] = cap;
      box.lower[dims.n_ext + dims.m + i] = 0;
      box.upper[dims.n_ext + dims.m + i] = cap;
    }
    return box;
  }

  /// J_k X + offset + v - w
  Vector lifted_residual(const Vector& u) const {
    return lin(dims.X(u)) + dims.v(u) - dims.w(u);
  }

  /// [J_k  I  -I]
  Matrix lifted_jacobian() const {
    Matrix B = Matrix::Zero(dims.m, dims.size());
    B.leftCols(dims.n_ext) = lin.J_k;
    B.middleCols(dims.n_ext, dims.m).diagonal().setOnes();
    B.rightCols(dims.m).diagonal().setConstant(Scalar(-1));
    return B;
  }

  /// Objective value; fills the gradient when `grad` is non-null. Non-finite
  /// callback output yields +inf.
  Scalar objective(const Vector& u, Vector* grad = nullptr) const {
    const Vector X = dims.X(u);
    const auto p = form->evaluate(X);
    if (!p.finite()) return inf<Scalar>;
    const Scalar val = aug_lagrangian<Scalar>(p, y_k, rho_k) + sigma_k * (dims.v(u).sum() + dims.w(u).sum());
    if (grad) {
      grad->resize(dims.size());
      grad->head(dims.n_ext) = aug_lagrangian_grad<Scalar>(p, y_k, rho_k);
      grad->tail(2 * dims.m).setConstant(sigma_k);
    }
    return val;
  }

  /// (x_k, elastics) at which the lifted rows hold exactly.
  Vector base_point() const {
    Vector u(dims.size());
    dims.X(u) = lin.x_k;
    const auto e = optimal_elastics<Scalar>(lin.c_k);
    dims.v(u) = e.v;
    dims.w(u) = e.w;
    return u;
  }
};

template <typename Scalar>
ElasticSubproblem<Scalar> assemble_elastic(const SlackForm<Scalar>& form, Linearization<Scalar> lin,
                                           Vec<Scalar> y_k, Scalar rho_k, Scalar sigma_k) {
  if (!(sigma_k >= 0) || !(rho_k >= 0))
    throw std::invalid_argument("assemble_elastic: sigma_k and rho_k must be >= 0");
  if (y_k.size() != form.m() || lin.c_k.size() != form.m())
    throw DimensionError("assemble_elastic: size mismatch");
  ElasticSubproblem<Scalar> sub;
  sub.form = &form;
  sub.lin = std::move(lin);
  sub.y_k = std::move(y_k);
  sub.rho_k = rho_k;
  sub.sigma_k = sigma_k;
  sub.dims = {form.n_ext(), form.m()};
  return sub;
}

}  // namespace slcl
