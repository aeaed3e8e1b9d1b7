#pragma once

#include "slcl/types.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace slcl {

/// Smooth problem  min f(x)  s.t.  l <= (x; c(x); Ax) <= u.
///
/// eval_c / eval_J may be left empty when m_c == 0. Callbacks must be pure.
template <typename Scalar>
struct NlpProblem {
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;

  Index n = 0;
  Index m_c = 0;
  std::function<Scalar(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_g;
  std::function<Vector(const Vector&)> eval_c;
  std::function<Matrix(const Vector&)> eval_J;
  Matrix A;  // m_A x n, may have zero rows
  Bounds<Scalar> bounds_x;
  Bounds<Scalar> bounds_c;
  Bounds<Scalar> bounds_A;
  Vector x_tilde;

  Index m_A() const { return A.rows(); }

  Vector c(const Vector& x) const { return m_c == 0 ? Vector(0) : eval_c(x); }
  Matrix J(const Vector& x) const { return m_c == 0 ? Matrix(0, n) : eval_J(x); }

  /// Checks declared sizes and bound ordering; throws DimensionError.
  void validate() const {
    auto need = [](bool ok, const std::string& what) {
      if (!ok) throw DimensionError("NlpProblem: " + what);
    };
    need(n > 0, "n must be positive");
    need(m_c >= 0, "m_c must be nonnegative");
    need(static_cast<bool>(eval_f) && static_cast<bool>(eval_g), "eval_f and eval_g are required");
    need(m_c == 0 || (eval_c && eval_J), "eval_c and eval_J are required when m_c > 0");
    need(A.rows() == 0 || A.cols() == n, "A must have n columns");
    need(bounds_x.size() == n, "bounds_x has wrong size");
    need(bounds_c.size() == m_c, "bounds_c has wrong size");
    need(bounds_A.size() == A.rows(), "bounds_A has wrong size");
    need(x_tilde.size() == n, "x_tilde has wrong size");
    need(bounds_x.consistent(), "bounds_x has lower > upper");
    need(bounds_c.consistent(), "bounds_c has lower > upper");
    need(bounds_A.consistent(), "bounds_A has lower > upper");
  }
};

/// Number of user-callback invocations, split by callback.
struct EvalCounter {
  std::size_t f = 0;
  std::size_t g = 0;
  std::size_t c = 0;
  std::size_t J = 0;

  /// eval_f plus eval_c invocations.
  std::size_t function_evals() const { return f + c; }
};

/// Returns a copy of the problem whose callbacks bump `counter`.
template <typename Scalar>
NlpProblem<Scalar> instrument(NlpProblem<Scalar> problem, std::shared_ptr<EvalCounter> counter) {
  using Vector = Vec<Scalar>;
  auto f = std::move(problem.eval_f);
  auto g = std::move(problem.eval_g);
  problem.eval_f = [f, counter](const Vector& x) { ++counter->f; return f(x); };
  problem.eval_g = [g, counter](const Vector& x) { ++counter->g; return g(x); };
  if (problem.eval_c) {
    auto c = std::move(problem.eval_c);
    problem.eval_c = [c, counter](const Vector& x) { ++counter->c; return c(x); };
  }
  if (problem.eval_J) {
    auto J = std::move(problem.eval_J);
    problem.eval_J = [J, counter](const Vector& x) { ++counter->J; return J(x); };
  }
  return problem;
}

/// Standardized form over the extended vector X = (x, s_c, s_A):
///
///     min f(x)  s.t.  c(x) - s_c = 0,  A x - s_A = 0,  bounds on X.
///
/// Equality rows are ordered nonlinear first. Immutable once built.
template <typename Scalar>
class SlackForm {
 public:
  using Vector = Vec<Scalar>;
  using Matrix = Mat<Scalar>;

  /// Everything the merit functions need at one extended point.
  struct Point {
    Scalar f;
    Vector g;  // gradient wrt X (zero on slacks)
    Vector c;  // equality residual
    Matrix J;  // equality Jacobian, m x n_ext
    bool finite() const { return std::isfinite(f) && all_finite(g) && all_finite(c) && all_finite(J); }
  };

  explicit SlackForm(NlpProblem<Scalar> problem) : nlp_(std::move(problem)) {
    nlp_.validate();
    bounds_ = Bounds<Scalar>::concat({&nlp_.bounds_x, &nlp_.bounds_c, &nlp_.bounds_A});
  }

  const NlpProblem<Scalar>& nlp() const { return nlp_; }
  Index n() const { return nlp_.n; }
  Index m_c() const { return nlp_.m_c; }
  Index m_A() const { return nlp_.m_A(); }
  Index m() const { return m_c() + m_A(); }
  Index n_ext() const { return n() + m(); }
  const Bounds<Scalar>& bounds() const { return bounds_; }

  auto x_part(const Vector& X) const { return X.head(n()); }

  /// Extended point with slacks equal to the constraint values (zero residual).
  Vector extend(const Vector& x) const {
    Vector X(n_ext());
    X.head(n()) = x;
    X.segment(n(), m_c()) = nlp_.c(x);
    X.tail(m_A()) = nlp_.A * x;
    return X;
  }

  Scalar objective(const Vector& X) const { return nlp_.eval_f(X.head(n())); }

  Vector gradient(const Vector& X) const {
    Vector g = Vector::Zero(n_ext());
    g.head(n()) = nlp_.eval_g(X.head(n()));
    return g;
  }

  Vector residual(const Vector& X) const {
    const Vector x = X.head(n());
    Vector r(m());
    r.head(m_c()) = nlp_.c(x) - X.segment(n(), m_c());
    r.tail(m_A()) = nlp_.A * x - X.tail(m_A());
    return r;
  }

  Matrix jacobian(const Vector& X) const {
    Matrix Jx = Matrix::Zero(m(), n_ext());
    Jx.topLeftCorner(m_c(), n()) = nlp_.J(X.head(n()));
    Jx.bottomLeftCorner(m_A(), n()) = nlp_.A;
    Jx.rightCols(m()).diagonal().setConstant(Scalar(-1));
    return Jx;
  }

  /// Evaluates f, g, c and J once each. Values may be non-finite; check Point::finite().
  Point evaluate(const Vector& X) const {
    return Point{objective(X), gradient(X), residual(X), jacobian(X)};
  }

  /// Values of the nonlinear rows c(x).
  Vector constraint_values(const Vector& X) const { return nlp_.c(X.head(n())); }

  /// Largest violation of the nonlinear row bounds at X.
  Scalar nonlinear_violation(const Vector& X) const {
    return bound_violation(nlp_.bounds_c, constraint_values(X));
  }

 private:
  NlpProblem<Scalar> nlp_;
  Bounds<Scalar> bounds_;
};

/// Builds the slack form, probing every callback at x_tilde for size mismatches.
template <typename Scalar>
SlackForm<Scalar> build_slack_form(NlpProblem<Scalar> problem) {
  problem.validate();
  const auto& x = problem.x_tilde;
  if (problem.eval_g(x).size() != problem.n)
    throw DimensionError("eval_g returned a vector of the wrong size");
  if (problem.m_c > 0) {
    if (problem.eval_c(x).size() != problem.m_c)
      throw DimensionError("eval_c returned a vector of the wrong size");
    const auto J = problem.eval_J(x);
    if (J.rows() != problem.m_c || J.cols() != problem.n)
      throw DimensionError("eval_J returned a matrix of the wrong shape");
  }
  return SlackForm<Scalar>(std::move(problem));
}

/// Where the derivative check found its largest error.
struct DerivLocation {
  enum class Kind { Gradient, Jacobian } kind = Kind::Gradient;
  Index row = 0;  // Jacobian row; 0 for the gradient
  Index col = 0;  // variable index (0-based)
};

template <typename Scalar>
struct DerivReport {
  Scalar max_rel_err_g = 0;
  Scalar max_rel_err_J = 0;
  DerivLocation worst_index;
  bool passed = false;
};

/// Compares analytic g and J against central differences with step h.
///
/// Relative error uses the scale 1 + |analytic|. Coordinates closer than h
/// to a finite bound are moved inward first so every probe stays in the box.
template <typename Scalar>
DerivReport<Scalar> check_derivatives(const NlpProblem<Scalar>& problem, const Vec<Scalar>& x_in,
                                      Scalar h = Scalar(1e-5), Scalar threshold = Scalar(1e-5)) {
  using Vector = Vec<Scalar>;
  const Index n = problem.n;
  if (x_in.size() != n) throw DimensionError("check_derivatives: x has wrong size");

  Vector x = x_in;
  for (Index j = 0; j < n; ++j) {
    const Scalar lo = problem.bounds_x.lower[j], hi = problem.bounds_x.upper[j];
    if (hi - lo > 2 * h) x[j] = std::clamp(x[j], lo + h, hi - h);
  }

  auto finite_or_throw = [](bool ok) {
    if (!ok) throw EvaluationError("check_derivatives: non-finite callback value");
  };

  const Vector g = problem.eval_g(x);
  finite_or_throw(all_finite(g));
  const auto J = problem.J(x);
  finite_or_throw(all_finite(J));

  DerivReport<Scalar> rep;
  Scalar worst = -1;
  Vector xp = x, xm = x;
  for (Index j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const Scalar fp = problem.eval_f(xp), fm = problem.eval_f(xm);
    finite_or_throw(std::isfinite(fp) && std::isfinite(fm));
    const Scalar err_g = std::abs((fp - fm) / (2 * h) - g[j]) / (1 + std::abs(g[j]));
    rep.max_rel_err_g = std::max(rep.max_rel_err_g, err_g);
    if (err_g > worst) {
      worst = err_g;
      rep.worst_index = {DerivLocation::Kind::Gradient, 0, j};
    }
    if (problem.m_c > 0) {
      const Vector cp = problem.eval_c(xp), cm = problem.eval_c(xm);
      finite_or_throw(all_finite(cp) && all_finite(cm));
      const Vector fd = (cp - cm) / (2 * h);
      for (Index i = 0; i < problem.m_c; ++i) {
        const Scalar err = std::abs(fd[i] - J(i, j)) / (1 + std::abs(J(i, j)));
        rep.max_rel_err_J = std::max(rep.max_rel_err_J, err);
        if (err > worst) {
          worst = err;
          rep.worst_index = {DerivLocation::Kind::Jacobian, i, j};
        }
      }
    }
    xp[j] = x[j];
    xm[j] = x[j];
  }
  rep.passed = rep.max_rel_err_g <= threshold && rep.max_rel_err_J <= threshold;
  return rep;
}

}  // namespace slcl
