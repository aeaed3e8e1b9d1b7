#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace slcl {

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
inline constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Callback outputs or user data whose sizes disagree with the declared problem.
struct DimensionError : Error {
  using Error::Error;
};

/// A callback returned NaN or an infinity.
struct EvaluationError : Error {
  using Error::Error;
};

/// Bounds and linear rows admit no point; raised by the proximal-point start.
struct ProximalInfeasible : Error {
  using Error::Error;
};

/// Box [lower, upper]; entries may be +-infinity.
template <typename Scalar>
struct Bounds {
  Vec<Scalar> lower;
  Vec<Scalar> upper;

  Bounds() = default;
  Bounds(Vec<Scalar> lo, Vec<Scalar> hi) : lower(std::move(lo)), upper(std::move(hi)) {}

  static Bounds unbounded(Index n) {
    return {Vec<Scalar>::Constant(n, -inf<Scalar>), Vec<Scalar>::Constant(n, inf<Scalar>)};
  }
  static Bounds nonnegative(Index n) {
    return {Vec<Scalar>::Zero(n), Vec<Scalar>::Constant(n, inf<Scalar>)};
  }
  static Bounds fixed(const Vec<Scalar>& value) { return {value, value}; }

  Index size() const { return lower.size(); }

  bool consistent() const {
    return lower.size() == upper.size() && (lower.array() <= upper.array()).all();
  }

  /// Stacks boxes in order.
  static Bounds concat(std::initializer_list<const Bounds*> parts) {
    Index n = 0;
    for (auto* p : parts) n += p->size();
    Bounds out{Vec<Scalar>(n), Vec<Scalar>(n)};
    Index at = 0;
    for (auto* p : parts) {
      out.lower.segment(at, p->size()) = p->lower;
      out.upper.segment(at, p->size()) = p->upper;
      at += p->size();
    }
    return out;
  }
};

template <typename Scalar, typename Derived>
Vec<Scalar> project(const Bounds<Scalar>& box, const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

/// Largest amount by which x leaves the box.
template <typename Scalar, typename Derived>
Scalar bound_violation(const Bounds<Scalar>& box, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return Scalar(0);
  const Scalar below = (box.lower - x).cwiseMax(Scalar(0)).maxCoeff();
  const Scalar above = (x - box.upper).cwiseMax(Scalar(0)).maxCoeff();
  return std::max(below, above);
}

/// Infinity norm that is 0 for empty vectors.
template <typename Derived>
typename Derived::Scalar norm_inf(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  return v.size() == 0 ? S(0) : v.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 || v.allFinite();
}

}  // namespace slcl
