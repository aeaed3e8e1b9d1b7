#pragma once

#include "slcl/slcl.hpp"

#include <doctest.h>

#include <random>

namespace testing {

using V = slcl::Vec<double>;
using M = slcl::Mat<double>;
constexpr double kInf = slcl::inf<double>;

inline V vec(std::initializer_list<double> xs) {
  V v(static_cast<slcl::Index>(xs.size()));
  slcl::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// min x1^2 + x2^2  s.t.  x1 + x2 - 2 = 0, with no variable bounds.
inline slcl::NlpProblem<double> linear_as_nl_free() {
  slcl::NlpProblem<double> p;
  p.n = 2;
  p.m_c = 1;
  p.eval_f = [](const V& x) { return x.squaredNorm(); };
  p.eval_g = [](const V& x) { return V(2 * x); };
  p.eval_c = [](const V& x) { return vec({x[0] + x[1] - 2}); };
  p.eval_J = [](const V&) { return M(vec({1, 1}).transpose()); };
  p.A = M(0, 2);
  p.bounds_x = slcl::Bounds<double>::unbounded(2);
  p.bounds_c = {vec({0}), vec({0})};
  p.bounds_A = slcl::Bounds<double>::unbounded(0);
  p.x_tilde = vec({0, 0});
  return p;
}

/// Uniform point in the box clipped to [center - spread, center + spread].
inline V sample_in(const slcl::Bounds<double>& box, const V& center, double spread, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  V x(center.size());
  for (slcl::Index j = 0; j < x.size(); ++j) {
    const double lo = std::max(box.lower[j], center[j] - spread);
    const double hi = std::min(box.upper[j], center[j] + spread);
    x[j] = lo + (hi - lo) * 0.5 * (u(rng) + 1);
  }
  return x;
}

}  // namespace testing
