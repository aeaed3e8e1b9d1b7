#include "slcl/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slcl {
namespace {

using V = Vec<double>;
using M = Mat<double>;
constexpr double kInf = inf<double>;

V vec(std::initializer_list<double> xs) {
  V v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

M row(std::initializer_list<double> xs) { return vec(xs).transpose(); }

struct Builder {
  NlpProblem<double> p;

  Builder(Index n, Index m_c) {
    p.n = n;
    p.m_c = m_c;
    p.bounds_x = Bounds<double>::unbounded(n);
    p.bounds_c = Bounds<double>::unbounded(m_c);
    p.A = M(0, n);
    p.bounds_A = Bounds<double>::unbounded(0);
  }
  template <typename F, typename G>
  Builder& objective(F f, G g) {
    p.eval_f = f;
    p.eval_g = g;
    return *this;
  }
  template <typename C, typename J>
  Builder& constraints(C c, J jac, V lo, V hi) {
    p.eval_c = c;
    p.eval_J = jac;
    p.bounds_c = {std::move(lo), std::move(hi)};
    return *this;
  }
  Builder& linear(M A, V lo, V hi) {
    p.A = std::move(A);
    p.bounds_A = {std::move(lo), std::move(hi)};
    return *this;
  }
  Builder& box(V lo, V hi) {
    p.bounds_x = {std::move(lo), std::move(hi)};
    return *this;
  }
  Builder& start(V x) {
    p.x_tilde = std::move(x);
    return *this;
  }
};

CatalogEntry entry(std::string name, Builder b, std::string description, bool convex,
                   std::optional<double> fstar, std::optional<V> xstar = std::nullopt,
                   Classification cls = Classification::Solvable) {
  CatalogEntry e;
  e.name = std::move(name);
  e.problem = std::move(b.p);
  e.known_objective = fstar;
  e.known_x = std::move(xstar);
  e.classification = cls;
  e.convex = convex;
  e.description = std::move(description);
  return e;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s5 = std::sqrt(5.0), s7 = std::sqrt(7.0);

  out.push_back(entry(
      "circle-proj",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(x[0] - 2, 2) + std::pow(x[1] - 1, 2); },
                     [](const V& x) { return vec({2 * (x[0] - 2), 2 * (x[1] - 1)}); })
          .constraints([](const V& x) { return vec({x[0] * x[0] + x[1] * x[1] - 1}); },
                       [](const V& x) { return row({2 * x[0], 2 * x[1]}); }, vec({0}), vec({0}))
          .box(vec({0, 0}), vec({kInf, kInf}))
          .start(vec({1, 1})),
      "closest point to (2,1) on the unit circle, x >= 0", false, (s5 - 1) * (s5 - 1),
      vec({2 / s5, 1 / s5})));

  out.push_back(entry(
      "linear-as-nl",
      Builder(2, 1)
          .objective([](const V& x) { return x.squaredNorm(); }, [](const V& x) { return V(2 * x); })
          .constraints([](const V& x) { return vec({x[0] + x[1] - 2}); },
                       [](const V&) { return row({1, 1}); }, vec({0}), vec({0}))
          .box(vec({0, 0}), vec({kInf, kInf}))
          .start(vec({0, 0})),
      "affine row passed through the nonlinear interface", true, 2.0, vec({1, 1})));

  out.push_back(entry(
      "infeas-affine",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(x[0] - 1, 2) + std::pow(x[1] - 2, 2); },
                     [](const V& x) { return vec({2 * (x[0] - 1), 2 * (x[1] - 2)}); })
          .constraints([](const V& x) { return vec({x[0] + x[1] + 1}); },
                       [](const V&) { return row({1, 1}); }, vec({0}), vec({0}))
          .box(vec({0, 0}), vec({kInf, kInf}))
          .start(vec({1, 1})),
      "x1 + x2 + 1 = 0 with x >= 0; least violation at x = 0", true, std::nullopt, std::nullopt,
      Classification::Infeasible));

  out.push_back(entry(
      "unbounded-ray",
      Builder(2, 1)
          .objective([](const V& x) { return -x[0]; }, [](const V&) { return vec({-1, 0}); })
          .constraints([](const V& x) { return vec({x[1] * x[1]}); },
                       [](const V& x) { return row({0, 2 * x[1]}); }, vec({0}), vec({0}))
          .box(vec({0, 0}), vec({kInf, kInf}))
          .start(vec({1, 0})),
      "min -x1 s.t. x2^2 = 0, x >= 0", false, std::nullopt, std::nullopt, Classification::Unbounded));

  out.push_back(entry(
      "hs006",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(1 - x[0], 2); },
                     [](const V& x) { return vec({-2 * (1 - x[0]), 0}); })
          .constraints([](const V& x) { return vec({10 * (x[1] - x[0] * x[0])}); },
                       [](const V& x) { return row({-20 * x[0], 10}); }, vec({0}), vec({0}))
          .start(vec({-1.2, 1})),
      "Hock-Schittkowski 6", false, 0.0, vec({1, 1})));

  out.push_back(entry(
      "hs007",
      Builder(2, 1)
          .objective([](const V& x) { return std::log(1 + x[0] * x[0]) - x[1]; },
                     [](const V& x) { return vec({2 * x[0] / (1 + x[0] * x[0]), -1}); })
          .constraints(
              [](const V& x) { return vec({std::pow(1 + x[0] * x[0], 2) + x[1] * x[1] - 4}); },
              [](const V& x) { return row({4 * x[0] * (1 + x[0] * x[0]), 2 * x[1]}); }, vec({0}), vec({0}))
          .start(vec({2, 2})),
      "Hock-Schittkowski 7", false, -s3, vec({0, s3})));

  const double a8 = std::sqrt((25 + std::sqrt(301.0)) / 2);
  out.push_back(entry(
      "hs008",
      Builder(2, 2)
          .objective([](const V&) { return -1.0; }, [](const V&) { return V::Zero(2).eval(); })
          .constraints([](const V& x) { return vec({x[0] * x[0] + x[1] * x[1] - 25, x[0] * x[1] - 9}); },
                       [](const V& x) {
                         M J(2, 2);
                         J << 2 * x[0], 2 * x[1], x[1], x[0];
                         return J;
                       },
                       vec({0, 0}), vec({0, 0}))
          .start(vec({2, 1})),
      "Hock-Schittkowski 8 (constant objective, square system)", false, -1.0, vec({a8, 9 / a8})));

  out.push_back(entry(
      "hs010",
      Builder(2, 1)
          .objective([](const V& x) { return x[0] - x[1]; }, [](const V&) { return vec({1, -1}); })
          .constraints(
              [](const V& x) { return vec({-3 * x[0] * x[0] + 2 * x[0] * x[1] - x[1] * x[1] + 1}); },
              [](const V& x) { return row({-6 * x[0] + 2 * x[1], 2 * x[0] - 2 * x[1]}); }, vec({0}),
              vec({kInf}))
          .start(vec({-10, 10})),
      "Hock-Schittkowski 10", false, -1.0, vec({0, 1})));

  out.push_back(entry(
      "hs011",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(x[0] - 5, 2) + x[1] * x[1] - 25; },
                     [](const V& x) { return vec({2 * (x[0] - 5), 2 * x[1]}); })
          .constraints([](const V& x) { return vec({-x[0] * x[0] + x[1]}); },
                       [](const V& x) { return row({-2 * x[0], 1}); }, vec({0}), vec({kInf}))
          .start(vec({4.9, 0.1})),
      "Hock-Schittkowski 11", false, -8.498464223));

  out.push_back(entry(
      "hs012",
      Builder(2, 1)
          .objective(
              [](const V& x) {
                return 0.5 * x[0] * x[0] + x[1] * x[1] - x[0] * x[1] - 7 * x[0] - 7 * x[1];
              },
              [](const V& x) { return vec({x[0] - x[1] - 7, 2 * x[1] - x[0] - 7}); })
          .constraints([](const V& x) { return vec({25 - 4 * x[0] * x[0] - x[1] * x[1]}); },
                       [](const V& x) { return row({-8 * x[0], -2 * x[1]}); }, vec({0}), vec({kInf}))
          .start(vec({0, 0})),
      "Hock-Schittkowski 12", true, -30.0, vec({2, 3})));

  out.push_back(entry(
      "hs014",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(x[0] - 2, 2) + std::pow(x[1] - 1, 2); },
                     [](const V& x) { return vec({2 * (x[0] - 2), 2 * (x[1] - 1)}); })
          .constraints([](const V& x) { return vec({-0.25 * x[0] * x[0] - x[1] * x[1] + 1}); },
                       [](const V& x) { return row({-0.5 * x[0], -2 * x[1]}); }, vec({0}), vec({kInf}))
          .linear(row({1, -2}), vec({-1}), vec({-1}))
          .start(vec({2, 2})),
      "Hock-Schittkowski 14 (linear equality row)", true, 9 - 23 * s7 / 8,
      vec({(s7 - 1) / 2, (s7 + 1) / 4})));

  out.push_back(entry(
      "hs015",
      Builder(2, 2)
          .objective(
              [](const V& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); },
              [](const V& x) {
                return vec({-400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0])});
              })
          .constraints([](const V& x) { return vec({x[0] * x[1], x[0] + x[1] * x[1]}); },
                       [](const V& x) {
                         M J(2, 2);
                         J << x[1], x[0], 1, 2 * x[1];
                         return J;
                       },
                       vec({1, 0}), vec({kInf, kInf}))
          .box(vec({-kInf, -kInf}), vec({0.5, kInf}))
          .start(vec({-2, 1})),
      "Hock-Schittkowski 15 (Rosenbrock with nonconvex rows)", false, 306.5, vec({0.5, 2})));

  out.push_back(entry(
      "hs022",
      Builder(2, 1)
          .objective([](const V& x) { return std::pow(x[0] - 2, 2) + std::pow(x[1] - 1, 2); },
                     [](const V& x) { return vec({2 * (x[0] - 2), 2 * (x[1] - 1)}); })
          .constraints([](const V& x) { return vec({-x[0] * x[0] + x[1]}); },
                       [](const V& x) { return row({-2 * x[0], 1}); }, vec({0}), vec({kInf}))
          .linear(row({1, 1}), vec({-kInf}), vec({2}))
          .start(vec({2, 2})),
      "Hock-Schittkowski 22 (linear inequality row)", true, 1.0, vec({1, 1})));

  out.push_back(entry(
      "hs028",
      Builder(3, 0)
          .objective([](const V& x) { return std::pow(x[0] + x[1], 2) + std::pow(x[1] + x[2], 2); },
                     [](const V& x) {
                       return vec({2 * (x[0] + x[1]), 2 * (x[0] + x[1]) + 2 * (x[1] + x[2]), 2 * (x[1] + x[2])});
                     })
          .linear(row({1, 2, 3}), vec({1}), vec({1}))
          .start(vec({-4, 1, 1})),
      "Hock-Schittkowski 28 (linear rows only)", true, 0.0, vec({0.5, -0.5, 0.5})));

  out.push_back(entry(
      "hs035",
      Builder(3, 0)
          .objective(
              [](const V& x) {
                return 9 - 8 * x[0] - 6 * x[1] - 4 * x[2] + 2 * x[0] * x[0] + 2 * x[1] * x[1] + x[2] * x[2] +
                       2 * x[0] * x[1] + 2 * x[0] * x[2];
              },
              [](const V& x) {
                return vec({-8 + 4 * x[0] + 2 * x[1] + 2 * x[2], -6 + 4 * x[1] + 2 * x[0], -4 + 2 * x[2] + 2 * x[0]});
              })
          .linear(row({1, 1, 2}), vec({-kInf}), vec({3}))
          .box(vec({0, 0, 0}), vec({kInf, kInf, kInf}))
          .start(vec({0.5, 0.5, 0.5})),
      "Hock-Schittkowski 35 (convex QP)", true, 1.0 / 9, vec({4.0 / 3, 7.0 / 9, 4.0 / 9})));

  out.push_back(entry(
      "hs039",
      Builder(4, 2)
          .objective([](const V& x) { return -x[0]; }, [](const V&) { return vec({-1, 0, 0, 0}); })
          .constraints(
              [](const V& x) {
                return vec({x[1] - std::pow(x[0], 3) - x[2] * x[2], x[0] * x[0] - x[1] - x[3] * x[3]});
              },
              [](const V& x) {
                M J(2, 4);
                J << -3 * x[0] * x[0], 1, -2 * x[2], 0, 2 * x[0], -1, 0, -2 * x[3];
                return J;
              },
              vec({0, 0}), vec({0, 0}))
          .start(vec({2, 2, 2, 2})),
      "Hock-Schittkowski 39", false, -1.0, vec({1, 1, 0, 0})));

  out.push_back(entry(
      "hs040",
      Builder(4, 3)
          .objective([](const V& x) { return -x[0] * x[1] * x[2] * x[3]; },
                     [](const V& x) {
                       return vec({-x[1] * x[2] * x[3], -x[0] * x[2] * x[3], -x[0] * x[1] * x[3],
                                   -x[0] * x[1] * x[2]});
                     })
          .constraints(
              [](const V& x) {
                return vec({std::pow(x[0], 3) + x[1] * x[1] - 1, x[0] * x[0] * x[3] - x[2], x[3] * x[3] - x[1]});
              },
              [](const V& x) {
                M J(3, 4);
                J << 3 * x[0] * x[0], 2 * x[1], 0, 0,  //
                    2 * x[0] * x[3], 0, -1, x[0] * x[0],  //
                    0, -1, 0, 2 * x[3];
                return J;
              },
              vec({0, 0, 0}), vec({0, 0, 0}))
          .start(vec({0.8, 0.8, 0.8, 0.8})),
      "Hock-Schittkowski 40", false, -0.25,
      vec({std::pow(2.0, -1.0 / 3), std::pow(2.0, -0.5), std::pow(2.0, -11.0 / 12), std::pow(2.0, -0.25)})));

  out.push_back(entry(
      "hs043",
      Builder(4, 3)
          .objective(
              [](const V& x) {
                return x[0] * x[0] + x[1] * x[1] + 2 * x[2] * x[2] + x[3] * x[3] - 5 * x[0] - 5 * x[1] -
                       21 * x[2] + 7 * x[3];
              },
              [](const V& x) { return vec({2 * x[0] - 5, 2 * x[1] - 5, 4 * x[2] - 21, 2 * x[3] + 7}); })
          .constraints(
              [](const V& x) {
                return vec({8 - x.squaredNorm() - x[0] + x[1] - x[2] + x[3],
                            10 - x[0] * x[0] - 2 * x[1] * x[1] - x[2] * x[2] - 2 * x[3] * x[3] + x[0] + x[3],
                            5 - 2 * x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - 2 * x[0] + x[1] + x[3]});
              },
              [](const V& x) {
                M J(3, 4);
                J << -2 * x[0] - 1, -2 * x[1] + 1, -2 * x[2] - 1, -2 * x[3] + 1,  //
                    -2 * x[0] + 1, -4 * x[1], -2 * x[2], -4 * x[3] + 1,            //
                    -4 * x[0] - 2, -2 * x[1] + 1, -2 * x[2], 1;
                return J;
              },
              vec({0, 0, 0}), vec({kInf, kInf, kInf}))
          .start(vec({0, 0, 0, 0})),
      "Hock-Schittkowski 43 (Rosen-Suzuki)", true, -44.0, vec({0, 1, 2, -1})));

  out.push_back(entry(
      "hs065",
      Builder(3, 1)
          .objective(
              [](const V& x) {
                return std::pow(x[0] - x[1], 2) + std::pow(x[0] + x[1] - 10, 2) / 9 + std::pow(x[2] - 5, 2);
              },
              [](const V& x) {
                const double t = 2 * (x[0] + x[1] - 10) / 9;
                return vec({2 * (x[0] - x[1]) + t, -2 * (x[0] - x[1]) + t, 2 * (x[2] - 5)});
              })
          .constraints([](const V& x) { return vec({48 - x.squaredNorm()}); },
                       [](const V& x) { return M((-2 * x).transpose()); }, vec({0}), vec({kInf}))
          .box(vec({-4.5, -4.5, -5}), vec({4.5, 4.5, 5}))
          .start(vec({-5, 5, 0})),
      "Hock-Schittkowski 65", true, 0.9535288567));

  out.push_back(entry(
      "hs071",
      Builder(4, 2)
          .objective([](const V& x) { return x[0] * x[3] * (x[0] + x[1] + x[2]) + x[2]; },
                     [](const V& x) {
                       return vec({x[3] * (2 * x[0] + x[1] + x[2]), x[0] * x[3], x[0] * x[3] + 1,
                                   x[0] * (x[0] + x[1] + x[2])});
                     })
          .constraints([](const V& x) { return vec({x[0] * x[1] * x[2] * x[3], x.squaredNorm()}); },
                       [](const V& x) {
                         M J(2, 4);
                         J << x[1] * x[2] * x[3], x[0] * x[2] * x[3], x[0] * x[1] * x[3], x[0] * x[1] * x[2],
                             2 * x[0], 2 * x[1], 2 * x[2], 2 * x[3];
                         return J;
                       },
                       vec({25, 40}), vec({kInf, 40}))
          .box(V::Constant(4, 1), V::Constant(4, 5))
          .start(vec({1, 5, 5, 1})),
      "Hock-Schittkowski 71", false, 17.0140172891));

  out.push_back(entry(
      "hs078",
      Builder(5, 3)
          .objective([](const V& x) { return x.prod(); },
                     [](const V& x) {
                       V g(5);
                       for (Index i = 0; i < 5; ++i) {
                         double p = 1;
                         for (Index j = 0; j < 5; ++j)
                           if (j != i) p *= x[j];
                         g[i] = p;
                       }
                       return g;
                     })
          .constraints(
              [](const V& x) {
                return vec({x.squaredNorm() - 10, x[1] * x[2] - 5 * x[3] * x[4],
                            std::pow(x[0], 3) + std::pow(x[1], 3) + 1});
              },
              [](const V& x) {
                M J(3, 5);
                J << 2 * x[0], 2 * x[1], 2 * x[2], 2 * x[3], 2 * x[4],  //
                    0, x[2], x[1], -5 * x[4], -5 * x[3],                  //
                    3 * x[0] * x[0], 3 * x[1] * x[1], 0, 0, 0;
                return J;
              },
              vec({0, 0, 0}), vec({0, 0, 0}))
          .start(vec({-2, 1.5, 2, -1, -1})),
      "Hock-Schittkowski 78", false, -2.919700409));

  out.push_back(entry(
      "hs079",
      Builder(5, 3)
          .objective(
              [](const V& x) {
                return std::pow(x[0] - 1, 2) + std::pow(x[0] - x[1], 2) + std::pow(x[1] - x[2], 2) +
                       std::pow(x[2] - x[3], 4) + std::pow(x[3] - x[4], 4);
              },
              [](const V& x) {
                const double a = x[0] - x[1], b = x[1] - x[2], c = x[2] - x[3], d = x[3] - x[4];
                return vec({2 * (x[0] - 1) + 2 * a, -2 * a + 2 * b, -2 * b + 4 * c * c * c,
                            -4 * c * c * c + 4 * d * d * d, -4 * d * d * d});
              })
          .constraints(
              [s2](const V& x) {
                return vec({x[0] + x[1] * x[1] + std::pow(x[2], 3) - 2 - 3 * s2,
                            x[1] - x[2] * x[2] + x[3] + 2 - 2 * s2, x[0] * x[4] - 2});
              },
              [](const V& x) {
                M J(3, 5);
                J << 1, 2 * x[1], 3 * x[2] * x[2], 0, 0,  //
                    0, 1, -2 * x[2], 1, 0,                //
                    x[4], 0, 0, 0, x[0];
                return J;
              },
              vec({0, 0, 0}), vec({0, 0, 0}))
          .start(vec({2, 2, 2, 2, 2})),
      "Hock-Schittkowski 79", false, 0.0787768209));

  for (const auto& e : out) {
    e.problem.validate();
    if (e.classification == Classification::Solvable && e.known_x &&
        max_constraint_violation(e.problem, *e.known_x) > 1e-8)
      throw std::logic_error("catalog: known_x of " + e.name + " violates its constraints");
  }
  return out;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Solvable: return "solvable";
    case Classification::Infeasible: return "infeasible";
    case Classification::Unbounded: return "unbounded";
  }
  return "?";
}

double max_constraint_violation(const NlpProblem<double>& problem, const Vec<double>& x) {
  double v = bound_violation(problem.bounds_x, x);
  if (problem.m_c > 0) v = std::max(v, bound_violation(problem.bounds_c, problem.eval_c(x)));
  if (problem.m_A() > 0) v = std::max(v, bound_violation(problem.bounds_A, V(problem.A * x)));
  return v;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& catalog_get(std::string_view name) {
  const auto& all = catalog();
  auto it = std::find_if(all.begin(), all.end(), [&](const CatalogEntry& e) { return e.name == name; });
  if (it == all.end()) throw UnknownProblem("unknown catalog problem: " + std::string(name));
  return *it;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  return names;
}

}  // namespace slcl
