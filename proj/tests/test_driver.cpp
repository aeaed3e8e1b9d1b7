#include "support.hpp"

#include <cstring>

using namespace testing;
using slcl::Status;

namespace {

slcl::SubproblemSolution<double> step(const V& dy) {
  slcl::SubproblemSolution<double> sol;
  sol.x_star = vec({0});
  sol.z_star = vec({0});
  sol.delta_y = dy;
  return sol;
}

slcl::OuterState<double> state(const V& y, double rho, double sigma, double eta) {
  slcl::OuterState<double> s;
  s.x = vec({0});
  s.y = y;
  s.z = vec({0});
  s.rho = rho;
  s.sigma = sigma;
  s.eta = eta;
  return s;
}

}  // namespace

TEST_CASE("success update resets sigma to the multiplier step") {
  const slcl::OuterOptions<double> opts;
  const auto s = slcl::update_on_success(state(vec({0, 0}), 4.0, 50.0, 0.5), step(vec({3, -7})), vec({0, 0}), opts, 2);
  CHECK(s.sigma == 7);
  CHECK(s.eta == doctest::Approx(0.143587).epsilon(1e-5));
  CHECK(s.y == vec({3, -7}));
  const auto lo = slcl::update_on_success(state(vec({0}), 4.0, 50.0, 0.5), step(vec({0.01})), vec({0}), opts, 1);
  CHECK(lo.sigma == 1);
  const auto hi = slcl::update_on_success(state(vec({0}), 4.0, 50.0, 0.5), step(vec({1e6})), vec({0}), opts, 1);
  CHECK(hi.sigma == 1e4);
}

TEST_CASE("success update applies the first-order multiplier") {
  const slcl::OuterOptions<double> opts;
  const auto s = slcl::update_on_success(state(vec({2}), 10.0, 1.0, 1.0), step(vec({3})), vec({0.2}), opts, 1);
  CHECK(s.y[0] == doctest::Approx(3));
  auto direct = opts;
  direct.multiplier_update = slcl::MultiplierUpdate::Direct;
  CHECK(slcl::update_on_success(state(vec({2}), 10.0, 1.0, 1.0), step(vec({3})), vec({0.2}), direct, 1).y[0] == 5);
}

TEST_CASE("success update ignores linear-row multipliers when resetting sigma") {
  const slcl::OuterOptions<double> opts;
  const auto s = slcl::update_on_success(state(vec({0, 0}), 4.0, 50.0, 0.5), step(vec({3, -700})), vec({0, 0}), opts, 1);
  CHECK(s.sigma == 3);
}

TEST_CASE("failure update") {
  const slcl::OuterOptions<double> opts;
  const auto s = slcl::update_on_failure(state(vec({1}), 10.0, 100.0, 0.01), opts);
  CHECK(s.rho == 100);
  CHECK(s.eta == doctest::Approx(0.630957).epsilon(1e-5));
  CHECK(s.sigma == 10);
  CHECK(s.y == vec({1}));
}

TEST_CASE("omega schedule") {
  CHECK(slcl::next_omega(1e-3, 0.2, 1e-6) == doctest::Approx(5e-4));
  CHECK(slcl::next_omega(1e-3, 1e-2, 1e-6) == doctest::Approx(5e-5));
  CHECK(slcl::next_omega(2e-6, 1e3, 1e-6) == 1e-6);
}

TEST_CASE("infeasibility and unboundedness tests") {
  CHECK(slcl::detect_infeasible(1e-2, 1e9, 1e-6, 1e8));
  CHECK_FALSE(slcl::detect_infeasible(1e-2, 1e7, 1e-6, 1e8));
  CHECK_FALSE(slcl::detect_infeasible(1e-8, 1e9, 1e-6, 1e8));
  CHECK(slcl::detect_unbounded(true, slcl::InnerStatus::Unbounded));
  CHECK_FALSE(slcl::detect_unbounded(false, slcl::InnerStatus::Unbounded));
  CHECK_FALSE(slcl::detect_unbounded(true, slcl::InnerStatus::Converged));
}

TEST_CASE("initial penalty") {
  const slcl::OuterOptions<double> opts;
  CHECK(opts.initial_rho(1) == doctest::Approx(std::pow(10.0, 2.5)));
  CHECK(opts.initial_rho(10) == doctest::Approx(std::pow(10.0, 1.5)));
  CHECK(opts.initial_rho(1000) == 1.001);
  auto fixed = opts;
  fixed.rho_0 = 5.0;
  CHECK(fixed.initial_rho(1) == 5);
}

TEST_CASE("circle-proj is solved to the analytic optimum") {
  const auto& e = slcl::catalog_get("circle-proj");
  const auto r = slcl::solve(e.problem);
  CHECK(r.status == Status::Optimal);
  CHECK(std::abs(r.objective - 1.527864) <= 1e-6);
  CHECK(r.majors <= 40);
  CHECK((r.x.head(2) - *e.known_x).lpNorm<Eigen::Infinity>() <= 1e-5);
  CHECK(r.y[0] == doctest::Approx(1 - std::sqrt(5.0)).epsilon(1e-4));
}

TEST_CASE("infeas-affine stops at a stationary point of the violation") {
  const auto& p = slcl::catalog_get("infeas-affine").problem;
  const auto r = slcl::solve(p);
  CHECK(r.status == Status::Infeasible);
  CHECK(r.rho > 1e8);
  const V x = r.x.head(2);
  const V jtc = p.eval_J(x).transpose() * p.eval_c(x);
  CHECK(x.cwiseMin(jtc).lpNorm<Eigen::Infinity>() <= 1e-4);
}

TEST_CASE("unbounded-ray is reported unbounded") {
  const auto r = slcl::solve(slcl::catalog_get("unbounded-ray").problem);
  CHECK(r.status == Status::Unbounded);
  CHECK(r.majors <= 10);
  CHECK(r.trace.back().branch == slcl::Branch::Unbounded);
}

TEST_CASE("problems without nonlinear rows take one major iteration") {
  for (const char* name : {"hs028", "hs035"}) {
    const auto& e = slcl::catalog_get(name);
    const auto r = slcl::solve(e.problem);
    CAPTURE(name);
    CHECK(r.status == Status::Optimal);
    CHECK(r.majors == 1);
    CHECK(r.trace.empty());
    CHECK(r.objective == doctest::Approx(*e.known_objective).epsilon(1e-6).scale(1));
  }
}

TEST_CASE("infeasible linear rows are reported before the first major") {
  auto p = linear_as_nl_free();
  p.bounds_x = {vec({0, 0}), vec({1, 1})};
  p.A = M(vec({1, 1}).transpose());
  p.bounds_A = {vec({10}), vec({10})};
  const auto r = slcl::solve(p);
  CHECK(r.status == Status::Infeasible);
  CHECK(r.majors == 0);
}

TEST_CASE("an optimal report certifies itself") {
  for (const auto& e : slcl::catalog()) {
    if (e.classification != slcl::Classification::Solvable) continue;
    const auto r = slcl::solve(e.problem);
    if (r.status != Status::Optimal) continue;
    CAPTURE(e.name);
    const auto form = slcl::build_slack_form(e.problem);
    const auto res = slcl::kkt_residual(form, r.x, r.y, r.z);
    CHECK(slcl::is_optimal(res, 1e-6, 1e-6));
    CHECK(res.f_norm == r.residual.f_norm);
    CHECK(r.objective == e.problem.eval_f(r.x.head(e.problem.n)));
  }
}

TEST_CASE("trace schedule in stabilized mode") {
  const auto r = slcl::solve(slcl::catalog_get("hs071").problem);
  REQUIRE(r.status == Status::Optimal);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().rho == doctest::Approx(std::pow(10.0, 2.5) / 2));
  CHECK(r.trace.front().sigma == 100);
  CHECK(r.trace.front().omega == 1e-3);
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const auto& t = r.trace[k];
    CHECK(t.rho_next >= t.rho);
    CHECK(t.omega_next <= t.omega);
    CHECK(t.omega_next >= 1e-6);
    if (t.branch == slcl::Branch::Success) {
      CHECK(t.rho_next == t.rho);
      CHECK(t.sigma_next >= 1);
      CHECK(t.sigma_next <= 1e4);
      if (t.rho > 1 && k + 1 < r.trace.size()) CHECK(t.eta_next < t.eta);
    }
    if (k + 1 < r.trace.size()) {
      const auto& n = r.trace[k + 1];
      CHECK(n.rho == t.rho_next);
      CHECK(n.sigma == t.sigma_next);
      CHECK(n.eta == t.eta_next);
      CHECK(n.omega == t.omega_next);
      if (t.branch == slcl::Branch::Failure) {
        CHECK(t.rho_next == doctest::Approx(10 * t.rho));
        CHECK(t.eta_next == doctest::Approx(1 / std::pow(t.rho_next, 0.1)));
      }
    }
  }
  CHECK(r.trace.back().dy_norm < r.trace.back().sigma);
  CHECK(r.trace.back().elastic_norm <= 1e-6);
}

TEST_CASE("canonical mode keeps rho and sigma fixed") {
  slcl::OuterOptions<double> opts;
  opts.mode = slcl::Mode::Canonical;
  const auto r = slcl::solve(slcl::catalog_get("circle-proj").problem, opts);
  CHECK(r.status == Status::Optimal);
  for (const auto& t : r.trace) {
    CHECK(t.rho == doctest::Approx(std::pow(10.0, 2.5)));
    CHECK(t.rho_next == t.rho);
    CHECK(t.sigma == 1e4);
    CHECK(t.elastic_norm <= 1e-6);
  }
}

TEST_CASE("bcl mode never adds an elastic penalty") {
  slcl::OuterOptions<double> opts;
  opts.mode = slcl::Mode::BCL;
  const auto r = slcl::solve(slcl::catalog_get("circle-proj").problem, opts);
  CHECK(r.status == Status::Optimal);
  CHECK(std::abs(r.objective - 1.527864) <= 1e-6);
  for (const auto& t : r.trace) CHECK(t.sigma == 0);
}

TEST_CASE("recomputed bound multipliers also converge") {
  slcl::OuterOptions<double> opts;
  opts.z_update = slcl::ZUpdate::Recompute;
  const auto r = slcl::solve(slcl::catalog_get("circle-proj").problem, opts);
  CHECK(r.status == Status::Optimal);
}

TEST_CASE("an iteration cap is honoured") {
  slcl::OuterOptions<double> opts;
  opts.max_major = 2;
  const auto r = slcl::solve(slcl::catalog_get("hs006").problem, opts);
  CHECK(r.status == Status::IterationLimit);
  CHECK(r.majors == 2);
  CHECK(r.trace.size() == 2);
}

TEST_CASE("solves are deterministic") {
  const auto& p = slcl::catalog_get("hs043").problem;
  const auto a = slcl::solve(p), b = slcl::solve(p);
  CHECK(a.status == b.status);
  CHECK(a.majors == b.majors);
  CHECK(a.minors == b.minors);
  CHECK(a.fevals == b.fevals);
  REQUIRE(a.x.size() == b.x.size());
  CHECK(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()) == 0);
}

TEST_CASE("function evaluations match an external counter") {
  auto counter = std::make_shared<slcl::EvalCounter>();
  const auto p = slcl::instrument(slcl::catalog_get("hs012").problem, counter);
  slcl::OuterOptions<double> opts;
  opts.check_derivatives = false;
  const auto r = slcl::solve(p, opts);
  CHECK(r.fevals == counter->function_evals());
  CHECK(r.fevals > 0);
}

TEST_CASE("options and inputs are validated") {
  const auto& p = slcl::catalog_get("circle-proj").problem;
  slcl::OuterOptions<double> opts;
  opts.omega_star = 0;
  CHECK_THROWS_AS(slcl::solve(p, opts), std::invalid_argument);
  opts = {};
  opts.omega_0 = 1e-8;
  CHECK_THROWS_AS(slcl::solve(p, opts), std::invalid_argument);
  opts = {};
  opts.sigma_lo = 1e5;
  CHECK_THROWS_AS(slcl::solve(p, opts), std::invalid_argument);
  opts = {};
  opts.y_0 = vec({1, 2});
  CHECK_THROWS_AS(slcl::solve(p, opts), slcl::DimensionError);

  auto bad = p;
  bad.eval_g = [](const V& x) { return vec({x[1], x[0]}); };
  CHECK_THROWS_AS(slcl::solve(bad), std::invalid_argument);
  auto wrong = p;
  wrong.x_tilde = vec({1});
  CHECK_THROWS_AS(slcl::solve(wrong), slcl::DimensionError);
}

TEST_CASE("solve in long double") {
  using VL = slcl::Vec<long double>;
  slcl::NlpProblem<long double> p;
  p.n = 2;
  p.m_c = 1;
  p.eval_f = [](const VL& x) { return (x[0] - 2) * (x[0] - 2) + (x[1] - 1) * (x[1] - 1); };
  p.eval_g = [](const VL& x) { VL g(2); g << 2 * (x[0] - 2), 2 * (x[1] - 1); return g; };
  p.eval_c = [](const VL& x) { VL c(1); c << x.squaredNorm() - 1; return c; };
  p.eval_J = [](const VL& x) { slcl::Mat<long double> J(1, 2); J << 2 * x[0], 2 * x[1]; return J; };
  p.A = slcl::Mat<long double>(0, 2);
  p.bounds_x = slcl::Bounds<long double>::nonnegative(2);
  p.bounds_c = {VL::Zero(1), VL::Zero(1)};
  p.bounds_A = slcl::Bounds<long double>::unbounded(0);
  p.x_tilde = VL::Ones(2);
  const auto r = slcl::solve(p);
  CHECK(r.status == Status::Optimal);
  const long double s5 = std::sqrt(5.0L);
  CHECK(std::abs(r.objective - (s5 - 1) * (s5 - 1)) <= 1e-6L);
}
