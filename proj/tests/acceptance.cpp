// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include "al_fd.hpp"

#include "slcl/slcl.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using slcl::Status;
using V = slcl::Vec<double>;

struct Run {
  std::string name;
  slcl::Mode mode;
  slcl::SolveReport<double> report;
  double seconds = 0;
};

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

Run timed_solve(const slcl::CatalogEntry& e, const slcl::OuterOptions<double>& opts) {
  Run r{e.name, opts.mode, {}, 0};
  const auto t0 = std::chrono::steady_clock::now();
  r.report = slcl::solve(e.problem, opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const auto& cat = slcl::catalog();
  std::vector<Run> runs;
  runs.reserve(4 * cat.size());
  std::map<std::string, const Run*> stabilized;

  // 1. Suite success with default tolerances.
  {
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& e : cat) runs.push_back(timed_solve(e, {}));
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int solvable = 0, optimal = 0;
    double slowest = 0;
    std::string missed;
    for (const auto& r : runs) {
      stabilized[r.name] = &r;
      slowest = std::max(slowest, r.seconds);
      if (slcl::catalog_get(r.name).classification != slcl::Classification::Solvable) continue;
      ++solvable;
      if (r.report.status == Status::Optimal)
        ++optimal;
      else
        missed += " " + r.name + "=" + slcl::to_string(r.report.status);
    }
    verdict(1, solvable >= 14 && optimal >= 12 && slowest <= 5 && total <= 60, "suite success",
            std::to_string(optimal) + "/" + std::to_string(solvable) + " optimal, slowest " + fmt(slowest) +
                " s, total " + fmt(total) + " s" + (missed.empty() ? "" : ";" + missed));
  }

  // 2. Oracle accuracy.
  {
    bool ok = true;
    int checked = 0;
    double worst = 0;
    std::string bad;
    for (const auto& e : cat) {
      if (e.classification != slcl::Classification::Solvable || !e.known_objective) continue;
      ++checked;
      const auto& r = stabilized.at(e.name)->report;
      const double err = std::abs(r.objective - *e.known_objective) / (1 + std::abs(*e.known_objective));
      worst = std::max(worst, err);
      if (!(err <= 1e-5)) {
        ok = false;
        bad += " " + e.name;
      }
    }
    verdict(2, ok, "oracle accuracy",
            std::to_string(checked) + " problems, worst scaled error " + fmt(worst) + (bad.empty() ? "" : ";" + bad));
  }

  // 3. Augmented Lagrangian gradient against central differences.
  {
    std::mt19937 rng(20240917);
    double worst = 0;
    for (const auto& e : cat) worst = std::max(worst, testing::al_gradient_error(e.problem, 100, rng));
    verdict(3, worst <= 1e-6, "gradient suite",
            std::to_string(cat.size()) + " problems x 100 samples, worst relative error " + fmt(worst));
  }

  // 4. Elastics vanish and the threshold holds on the final accepted subproblem.
  {
    bool ok = true;
    int checked = 0;
    std::string bad;
    for (const auto& r : runs) {
      if (r.report.status != Status::Optimal) continue;
      const auto& tr = r.report.trace;
      auto last = std::find_if(tr.rbegin(), tr.rend(), [](const auto& t) { return t.branch == slcl::Branch::Success; });
      if (last == tr.rend()) continue;
      ++checked;
      if (!(last->dy_norm < last->sigma && last->elastic_norm <= 1e-6)) {
        ok = false;
        bad += " " + r.name;
      }
    }
    verdict(4, ok && checked > 0, "l1 exactness at convergence",
            std::to_string(checked) + " optimal runs with nonlinear rows" + (bad.empty() ? "" : ";" + bad));
  }

  // 5. Infeasibility detection.
  {
    const auto& e = slcl::catalog_get("infeas-affine");
    const auto& r = stabilized.at(e.name)->report;
    const V x = r.x.head(e.problem.n);
    const V jtc = e.problem.eval_J(x).transpose() * e.problem.eval_c(x);
    const double stat = x.cwiseMin(jtc).lpNorm<Eigen::Infinity>();
    verdict(5, r.status == Status::Infeasible && r.rho > 1e8 && stat <= 1e-4, "infeasibility",
            std::string(slcl::to_string(r.status)) + ", rho " + fmt(r.rho) + ", stationarity " + fmt(stat));
  }

  // 6. Unboundedness detection.
  {
    const auto& r = stabilized.at("unbounded-ray")->report;
    verdict(6, r.status == Status::Unbounded && r.majors <= 10, "unboundedness",
            std::string(slcl::to_string(r.status)) + " after " + std::to_string(r.majors) + " majors");
  }

  // 7. Local rate near the circle-proj solution.
  {
    const auto& e = slcl::catalog_get("circle-proj");
    auto p = e.problem;
    p.x_tilde = *e.known_x + V::Constant(2, 1e-2);
    slcl::OuterOptions<double> opts;
    opts.y_0 = V::Constant(1, 1 - std::sqrt(5.0) + 5e-3);
    opts.omega_star = opts.eta_star = 1e-10;
    opts.inner.delta_lin = 1e-10;
    const auto r = slcl::solve(p, opts);
    std::vector<double> res{r.initial_f_norm};
    for (const auto& t : r.trace) res.push_back(t.f_norm);
    double order = 0;
    std::string note;
    try {
      order = slcl::estimate_rate(res).terminal_order;
    } catch (const slcl::InsufficientData& ex) {
      note = std::string("; ") + ex.what();
    }
    std::ostringstream seq;
    for (double v : res) seq << ' ' << fmt(v);
    verdict(7, r.status == Status::Optimal && r.majors <= 5 && order >= 1.5, "local rate",
            std::string(slcl::to_string(r.status)) + " in " + std::to_string(r.majors) + " majors, order " +
                fmt(order) + ", residuals" + seq.str() + note);
  }

  // 8. BCL and canonical modes agree with the stabilized objective on the convex subset.
  {
    bool ok = true;
    int subset = 0;
    std::string detail;
    for (slcl::Mode mode : {slcl::Mode::BCL, slcl::Mode::Canonical}) {
      slcl::OuterOptions<double> opts;
      opts.mode = mode;
      int agree = 0;
      subset = 0;
      std::string bad;
      for (const auto& e : cat) {
        if (!e.convex || e.classification != slcl::Classification::Solvable) continue;
        ++subset;
        runs.push_back(timed_solve(e, opts));
        const auto& r = runs.back().report;
        const auto& ref = stabilized.at(e.name)->report;
        const double gap = std::abs(r.objective - ref.objective);
        if (r.status == Status::Optimal && ref.status == Status::Optimal && gap <= 1e-5)
          ++agree;
        else
          bad += " " + e.name + "=" + slcl::to_string(r.status) + "/gap " + fmt(gap);
      }
      ok = ok && agree == subset;
      detail += std::string(detail.empty() ? "" : "; ") + slcl::to_string(mode) + " " + std::to_string(agree) + "/" +
                std::to_string(subset) + bad;
    }
    verdict(8, ok && subset >= 5, "mode cross-check", detail);
  }

  // 9. Schedule invariants on every recorded trace.
  {
    bool ok = true;
    std::size_t records = 0;
    std::string bad;
    for (const auto& run : runs) {
      const auto& tr = run.report.trace;
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto& t = tr[k];
        ++records;
        bool good = t.rho_next >= t.rho && t.omega_next <= t.omega && t.omega_next >= 1e-6;
        if (t.branch == slcl::Branch::Success && run.mode == slcl::Mode::Stabilized)
          good = good && t.sigma_next >= 1 && t.sigma_next <= 1e4;
        // The last record of a run hands nothing on, so its *_next values are not updated.
        if (t.branch == slcl::Branch::Failure && k + 1 < tr.size())
          good = good && std::abs(t.eta_next - 1 / std::pow(t.rho_next, 0.1)) <= 1e-12;
        if (k + 1 < tr.size())
          good = good && tr[k + 1].rho == t.rho_next && tr[k + 1].omega == t.omega_next;
        if (!good) {
          ok = false;
          bad += " " + run.name + "@" + std::to_string(t.k);
        }
      }
    }
    verdict(9, ok, "schedule invariants",
            std::to_string(runs.size()) + " runs, " + std::to_string(records) + " trace records" +
                (bad.empty() ? "" : ";" + bad));
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
