#include "slcl/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

namespace slcl {

bool SuiteEntry::expected() const {
  switch (classification) {
    case Classification::Solvable: return status == Status::Optimal;
    case Classification::Infeasible: return status == Status::Infeasible;
    case Classification::Unbounded: return status == Status::Unbounded;
  }
  return false;
}

SuiteReport run_suite(const std::vector<std::string>& names, const OuterOptions<double>& opts,
                      const ReportSink& sink) {
  std::vector<const CatalogEntry*> todo;
  std::set<std::string> seen;
  for (const auto& n : names)
    if (seen.insert(n).second) todo.push_back(&catalog_get(n));

  SuiteReport report;
  report.options = opts;
  for (const CatalogEntry* ce : todo) {
    SuiteEntry e;
    e.name = ce->name;
    e.classification = ce->classification;
    SolveReport<double> sr;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      sr = solve(ce->problem, opts);
      e.status = sr.status;
      e.majors = sr.majors;
      e.minors = sr.minors;
      e.fevals = sr.fevals;
      e.final_objective = sr.objective;
      e.final_residual = sr.residual;
    } catch (const std::exception& ex) {
      e.status = Status::CannotImprove;
      e.error = ex.what();
      e.final_objective = std::nan("");
    }
    e.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    report.totals.majors += e.majors;
    report.totals.minors += e.minors;
    report.totals.fevals += e.fevals;
    report.totals.wall_time += e.wall_time;
    if (sink) sink(e, sr);
    report.entries.push_back(std::move(e));
  }
  return report;
}

RateEstimate estimate_rate(std::span<const double> r) {
  std::size_t start = r.size();
  if (start > 0 && r[start - 1] > 0 && std::isfinite(r[start - 1])) {
    --start;
    while (start > 0 && std::isfinite(r[start - 1]) && r[start - 1] > r[start]) --start;
  }
  const std::size_t len = r.size() - start;
  if (len < 4) throw InsufficientData("estimate_rate: need a strictly decreasing positive tail of length >= 4");

  RateEstimate est;
  for (std::size_t k = start + 1; k + 1 < r.size(); ++k)
    est.orders.push_back(std::log(r[k + 1] / r[k]) / std::log(r[k] / r[k - 1]));

  std::vector<double> last(est.orders.end() - std::min<std::ptrdiff_t>(3, est.orders.size()), est.orders.end());
  std::sort(last.begin(), last.end());
  const std::size_t h = last.size() / 2;
  est.terminal_order = last.size() % 2 ? last[h] : 0.5 * (last[h - 1] + last[h]);
  return est;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::json to_json(const SuiteEntry& e) {
  nlohmann::json j;
  j["name"] = e.name;
  j["status"] = to_string(e.status);
  j["majors"] = e.majors;
  j["minors"] = e.minors;
  j["fevals"] = e.fevals;
  j["final_objective"] = number(e.final_objective);
  j["primal_inf"] = number(e.final_residual.primal_inf);
  j["dual_inf"] = number(e.final_residual.dual_inf);
  j["comp"] = number(e.final_residual.comp);
  j["wall_time_s"] = e.wall_time;
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

nlohmann::json to_json(const OuterOptions<double>& o) {
  nlohmann::json j;
  j["mode"] = to_string(o.mode);
  j["omega_star"] = o.omega_star;
  j["eta_star"] = o.eta_star;
  j["omega_0"] = o.omega_0;
  j["eta_0"] = o.eta_0;
  j["sigma_lo"] = o.sigma_lo;
  j["sigma_hi"] = o.sigma_hi;
  j["sigma_0"] = o.sigma_0;
  j["tau_rho"] = o.tau_rho;
  j["tau_sigma"] = o.tau_sigma;
  j["alpha"] = o.alpha;
  j["beta"] = o.beta;
  j["rho_0"] = o.rho_0 ? nlohmann::json(*o.rho_0) : nlohmann::json(nullptr);
  j["rho_bar"] = o.rho_bar;
  j["max_major"] = o.max_major;
  j["multiplier_update"] = o.multiplier_update == MultiplierUpdate::FirstOrder ? "first_order" : "direct";
  j["z_update"] = o.z_update == ZUpdate::FromSubproblem ? "from_subproblem" : "recompute";
  j["proximal"] = o.proximal == ProximalVariant::PP1 ? "pp1" : "pp2";
  j["proximal_tol"] = o.proximal_tol;
  j["delta_lin"] = o.inner.delta_lin;
  j["max_inner_iters"] = o.inner.max_inner_iters;
  j["max_restarts"] = o.inner.max_restarts;
  return j;
}

}  // namespace

std::string render_report(const SuiteReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "name,status,majors,minors,fevals,final_objective,primal_inf,dual_inf,comp,wall_time_s\n";
    for (const auto& e : report.entries) {
      out += e.name + ',' + to_string(e.status) + ',' + std::to_string(e.majors) + ',' +
             std::to_string(e.minors) + ',' + std::to_string(e.fevals) + ',' + format_number(e.final_objective) +
             ',' + format_number(e.final_residual.primal_inf) + ',' + format_number(e.final_residual.dual_inf) + ',' +
             format_number(e.final_residual.comp) + ',' + format_number(e.wall_time) + '\n';
    }
    return out;
  }
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) j["entries"].push_back(to_json(e));
  j["totals"] = {{"majors", report.totals.majors},
                 {"minors", report.totals.minors},
                 {"fevals", report.totals.fevals},
                 {"wall_time_s", report.totals.wall_time}};
  j["options"] = to_json(report.options);
  return j.dump(2) + '\n';
}

void emit_report(const SuiteReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("emit_report: cannot open " + path.string());
  out << render_report(report, format);
  out.flush();
  if (!out) throw Error("emit_report: write failed for " + path.string());
}

std::string format_trace(const TraceRecord<double>& r) {
  auto sci = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 3);
    return std::string(buf, res.ptr);
  };
  return "k=" + std::to_string(r.k) + " branch=" + to_string(r.branch) + " rho=" + sci(r.rho) +
         " sigma=" + sci(r.sigma) + " eta=" + sci(r.eta) + " omega=" + sci(r.omega) + " c=" + sci(r.c_norm) +
         " F=" + sci(r.f_norm) + " inner=" + std::to_string(r.inner_iterations);
}

}  // namespace slcl
