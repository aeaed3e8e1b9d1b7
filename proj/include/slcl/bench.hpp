#pragma once

#include "slcl/catalog.hpp"
#include "slcl/driver.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slcl {

struct SuiteEntry {
  std::string name;
  Classification classification = Classification::Solvable;
  Status status = Status::IterationLimit;
  Index majors = 0;
  Index minors = 0;
  std::size_t fevals = 0;
  double final_objective = 0;
  KktResidual<double> final_residual;
  double wall_time = 0;
  /// Set when solve() threw; the entry is then recorded as CannotImprove.
  std::string error;

  /// Optimal for solvable problems, or the status matching the classification.
  bool expected() const;
};

struct SuiteTotals {
  Index majors = 0;
  Index minors = 0;
  std::size_t fevals = 0;
  double wall_time = 0;
};

struct SuiteReport {
  std::vector<SuiteEntry> entries;
  SuiteTotals totals;
  OuterOptions<double> options;
};

/// Called after each entry finishes, with the full solve report (empty on error).
using ReportSink = std::function<void(const SuiteEntry&, const SolveReport<double>&)>;

/// Solves each named catalog problem once, in order; repeated names are run once.
/// Throws UnknownProblem before any solve if a name is not registered.
SuiteReport run_suite(const std::vector<std::string>& names, const OuterOptions<double>& opts,
                      const ReportSink& sink = {});

struct InsufficientData : Error {
  using Error::Error;
};

struct RateEstimate {
  std::vector<double> orders;
  double terminal_order = 0;
};

/// Empirical convergence order from the longest strictly decreasing positive
/// tail of `residuals`; needs at least four points in that tail.
RateEstimate estimate_rate(std::span<const double> residuals);

enum class ReportFormat { Csv, Json };

std::string render_report(const SuiteReport& report, ReportFormat format);

/// Writes render_report() to `path`; throws Error on I/O failure.
void emit_report(const SuiteReport& report, ReportFormat format, const std::filesystem::path& path);

/// One --trace line: k, branch, rho, sigma, eta, omega, |c|, f_norm, inner iterations.
std::string format_trace(const TraceRecord<double>& rec);

/// Shortest decimal form that round-trips, independent of the C locale.
std::string format_number(double v);

}  // namespace slcl
