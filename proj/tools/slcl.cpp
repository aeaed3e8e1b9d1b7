#include "slcl/bench.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
  std::string mode = "stabilized";
  double omega_star = 1e-6;
  double eta_star = 1e-6;
  long max_major = 500;
  std::string json_path;
  std::string csv_path;
  bool trace = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--mode", f.mode, "stabilized, canonical or bcl")
      ->check(CLI::IsMember({"stabilized", "canonical", "bcl"}));
  cmd->add_option("--omega-star", f.omega_star, "optimality tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--eta-star", f.eta_star, "feasibility tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-major", f.max_major, "major iteration limit")->check(CLI::PositiveNumber);
  auto* json = cmd->add_option("--json", f.json_path, "write a JSON report");
  auto* csv = cmd->add_option("--csv", f.csv_path, "write a CSV report");
  json->excludes(csv);
  cmd->add_flag("--trace", f.trace, "print one line per major iteration");
}

slcl::OuterOptions<double> to_options(const Flags& f) {
  slcl::OuterOptions<double> o;
  o.omega_star = f.omega_star;
  o.eta_star = f.eta_star;
  o.omega_0 = std::max(o.omega_0, f.omega_star);
  o.max_major = f.max_major;
  if (f.mode == "canonical")
    o.mode = slcl::Mode::Canonical;
  else if (f.mode == "bcl")
    o.mode = slcl::Mode::BCL;
  return o;
}

int run(const std::vector<std::string>& names, const Flags& f) {
  const auto opts = to_options(f);
  auto sink = [&](const slcl::SuiteEntry& e, const slcl::SolveReport<double>& sr) {
    if (f.trace) {
      std::cout << "# " << e.name << '\n';
      for (const auto& rec : sr.trace) std::cout << slcl::format_trace(rec) << '\n';
    }
    std::cout << e.name << ": " << slcl::to_string(e.status) << " f=" << slcl::format_number(e.final_objective)
              << " majors=" << e.majors << " minors=" << e.minors << " fevals=" << e.fevals
              << (e.expected() ? "" : "  [unexpected]");
    if (!e.error.empty()) std::cout << "  error: " << e.error;
    std::cout << std::endl;
  };
  const auto report = slcl::run_suite(names, opts, sink);
  if (!f.json_path.empty()) slcl::emit_report(report, slcl::ReportFormat::Json, f.json_path);
  if (!f.csv_path.empty()) slcl::emit_report(report, slcl::ReportFormat::Csv, f.csv_path);

  bool ok = true;
  for (const auto& e : report.entries) ok = ok && e.expected();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized LCL solver on the built-in problem catalog"};
  app.require_subcommand(1);

  Flags solve_flags, suite_flags;
  std::string name;
  auto* solve_cmd = app.add_subcommand("solve", "solve one catalog problem");
  solve_cmd->add_option("name", name, "catalog problem")->required();
  add_flags(solve_cmd, solve_flags);

  std::vector<std::string> names;
  bool all = false;
  auto* suite_cmd = app.add_subcommand("suite", "solve several catalog problems");
  auto* all_flag = suite_cmd->add_flag("--all", all, "every catalog problem");
  suite_cmd->add_option("names", names, "catalog problems")->excludes(all_flag);
  add_flags(suite_cmd, suite_flags);

  auto* list_cmd = app.add_subcommand("list", "print the catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& e : slcl::catalog())
        std::cout << e.name << '\t' << slcl::to_string(e.classification) << '\t' << e.description << '\n';
      return 0;
    }
    if (solve_cmd->parsed()) return run({name}, solve_flags);
    if (all || names.empty()) names = slcl::catalog_names();
    return run(names, suite_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
