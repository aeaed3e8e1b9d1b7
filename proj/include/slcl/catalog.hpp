#pragma once

#include "slcl/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slcl {

enum class Classification { Solvable, Infeasible, Unbounded };

const char* to_string(Classification c);

struct UnknownProblem : Error {
  using Error::Error;
};

/// A small analytic test problem with its reference solution.
struct CatalogEntry {
  std::string name;
  NlpProblem<double> problem;
  std::optional<double> known_objective;
  std::optional<Vec<double>> known_x;
  Classification classification = Classification::Solvable;
  bool convex = false;
  std::string description;
};

/// All registered problems, in registration order. Solvable entries with a
/// known_x are checked for feasibility (1e-8) when the catalog is built.
const std::vector<CatalogEntry>& catalog();

const CatalogEntry& catalog_get(std::string_view name);

std::vector<std::string> catalog_names();

/// Largest violation of the bounds, nonlinear rows and linear rows at x.
double max_constraint_violation(const NlpProblem<double>& problem, const Vec<double>& x);

}  // namespace slcl
