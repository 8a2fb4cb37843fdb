#pragma once

#include <string>
#include <vector>

#include "bosestab/grid.hpp"
#include "bosestab/interaction.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  // Names and details of failed checks, one per line.
  std::string failures() const;
};

// Largest particle number and diluteness exponent the caller intends to use;
// the resolution check is made at the worst case.
struct ScaledRange {
  int max_N = 2;
  double max_beta = 0.5;
};

// Checks: trapping bound, |A| bounded (and curl for the uniform field),
// int |w| and int w^2 finite, w(x) = w(-x) on the grid, and resolution of the
// scaled interaction. Callers must not proceed on a failed report.
ValidationReport validate_config(const PotentialSpec& V, const VectorPotentialSpec& A, const InteractionSpec& w,
                                 const Grid2D& g, const ScaledRange& scan = {});

// Throws ValidationError carrying report.failures() when the report failed.
void require_valid(const ValidationReport& report);

}  // namespace bosestab
