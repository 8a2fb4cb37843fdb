#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosestab/interaction.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab::cli {

inline constexpr int kSchemaVersion = 1;

enum class Task { gn, nls, ed, stability_scan, lemmas, dynamics, bootstrap };
std::string to_string(Task t);
Task parse_task(const std::string& s);

struct RunConfig {
  Task task = Task::ed;
  std::uint64_t seed = 1;
  int threads = 1;

  // [grid]
  int n = 128;
  double L = 8.0;
  // [potential], [vector_potential]
  PotentialSpec V;
  VectorPotentialSpec A;
  // [interaction]; strength is given as attraction = m-/a*
  InteractionForm w_form = InteractionForm::gaussian;
  double w_range = 1.0;
  double w_repulsive_strength = 0.0;
  double w_repulsive_range = 1.0;

  // [scan]
  std::vector<int> N{2, 3, 4, 5, 6};
  std::vector<double> beta{0.5};
  std::vector<double> attraction{0.8};
  std::vector<int> d{8};
  double lambda = -1.0;  // > 0 selects modes by cutoff instead of d

  // [tolerances]
  double tol_gn = 1e-9;
  double tol_nls = 1e-9;
  double tol_lanczos = 1e-10;

  // [nls]
  std::string nls_coupling = "delta";  // delta | hartree

  // [dynamics]
  double T = 1.0;
  double dt = 1.25e-4;
  double record_interval = 0.25;
  std::vector<double> initial{1.0, 0.6};  // product state coefficients in the mode basis

  // [lemmas]
  double delta = 0.75;
  double eps = 0.3;
  std::vector<int> d_small{3, 6};
  int d_big = 10;
  std::vector<double> plane_wave_lambda{10, 20, 40};
  double k_min = 1.0, k_max = 50.0;
  int k_points = 24;
  int definetti_d = 4;
  std::vector<int> definetti_N{4, 6, 8, 10};
  int n_atoms = 8;
  int restarts = 5;
  int fourier_samples = 16;

  // [bootstrap]
  double eps0 = 0.1;

  // Resolved key/value pairs, output options excluded.
  std::map<std::string, std::string> canonical() const;
  // FNV-1a 64 over the canonical form, as 16 hex digits.
  std::string hash() const;
};

// Parses the INI schema documented in docs/config_schema.md. Throws
// ValidationError naming the offending section/key (and line for syntax errors).
// With `task` given, [run] task may be omitted and must agree when present.
RunConfig parse_config(std::istream& in, const std::string& origin = "<stream>", std::optional<Task> task = {});
RunConfig parse_config_file(const std::string& path, std::optional<Task> task = {});
// Defaults for a task, as if parsed from a file holding only [run] task.
RunConfig default_config(Task task);
// Range and physics checks independent of the file format.
void validate_run_config(const RunConfig& c);

// Interaction with negative mass attraction * a*.
InteractionSpec interaction_for(const RunConfig& c, double attraction);
// a* from radial shooting, computed once per process.
double reference_a_star();

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace bosestab::cli
