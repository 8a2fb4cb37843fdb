#include "bosestab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bosestab/error.hpp"
#include "bosestab/gn.hpp"

namespace bosestab::cli {

namespace pt = boost::property_tree;

std::string to_string(Task t) {
  switch (t) {
    case Task::gn: return "gn";
    case Task::nls: return "nls";
    case Task::ed: return "ed";
    case Task::stability_scan: return "stability-scan";
    case Task::lemmas: return "lemmas";
    case Task::dynamics: return "dynamics";
    case Task::bootstrap: return "bootstrap";
  }
  return "?";
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::gn, Task::nls, Task::ed, Task::stability_scan, Task::lemmas, Task::dynamics, Task::bootstrap})
    if (to_string(t) == s) return t;
  throw ValidationError("unknown task '" + s + "'");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_integral_v<T>)
      s += std::to_string(v[i]);
    else
      s += fmt(v[i]);
  }
  return s;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"schema", "task", "seed", "threads"}},
      {"grid", {"n", "L"}},
      {"potential", {"kind", "coefficient", "exponent", "trap_constant"}},
      {"vector_potential", {"kind", "B"}},
      {"interaction", {"form", "range", "repulsive_strength", "repulsive_range"}},
      {"scan", {"N", "beta", "attraction", "d", "lambda"}},
      {"tolerances", {"gn", "nls", "lanczos"}},
      {"nls", {"coupling"}},
      {"dynamics", {"T", "dt", "record_interval", "initial"}},
      {"lemmas",
       {"delta", "eps", "d_small", "d_big", "plane_wave_lambda", "k_min", "k_max", "k_points", "definetti_d", "definetti_N",
        "n_atoms", "restarts", "fourier_samples"}},
      {"bootstrap", {"eps0"}},
  };
  return s;
}

std::string where(const std::string& sec, const std::string& key) { return "[" + sec + "] " + key; }

double to_double(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ValidationError(where(sec, key) + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ValidationError(where(sec, key) + ": expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "2,3,5" or "2..8".
std::vector<int> int_list(const std::string& sec, const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v)) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const long long lo = to_int(sec, key, item.substr(0, dots)), hi = to_int(sec, key, item.substr(dots + 2));
      if (hi < lo || hi - lo > 10000) throw ValidationError(where(sec, key) + ": bad range '" + item + "'");
      for (long long i = lo; i <= hi; ++i) out.push_back(static_cast<int>(i));
    } else {
      out.push_back(static_cast<int>(to_int(sec, key, item)));
    }
  }
  if (out.empty()) throw ValidationError(where(sec, key) + ": empty list");
  return out;
}

std::vector<double> double_list(const std::string& sec, const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v)) out.push_back(to_double(sec, key, item));
  if (out.empty()) throw ValidationError(where(sec, key) + ": empty list");
  return out;
}

}  // namespace

std::map<std::string, std::string> RunConfig::canonical() const {
  std::map<std::string, std::string> m;
  m["run.schema"] = std::to_string(kSchemaVersion);
  m["run.task"] = to_string(task);
  m["run.seed"] = std::to_string(seed);
  m["grid.n"] = std::to_string(n);
  m["grid.L"] = fmt(L);
  m["potential.kind"] = V.kind == PotentialKind::harmonic ? "harmonic" : "power";
  m["potential.coefficient"] = fmt(V.coefficient);
  m["potential.exponent"] = fmt(V.exponent);
  m["potential.trap_constant"] = fmt(V.trap_constant);
  m["vector_potential.kind"] = A.is_zero() ? "zero" : "uniform";
  m["vector_potential.B"] = fmt(A.field_strength);
  m["interaction.form"] = to_string(w_form);
  m["interaction.range"] = fmt(w_range);
  m["interaction.repulsive_strength"] = fmt(w_repulsive_strength);
  m["interaction.repulsive_range"] = fmt(w_repulsive_range);
  m["scan.N"] = fmt_list(N);
  m["scan.beta"] = fmt_list(beta);
  m["scan.attraction"] = fmt_list(attraction);
  m["scan.d"] = fmt_list(d);
  m["scan.lambda"] = fmt(lambda);
  m["tolerances.gn"] = fmt(tol_gn);
  m["tolerances.nls"] = fmt(tol_nls);
  m["tolerances.lanczos"] = fmt(tol_lanczos);
  m["nls.coupling"] = nls_coupling;
  m["dynamics.T"] = fmt(T);
  m["dynamics.dt"] = fmt(dt);
  m["dynamics.record_interval"] = fmt(record_interval);
  m["dynamics.initial"] = fmt_list(initial);
  m["lemmas.delta"] = fmt(delta);
  m["lemmas.eps"] = fmt(eps);
  m["lemmas.d_small"] = fmt_list(d_small);
  m["lemmas.d_big"] = std::to_string(d_big);
  m["lemmas.plane_wave_lambda"] = fmt_list(plane_wave_lambda);
  m["lemmas.k_min"] = fmt(k_min);
  m["lemmas.k_max"] = fmt(k_max);
  m["lemmas.k_points"] = std::to_string(k_points);
  m["lemmas.definetti_d"] = std::to_string(definetti_d);
  m["lemmas.definetti_N"] = fmt_list(definetti_N);
  m["lemmas.n_atoms"] = std::to_string(n_atoms);
  m["lemmas.restarts"] = std::to_string(restarts);
  m["lemmas.fourier_samples"] = std::to_string(fourier_samples);
  m["bootstrap.eps0"] = fmt(eps0);
  return m;
}

std::string RunConfig::hash() const {
  std::string s;
  for (const auto& [k, v] : canonical()) s += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

RunConfig parse_config(std::istream& in, const std::string& origin, std::optional<Task> task) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig c;
  bool have_task = false, have_attraction = false;
  for (const auto& [sec, body] : tree) {
    const auto it = schema().find(sec);
    if (body.empty() && !body.data().empty()) throw ValidationError(origin + ": key '" + sec + "' outside any section");
    if (it == schema().end()) throw ValidationError(origin + ": unknown section [" + sec + "]");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) throw ValidationError(origin + ": unknown key '" + key + "' in [" + sec + "]");
      const std::string v = node.data();
      auto num = [&] { return to_double(sec, key, v); };
      auto integer = [&] { return to_int(sec, key, v); };
      if (sec == "run") {
        if (key == "schema") {
          if (integer() != kSchemaVersion)
            throw ValidationError(where(sec, key) + ": unsupported schema version " + v);
        } else if (key == "task") {
          c.task = parse_task(v);
          have_task = true;
        } else if (key == "seed") {
          if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError(where(sec, key) + ": expected an unsigned integer, got '" + v + "'");
          c.seed = std::stoull(v);
        } else if (key == "threads") {
          c.threads = static_cast<int>(integer());
        }
      } else if (sec == "grid") {
        if (key == "n") c.n = static_cast<int>(integer());
        if (key == "L") c.L = num();
      } else if (sec == "potential") {
        if (key == "kind") {
          if (v == "harmonic")
            c.V.kind = PotentialKind::harmonic;
          else if (v == "power")
            c.V.kind = PotentialKind::power;
          else
            throw ValidationError(where(sec, key) + ": expected harmonic or power, got '" + v + "'");
        }
        if (key == "coefficient") c.V.coefficient = num();
        if (key == "exponent") c.V.exponent = num();
        if (key == "trap_constant") c.V.trap_constant = num();
      } else if (sec == "vector_potential") {
        if (key == "kind") {
          if (v == "zero")
            c.A.kind = VectorPotentialKind::zero;
          else if (v == "uniform")
            c.A.kind = VectorPotentialKind::uniform_field;
          else
            throw ValidationError(where(sec, key) + ": expected zero or uniform, got '" + v + "'");
        }
        if (key == "B") c.A.field_strength = num();
      } else if (sec == "interaction") {
        if (key == "form") {
          if (v == "gaussian")
            c.w_form = InteractionForm::gaussian;
          else if (v == "compact_bump")
            c.w_form = InteractionForm::compact_bump;
          else
            throw ValidationError(where(sec, key) + ": expected gaussian or compact_bump, got '" + v + "'");
        }
        if (key == "range") c.w_range = num();
        if (key == "repulsive_strength") c.w_repulsive_strength = num();
        if (key == "repulsive_range") c.w_repulsive_range = num();
      } else if (sec == "scan") {
        if (key == "N") c.N = int_list(sec, key, v);
        if (key == "beta") c.beta = double_list(sec, key, v);
        if (key == "attraction") {
          c.attraction = double_list(sec, key, v);
          have_attraction = true;
        }
        if (key == "d") c.d = int_list(sec, key, v);
        if (key == "lambda") c.lambda = num();
      } else if (sec == "tolerances") {
        if (key == "gn") c.tol_gn = num();
        if (key == "nls") c.tol_nls = num();
        if (key == "lanczos") c.tol_lanczos = num();
      } else if (sec == "nls") {
        if (v != "delta" && v != "hartree")
          throw ValidationError(where(sec, key) + ": expected delta or hartree, got '" + v + "'");
        c.nls_coupling = v;
      } else if (sec == "dynamics") {
        if (key == "T") c.T = num();
        if (key == "dt") c.dt = num();
        if (key == "record_interval") c.record_interval = num();
        if (key == "initial") c.initial = double_list(sec, key, v);
      } else if (sec == "lemmas") {
        if (key == "delta") c.delta = num();
        if (key == "eps") c.eps = num();
        if (key == "d_small") c.d_small = int_list(sec, key, v);
        if (key == "d_big") c.d_big = static_cast<int>(integer());
        if (key == "plane_wave_lambda") c.plane_wave_lambda = double_list(sec, key, v);
        if (key == "k_min") c.k_min = num();
        if (key == "k_max") c.k_max = num();
        if (key == "k_points") c.k_points = static_cast<int>(integer());
        if (key == "definetti_d") c.definetti_d = static_cast<int>(integer());
        if (key == "definetti_N") c.definetti_N = int_list(sec, key, v);
        if (key == "n_atoms") c.n_atoms = static_cast<int>(integer());
        if (key == "restarts") c.restarts = static_cast<int>(integer());
        if (key == "fourier_samples") c.fourier_samples = static_cast<int>(integer());
      } else if (sec == "bootstrap") {
        c.eps0 = num();
      }
    }
  }
  if (task) {
    if (have_task && c.task != *task)
      throw ValidationError(origin + ": [run] task '" + to_string(c.task) + "' does not match subcommand '" +
                            to_string(*task) + "'");
    c.task = *task;
  } else if (!have_task) {
    throw ValidationError(origin + ": [run] task is required");
  }
  if (c.V.kind == PotentialKind::harmonic) c.V.exponent = 2.0;
  if (c.task == Task::stability_scan && !have_attraction) c.attraction = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
  validate_run_config(c);
  return c;
}

RunConfig parse_config_file(const std::string& path, std::optional<Task> task) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  return parse_config(in, path, task);
}

RunConfig default_config(Task task) {
  std::istringstream in("");
  return parse_config(in, "<defaults>", task);
}

void validate_run_config(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (c.threads < 1) fail("[run] threads must be at least 1");
  if (c.n < 8 || c.n % 2) fail("[grid] n must be even and at least 8");
  if (!(c.L > 0.0)) fail("[grid] L must be positive");
  if (!(c.w_range > 0.0) || !(c.w_repulsive_range > 0.0)) fail("[interaction] ranges must be positive");
  if (c.w_repulsive_strength < 0.0) fail("[interaction] repulsive_strength must be nonnegative");
  for (double a : c.attraction)
    if (!(a >= 0.0)) fail("[scan] attraction must be nonnegative");
  for (int N : c.N)
    if (N < 2) fail("[scan] N must be at least 2 (the pair prefactor 1/(N-1) needs N >= 2)");
  if (!std::is_sorted(c.N.begin(), c.N.end()) || std::adjacent_find(c.N.begin(), c.N.end()) != c.N.end())
    fail("[scan] N must be strictly increasing");
  for (int d : c.d)
    if (d < 1) fail("[scan] d must be positive");
  for (double b : c.beta) {
    const bool needs_range =
        c.task != Task::gn && c.task != Task::bootstrap && !(c.task == Task::nls && c.nls_coupling == "delta");
    if (needs_range && !(b > 0.0 && b < 1.0))
      fail("[scan] beta = " + fmt(b) + " outside the hypothesis 0 < beta < 1");
  }
  if (!(c.tol_gn > 0 && c.tol_nls > 0 && c.tol_lanczos > 0)) fail("[tolerances] must be positive");
  if (!(c.T > 0.0) || !(c.dt > 0.0) || c.dt > c.T) fail("[dynamics] need 0 < dt <= T");
  if (!(c.record_interval >= c.dt)) fail("[dynamics] record_interval must be at least dt");
  if (c.task == Task::dynamics && !c.A.is_zero()) fail("[vector_potential] dynamics requires A = 0");
  if (c.task == Task::lemmas && !c.A.is_zero()) fail("[vector_potential] lemmas require A = 0");
  if (!(c.delta > 0.5 && c.delta <= 1.0)) fail("[lemmas] delta must lie in (1/2, 1]");
  if (!(c.eps > 0.0 && c.eps < 1.0)) fail("[lemmas] eps must lie in (0, 1)");
  for (int s : c.d_small)
    if (s < 1 || s >= c.d_big) fail("[lemmas] need 1 <= d_small < d_big");
  if (c.definetti_d < 2) fail("[lemmas] definetti_d must be at least 2");
  for (int N : c.definetti_N)
    if (N < 2) fail("[lemmas] definetti_N entries must be at least 2");
  if (!std::is_sorted(c.definetti_N.begin(), c.definetti_N.end())) fail("[lemmas] definetti_N must increase");
  if (c.n_atoms < 1) fail("[lemmas] n_atoms must be at least 1");
  if (c.restarts < 1) fail("[lemmas] restarts must be at least 1");
  if (c.k_points < 1 || !(c.k_min > 0.0) || !(c.k_max >= c.k_min)) fail("[lemmas] need 0 < k_min <= k_max, k_points >= 1");
  if (!(c.eps0 > 0.0 && c.eps0 < 1.0)) fail("[bootstrap] eps0 must lie in (0, 1)");
  if (c.task == Task::bootstrap)
    for (double a : c.attraction)
      if (!(a < 1.0 - c.eps0)) fail("[bootstrap] eps0 inconsistent with attraction: need m-/a* < 1 - eps0");
}

double reference_a_star() {
  static std::once_flag once;
  static double value = 0.0;
  std::call_once(once, [] { value = shoot_townes().a_star; });
  return value;
}

InteractionSpec interaction_for(const RunConfig& c, double attraction) {
  InteractionSpec w;
  w.form = c.w_form;
  w.range = c.w_range;
  w.repulsive_strength = c.w_repulsive_strength;
  w.repulsive_range = c.w_repulsive_range;
  const double target = attraction * reference_a_star();
  if (target == 0.0) {
    w.strength = 0.0;
    return w;
  }
  auto excess = [&](double g) {
    InteractionSpec t = w;
    t.strength = g;
    return t.negative_mass() - target;
  };
  InteractionSpec unit = w;
  unit.strength = 1.0;
  unit.repulsive_strength = 0.0;
  double hi = target / unit.negative_mass();
  if (c.w_repulsive_strength == 0.0) {
    w.strength = hi;
    return w;
  }
  // With a repulsive core the negative mass is monotone but not linear in g.
  while (excess(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(excess, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  w.strength = 0.5 * (r.first + r.second);
  return w;
}

}  // namespace bosestab::cli
