#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bosestab/cli/config.hpp"
#include "bosestab/cli/report.hpp"
#include "bosestab/cli/tasks.hpp"
#include "bosestab/error.hpp"

using namespace bosestab;
using namespace bosestab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for trapped 2D Bose gases with attractive interactions"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out", format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  const std::pair<const char*, const char*> commands[] = {
      {"gn", "Gagliardo-Nirenberg constant by two methods"},
      {"nls", "NLS ground states over the attraction axis"},
      {"ed", "exact diagonalization scan over (g, beta, d, N)"},
      {"stability-scan", "e_N trend over N for attraction in [0.2, 1.4]"},
      {"lemmas", "localization, moments, de Finetti, plane waves, tail bound"},
      {"dynamics", "many-body vs NLS dynamics from product data"},
      {"bootstrap", "exponent recursion from alpha = 2 beta to 0"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI configuration (docs/config_schema.md)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--seed", seed, "overrides [run] seed");
    sub->add_option("--threads", threads, "overrides [run] threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  const Task task = parse_task(app.get_subcommands().front()->get_name());

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? default_config(task) : parse_config_file(config_path, task);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    validate_run_config(cfg);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return 3;
  }

  Report report;
  try {
    report = run_task(cfg);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation failed: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    for (const auto& p : emit_report(report, out_dir, format)) std::printf("wrote %s\n", p.c_str());
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  std::printf("task %s  config %s  seed %llu  threads %d\n", report.task.c_str(), report.config_hash.c_str(),
              static_cast<unsigned long long>(report.seed), report.threads);
  for (const auto& r : report.records)
    if (r.status != "ok")
      std::printf("point %s failed (%s): %s\n", r.point.c_str(), r.error_kind.c_str(),
                  r.outputs.value("error", std::string()).c_str());
  for (const auto& v : report.verdicts)
    std::printf("%s  %s%s%s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.detail.empty() ? "" : "  ",
                v.detail.c_str());
  return exit_code(report);
}
