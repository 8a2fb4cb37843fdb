#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bosestab/cli/config.hpp"
#include "bosestab/cli/report.hpp"
#include "bosestab/cli/tasks.hpp"
#include "bosestab/error.hpp"

using namespace bosestab;
using namespace bosestab::cli;

namespace {

RunConfig parse(const std::string& text, std::optional<Task> task = {}) {
  std::istringstream in(text);
  return parse_config(in, "<test>", task);
}

const char* kFree = R"(
[grid]
n = 64
L = 8
[scan]
N = 2..5
d = 4
attraction = 0
)";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("defaults and task names") {
  const RunConfig c = default_config(Task::ed);
  CHECK(c.n == 128);
  CHECK(c.L == 8.0);
  CHECK(c.beta == std::vector<double>{0.5});
  CHECK(c.seed == 1);
  for (Task t : {Task::gn, Task::nls, Task::ed, Task::stability_scan, Task::lemmas, Task::dynamics, Task::bootstrap})
    CHECK(parse_task(to_string(t)) == t);
  CHECK(to_string(Task::stability_scan) == "stability-scan");
  CHECK_THROWS_AS(parse_task("everything"), ValidationError);
  CHECK(default_config(Task::stability_scan).attraction.size() == 7);
}

TEST_CASE("config parsing") {
  const RunConfig c = parse("[run]\ntask = ed\nseed = 42\n[scan]\nN = 2..4, 7\nbeta = 0.5, 0.75\n");
  CHECK(c.task == Task::ed);
  CHECK(c.seed == 42);
  CHECK(c.N == std::vector<int>{2, 3, 4, 7});
  CHECK(c.beta == std::vector<double>{0.5, 0.75});
  CHECK_THROWS_WITH_AS(parse("[scan]\nbetta = 0.5\n", Task::ed), doctest::Contains("betta"), ValidationError);
  CHECK_THROWS_WITH_AS(parse("[scenario]\nN = 2\n", Task::ed), doctest::Contains("scenario"), ValidationError);
  CHECK_THROWS_AS(parse("[scan]\nbeta = 1.2\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[scan]\nN = 1..3\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[grid]\nn = 63\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[run]\nschema = 2\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[run]\ntask = gn\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[grid]\nn = many\n", Task::ed), ValidationError);
  CHECK_THROWS_AS(parse("[bootstrap]\neps0 = 0.5\n[scan]\nattraction = 0.8\n", Task::bootstrap), ValidationError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.ini", Task::ed), IoError);
}

TEST_CASE("config hash") {
  const RunConfig a = parse("[scan]\nN = 2..4\nbeta = 0.5\n[grid]\nn = 64\n", Task::ed);
  const RunConfig b = parse("[grid]\nn = 64\n[scan]\nbeta = 0.50\nN = 2, 3, 4\n", Task::ed);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  RunConfig t = a;
  t.threads = 4;
  CHECK(t.hash() == a.hash());
  const RunConfig c = parse("[scan]\nN = 2..4\nbeta = 0.6\n[grid]\nn = 64\n", Task::ed);
  CHECK(c.hash() != a.hash());
  CHECK(parse("[run]\nseed = 2\n", Task::ed).hash() != default_config(Task::ed).hash());
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("CSV rendering") {
  Table t{"x", {"N", "value", "status"}, {}};
  CHECK(to_csv(t) == "N,value,status\n");
  t.rows.push_back({2, 0.6, "ok"});
  t.rows.push_back({3, NAN, "error"});
  CHECK(to_csv(t) == "N,value,status\n2,0.6,ok\n3,,error\n");
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(37, 0);
  parallel_for(37, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("free bosons in the ed task") {
  const RunConfig c = parse(kFree, Task::ed);
  const Report r = run_task(c);
  CHECK(exit_code(r) == 0);
  CHECK(r.all_points_ok());
  CHECK(r.config_hash == c.hash());
  Report copy = r;
  const Table* t = copy.table("ed");
  REQUIRE(t != nullptr);
  CHECK(t->columns == std::vector<std::string>{"N", "beta", "g", "d", "E", "e_N", "residual", "status"});
  REQUIRE(t->rows.size() == 4);
  for (const auto& row : t->rows) CHECK(row[5].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  const Table* v = copy.table("verdicts");
  REQUIRE(v != nullptr);
  CHECK(v->rows[0][3] == "bounded");

  // Byte-identical reruns, independent of the worker count.
  RunConfig c4 = c;
  c4.threads = 3;
  Json a = r.to_json(), b = run_task(c).to_json(), d = run_task(c4).to_json();
  CHECK(a.dump() == b.dump());
  a.erase("threads");
  d.erase("threads");
  CHECK(a.dump() == d.dump());
}

TEST_CASE("report files") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "bosestab_cli_test";
  std::filesystem::remove_all(dir);
  const Report r = run_task(default_config(Task::bootstrap));
  CHECK(exit_code(r) == 0);
  const auto json = emit_report(r, dir.string(), "json");
  REQUIRE(json.size() == 1);
  const Json parsed = Json::parse(slurp(json[0]));
  CHECK(parsed["task"] == "bootstrap");
  CHECK(parsed["config_hash"] == r.config_hash);
  const auto csv = emit_report(r, dir.string(), "csv");
  CHECK(csv.size() == r.tables.size());
  for (const auto& p : csv) CHECK(std::filesystem::exists(p));
  CHECK(slurp(json[0]) == r.to_json().dump(2) + "\n");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_report(r, "/proc/bosestab_out", "json"), IoError);
  CHECK_THROWS_AS(emit_report(r, dir.string(), "xml"), ValidationError);
}

TEST_CASE("exit codes") {
  Report r;
  CHECK(exit_code(r) == 0);
  r.verdicts.push_back({"v", false, ""});
  CHECK(exit_code(r) == 2);
  r.verdicts.clear();
  Record bad;
  bad.status = "error";
  bad.error_kind = "numerical";
  r.records.push_back(bad);
  CHECK(exit_code(r) == 2);
  r.records[0].error_kind = "validation";
  CHECK(exit_code(r) == 3);
}

TEST_CASE("gn task report") {
  const RunConfig c = parse("[grid]\nn = 128\nL = 10\n", Task::gn);
  Report r = run_task(c);
  CHECK(exit_code(r) == 0);
  REQUIRE(r.table("a_star") != nullptr);
  CHECK(r.verdicts.size() == 2);
  CHECK(r.all_verdicts_pass());
}

TEST_CASE("unresolved physics is a validation failure") {
  const RunConfig c = parse("[grid]\nn = 16\nL = 8\n[scan]\nN = 2..4\nbeta = 0.9\nd = 3\n", Task::ed);
  CHECK_THROWS_AS(run_task(c), ValidationError);
}
