#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace bosestab::cli {

using Json = nlohmann::ordered_json;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Record {
  std::string task;
  std::string point;
  std::uint64_t seed = 0;
  Json inputs = Json::object();
  Json outputs = Json::object();
  std::string status = "ok";  // ok | error
  std::string error_kind;     // validation | numerical, when status = error
};

struct Report {
  std::string task;
  std::string config_hash;
  Json config = Json::object();
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<Record> records;
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;

  Json to_json() const;
  bool all_points_ok() const;
  bool all_verdicts_pass() const;
  Table* table(const std::string& name);
};

// Writes <dir>/<task>.json, or <dir>/<task>_<table>.csv per table. Returns the
// paths written. Throws IoError.
std::vector<std::string> emit_report(const Report& r, const std::string& dir, const std::string& format);

std::string to_csv(const Table& t);

// Exit code: 0 ok, 2 physics verdict or numerical failure, 3 validation.
int exit_code(const Report& r);

}  // namespace bosestab::cli
