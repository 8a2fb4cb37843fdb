#include "bosestab/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bosestab/cli/config.hpp"
#include "bosestab/error.hpp"

namespace bosestab::cli {

namespace {

std::string cell(const Json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  // Shortest round-trip form; non-finite values leave the cell empty.
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return "";
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

Json Report::to_json() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["task"] = task;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["threads"] = threads;
  j["config"] = config;
  Json recs = Json::array();
  for (const auto& r : records) {
    Json x;
    x["task"] = r.task;
    x["point"] = r.point;
    x["seed"] = r.seed;
    x["status"] = r.status;
    if (!r.error_kind.empty()) x["error_kind"] = r.error_kind;
    x["inputs"] = r.inputs;
    x["outputs"] = r.outputs;
    recs.push_back(std::move(x));
  }
  j["records"] = std::move(recs);
  Json tabs = Json::object();
  for (const auto& t : tables) {
    Json x;
    x["columns"] = t.columns;
    x["rows"] = t.rows;
    tabs[t.name] = std::move(x);
  }
  j["tables"] = std::move(tabs);
  Json ver = Json::array();
  for (const auto& v : verdicts) ver.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = std::move(ver);
  return j;
}

bool Report::all_points_ok() const {
  for (const auto& r : records)
    if (r.status != "ok") return false;
  return true;
}

bool Report::all_verdicts_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

Table* Report::table(const std::string& name) {
  for (auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string to_csv(const Table& t) {
  std::string s;
  for (size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell(row[i]);
    s += "\n";
  }
  return s;
}

std::vector<std::string> emit_report(const Report& r, const std::string& dir, const std::string& format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  auto write = [&](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    written.push_back(p.string());
  };
  if (format == "json") {
    write(fs::path(dir) / (r.task + ".json"), r.to_json().dump(2) + "\n");
  } else if (format == "csv") {
    for (const auto& t : r.tables) write(fs::path(dir) / (r.task + "_" + t.name + ".csv"), to_csv(t));
  } else {
    throw ValidationError("unknown format '" + format + "' (json or csv)");
  }
  return written;
}

int exit_code(const Report& r) {
  for (const auto& rec : r.records)
    if (rec.status != "ok" && rec.error_kind == "validation") return 3;
  if (!r.all_points_ok() || !r.all_verdicts_pass()) return 2;
  return 0;
}

}  // namespace bosestab::cli
