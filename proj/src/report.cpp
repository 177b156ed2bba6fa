#include "philab/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "philab/error.hpp"

namespace philab {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_into(std::string& out, const json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  const char* sep = indent < 0 ? ":" : ": ";
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, x] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(k).dump();
        out += sep;
        dump_into(out, x, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // rows of plain numbers stay on one line
      bool flat = true;
      for (const auto& x : v) flat = flat && x.is_primitive();
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        dump_into(out, v[i], indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const json& value, int indent) {
  std::string out;
  dump_into(out, value, indent, 0);
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

json result_json(const ExperimentResult& r, const std::string& config_hash, const std::string& timestamp) {
  json out;
  out["schema_version"] = kArtifactSchemaVersion;
  out["experiment"] = r.id;
  out["config_hash"] = config_hash;
  out["timestamp"] = timestamp;
  out["config"] = r.config;
  out["parameter"] = r.parameter_name;
  out["value"] = r.value_name;
  json series = json::array();
  for (const auto& [x, y] : r.series) series.push_back(json::array({x, y}));
  out["series"] = series;
  if (r.fit) {
    out["fit"] = {{"transform", r.fit_transform}, {"slope", r.fit->slope}, {"intercept", r.fit->intercept}};
  } else {
    out["fit"] = nullptr;
  }
  out["reference"] = r.reference;
  out["deviation"] = r.deviation;
  out["pass"] = r.pass;
  out["warning"] = r.warning;
  out["details"] = r.details;
  return out;
}

ArtifactPaths write_artifacts(const RunConfig& cfg, const ExperimentResult& result) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string stem = result.id + "-" + cfg.hash();
  ArtifactPaths paths{cfg.out_dir / (stem + ".json"), cfg.out_dir / (stem + ".csv")};
  ExperimentResult r = result;
  r.config = cfg.snapshot;
  {
    std::ofstream os(paths.json, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + paths.json.string());
    os << dump_json(result_json(r, cfg.hash(), utc_timestamp())) << '\n';
  }
  write_csv(paths.csv, result.columns, result.rows);
  return paths;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace philab
