#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "philab/config.hpp"
#include "philab/experiments.hpp"

namespace philab {

inline constexpr int kArtifactSchemaVersion = 1;

/// JSON text with every float printed as %.17g; non-finite values become null.
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

std::string format_double(double x);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// The artifact object. The hash covers the config snapshot only.
nlohmann::ordered_json result_json(const ExperimentResult& result, const std::string& config_hash,
                                   const std::string& timestamp);

struct ArtifactPaths {
  std::filesystem::path json;
  std::filesystem::path csv;
};

/// Writes <id>-<hash>.json and <id>-<hash>.csv under cfg.out_dir.
ArtifactPaths write_artifacts(const RunConfig& cfg, const ExperimentResult& result);

std::string utc_timestamp();

}  // namespace philab
