#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "philab/domain.hpp"
#include "philab/integrate.hpp"
#include "philab/kernel.hpp"
#include "philab/source.hpp"

namespace philab {

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> threads;
  std::optional<std::filesystem::path> out_dir;
};

/// Fully resolved run description. `snapshot` holds every section with defaults
/// filled in; it is what gets hashed and echoed into artifacts, so it excludes
/// the thread count and the output directory.
struct RunConfig {
  std::string subcommand;
  nlohmann::ordered_json snapshot;
  std::uint64_t seed = 1;
  int threads = 0;
  std::filesystem::path out_dir = ".";

  const nlohmann::ordered_json& section(const std::string& name) const { return snapshot.at(name); }
  std::string hash() const;
};

bool known_subcommand(const std::string& name);

/// Parses TOML text into a raw tree (no defaults, no validation).
nlohmann::ordered_json parse_toml(const std::string& text, const std::string& source_name = "config");

/// Applies defaults, overrides and validation. Relative table paths resolve
/// against base_dir.
RunConfig resolve_config(const std::string& subcommand, const nlohmann::ordered_json& raw,
                         const Overrides& overrides = {}, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::string& subcommand, const std::optional<std::filesystem::path>& path,
                      const Overrides& overrides = {});

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::ordered_json& snapshot);

HomogeneousKernel make_kernel(const nlohmann::ordered_json& section);
PhiIntegrand make_phi(const nlohmann::ordered_json& section);
Domain make_domain(const nlohmann::ordered_json& section);
SourceFunction make_source(const nlohmann::ordered_json& section, int dim);
IntegrationSettings make_integration(const nlohmann::ordered_json& numerics, int threads);

}  // namespace philab
