#pragma once

#include <filesystem>
#include <vector>

#include "philab/vec.hpp"

namespace philab {

/// Sampled function on S^1 or S^2 with piecewise-linear interpolation in angle.
///
/// On S^1 the samples are indexed by theta in [0, 2pi) and interpolation is
/// periodic. On S^2 they sit on a rectangular (polar, azimuth) grid with polar
/// in [0, pi] and azimuth periodic; interpolation is bilinear.
class SphereTable {
 public:
  /// S^1 table: angles need not be sorted; values[i] has value_dim entries.
  static SphereTable circle(std::vector<double> angles, std::vector<std::vector<double>> values);
  /// S^2 table on a full polar x azimuth grid; values indexed [ip * n_azimuth + ia].
  static SphereTable sphere(std::vector<double> polar, std::vector<double> azimuth,
                            std::vector<std::vector<double>> values);

  /// CSV with a header row. Columns: `theta` (S^1) or `polar,azimuth` (S^2),
  /// followed by one column per value component.
  static SphereTable load_csv(const std::filesystem::path& path);

  int sphere_dim() const { return sphere_dim_; }
  int value_dim() const { return value_dim_; }

  Vec operator()(const Vec& unit) const;

 private:
  int sphere_dim_ = 2;
  int value_dim_ = 1;
  std::vector<double> angles_;   // theta, or polar
  std::vector<double> azimuth_;  // S^2 only
  std::vector<std::vector<double>> values_;
};

}  // namespace philab
