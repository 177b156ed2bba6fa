#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "philab/kernel.hpp"
#include "philab/source.hpp"

namespace philab {

struct ConvolutionSettings {
  /// Target accuracy; grid-field leaves above it set the warning flag.
  double tol = 1e-10;
  /// Gauss-Legendre nodes per angular panel for bump sources.
  int angular_nodes = 24;
  /// Angular panels per smooth segment for bump sources.
  int angular_panels = 2;
  /// Trapezoid nodes for ring averages (d = 3).
  int azimuth_nodes = 64;
  /// Subdivision cap for grid cells near the evaluation point.
  int max_depth = 12;
  /// Subdivision cap for grid cells cut by a window radius.
  int window_depth = 8;
};

struct ConvolutionValue {
  Vec value;
  bool warning = false;
};

/// (K restricted to window) * f at x. Point masses are summed exactly; bumps use
/// polar coordinates centred at x with the radial chord integral in closed form
/// (alpha = 1) or Gauss-Legendre; grid cells are integrated by recursive subdivision.
/// Throws SingularityError if x sits on a point mass and the window reaches the origin.
ConvolutionValue convolve_at(const HomogeneousKernel& kernel, const RadialWindow& window, const SourceFunction& f,
                             const Vec& x, const ConvolutionSettings& settings = {});
ConvolutionValue convolve_at(const HomogeneousKernel& kernel, const SourceFunction& f, const Vec& x,
                             const ConvolutionSettings& settings = {});
ConvolutionValue convolve_at(const KernelPiece& piece, const SourceFunction& f, const Vec& x,
                             const ConvolutionSettings& settings = {});

/// Cell-centred grid: centers at origin + spacing * (i + 1/2).
struct GridSpec {
  Vec origin;
  double spacing = 1.0;
  std::array<int, 3> extents{};

  int dim() const { return origin.size(); }
  std::size_t cell_count() const;
  Vec cell_center(std::size_t flat) const;
};

struct FieldOnGrid {
  GridSpec grid;
  int target_dim = 1;
  /// Cell-major: values[flat * target_dim + component].
  std::vector<double> values;
  int piece_n = 0;
  std::string piece_mode;
  bool warning = false;

  Vec at(std::size_t flat) const;
  /// Columns x0..x{d-1}, v0..v{l-1}; header row.
  void write_csv(const std::filesystem::path& path) const;
  /// int32 dim, int32 target_dim, f64 origin[dim], f64 spacing, int32 extents[dim],
  /// then row-major f64 values; little-endian.
  void write_binary(const std::filesystem::path& path) const;
  static FieldOnGrid read_binary(const std::filesystem::path& path);
};

FieldOnGrid convolve_field(const HomogeneousKernel& kernel, const RadialWindow& window, const SourceFunction& f,
                           const GridSpec& grid, const ConvolutionSettings& settings = {}, int threads = 1);
FieldOnGrid convolve_field(const KernelPiece& piece, const SourceFunction& f, const GridSpec& grid,
                           const ConvolutionSettings& settings = {}, int threads = 1);

struct LowFrequencyCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = max of |K_{<=0} * f| over a probe grid (plus rings of radius 1/2 around
/// point masses); rhs = 2^{d-alpha} sup|K on sphere| ||f||_1.
LowFrequencyCheck low_freq_sup_check(const HomogeneousKernel& kernel, const SourceFunction& f, int probes_per_axis = 65,
                                     const ConvolutionSettings& settings = {});

}  // namespace philab
