#include "philab/sphere_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "philab/error.hpp"

namespace philab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return out;
}

// Locate t in a sorted periodic grid; returns (left index, weight of right).
std::pair<std::size_t, double> periodic_bracket(const std::vector<double>& grid, double t) {
  const std::size_t n = grid.size();
  if (n == 1) return {0, 0.0};
  t = wrap_angle(t);
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t right = static_cast<std::size_t>(it - grid.begin());
  std::size_t left;
  double a, b;
  if (right == 0 || right == n) {
    left = n - 1;
    right = 0;
    a = grid[left];
    b = grid[0] + kTwoPi;
    if (t < grid[0]) t += kTwoPi;
  } else {
    left = right - 1;
    a = grid[left];
    b = grid[right];
  }
  return {left, (t - a) / (b - a)};
}

}  // namespace

SphereTable SphereTable::circle(std::vector<double> angles, std::vector<std::vector<double>> values) {
  if (angles.empty() || angles.size() != values.size()) throw ValidationError("sphere table: angle/value count mismatch");
  std::vector<std::size_t> order(angles.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto& a : angles) a = wrap_angle(a);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return angles[i] < angles[j]; });
  SphereTable t;
  t.sphere_dim_ = 2;
  t.value_dim_ = static_cast<int>(values.front().size());
  if (t.value_dim_ < 1 || t.value_dim_ > Vec::kMaxDim) throw ValidationError("sphere table: unsupported value dimension");
  for (auto i : order) {
    if (static_cast<int>(values[i].size()) != t.value_dim_) throw ValidationError("sphere table: ragged rows");
    t.angles_.push_back(angles[i]);
    t.values_.push_back(values[i]);
  }
  for (std::size_t i = 1; i < t.angles_.size(); ++i)
    if (t.angles_[i] == t.angles_[i - 1]) throw ValidationError("sphere table: duplicate angle");
  return t;
}

SphereTable SphereTable::sphere(std::vector<double> polar, std::vector<double> azimuth,
                                std::vector<std::vector<double>> values) {
  if (polar.size() < 2 || azimuth.empty() || values.size() != polar.size() * azimuth.size())
    throw ValidationError("sphere table: grid size mismatch");
  if (!std::is_sorted(polar.begin(), polar.end()) || !std::is_sorted(azimuth.begin(), azimuth.end()))
    throw ValidationError("sphere table: grid axes must be sorted");
  SphereTable t;
  t.sphere_dim_ = 3;
  t.value_dim_ = static_cast<int>(values.front().size());
  if (t.value_dim_ < 1 || t.value_dim_ > Vec::kMaxDim) throw ValidationError("sphere table: unsupported value dimension");
  t.angles_ = std::move(polar);
  t.azimuth_ = std::move(azimuth);
  t.values_ = std::move(values);
  return t;
}

SphereTable SphereTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("sphere table: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("sphere table: missing header row in " + path.string());
  const auto header = split_csv_line(line);
  if (header.empty()) throw ValidationError("sphere table: empty header");
  const bool on_sphere = header[0] == "polar";
  if (!on_sphere && header[0] != "theta") throw ValidationError("sphere table: first column must be 'theta' or 'polar'");
  if (on_sphere && (header.size() < 3 || header[1] != "azimuth"))
    throw ValidationError("sphere table: S^2 tables need 'polar,azimuth' columns");
  const std::size_t angle_cols = on_sphere ? 2 : 1;
  if (header.size() <= angle_cols) throw ValidationError("sphere table: no value columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ValidationError("sphere table: row width differs from header");
    std::vector<double> row;
    for (auto& c : cells) row.push_back(std::stod(c));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("sphere table: no rows");

  if (!on_sphere) {
    std::vector<double> angles;
    std::vector<std::vector<double>> values;
    for (auto& r : rows) {
      angles.push_back(r[0]);
      values.emplace_back(r.begin() + 1, r.end());
    }
    return circle(std::move(angles), std::move(values));
  }
  std::vector<double> polar, azimuth;
  for (auto& r : rows) {
    if (std::find(polar.begin(), polar.end(), r[0]) == polar.end()) polar.push_back(r[0]);
    if (std::find(azimuth.begin(), azimuth.end(), r[1]) == azimuth.end()) azimuth.push_back(r[1]);
  }
  std::sort(polar.begin(), polar.end());
  std::sort(azimuth.begin(), azimuth.end());
  std::vector<std::vector<double>> values(polar.size() * azimuth.size());
  for (auto& r : rows) {
    auto ip = std::lower_bound(polar.begin(), polar.end(), r[0]) - polar.begin();
    auto ia = std::lower_bound(azimuth.begin(), azimuth.end(), r[1]) - azimuth.begin();
    values[ip * azimuth.size() + ia].assign(r.begin() + 2, r.end());
  }
  for (auto& v : values)
    if (v.empty()) throw ValidationError("sphere table: S^2 grid is incomplete");
  return sphere(std::move(polar), std::move(azimuth), std::move(values));
}

Vec SphereTable::operator()(const Vec& u) const {
  Vec out(value_dim_);
  if (sphere_dim_ == 2) {
    auto [left, w] = periodic_bracket(angles_, std::atan2(u[1], u[0]));
    const auto& a = values_[left];
    const auto& b = values_[(left + 1) % values_.size()];
    for (int i = 0; i < value_dim_; ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
    return out;
  }
  const double polar = std::acos(std::clamp(u[2], -1.0, 1.0));
  const double az = std::atan2(u[1], u[0]);
  auto ip_it = std::upper_bound(angles_.begin(), angles_.end(), polar);
  std::size_t ip1 = std::clamp<std::size_t>(static_cast<std::size_t>(ip_it - angles_.begin()), 1, angles_.size() - 1);
  std::size_t ip0 = ip1 - 1;
  double wp = std::clamp((polar - angles_[ip0]) / (angles_[ip1] - angles_[ip0]), 0.0, 1.0);
  auto [ia0, wa] = periodic_bracket(azimuth_, az);
  std::size_t ia1 = (ia0 + 1) % azimuth_.size();
  const std::size_t na = azimuth_.size();
  for (int i = 0; i < value_dim_; ++i) {
    double v00 = values_[ip0 * na + ia0][i], v01 = values_[ip0 * na + ia1][i];
    double v10 = values_[ip1 * na + ia0][i], v11 = values_[ip1 * na + ia1][i];
    out[i] = (1 - wp) * ((1 - wa) * v00 + wa * v01) + wp * ((1 - wa) * v10 + wa * v11);
  }
  return out;
}

}  // namespace philab
