#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stochlab {

/// Time-stamped sample path.
///
/// Step paths are right-continuous and piecewise constant: values[k] holds on
/// [times[k], times[k+1]) and the last value holds up to t_end. Grid paths
/// are samples at the grid points, read with linear interpolation.
struct Trajectory {
  enum class Kind { Step, Grid };

  Kind kind = Kind::Grid;
  std::vector<double> times;
  std::vector<double> values;
  double t_end = 0.0;

  static Trajectory step(double start_value, double t_end);
  static Trajectory grid(std::vector<double> times, std::vector<double> values);

  /// Appends a jump of a step path; t must exceed the last event time.
  void push_event(double t, double value);

  std::size_t size() const noexcept { return times.size(); }
  double value_at(double t) const;

  /// Dense view: the path read at each grid time, returned as a Grid path.
  Trajectory sample_on(const std::vector<double>& grid_times) const;

  /// Throws std::invalid_argument when times are not strictly increasing or
  /// sizes disagree.
  void validate() const;

  /// "t,<value_name>" header followed by one row per stored point.
  void write_csv(std::ostream& out, const std::string& value_name = "value") const;
};

/// Paths that share one time grid.
struct PathEnsemble {
  std::vector<double> grid;
  std::vector<std::vector<double>> paths;  ///< paths[p][k] is the value of path p at grid[k]
  std::uint64_t seed = 0;

  std::size_t path_count() const noexcept { return paths.size(); }
  Trajectory path(std::size_t p) const { return Trajectory::grid(grid, paths.at(p)); }
};

/// Uniform grid 0, t/n, ..., t with n intervals.
std::vector<double> uniform_grid(double t_max, std::size_t intervals);

}  // namespace stochlab
