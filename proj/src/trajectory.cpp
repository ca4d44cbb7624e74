#include "stochlab/trajectory.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace stochlab {

Trajectory Trajectory::step(double start_value, double t_end) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("trajectory end time must be nonnegative");
  Trajectory tr;
  tr.kind = Kind::Step;
  tr.times.push_back(0.0);
  tr.values.push_back(start_value);
  tr.t_end = t_end;
  return tr;
}

Trajectory Trajectory::grid(std::vector<double> times, std::vector<double> values) {
  Trajectory tr;
  tr.kind = Kind::Grid;
  tr.times = std::move(times);
  tr.values = std::move(values);
  tr.t_end = tr.times.empty() ? 0.0 : tr.times.back();
  tr.validate();
  return tr;
}

void Trajectory::push_event(double t, double value) {
  if (!times.empty() && !(t > times.back())) throw std::invalid_argument("event times must increase");
  times.push_back(t);
  values.push_back(value);
}

double Trajectory::value_at(double t) const {
  if (times.empty()) throw std::invalid_argument("empty trajectory");
  if (t <= times.front()) return values.front();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (kind == Kind::Step || it == times.end()) return values[k];
  const double w = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

Trajectory Trajectory::sample_on(const std::vector<double>& grid_times) const {
  std::vector<double> v(grid_times.size());
  for (std::size_t k = 0; k < grid_times.size(); ++k) v[k] = value_at(grid_times[k]);
  return grid(grid_times, std::move(v));
}

void Trajectory::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("trajectory times and values differ in length");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("trajectory times must be strictly increasing");
}

void Trajectory::write_csv(std::ostream& out, const std::string& value_name) const {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "t," << value_name << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) out << times[k] << ',' << values[k] << '\n';
  out.precision(old);
}

std::vector<double> uniform_grid(double t_max, std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("grid needs at least one interval");
  if (!(t_max > 0.0)) throw std::invalid_argument("grid end must be positive");
  std::vector<double> g(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) g[k] = t_max * static_cast<double>(k) / static_cast<double>(intervals);
  return g;
}

}  // namespace stochlab
