#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace stochlab::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

enum class Format { Json, Csv };

struct RunConfig {
  std::string command;                           ///< "module operation"
  std::map<std::string, std::string> parameters; ///< every declared parameter, defaults included
  std::uint64_t seed = 0;
  Format format = Format::Json;
  std::string out;   ///< empty: the output stream
  std::string plot;  ///< long-format series file, empty for none
  unsigned threads = 0;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotData {
  std::vector<Series> series;
};

/// Rows of cells; numbers are printed in shortest round-trip form.
struct Table {
  std::vector<std::string> header;  ///< empty: no header line
  std::vector<std::vector<json>> rows;
};

struct CommandResult {
  json payload = json::object();
  Table table;
  PlotData plot;
};

/// "series,x,y" rows. Throws std::invalid_argument when there is nothing to plot.
void emit_plot_data(const PlotData& plot, std::ostream& out);

/// Writes the result table after '#' metadata lines.
void write_csv(const RunConfig& cfg, const CommandResult& result, double wall_time, std::ostream& out);

/// {command, metadata: {seed, version, parameters, wall_time}, result}
json envelope(const RunConfig& cfg, const CommandResult& result, double wall_time);

/// Parses args (without the program name), runs the command and writes its
/// output. Returns 0 on success, 2 on a validation error, 1 on a runtime error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stochlab::cli
