#include "stochlab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "stochlab/parallel.hpp"

namespace stochlab::cli {
namespace {

std::string flag(const std::string& name) { return "--" + name; }

template <class T>
T parse_number(const std::string& name, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument(flag(name) + ": cannot parse '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::uint64_t resolve_seed(const std::string& given) {
  if (!given.empty()) return parse_number<std::uint64_t>("seed", given);
  if (const char* env = std::getenv("STOCHLAB_SEED"); env && *env) {
    const std::string s(env);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("STOCHLAB_SEED: cannot parse '" + s + "'");
    return v;
  }
  return kDefaultSeed;
}

std::vector<Command> registry() {
  std::vector<Command> all;
  for (auto part : {markov_commands, ctmc_commands, process_commands, spectral_commands, ergodic_commands,
                    pagerank_commands, decision_commands}) {
    auto cmds = part();
    all.insert(all.end(), std::make_move_iterator(cmds.begin()), std::make_move_iterator(cmds.end()));
  }
  return all;
}

}  // namespace

// ---------------------------------------------------------------- Params

void Params::add(const std::string& name, const std::string& fallback, const std::string& help) {
  values_[name] = fallback;
  if (!app_) return;
  auto* opt = app_->add_option(flag(name), values_[name], help);
  if (fallback.empty())
    opt->required();
  else
    opt->capture_default_str();
}

void Params::optional(const std::string& name, const std::string& help) {
  values_[name] = "";
  if (app_) app_->add_option(flag(name), values_[name], help);
}

bool Params::has(const std::string& name) const {
  const auto it = values_.find(name);
  return it != values_.end() && !it->second.empty();
}

const std::string& Params::str(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw std::logic_error("undeclared parameter " + name);
  return it->second;
}

double Params::real(const std::string& name) const { return parse_number<double>(name, str(name)); }
std::size_t Params::count(const std::string& name) const { return parse_number<std::size_t>(name, str(name)); }
std::uint64_t Params::u64(const std::string& name) const { return parse_number<std::uint64_t>(name, str(name)); }

std::vector<double> Params::reals(const std::string& name) const {
  std::vector<double> out;
  for (const auto& s : split_list(str(name))) out.push_back(parse_number<double>(name, s));
  if (out.empty()) throw std::invalid_argument(flag(name) + ": empty list");
  return out;
}

std::vector<std::size_t> Params::counts(const std::string& name) const {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(str(name))) out.push_back(parse_number<std::size_t>(name, s));
  if (out.empty()) throw std::invalid_argument(flag(name) + ": empty list");
  return out;
}

// ---------------------------------------------------------------- helpers

json to_json(const std::vector<double>& v) { return json(v); }

Table key_value_table(const json& payload) {
  Table t;
  t.header = {"key", "value"};
  for (auto it = payload.begin(); it != payload.end(); ++it) t.rows.push_back({it.key(), it.value()});
  return t;
}

std::vector<double> linspace(double a, double b, std::size_t points) {
  if (points < 2) throw std::invalid_argument("a grid needs at least two points");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
  return out;
}

// ---------------------------------------------------------------- output

void emit_plot_data(const PlotData& plot, std::ostream& out) {
  std::size_t points = 0;
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series " + s.name + " has mismatched x and y");
    points += s.x.size();
  }
  if (points == 0) throw std::invalid_argument("result has no plottable series");
  out << "series,x,y\n";
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << csv_cell(s.name) << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

json envelope(const RunConfig& cfg, const CommandResult& result, double wall_time) {
  return {{"command", cfg.command},
          {"metadata",
           {{"seed", cfg.seed},
            {"version", kVersion},
            {"parameters", cfg.parameters},
            {"wall_time", wall_time}}},
          {"result", result.payload}};
}

void write_csv(const RunConfig& cfg, const CommandResult& result, double wall_time, std::ostream& out) {
  out << "# command: " << cfg.command << '\n';
  out << "# seed: " << cfg.seed << '\n';
  out << "# version: " << kVersion << '\n';
  out << "# parameters:";
  for (const auto& [k, v] : cfg.parameters) out << ' ' << k << '=' << v;
  out << '\n';
  out << "# wall_time: " << format_double(wall_time) << '\n';
  const bool custom = !(result.table.rows.empty() && result.table.header.empty());
  const Table table = custom ? result.table : key_value_table(result.payload);
  // scalars that the table does not show
  if (custom)
    for (auto it = result.payload.begin(); it != result.payload.end(); ++it)
      if (it.value().is_primitive()) out << "# " << it.key() << ": " << csv_cell(it.value()) << '\n';
  if (!table.header.empty()) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << csv_cell(table.header[i]);
    out << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic process toolkit: Markov chains, random processes, PageRank and decision problems."};
  app.name("stochlab");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string seed_text, format = "json", out_path, plot_path;
  unsigned threads = 0;
  app.add_option("--seed", seed_text, "Master seed (default: STOCHLAB_SEED or the built-in seed)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", out_path, "Write the result here instead of stdout");
  app.add_option("--plot", plot_path, "Write long-format plot data (series,x,y) here");
  app.add_option("--threads", threads, "Worker cap, 0 for all cores")->capture_default_str();

  auto commands = registry();
  std::deque<Params> params;
  std::vector<CLI::App*> leaves;
  std::map<std::string, CLI::App*> modules;
  for (const auto& c : commands) {
    auto& mod = modules[c.module];
    if (!mod) {
      mod = app.add_subcommand(c.module, c.module + " operations");
      mod->require_subcommand(1);
    }
    CLI::App* leaf = mod->add_subcommand(c.name, c.help);
    params.emplace_back(leaf);
    c.declare(params.back());
    leaves.push_back(leaf);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::size_t chosen = commands.size();
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i]->parsed()) chosen = i;
  if (chosen == commands.size()) {
    err << "error: no command selected\n";
    return 2;
  }

  RunConfig cfg;
  cfg.command = commands[chosen].module + " " + commands[chosen].name;
  cfg.format = format == "csv" ? Format::Csv : Format::Json;
  cfg.out = out_path;
  cfg.plot = plot_path;
  cfg.threads = threads;
  for (const auto& [k, v] : params[chosen].values())
    if (!v.empty()) cfg.parameters[k] = v;

  try {
    cfg.seed = resolve_seed(seed_text);
    set_thread_limit(threads);
    const auto t0 = std::chrono::steady_clock::now();
    const CommandResult result = commands[chosen].run(params[chosen], RandomSource(cfg.seed));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream plot_buf;
    if (!cfg.plot.empty()) emit_plot_data(result.plot, plot_buf);

    std::ostringstream buf;
    if (cfg.format == Format::Json)
      buf << envelope(cfg, result, wall).dump(2) << '\n';
    else
      write_csv(cfg, result, wall, buf);

    if (cfg.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw std::runtime_error("cannot write " + cfg.out);
      f << buf.str();
    }
    if (!cfg.plot.empty()) {
      std::ofstream f(cfg.plot);
      if (!f) throw std::runtime_error("cannot write " + cfg.plot);
      f << plot_buf.str();
    }
    return 0;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stochlab::cli
