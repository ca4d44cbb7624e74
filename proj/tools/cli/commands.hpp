#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stochlab/cli.hpp"
#include "stochlab/rng.hpp"

namespace CLI {
class App;
}

namespace stochlab::cli {

/// String-backed parameter store bound to one subcommand's options.
/// Conversions throw std::invalid_argument naming the flag.
class Params {
 public:
  explicit Params(CLI::App* app = nullptr) : app_(app) {}

  /// Registers --name; an empty default makes the option required.
  void add(const std::string& name, const std::string& fallback, const std::string& help);
  /// Optional parameter with no default; has() tells whether it was given.
  void optional(const std::string& name, const std::string& help);

  bool has(const std::string& name) const;
  const std::string& str(const std::string& name) const;
  double real(const std::string& name) const;
  std::size_t count(const std::string& name) const;
  std::uint64_t u64(const std::string& name) const;
  std::vector<double> reals(const std::string& name) const;
  std::vector<std::size_t> counts(const std::string& name) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& name, const std::string& value) { values_[name] = value; }

 private:
  CLI::App* app_;
  std::map<std::string, std::string> values_;
};

using Handler = std::function<CommandResult(const Params&, const RandomSource&)>;

struct Command {
  std::string module;
  std::string name;
  std::string help;
  std::function<void(Params&)> declare;
  Handler run;
};

std::vector<Command> markov_commands();
std::vector<Command> ctmc_commands();
std::vector<Command> process_commands();
std::vector<Command> spectral_commands();
std::vector<Command> ergodic_commands();
std::vector<Command> pagerank_commands();
std::vector<Command> decision_commands();

// helpers shared by the command files
json to_json(const std::vector<double>& v);
Table key_value_table(const json& payload);
std::vector<double> linspace(double a, double b, std::size_t points);

}  // namespace stochlab::cli
