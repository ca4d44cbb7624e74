#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stochlab/cli.hpp"
#include "stochlab/io.hpp"
#include "stochlab/markov_discrete.hpp"

using namespace stochlab;
using stochlab::cli::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return json::parse(r.out);
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("stochlab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const auto p = (path_ / name).string();
    if (!contents.empty()) std::ofstream(p) << contents;
    return p;
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: worked examples") {
  TempDir dir;
  const auto two = dir.file("two_state.csv", "0.5,0.5\n1,0\n");
  auto doc = run_json({"markov", "stationary", "--matrix", two});
  CHECK(doc["command"] == "markov stationary");
  CHECK(doc["result"]["pi"][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(doc["result"]["pi"][1].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto g = dir.file("g.edges", "# two pages\n0 0\n0 1\n1 0\n");
  doc = run_json({"pagerank", "power", "--graph", g, "--delta", "0.15", "--eps", "1e-8"});
  const auto& ranking = doc["result"]["ranking"];
  REQUIRE(ranking.size() == 2);
  CHECK(ranking[0]["node"] == 0);
  CHECK(ranking[0]["score"].get<double>() > ranking[1]["score"].get<double>());

  doc = run_json({"decision", "secretary", "--n", "1000"});
  CHECK(doc["result"]["s_star"] == 369);
  CHECK(doc["result"]["v_star"].get<double>() == doctest::Approx(0.368).epsilon(0.002 / 0.368));
}

TEST_CASE("cli: metadata and exit codes") {
  TempDir dir;
  const auto two = dir.file("two_state.csv", "0.5,0.5\n1,0\n");
  auto doc = run_json({"--seed", "99", "markov", "evolve", "--matrix", two, "--steps", "3"});
  CHECK(doc["metadata"]["seed"] == 99);
  CHECK(doc["metadata"]["version"] == cli::kVersion);
  CHECK(doc["metadata"]["parameters"]["steps"] == "3");
  CHECK(doc["metadata"]["parameters"]["start"] == "0");
  CHECK(doc["metadata"].contains("wall_time"));
  CHECK(doc["result"]["distribution"][0].get<double>() == 0.625);

  // global flags are accepted after the subcommand too
  doc = run_json({"markov", "evolve", "--matrix", two, "--seed", "7"});
  CHECK(doc["metadata"]["seed"] == 7);

  CHECK(run({"markov", "stationary", "--matrix", two, "--unknown", "1"}).code == 2);
  CHECK(run({"markov", "stationary"}).code == 2);
  CHECK(run({"markov", "nope"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"markov", "stationary", "--matrix", dir.file("missing.csv")}).code == 2);
  CHECK(run({"markov", "evolve", "--matrix", two, "--steps", "3x"}).code == 2);
  CHECK(run({"markov", "stationary", "--matrix", dir.file("bad.csv", "0.5,0.6\n1,0\n")}).code == 2);
  CHECK(run({"--seed", "-1", "decision", "secretary"}).code == 2);
  CHECK(run({"--format", "xml", "decision", "secretary"}).code == 2);
  CHECK(run({"process", "wiener", "--paths", "0"}).code == 2);
  CHECK(run({"spectral", "density", "--kernel", "band"}).code == 2);
  CHECK(run({"decision", "secretary", "--plot", dir.file("p.csv"), "--n", "0"}).code == 2);
  CHECK(run({"pagerank", "poll", "--plot", dir.file("p.csv")}).code == 2);
  CHECK(run({"--help"}).code == 0);

  // a periodic graph never settles without teleportation: numerical failure
  const auto cyc = dir.file("cyc.edges", "0 1\n1 2\n1 0\n2 1\n");
  const auto r = run({"pagerank", "power", "--graph", cyc, "--delta", "0", "--max-iter", "50"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("cli: seed from the environment") {
  ::setenv("STOCHLAB_SEED", "4242", 1);
  auto doc = run_json({"decision", "switch", "--rounds", "1000"});
  CHECK(doc["metadata"]["seed"] == 4242);
  doc = run_json({"--seed", "5", "decision", "switch", "--rounds", "1000"});
  CHECK(doc["metadata"]["seed"] == 5);
  ::setenv("STOCHLAB_SEED", "abc", 1);
  CHECK(run({"decision", "switch"}).code == 2);
  ::unsetenv("STOCHLAB_SEED");
  doc = run_json({"decision", "switch", "--rounds", "1000"});
  CHECK(doc["metadata"]["seed"] == kDefaultSeed);
}

TEST_CASE("cli: reruns from echoed metadata reproduce the payload") {
  const std::vector<std::vector<std::string>> runs = {
      {"process", "wiener", "--paths", "4", "--steps", "50"},
      {"pagerank", "generate", "--n", "3000", "--a", "0.5"},
      {"decision", "exp3", "--rounds", "2000", "--arms", "0.2,0.7,0.4"},
      {"ergodic", "gauss", "--seeds", "5", "--digits", "200"},
      {"process", "poisson", "--rate", "2", "--thin", "0.3"},
      {"decision", "qlearn", "--updates", "20000"},
  };
  for (const auto& args : runs) {
    CAPTURE(args[1]);
    auto first_args = args;
    first_args.insert(first_args.begin(), {"--seed", "314"});
    const auto first = run_json(first_args);

    std::vector<std::string> again{"--seed", std::to_string(first["metadata"]["seed"].get<std::uint64_t>())};
    const std::string cmd = first["command"];
    again.push_back(cmd.substr(0, cmd.find(' ')));
    again.push_back(cmd.substr(cmd.find(' ') + 1));
    for (const auto& [k, v] : first["metadata"]["parameters"].items()) {
      again.push_back("--" + k);
      again.push_back(v.get<std::string>());
    }
    const auto second = run_json(again);
    CHECK(first["result"].dump() == second["result"].dump());

    // worker count does not change the numbers
    auto threaded = again;
    threaded.insert(threaded.begin(), {"--threads", "3"});
    CHECK(run_json(threaded)["result"].dump() == first["result"].dump());
  }

  // csv payloads, comment lines aside, are byte-identical
  auto strip = [](const std::string& s) {
    std::stringstream in(s), out;
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("# wall_time", 0) != 0) out << line << '\n';
    return out.str();
  };
  const std::vector<std::string> args{"--format", "csv", "decision", "exp3", "--rounds", "500"};
  CHECK(strip(run(args).out) == strip(run(args).out));
}

TEST_CASE("cli: outputs load back through the module readers") {
  TempDir dir;
  SUBCASE("matrix") {
    const auto path = dir.file("ehr.csv");
    REQUIRE(run({"--format", "csv", "--out", path, "markov", "ehrenfest", "--particles", "5"}).code == 0);
    const auto m = io::read_matrix_csv(path);
    CHECK((m - markov::ehrenfest_discrete(5).matrix()).cwiseAbs().maxCoeff() == 0.0);
    // and feeds straight back into another command
    const auto doc = run_json({"markov", "stationary", "--matrix", path});
    CHECK(doc["result"]["pi"][0].get<double>() == doctest::Approx(1.0 / 32.0));
  }
  SUBCASE("correlation table") {
    const auto path = dir.file("corr.csv");
    REQUIRE(run({"--format", "csv", "--out", path, "spectral", "correlation", "--density", "lorentzian", "--d", "2",
                 "--a", "1.5", "--tau-max", "20", "--points", "801"})
                .code == 0);
    const auto r = io::read_correlation_csv(path);
    for (double t : {0.0, 0.5, 1.0, 3.0}) CHECK(r(t) == doctest::Approx(2.0 * std::exp(-1.5 * t)).epsilon(1e-6));
    const auto doc = run_json({"spectral", "density", "--kernel", "file", "--correlation", path, "--points", "3",
                               "--nu-max", "2"});
    const double rho0 = doc["result"]["rho"][0];
    CHECK(rho0 == doctest::Approx(2.0 * 1.5 / (M_PI * 1.5 * 1.5)).epsilon(1e-3));
  }
  SUBCASE("edge list") {
    const auto path = dir.file("web.edges");
    REQUIRE(run({"pagerank", "generate", "--n", "2000", "--edges-out", path}).code == 0);
    const auto el = io::read_edge_list(path);
    CHECK(el.nodes == 2000);
    CHECK(el.edges.size() == 2000);
    CHECK(run({"pagerank", "power", "--graph", path}).code == 0);
  }
  SUBCASE("mdp") {
    const auto path = dir.file("m.json");
    REQUIRE(run({"--out", path, "decision", "random-mdp", "--states", "3", "--actions", "2", "--gamma", "0.7"}).code == 0);
    const auto doc = json::parse(slurp(path));
    const auto m = io::mdp_from_json(doc["result"]["mdp"]);
    CHECK(m.states == 3);
    CHECK(io::mdp_to_json(m) == doc["result"]["mdp"]);
    const auto vi = run_json({"decision", "value-iteration", "--mdp", path});
    CHECK(vi["result"]["value"].size() == 3);
  }
  SUBCASE("matrix writer") {
    markov::Matrix m(2, 3);
    m << 0.1, 1.0 / 3.0, -2.5e-17, 4, 5, 6;
    std::stringstream ss;
    io::write_matrix_csv(ss, m);
    CHECK(io::read_matrix_csv(ss) == m);
  }
}

TEST_CASE("cli: plot data") {
  TempDir dir;
  const auto plot = dir.file("w.csv");
  REQUIRE(run({"--plot", plot, "process", "wiener", "--paths", "3", "--steps", "16", "--sigma", "2"}).code == 0);
  std::stringstream in(slurp(plot));
  std::string line;
  std::getline(in, line);
  CHECK(line == "series,x,y");
  std::map<std::string, std::size_t> rows;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    const std::string name = line.substr(0, a);
    ++rows[name];
    const double x = std::stod(line.substr(a + 1, b - a - 1)), y = std::stod(line.substr(b + 1));
    if (name == "envelope_upper") CHECK(y == doctest::Approx(6.0 * std::sqrt(x)));
    if (name == "envelope_lower") CHECK(y == doctest::Approx(-6.0 * std::sqrt(x)));
  }
  CHECK(rows.size() == 5);
  CHECK(rows["path2"] == 17);

  std::ostringstream os;
  CHECK_THROWS_AS(cli::emit_plot_data({}, os), std::invalid_argument);
  CHECK_THROWS_AS(cli::emit_plot_data({{{"a", {1.0}, {}}}}, os), std::invalid_argument);

  const auto hist = dir.file("h.csv");
  const auto r = run({"--format", "csv", "pagerank", "generate", "--n", "5000"});
  CHECK(r.out.find("k,count,fit\n") != std::string::npos);
  REQUIRE(run({"--plot", hist, "pagerank", "generate", "--n", "5000"}).code == 0);
  CHECK(slurp(hist).find("\nfit,") != std::string::npos);
}
