#include <cmath>

#include "commands.hpp"
#include "stochlab/ergodic.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::ergodic;

CommandResult weyl_cmd(const Params& p, const RandomSource&) {
  const auto f = first_digit_frequencies(p.u64("kmax"));
  CommandResult r;
  r.table.header = {"digit", "frequency", "theory", "abs_error"};
  Series emp{"frequency", {}, {}}, th{"theory", {}, {}};
  json digits = json::array();
  double worst = 0.0;
  for (int d = 1; d <= 9; ++d) {
    const double fr = f.frequency(d), t = DigitFrequencies::theory(d);
    worst = std::max(worst, std::fabs(fr - t));
    r.table.rows.push_back({d, fr, t, std::fabs(fr - t)});
    digits.push_back({{"digit", d}, {"count", f.counts[static_cast<std::size_t>(d)]}, {"frequency", fr}, {"theory", t}});
    emp.x.push_back(d);
    emp.y.push_back(fr);
    th.x.push_back(d);
    th.y.push_back(t);
  }
  r.payload = {{"total", f.total}, {"digits", digits}, {"max_abs_error", worst}};
  r.plot.series = {emp, th};
  return r;
}

CommandResult gauss_cmd(const Params& p, const RandomSource& src) {
  const auto g = gauss_digit_frequencies(src, p.count("seeds"), p.count("digits"), p.count("max-digit"));
  const auto show = std::min(p.count("show"), p.count("max-digit"));
  CommandResult r;
  r.table.header = {"digit", "frequency", "theory", "abs_error"};
  json digits = json::array();
  Series emp{"frequency", {}, {}}, th{"theory", {}, {}};
  for (std::size_t m = 1; m <= show; ++m) {
    const double fr = g.frequency(m), t = GaussDigits::theory(m);
    r.table.rows.push_back({m, fr, t, std::fabs(fr - t)});
    digits.push_back({{"digit", m}, {"count", g.counts[m]}, {"frequency", fr}, {"theory", t}});
    emp.x.push_back(static_cast<double>(m));
    emp.y.push_back(fr);
    th.x.push_back(static_cast<double>(m));
    th.y.push_back(t);
  }
  r.payload = {{"total", g.total}, {"overflow", g.overflow}, {"terminated", g.terminated}, {"digits", digits}};
  r.plot.series = {emp, th};
  return r;
}

CommandResult birkhoff_cmd(const Params& p, const RandomSource&) {
  const std::string& kind = p.str("map");
  IntervalMap map;
  if (kind == "rotation")
    map = IntervalMap::rotation(p.real("alpha"));
  else if (kind == "gauss")
    map = IntervalMap::gauss();
  else
    throw std::invalid_argument("--map must be rotation or gauss");
  const double lo = p.real("lo"), hi = p.real("hi"), x0 = p.real("x0");
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw std::invalid_argument("need 0 <= lo <= hi <= 1");
  if (!(0.0 <= x0 && x0 < 1.0)) throw std::invalid_argument("--x0 must lie in [0, 1)");
  const auto n = p.count("n");
  if (n == 0) throw std::invalid_argument("--n must be positive");
  const auto f = indicator(lo, hi);

  CommandResult r;
  Series run{"running_average", {}, {}};
  const std::size_t every = std::max<std::size_t>(1, n / 200);
  double x = x0, sum = 0.0;
  std::size_t hit_zero = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    x = map(x);
    // a double is rational, so a Gauss orbit ends at 0 after finitely many steps
    if (x == 0.0 && hit_zero == 0 && map.kind == IntervalMap::Kind::Gauss) hit_zero = k;
    sum += f(x);
    if (k % every == 0 || k == n) {
      run.x.push_back(static_cast<double>(k));
      run.y.push_back(sum / static_cast<double>(k));
    }
  }
  const double measure = map.cdf(hi) - map.cdf(lo);
  r.payload = {{"average", birkhoff_average(map, f, x0, n)}, {"space_average", measure}};
  if (hit_zero) r.payload["orbit_reached_zero_at"] = hit_zero;
  r.table.header = {"n", "average"};
  for (std::size_t i = 0; i < run.x.size(); ++i) r.table.rows.push_back({run.x[i], run.y[i]});
  r.plot.series.push_back(std::move(run));
  return r;
}

CommandResult mc_cmd(const Params& p, const RandomSource& src) {
  const std::string& mode = p.str("mode");
  McMode m;
  if (mode == "iid")
    m = McMode::Iid;
  else if (mode == "rotation")
    m = McMode::Rotation;
  else
    throw std::invalid_argument("--mode must be iid or rotation");
  const double power = p.real("power");
  if (!(power > -1.0)) throw std::invalid_argument("--power must exceed -1");
  const auto f = [power](double x) { return std::pow(x, power); };
  const double est = mc_integrate(f, m, p.count("n"), src, p.real("alpha"));
  const double exact = 1.0 / (power + 1.0);
  CommandResult r;
  r.payload = {{"estimate", est}, {"exact", exact}, {"abs_error", std::fabs(est - exact)}};
  return r;
}

}  // namespace

std::vector<Command> ergodic_commands() {
  return {
      {"ergodic", "weyl", "Leading digits of powers of two", [](Params& p) { p.add("kmax", "100000", "Largest power"); },
       weyl_cmd},
      {"ergodic", "gauss", "Continued-fraction digit frequencies under the Gauss map",
       [](Params& p) {
         p.add("seeds", "100", "Random starting points");
         p.add("digits", "10000", "Digits per start");
         p.add("max-digit", "64", "Digits above this are pooled");
         p.add("show", "10", "Digits to tabulate");
       },
       gauss_cmd},
      {"ergodic", "birkhoff", "Orbit average of an interval indicator",
       [](Params& p) {
         p.add("map", "rotation", "rotation or gauss");
         p.add("alpha", "0.41421356237309504880", "Rotation angle");
         p.add("x0", "0.1", "Starting point");
         p.add("n", "100000", "Orbit length");
         p.add("lo", "0", "Interval start");
         p.add("hi", "0.5", "Interval end");
       },
       birkhoff_cmd},
      {"ergodic", "mc", "Integral of x^power on [0,1] from iid points or a rotation orbit",
       [](Params& p) {
         p.add("mode", "iid", "iid or rotation");
         p.add("n", "100000", "Points");
         p.add("power", "2", "Exponent");
         p.add("alpha", "0.41421356237309504880", "Rotation angle");
       },
       mc_cmd},
  };
}

}  // namespace stochlab::cli
