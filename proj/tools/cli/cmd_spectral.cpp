#include <cmath>

#include "commands.hpp"
#include "stochlab/io.hpp"
#include "stochlab/spectral.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::spectral;

CorrelationFunction kernel(const Params& p) {
  const std::string& k = p.str("kernel");
  if (k == "exponential") return CorrelationFunction::exponential(p.real("d"), p.real("a"));
  if (k == "band") return CorrelationFunction::band_limited(p.real("sigma2"), p.real("nu0"));
  if (k == "white") return CorrelationFunction::white_noise(p.real("sigma2"));
  if (k == "constant") return CorrelationFunction::constant(p.real("d"));
  if (k == "cosine") return CorrelationFunction::cosine(p.real("d"), p.real("nu0"));
  if (k == "ar1") {
    const double phi = p.real("phi"), s2 = p.real("sigma2");
    if (!(std::fabs(phi) < 1.0)) throw std::invalid_argument("--phi must lie in (-1, 1)");
    return {[=](double t) { return s2 * std::pow(phi, std::fabs(std::round(t))) / (1.0 - phi * phi); },
            TimeDomain::Discrete, "ar1"};
  }
  if (k == "rect") {
    const double s2 = p.real("sigma2"), t0 = p.real("t0");
    return {[=](double t) { return std::fabs(t) <= t0 ? s2 : 0.0; }, TimeDomain::Continuous, "rect"};
  }
  if (k == "punctured") {
    const double s2 = p.real("sigma2"), t0 = p.real("t0");
    return {[=](double t) { return t != 0.0 && std::fabs(t) <= t0 ? s2 : 0.0; }, TimeDomain::Continuous, "punctured"};
  }
  if (k == "file") {
    if (!p.has("correlation")) throw std::invalid_argument("--kernel file needs --correlation");
    return io::read_correlation_csv(p.str("correlation"));
  }
  throw std::invalid_argument("unknown --kernel '" + k + "'");
}

SpectralDensity density(const Params& p) {
  const std::string& k = p.str("density");
  if (k == "lorentzian") return SpectralDensity::lorentzian(p.real("d"), p.real("a"));
  if (k == "band") return SpectralDensity::band(p.real("sigma2"), p.real("nu0"));
  if (k == "flat") return SpectralDensity::flat_discrete(p.real("d"));
  throw std::invalid_argument("unknown --density '" + k + "'");
}

void kernel_params(Params& p) {
  p.add("kernel", "exponential", "exponential, band, white, constant, cosine, ar1, rect, punctured, file");
  p.add("d", "1", "Amplitude D");
  p.add("a", "1", "Decay rate a");
  p.add("sigma2", "1", "Variance sigma^2");
  p.add("nu0", "1", "Band edge or frequency");
  p.add("phi", "0.5", "AR(1) coefficient");
  p.add("t0", "1", "Window half-width");
  p.optional("correlation", "tau,R table for --kernel file");
}

void density_params(Params& p) {
  p.add("density", "lorentzian", "lorentzian, band, flat");
  p.add("d", "1", "Amplitude D or flat level");
  p.add("a", "1", "Decay rate a");
  p.add("sigma2", "1", "Variance sigma^2");
  p.add("nu0", "1", "Band edge");
}

CommandResult density_cmd(const Params& p, const RandomSource&) {
  const auto r = kernel(p);
  const auto rho = correlation_to_density(r);
  const double top = r.domain == TimeDomain::Discrete ? std::min(p.real("nu-max"), rho.support) : p.real("nu-max");
  const auto nus = linspace(0.0, top, p.count("points"));
  CommandResult out;
  Series s{"rho", nus, {}};
  out.table.header = {"nu", "rho"};
  for (double nu : nus) {
    s.y.push_back(rho(nu));
    out.table.rows.push_back({nu, s.y.back()});
  }
  out.payload = {{"kernel", r.tag},
                 {"domain", r.domain == TimeDomain::Discrete ? "discrete" : "continuous"},
                 {"nu", nus},
                 {"rho", s.y}};
  out.plot.series.push_back(std::move(s));
  return out;
}

CommandResult correlation_cmd(const Params& p, const RandomSource&) {
  const auto rho = density(p);
  const auto r = density_to_correlation(rho);
  const auto taus = linspace(0.0, p.real("tau-max"), p.count("points"));
  CommandResult out;
  Series s{"R", taus, {}};
  // header matches the correlation loader
  out.table.header = {"tau", "R"};
  for (double t : taus) {
    s.y.push_back(r(t));
    out.table.rows.push_back({t, s.y.back()});
  }
  out.payload = {{"density", rho.tag}, {"tau", taus}, {"R", s.y}};
  out.plot.series.push_back(std::move(s));
  return out;
}

CommandResult psd_cmd(const Params& p, const RandomSource&) {
  const auto r = kernel(p);
  const auto times = p.reals("times");
  const auto chk = check_nonneg_definite(r.r, times);
  CommandResult out;
  out.payload = {{"kernel", r.tag}, {"times", times}, {"nonnegative", chk.nonnegative},
                 {"min_eigenvalue", chk.min_eigenvalue}};
  return out;
}

CommandResult criterion_cmd(const Params& p, const RandomSource&) {
  const auto r = kernel(p);
  const double t = p.real("time");
  CommandResult out;
  Series s{"J", {}, {}};
  const double j = ergodicity_criterion(r.r, t);
  out.payload = {{"kernel", r.tag}, {"time", t}, {"J", j}};
  if (p.str("kernel") == "exponential") {
    const double d = p.real("d"), a = p.real("a");
    out.payload["closed_form"] = 2.0 * d * (a * t - 1.0 + std::exp(-a * t)) / (a * a * t * t);
  }
  if (p.has("curve-points")) {
    out.table.header = {"T", "J"};
    for (double tt : linspace(t / static_cast<double>(p.count("curve-points")), t, p.count("curve-points"))) {
      s.x.push_back(tt);
      s.y.push_back(ergodicity_criterion(r.r, tt));
      out.table.rows.push_back({tt, s.y.back()});
    }
    out.plot.series.push_back(std::move(s));
  }
  return out;
}

CommandResult filter_cmd(const Params& p, const RandomSource&) {
  const auto out_rho = linear_filter_density(density(p), p.reals("coefficients"));
  const auto nus = linspace(0.0, p.real("nu-max"), p.count("points"));
  CommandResult out;
  Series s{"rho_out", nus, {}};
  out.table.header = {"nu", "rho"};
  for (double nu : nus) {
    s.y.push_back(out_rho(nu));
    out.table.rows.push_back({nu, s.y.back()});
  }
  out.payload = {{"nu", nus}, {"rho", s.y}};
  out.plot.series.push_back(std::move(s));
  return out;
}

}  // namespace

std::vector<Command> spectral_commands() {
  return {
      {"spectral", "density", "Spectral density of a correlation function",
       [](Params& p) {
         kernel_params(p);
         p.add("nu-max", "10", "Largest frequency");
         p.add("points", "101", "Grid points");
       },
       density_cmd},
      {"spectral", "correlation", "Correlation function of a spectral density (tau,R table)",
       [](Params& p) {
         density_params(p);
         p.add("tau-max", "10", "Largest lag");
         p.add("points", "101", "Grid points");
       },
       correlation_cmd},
      {"spectral", "psd", "Nonnegative-definiteness check on a set of times",
       [](Params& p) {
         kernel_params(p);
         p.add("times", "0,0.5,1,1.5", "Times, comma separated");
       },
       psd_cmd},
      {"spectral", "criterion", "Ergodicity-in-mean criterion J(T)",
       [](Params& p) {
         kernel_params(p);
         p.add("time", "10", "Horizon T");
         p.optional("curve-points", "Also tabulate J on this many horizons up to T");
       },
       criterion_cmd},
      {"spectral", "filter", "Output density of a linear filter sum a_k D^k x = input",
       [](Params& p) {
         density_params(p);
         p.add("coefficients", "1,1", "a_0, a_1, ...");
         p.add("nu-max", "10", "Largest frequency");
         p.add("points", "101", "Grid points");
       },
       filter_cmd},
  };
}

}  // namespace stochlab::cli
