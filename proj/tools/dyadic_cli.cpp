// dyadic: spectrum | certify | solve | construct | uniqueness

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dyadic/error.hpp"
#include "dyadic/export.hpp"
#include "dyadic/io.hpp"
#include "dyadic/run_config.hpp"
#include "dyadic/serialize.hpp"
#include "dyadic/solver.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/verify.hpp"

namespace {

using dyadic::ErrorKind;
using dyadic::RunConfig;
using dyadic::json::Json;

enum Exit { kPass = 0, kCheckFailed = 1, kValidation = 2, kSearch = 3, kNumeric = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Contract:
    case ErrorKind::Input:
    case ErrorKind::Domain:
      return kValidation;
    case ErrorKind::Search:
    case ErrorKind::Calibration:
      return kSearch;
    case ErrorKind::Range:
    case ErrorKind::Numeric:
    case ErrorKind::Divergence:
      return kNumeric;
  }
  return kNumeric;
}

// Raw flag text; only flags given on the command line override the config file.
struct Flags {
  double lambda = 0, beta = 0, q = 0, eps = 0, rtol = 0, atol = 0;
  double tol_residual = 0, tol_gluing = 0, tol_energy = 0, tol_uniqueness = 0;
  double t_end = 0, perturbation = 0;
  std::string shells, R, out, config, forcing, initial;
  std::uint64_t seed = 0;
};

void add_options(CLI::App* sub, Flags& f, bool dynamics) {
  sub->add_option("--lambda", f.lambda, "shell ratio (> 1)");
  sub->add_option("--beta", f.beta, "nonlinearity exponent");
  sub->add_option("--shells", f.shells, "number of shells (uniqueness: comma list, e.g. 8,12)");
  sub->add_option("--R", f.R, "rho threshold: auto (lambda^beta) or a number");
  sub->add_option("--q", f.q, "fixed plateau q instead of the search");
  sub->add_option("--eps", f.eps, "fixed ramp width instead of the calibration");
  sub->add_option("--rtol", f.rtol, "relative integrator tolerance");
  sub->add_option("--atol", f.atol, "absolute integrator tolerance");
  sub->add_option("--tol-residual", f.tol_residual, "residual tolerance");
  sub->add_option("--tol-gluing", f.tol_gluing, "gluing tolerance");
  sub->add_option("--tol-energy", f.tol_energy, "energy equality tolerance");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--config", f.config, "JSON run configuration; flags override it");
  sub->add_option("--seed", f.seed, "seed recorded with the run");
  if (dynamics) {
    sub->add_option("--forcing", f.forcing, "zero | constant:<c> | constructed");
    sub->add_option("--t-end", f.t_end, "final time");
    sub->add_option("--initial", f.initial, "initial data, comma separated");
    sub->add_option("--perturbation", f.perturbation, "size of the +- data perturbation");
    sub->add_option("--tol-uniqueness", f.tol_uniqueness, "distance tolerance for the uniqueness check");
  }
}

double parse_number(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  dyadic::require(pos == s.size() && pos > 0, ErrorKind::Input, std::string("bad ") + what + ": '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

RunConfig resolve(const std::string& command, CLI::App* sub, const Flags& f) {
  RunConfig c;
  c.command = command;
  if (sub->count("--config")) {
    c.config_file = f.config;
    c = dyadic::json::run_config_from_json(Json::parse(dyadic::io::read_file(f.config), nullptr, true, true), c);
    c.command = command;
  }
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--lambda")) c.lambda = f.lambda;
  if (given("--beta")) c.beta = f.beta;
  if (given("--shells")) {
    if (command == "uniqueness") {
      c.shell_list.clear();
      for (const auto& s : split(f.shells)) c.shell_list.push_back(static_cast<int>(parse_number(s, "shell count")));
    } else {
      const double n = parse_number(f.shells, "shell count");
      dyadic::require(n == std::floor(n), ErrorKind::Input, "--shells must be an integer");
      c.shells = static_cast<int>(n);
    }
  }
  if (given("--R")) c.R = f.R == "auto" ? 0.0 : parse_number(f.R, "--R");
  if (given("--q")) c.q = f.q;
  if (given("--eps")) c.eps = f.eps;
  if (given("--rtol")) c.rtol = f.rtol;
  if (given("--atol")) c.atol = f.atol;
  if (given("--tol-residual")) c.tol_residual = f.tol_residual;
  if (given("--tol-gluing")) c.tol_gluing = f.tol_gluing;
  if (given("--tol-energy")) c.tol_energy = f.tol_energy;
  if (given("--out")) c.out = f.out;
  if (given("--seed")) c.seed = f.seed;
  if (sub->get_option_no_throw("--forcing")) {
    if (given("--forcing")) c.forcing = f.forcing;
    if (given("--t-end")) c.t_end = f.t_end;
    if (given("--initial")) {
      c.initial.clear();
      for (const auto& s : split(f.initial)) c.initial.push_back(parse_number(s, "initial value"));
    }
    if (given("--perturbation")) c.perturbation = f.perturbation;
    if (given("--tol-uniqueness")) c.tol_uniqueness = f.tol_uniqueness;
  }
  c.validate();
  return c;
}

std::string path(const RunConfig& c, const std::string& name) { return c.out + "/" + name; }

void write_json(const RunConfig& c, const std::string& name, Json body) {
  body["metadata"] = dyadic::json::metadata(c);
  dyadic::io::ensure_directory(c.out);
  dyadic::io::write_file_atomic(path(c, name), dyadic::json::dump(body));
}

std::string csv_comment(const RunConfig& c) { return "config " + dyadic::json::to_json(c).dump(); }

int cmd_spectrum(const RunConfig& c) {
  const dyadic::Params p = c.params();
  const double R = p.effective_threshold();
  const dyadic::SpectralReport r = c.q > 0.0 ? dyadic::evaluate_q(c.q, p, R) : dyadic::find_q(p, R);
  Json body{{"pass", r.passed()}, {"config", dyadic::json::to_json(c)}, {"report", dyadic::json::to_json(r)}};
  write_json(c, "spectrum.json", body);
  std::cout << "spectrum: q=" << r.q << " rho=" << r.rho << (r.passed() ? " pass" : " fail (" + r.flags.first_failure() + ")")
            << "\n";
  return r.passed() ? kPass : kCheckFailed;
}

int cmd_certify(const RunConfig& c) {
  std::optional<dyadic::SplitFields> fields;
  const dyadic::Certificate cert = dyadic::certify_nonuniqueness(c.params(), c.shells, c.certify_options(), &fields);
  Json body{{"pass", cert.pass}, {"config", dyadic::json::to_json(c)}};
  const Json sections = dyadic::json::to_json(cert);
  for (const auto& [k, v] : sections.items())
    if (k != "pass") body[k] = v;
  dyadic::io::ensure_directory(c.out);
  dyadic::io::write_file_atomic(path(c, "fields.csv"), dyadic::io::fields_csv(*fields, csv_comment(c)));
  write_json(c, "certificate.json", body);
  std::cout << "certify: " << (cert.pass ? "pass" : "fail (" + cert.checks.first_failure() + ")")
            << " residual=" << cert.residual_sup << " gluing=" << cert.gluing.max_relative
            << " energy=" << cert.energy_defect << " distinctness=" << cert.distinctness << "\n";
  return cert.pass ? kPass : kCheckFailed;
}

int cmd_construct(const RunConfig& c) {
  dyadic::Params p = c.params();
  dyadic::SpectralReport spectral;
  dyadic::Calibration cal;
  const dyadic::SplitFields F = dyadic::build_fields(p, c.certify_options(), &spectral, &cal);
  Json body{{"config", dyadic::json::to_json(c)},
            {"params", dyadic::json::to_json(p)},
            {"spectral", dyadic::json::to_json(spectral)},
            {"calibration", dyadic::json::to_json(cal)},
            {"h_end", Json::array({F.h().endpoints()[0], F.h().endpoints()[1], F.h().endpoints()[2]})},
            {"h_err_estimate", F.h().err_estimate()}};
  dyadic::io::ensure_directory(c.out);
  dyadic::io::write_file_atomic(path(c, "fields.csv"), dyadic::io::fields_csv(F, csv_comment(c)));
  write_json(c, "construction.json", body);
  std::cout << "construct: q=" << spectral.q << " eps=" << cal.eps << " rho=" << cal.rho << "\n";
  return kPass;
}

int cmd_solve(const RunConfig& c) {
  dyadic::Params p = c.params();
  dyadic::SolveConfig s;
  s.n_shells = c.shells;
  s.rtol = c.rtol;
  s.atol = c.atol;
  dyadic::require(c.initial.empty() || static_cast<int>(c.initial.size()) == c.shells, ErrorKind::Input,
                  "--initial needs one value per shell");
  s.initial = c.initial.empty() ? dyadic::ShellVector(c.shells) : dyadic::ShellVector(c.initial);
  std::optional<dyadic::SplitFields> fields;
  if (c.forcing == "zero") {
  } else if (c.forcing.rfind("constant:", 0) == 0) {
    const double v = parse_number(c.forcing.substr(9), "forcing constant");
    s.forcing = [v](int, double) { return v; };
  } else if (c.forcing == "constructed") {
    fields.emplace(dyadic::build_fields(p, c.certify_options()));
    const dyadic::SplitFields* F = &*fields;
    s.forcing = [F](int n, double t) { return F->f(n, t); };
    for (double t : F->grid().points()) s.extra_times.push_back(t);
  } else {
    dyadic::fail(ErrorKind::Input, "unknown forcing '" + c.forcing + "'");
  }
  s.t_end = c.t_end > 0.0 ? c.t_end : (fields ? p.horizon : 1.0);
  if (fields) {
    std::erase_if(s.extra_times, [&](double t) { return t <= 0.0 || t >= s.t_end; });
  }
  const dyadic::GalerkinResult r = dyadic::galerkin_solve_report(s, p);
  dyadic::io::ensure_directory(c.out);
  dyadic::io::write_file_atomic(path(c, "trajectory.csv"), dyadic::io::trajectory_csv(r.traj, csv_comment(c)));
  std::cout << "solve: " << r.traj.size() << " samples, " << r.steps << " steps, error estimate " << r.err_estimate
            << "\n";
  return kPass;
}

int cmd_uniqueness(const RunConfig& c) {
  dyadic::UniquenessConfig u = dyadic::default_uniqueness_config();
  u.n_list = c.shell_list;
  u.perturbation = c.perturbation;
  if (c.t_end > 0.0) u.t_end = c.t_end;
  dyadic::Params p = c.params();
  const dyadic::UniquenessReport r = dyadic::uniqueness_experiment(p, u);
  const bool pass = r.max_pair_distance <= c.tol_uniqueness && r.max_perturbed_distance <= c.tol_uniqueness;
  Json body{{"pass", pass},
            {"config", dyadic::json::to_json(c)},
            {"tolerance", c.tol_uniqueness},
            {"report", dyadic::json::to_json(r)}};
  write_json(c, "uniqueness.json", body);
  std::cout << "uniqueness: pair distance " << r.max_pair_distance << ", perturbed distance "
            << r.max_perturbed_distance << (pass ? " pass" : " fail") << "\n";
  return pass ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the dyadic model: spectra, constructions, certificates, Galerkin runs"};
  app.require_subcommand(1);
  Flags f;
  struct Command {
    const char* name;
    const char* help;
    bool dynamics;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"spectrum", "search q and report the spectral bounds", false, cmd_spectrum},
      {"certify", "build and check the two solutions", false, cmd_certify},
      {"construct", "build the fields and write them as CSV", false, cmd_construct},
      {"solve", "integrate a Galerkin truncation", true, cmd_solve},
      {"uniqueness", "resolution and perturbation experiment for beta <= 2", true, cmd_uniqueness},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_options(sub, f, cmd.dynamics);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const RunConfig c = resolve(commands[i].name, subs[i], f);
      return commands[i].run(c);
    } catch (const dyadic::Error& e) {
      std::cerr << "error (" << dyadic::to_string(e.kind()) << "): " << e.what() << "\n";
      return exit_code(e.kind());
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error (input): " << e.what() << "\n";
      return kValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kNumeric;
    }
  }
  return kValidation;
}
