#include "dyadic/serialize.hpp"

#include <cmath>
#include <set>

#include "dyadic/error.hpp"

#ifndef DYADIC_VERSION
#define DYADIC_VERSION "0.0.0"
#endif

namespace dyadic::json {

namespace {

Json vec(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

template <class T>
Json list(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x);
  return out;
}

Json complex(std::complex<double> w) { return Json{{"re", w.real()}, {"im", w.imag()}}; }

Json residual(const ResidualReport& r) {
  return Json{{"sup", r.sup}, {"normalized", list(r.normalized)}, {"absolute", list(r.absolute)}};
}

Json energy(const EnergyReport& e) {
  return Json{{"max_defect", e.max_defect},    {"scale", e.scale}, {"tail_estimate", e.tail_estimate},
              {"t", list(e.t)},                {"lhs", list(e.lhs)}, {"rhs", list(e.rhs)},
              {"flux", list(e.flux)}};
}

Json rows4(const std::vector<std::array<double, 4>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(Json::array({r[0], r[1], r[2], r[3]}));
  return out;
}

Json step(const CalibrationStep& s) {
  return Json{{"eps", s.eps},
              {"apriori_bound", s.apriori_bound},
              {"measured_diff", s.measured_diff},
              {"rho", s.rho},
              {"discriminant", s.discriminant},
              {"passed", s.passed}};
}

}  // namespace

Json to_json(const Params& p) {
  return Json{{"lambda", p.lambda},
              {"beta", p.beta},
              {"n_shells", p.n_shells},
              {"R", p.effective_threshold()},
              {"horizon", p.horizon}};
}

Json to_json(const Flags& f) {
  Json out = Json::object();
  for (const auto& [name, ok] : f.items()) out[name] = ok;
  return out;
}

Json to_json(const EigenBasis& b) {
  return Json{{"kappa", b.kappa}, {"w", complex(b.w)}, {"v1", vec(b.v1)}, {"v2", vec(b.v2)}, {"v3", vec(b.v3)}};
}

Json to_json(const Mat3& m) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) out.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return out;
}

Json to_json(const SpectralReport& r) {
  return Json{{"pass", r.passed()},
              {"lambda", r.lambda},
              {"beta", r.beta},
              {"R", r.R},
              {"q", r.q},
              {"q0", r.q0},
              {"basis", to_json(r.basis)},
              {"basis0", to_json(r.basis0)},
              {"mu", r.mu},
              {"nu", r.nu},
              {"k", r.k},
              {"a", r.a},
              {"b", r.b},
              {"omega", r.omega},
              {"omega_limit", r.omega_limit},
              {"U", r.U},
              {"V", r.V},
              {"W", r.W},
              {"discriminant", r.discriminant},
              {"rho1", r.rho1},
              {"rho2", r.rho2},
              {"rho", r.rho},
              {"y", r.y},
              {"z", r.z},
              {"B", to_json(r.B)},
              {"eigen_residual", r.eigen_residual},
              {"block_residual", r.block_residual},
              {"re_w_positive", r.re_w_positive},
              {"flags", to_json(r.flags)}};
}

Json to_json(const Calibration& c) {
  Json trace = Json::array();
  for (const auto& s : c.trace) trace.push_back(step(s));
  return Json{{"eps", c.eps},
              {"p", {{"plateau", c.p.plateau()}, {"eps", c.p.ramp()}}},
              {"q", {{"plateau", c.q.plateau()}, {"eps", c.q.ramp()}}},
              {"rho", c.rho},
              {"rho2", c.rho2},
              {"y", c.y},
              {"z", c.z},
              {"eigvec_shift", c.eigvec_shift},
              {"apriori_bound", c.apriori_bound},
              {"measured_diff", c.measured_diff},
              {"block_residual", c.block_residual},
              {"B", to_json(c.B)},
              {"B_const", to_json(c.B_const)},
              {"trace", trace}};
}

Json to_json(const Certificate& c) {
  Json trace = Json::array();
  for (const auto& s : c.calibration_trace) trace.push_back(step(s));
  const auto& t = c.options.tol;
  Json out;
  out["pass"] = c.pass;
  out["checks"] = to_json(c.checks);
  out["provenance"] = Json{{"params", to_json(c.params)},
                           {"q", c.q},
                           {"eps", c.eps},
                           {"rho", c.rho},
                           {"rho2", c.rho2},
                           {"y", c.y},
                           {"z", c.z},
                           {"profiles",
                            {{"p", {{"plateau", c.q / 2.0}, {"eps", c.eps}}}, {"q", {{"plateau", c.q}, {"eps", c.eps}}}}},
                           {"tolerances",
                            {{"residual", t.residual},
                             {"gluing", t.gluing},
                             {"energy", t.energy},
                             {"forcing_ratio", t.forcing_ratio},
                             {"forcing_agreement", t.forcing_agreement},
                             {"h_tol", c.options.h_tol},
                             {"margin", c.options.margin},
                             {"per_branch", c.options.per_branch}}},
                           {"q_fixed", c.options.q > 0.0},
                           {"eps_fixed", c.options.eps > 0.0}};
  out["spectral"] = to_json(c.spectral);
  out["calibration"] = Json{{"apriori_bound", c.calibration_apriori},
                            {"measured_diff", c.calibration_measured},
                            {"eigvec_shift", c.eigvec_shift},
                            {"trace", trace}};
  out["h"] = Json{{"end", vec(c.h_end)}, {"top_end", vec(c.h_top_end)}, {"err_estimate", c.h_err}, {"steps", c.h_steps}};
  out["residual"] = Json{{"sup", c.residual_sup},
                         {"tolerance", t.residual},
                         {"plus", residual(c.residual_plus)},
                         {"minus", residual(c.residual_minus)}};
  out["gluing"] = Json{{"max_relative", c.gluing.max_relative},
                       {"tolerance", t.gluing},
                       {"h1_defect", c.gluing.h1_defect},
                       {"h2_defect", c.gluing.h2_defect},
                       {"absolute", rows4(c.gluing.absolute)},
                       {"relative", rows4(c.gluing.relative)}};
  out["energy"] = Json{{"max_defect", c.energy_defect},
                       {"tolerance", t.energy},
                       {"plus", energy(c.energy_plus)},
                       {"minus", energy(c.energy_minus)}};
  out["forcing"] = Json{{"ratio_deviation", c.forcing_ratio_deviation},
                        {"ratio_tolerance", t.forcing_ratio},
                        {"expected_ratio", c.forcing.expected_ratio},
                        {"agreement", c.forcing_agreement},
                        {"agreement_tolerance", t.forcing_agreement},
                        {"terms", list(c.forcing.terms)},
                        {"partials", list(c.forcing.partials)},
                        {"ratios", list(c.forcing.ratios)}};
  out["distinctness"] = Json{{"value", c.distinctness},
                             {"relative", c.distinctness_relative},
                             {"g_sup_sq", c.g_sup_sq}};
  out["leray_hopf"] = Json{{"flags", to_json(c.leray)},
                           {"sup_energy_plus", c.sup_energy_plus},
                           {"sup_energy_minus", c.sup_energy_minus},
                           {"dissipation_terms", list(c.dissipation_terms)},
                           {"dissipation_ratios", list(c.dissipation_ratios)},
                           {"tail_ratio_energy", c.decay.expected_ratio_v * c.decay.expected_ratio_v}};
  out["decay"] = Json{{"sup_v", list(c.decay.sup_v)},
                      {"sup_g", list(c.decay.sup_g)},
                      {"sup_f", list(c.decay.sup_f)},
                      {"ratio_v", list(c.decay.ratio_v)},
                      {"ratio_g", list(c.decay.ratio_g)},
                      {"expected_ratio_v", c.decay.expected_ratio_v},
                      {"expected_ratio_g", c.decay.expected_ratio_g}};
  return out;
}

Json to_json(const UniquenessReport& r) {
  Json runs = Json::array();
  for (const auto& u : r.runs) {
    runs.push_back(Json{{"n_shells", u.n_shells},
                        {"perturbed_distance_end", u.perturbed_distance_end},
                        {"phi_start", u.phi_start},
                        {"phi_end", u.phi_end},
                        {"phi_max", u.phi_max},
                        {"end_state", list(u.end_state)},
                        {"mid_state", list(u.mid_state)},
                        {"tails", list(u.tails)}});
  }
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(Json{{"n_i", static_cast<int>(p[0])},
                         {"n_j", static_cast<int>(p[1])},
                         {"distance_end", p[2]},
                         {"distance_mid", p[3]}});
  }
  return Json{{"max_pair_distance", r.max_pair_distance},
              {"max_perturbed_distance", r.max_perturbed_distance},
              {"tails_monotone", r.tails_monotone},
              {"pairs", pairs},
              {"runs", runs}};
}

Json to_json(const RunConfig& c) {
  return Json{{"command", c.command},
              {"lambda", c.lambda},
              {"beta", c.beta},
              {"n_shells", c.shells},
              {"R", c.R > 0.0 ? Json(c.R) : Json("auto")},
              {"q", c.q},
              {"eps", c.eps},
              {"rtol", c.rtol},
              {"atol", c.atol},
              {"tol_residual", c.tol_residual},
              {"tol_gluing", c.tol_gluing},
              {"tol_energy", c.tol_energy},
              {"seed", c.seed},
              {"t_end", c.t_end},
              {"forcing", c.forcing},
              {"initial", list(c.initial)},
              {"shell_list", list(c.shell_list)},
              {"perturbation", c.perturbation},
              {"tol_uniqueness", c.tol_uniqueness}};
}

namespace {

double number(const Json& v, const std::string& key) {
  require(v.is_number(), ErrorKind::Input, "config key '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& v, const std::string& key) {
  require(v.is_number_integer(), ErrorKind::Input, "config key '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

RunConfig run_config_from_json(const Json& j, RunConfig c) {
  require(j.is_object(), ErrorKind::Input, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      require(v.is_string(), ErrorKind::Input, "config key 'command' must be a string");
      c.command = v.get<std::string>();
    } else if (key == "lambda") {
      c.lambda = number(v, key);
    } else if (key == "beta") {
      c.beta = number(v, key);
    } else if (key == "n_shells" || key == "shells") {
      c.shells = integer(v, key);
    } else if (key == "R") {
      if (v.is_string()) {
        require(v.get<std::string>() == "auto", ErrorKind::Input, "config key 'R' must be a number or \"auto\"");
        c.R = 0.0;
      } else {
        c.R = number(v, key);
      }
    } else if (key == "q") {
      c.q = number(v, key);
    } else if (key == "eps") {
      c.eps = number(v, key);
    } else if (key == "rtol") {
      c.rtol = number(v, key);
    } else if (key == "atol") {
      c.atol = number(v, key);
    } else if (key == "tol_residual") {
      c.tol_residual = number(v, key);
    } else if (key == "tol_gluing") {
      c.tol_gluing = number(v, key);
    } else if (key == "tol_energy") {
      c.tol_energy = number(v, key);
    } else if (key == "tol_uniqueness") {
      c.tol_uniqueness = number(v, key);
    } else if (key == "seed") {
      require(v.is_number_unsigned(), ErrorKind::Input, "config key 'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "t_end") {
      c.t_end = number(v, key);
    } else if (key == "forcing") {
      require(v.is_string(), ErrorKind::Input, "config key 'forcing' must be a string");
      c.forcing = v.get<std::string>();
    } else if (key == "initial") {
      require(v.is_array(), ErrorKind::Input, "config key 'initial' must be an array");
      c.initial.clear();
      for (const auto& x : v) c.initial.push_back(number(x, key));
    } else if (key == "shell_list") {
      require(v.is_array(), ErrorKind::Input, "config key 'shell_list' must be an array");
      c.shell_list.clear();
      for (const auto& x : v) c.shell_list.push_back(integer(x, key));
    } else if (key == "perturbation") {
      c.perturbation = number(v, key);
    } else if (key == "out") {
      require(v.is_string(), ErrorKind::Input, "config key 'out' must be a string");
      c.out = v.get<std::string>();
    } else {
      fail(ErrorKind::Input, "unknown config key '" + key + "'");
    }
  }
  return c;
}

Json metadata(const RunConfig& c) {
  return Json{{"tool", "dyadic"}, {"version", DYADIC_VERSION}, {"out", c.out}, {"config_file", c.config_file}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dyadic::json
