#pragma once

// End-to-end checks of the constructed pair u+ = v + g, u- = v - g, and the
// numerical experiments for the uniqueness regime beta <= 2.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/construction.hpp"
#include "dyadic/flags.hpp"
#include "dyadic/profiles.hpp"
#include "dyadic/solver.hpp"
#include "dyadic/spectral.hpp"

namespace dyadic {

/// Sample times for shell n: `per_branch` points inside each branch interval within [0, T],
/// kept 2^-40 of the branch width away from its ends.
std::vector<double> residual_sample_grid(const SplitFields& fields, int n, int per_branch = 64);

struct ResidualReport {
  std::vector<double> normalized;  // per shell: sup |residual| / (lambda^{2n} sup |u_n|)
  std::vector<double> absolute;    // per shell: sup |residual|
  double sup = 0.0;                // max of normalized
};

/// Residual of the shell system for u = v + sign g at the sample grid, with du/dt from the profile
/// derivative and the derivative of the dense h interpolant.
ResidualReport residual_system1(const SplitFields& fields, int sign, int per_branch = 64);

/// The split-system g-equation left-hand side G_n(t), evaluated with the dense interpolant.
double g_equation_residual(const SplitFields& fields, int n, double t);

struct GluingReport {
  double h1_defect = 0.0;  // |h1(1) - rho y| / (|rho y| + |rho z|)
  double h2_defect = 0.0;  // |h2(1) - rho z| / (|rho y| + |rho z|)
  std::vector<std::array<double, 4>> absolute;  // per shell, jumps at t_{n+1}, t_n, t_{n-1}, t_{n-2}
  std::vector<std::array<double, 4>> relative;  // divided by the size of the glued value
  double max_relative = 0.0;
};

/// Jumps of g_n at the interior grid points of [0, T].
GluingReport gluing_defects(const SplitFields& fields);

struct EnergyReport {
  std::vector<double> t, lhs, rhs;  // lhs includes the boundary flux through shell N+1
  std::vector<double> flux;         // 2 lambda^{beta(N+1)} int u_N^2 u_{N+1}
  double max_defect = 0.0;          // max |lhs - rhs| / scale
  double scale = 0.0;               // max |lhs|
  double tail_estimate = 0.0;       // shells > N, from the geometric decay of the last shell
};

/// Energy equality sum u_n^2 + 2 sum lambda^{2n} int u_n^2 + flux = 2 sum int f_n u_n over shells
/// 1..N, at every t_k and cell midpoint in [0, T], by the branch-aligned Gauss rules.
EnergyReport energy_equality(const SplitFields& fields, int sign);

struct Tolerances {
  double residual = 1e-6;
  double gluing = 1e-8;
  double energy = 1e-6;
  double forcing_ratio = 0.1;    // relative deviation of the forcing tail ratio
  double forcing_agreement = 1e-10;
};

struct CertifyOptions {
  Tolerances tol;
  double h_tol = 1e-10;  // integrator tolerance for h
  double margin = 0.1;   // calibration margin on |rho| > R
  double q = 0.0;        // fixed q (sufficient bounds not required); 0 searches
  double eps = 0.0;      // fixed ramp width; 0 calibrates
  int per_branch = 64;
  SearchOptions search;
  CalibrationOptions calibration;
};

struct Certificate {
  Params params;
  CertifyOptions options;
  SpectralReport spectral;
  double q = 0.0, eps = 0.0, rho = 0.0, rho2 = 0.0, y = 0.0, z = 0.0;
  double calibration_apriori = 0.0, calibration_measured = 0.0, eigvec_shift = 0.0;
  std::vector<CalibrationStep> calibration_trace;
  Vec3 h_end{}, h_top_end{};
  double h_err = 0.0;
  std::size_t h_steps = 0;

  ResidualReport residual_plus, residual_minus;
  double residual_sup = 0.0;
  GluingReport gluing;
  EnergyReport energy_plus, energy_minus;
  double energy_defect = 0.0;
  ForcingPartials forcing;
  double forcing_ratio_deviation = 0.0;  // max over shells 5..N of |ratio / expected - 1|
  double forcing_agreement = 0.0;        // sup |f from u+ - f from u-| / sup |f|
  double distinctness = 0.0;             // sup_t sum (u+ - u-)^2 = 4 sup_t sum g^2
  double distinctness_relative = 0.0;    // distinctness / sup_t sum (u+-)^2
  double g_sup_sq = 0.0;                 // sup_t sum g^2
  double sup_energy_plus = 0.0, sup_energy_minus = 0.0;
  std::vector<double> dissipation_terms;  // lambda^{2n} int (u+_n)^2
  std::vector<double> dissipation_ratios;
  DecayReport decay;
  Flags leray;
  Flags checks;
  bool pass = false;
};

/// find_q -> calibrate_profiles -> solve_h -> assembly -> checks. Errors from a stage are rethrown
/// with the stage name prefixed. Throws Domain unless beta > 2 and lambda > 1.
/// When `fields_out` is given it receives the certified fields.
Certificate certify_nonuniqueness(const Params& p, int N, const CertifyOptions& opt = {},
                                  std::optional<SplitFields>* fields_out = nullptr);

/// Fields for the given configuration, running the same search and calibration as certify.
SplitFields build_fields(const Params& p, const CertifyOptions& opt, SpectralReport* spectral = nullptr,
                         Calibration* calibration = nullptr);

struct UniquenessConfig {
  std::vector<int> n_list{8, 12};
  double perturbation = 1e-6;
  double t_end = 1.0;
  double rtol = 1e-11, atol = 1e-13;
  std::function<double(int)> initial;  // a_n
  ForcingFn forcing;
};

/// Default smooth experiment: a_n = 2^-n, f_1 = 1 + sin(2 pi t) / 2, other shells unforced.
UniquenessConfig default_uniqueness_config();

struct UniquenessRun {
  int n_shells = 0;
  std::vector<double> end_state, mid_state;
  double perturbed_distance_end = 0.0;  // |u(a + d) - u(a - d)| at t_end
  double phi_start = 0.0, phi_end = 0.0, phi_max = 0.0;  // Phi = sum (u(a+d) - u(a-d))^2
  std::vector<double> tails;  // sup_t sum_{n >= m} u_n^2, m = 1..N
};

struct UniquenessReport {
  std::vector<UniquenessRun> runs;
  std::vector<std::array<double, 4>> pairs;  // N_i, N_j, distance at t_end, distance at t_end / 2
  double max_pair_distance = 0.0;
  double max_perturbed_distance = 0.0;
  bool tails_monotone = true;
};

/// Throws Domain unless beta <= 2.
UniquenessReport uniqueness_experiment(const Params& p, const UniquenessConfig& cfg);

}  // namespace dyadic
