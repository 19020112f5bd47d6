// One line per acceptance criterion; exit status 0 only when every line passes.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>

#include "dyadic/io.hpp"
#include "dyadic/quadrature.hpp"
#include "dyadic/serialize.hpp"
#include "dyadic/solver.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/texp.hpp"
#include "dyadic/verify.hpp"
#include "support/gen.hpp"

using namespace dyadic;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Params P(double lambda, double beta, int n = 1) {
  Params p;
  p.lambda = lambda;
  p.beta = beta;
  p.n_shells = n;
  return p;
}

double rel_diff(const Mat3& a, const Mat3& b) { return norm_op(a - b) / std::max(1.0, norm_op(b)); }

Outcome spectral_bounds() {
  const auto t0 = std::chrono::steady_clock::now();
  const EigenBasis b = eig_A0(P(2.0, 2.5));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double sum = b.kappa + 2.0 * b.w.real();
  const bool ok = b.kappa > 0.75 && b.kappa < 1.0 && b.w.real() > 0.0 && b.w.real() < 0.125 && b.w.imag() > 0.0 &&
                  std::abs(sum - 1.0) <= 1e-12 && secs < 1.0;
  return {ok, fmt("kappa=%.17g Re w=%.6g Im w=%.6g |kappa+2Re w-1|=%.2g", b.kappa, b.w.real(), b.w.imag(),
                  std::abs(sum - 1.0)) +
                  fmt(" (%.3f s)", secs)};
}

Outcome chi_at_one() {
  double worst = 0.0;
  int tested = 0;
  for (double lambda : {1.1, 1.5, 2.0, 3.0, 4.0})
    for (double beta : {0.5, 1.0, 1.5, 2.0, 2.1, 2.5, 3.0}) {
      worst = std::max(worst, std::abs(char_poly_A0(1.0, P(lambda, beta)) - 0.5));
      ++tested;
    }
  return {worst <= 1e-15, fmt("max |chi(1) - 1/2| = %.3g over %.0f (lambda, beta) pairs", worst, tested)};
}

Outcome texp_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr double tol = 1e-12;
  gen::Engine e(1001);
  double worst_const = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Mat3 m = gen::matrix(e, 2.0);
    worst_const = std::max(worst_const, rel_diff(texp(MatrixPath::constant(0.0, 1.0, m), tol), expm(m)));
  }
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = gen::uniform(e, -1.0, 0.0), b = a + gen::uniform(e, 0.2, 1.5);
    const double c = b + gen::uniform(e, 0.2, 1.5);
    const MatrixPath full = gen::smooth_path(e, a, c);
    const Mat3 Bac = texp(full, tol);
    const Mat3 Bab = texp(MatrixPath(a, b, [full](double t) { return full(t); }), tol);
    const Mat3 Bbc = texp(MatrixPath(b, c, [full](double t) { return full(t); }), tol);
    const bool cocycle =
        rel_diff(Bbc * Bab, Bac) <= 10 * tol * std::max(1.0, norm_op(Bbc) * norm_op(Bab) / norm_op(Bac));
    const double int_trace = quad::adaptive([&](double t) { return trace(full(t)); }, a, c, 1e-15, 1e-15);
    const bool liouville = std::abs(det(Bac) / std::exp(int_trace) - 1.0) <=
                           10 * tol * std::pow(norm_op(Bac), 3) / std::abs(det(Bac));
    if (!cocycle || !liouville) ++bad;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst_const <= 1e-10 && bad == 0 && secs < 10.0,
          fmt("constant paths vs expm %.2g; cocycle/Liouville failures %.0f of 100 (%.2f s)", worst_const, bad, secs)};
}

Outcome continuity_bound() {
  constexpr double tol = 1e-12;
  gen::Engine e(1002);
  int violations = 0;
  double tightest = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MatrixPath p1 = gen::smooth_path(e, 0.0, 1.0);
    const double eps = std::pow(10.0, gen::uniform(e, -6.0, 0.0));
    const Mat3 d = gen::matrix(e, eps);
    const double w = gen::uniform(e, 1.0, 10.0);
    const MatrixPath p2(0.0, 1.0, [=](double t) { return p1(t) + std::cos(w * t) * d; });
    const double gap = norm_op(texp(p1, tol) - texp(p2, tol));
    const double bound = texp_continuity_bound(p1, p2);
    if (gap > bound) ++violations;
    tightest = std::max(tightest, gap / bound);
  }
  return {violations == 0, fmt("violations %.0f of 100, max gap/bound %.3g", violations, tightest)};
}

struct Standard {
  Certificate cert;
  double secs = 0.0;
};

const Standard& standard() {
  static const Standard s = [] {
    Standard out;
    const auto t0 = std::chrono::steady_clock::now();
    out.cert = certify_nonuniqueness(Params::for_construction(2.0, 2.5, 10), 10);
    out.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }();
  return s;
}

Outcome gluing() {
  const Certificate& c = standard().cert;
  const double worst = std::max(c.gluing.h1_defect, c.gluing.h2_defect);
  return {worst <= 1e-8, fmt("rho=%.6g y=%.6g z=%.6g, max endpoint defect %.3g", c.rho, c.y, c.z, worst)};
}

Outcome end_to_end() {
  const Standard& s = standard();
  const Certificate& c = s.cert;
  const double residual = std::max(c.residual_plus.sup, c.residual_minus.sup);
  const double energy = std::max(c.energy_plus.max_defect, c.energy_minus.max_defect);
  double ratio_dev = 0.0;
  for (int m = 5; m <= 10; ++m)
    ratio_dev = std::max(ratio_dev, std::abs(c.forcing.ratios[m - 2] / c.forcing.expected_ratio - 1.0));
  const bool ok = c.pass && residual <= 1e-6 && energy <= 1e-6 && c.distinctness > 0.0 && ratio_dev <= 0.1 &&
                  s.secs < 60.0;
  return {ok, fmt("residual %.3g, energy %.3g, distinctness %.3g, forcing ratio deviation %.3g", residual, energy,
                  c.distinctness, ratio_dev) +
                  fmt(" (%.2f s)", s.secs)};
}

Outcome orthogonality() {
  gen::Engine e(1007);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int N = gen::integer(e, 1, 16);
    const Params p = P(gen::uniform(e, 1.1, 3.0), gen::uniform(e, 0.5, 3.5), N);
    const ShellVector u = gen::shell_vector(e, N);
    const double scale = nonlinear_energy_flux_scale(u, p);
    if (scale > 0.0) worst = std::max(worst, std::abs(nonlinear_energy_flux(u, p)) / scale);
  }
  return {worst <= 1e-12, fmt("max relative flux %.3g over 1000 states", worst)};
}

Outcome positivity() {
  gen::Engine e(1008);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = std::array<double, 3>{1.0, 2.0, 2.5}[trial % 3];
    const int N = gen::integer(e, 1, 8);
    SolveConfig s;
    s.n_shells = N;
    s.t_end = 0.5;
    s.initial = ShellVector(N);
    std::vector<double> amp(N), freq(N);
    for (int i = 0; i < N; ++i) {
      s.initial[i] = gen::uniform(e, 0.0, 1.0) * std::pow(2.0, -i);
      amp[i] = gen::integer(e, 0, 2) == 0 ? 0.0 : gen::uniform(e, 0.0, 2.0);
      freq[i] = gen::uniform(e, 1.0, 10.0);
    }
    s.forcing = [amp, freq](int n, double t) { return amp[n - 1] * (1.0 + std::sin(freq[n - 1] * t)); };
    const Trajectory tr = galerkin_solve(s, P(2.0, beta, N));
    for (const auto& u : tr.states)
      for (std::size_t i = 0; i < u.size(); ++i) worst = std::min(worst, u[i]);
  }
  return {worst >= -1e-9, fmt("min u_n over 100 runs %.3g", worst)};
}

Outcome uniqueness() {
  const auto t0 = std::chrono::steady_clock::now();
  const UniquenessReport r = uniqueness_experiment(P(2.0, 2.0, 12), default_uniqueness_config());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.max_pair_distance <= 1e-5 && r.max_perturbed_distance <= 1e-5 && secs < 30.0,
          fmt("N=8 vs 12 distance %.3g, perturbed distance %.3g (%.2f s)", r.max_pair_distance,
              r.max_perturbed_distance, secs)};
}

Outcome closed_form() {
  SolveConfig s;
  s.n_shells = 1;
  s.t_end = 1.0;
  s.initial = ShellVector(1);
  s.forcing = [](int, double) { return 1.0; };
  const Trajectory tr = galerkin_solve(s, P(2.0, 2.5, 1));
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    worst = std::max(worst, std::abs(tr.states[i][0] - 0.25 * (1.0 - std::exp(-4.0 * tr.grid[i]))));
  return {worst <= 1e-9, fmt("max error %.3g at %.0f samples", worst, static_cast<double>(tr.size()))};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DYADIC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("dyadic_acceptance_" + std::to_string(::getpid()));
  const fs::path a = root / "a", b = root / "b";
  const int ca = run_cli("certify --lambda 2 --beta 2.5 --shells 10 --out " + a.string());
  const int cb = run_cli("certify --lambda 2 --beta 2.5 --shells 10 --out " + b.string());
  bool same = false;
  if (ca == 0 && cb == 0) {
    auto ja = json::Json::parse(io::read_file((a / "certificate.json").string()));
    auto jb = json::Json::parse(io::read_file((b / "certificate.json").string()));
    ja.erase("metadata");
    jb.erase("metadata");
    same = json::dump(ja) == json::dump(jb);
  }
  fs::remove_all(root);
  return {same, same ? "certificates identical outside metadata"
                     : fmt("exit codes %.0f and %.0f, certificates differ", ca, cb)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"spectral bounds of A0", spectral_bounds},
      {"chi(1) = 1/2", chi_at_one},
      {"time-ordered exponential oracles", texp_oracle},
      {"continuity bound", continuity_bound},
      {"gluing endpoint defects", gluing},
      {"end-to-end certificate", end_to_end},
      {"nonlinear flux orthogonality", orthogonality},
      {"positivity conservation", positivity},
      {"uniqueness regime consistency", uniqueness},
      {"closed-form single shell", closed_form},
      {"determinism", determinism},
  };
  int failed = 0, k = 0;
  for (const auto& [name, check] : criteria) {
    ++k;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", k, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
