#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "dyadic/core.hpp"
#include "dyadic/error.hpp"
#include "dyadic/serialize.hpp"
#include "dyadic/solver.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/verify.hpp"

namespace py = pybind11;
using namespace dyadic;

namespace {

Params params(double lambda, double beta, int n_shells) {
  Params p;
  p.lambda = lambda;
  p.beta = beta;
  p.n_shells = n_shells;
  p.validate();
  return p;
}

// JSON documents cross the boundary as Python objects via the json module.
py::object to_python(const json::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::tuple solve_py(const std::vector<double>& initial, py::object forcing, double t_end, double lambda, double beta,
                double rtol, double atol, int uniform_samples, bool disable_nonlinear) {
  const int N = static_cast<int>(initial.size());
  SolveConfig s;
  s.n_shells = N;
  s.t_end = t_end;
  s.initial = ShellVector(initial);
  s.rtol = rtol;
  s.atol = atol;
  s.uniform_samples = uniform_samples;
  s.disable_nonlinear = disable_nonlinear;
  if (!forcing.is_none()) {
    if (PyCallable_Check(forcing.ptr())) {
      auto fn = forcing.cast<std::function<double(int, double)>>();
      s.forcing = [fn](int n, double t) { return fn(n, t); };
    } else {
      const auto c = forcing.cast<std::vector<double>>();
      require(c.size() == initial.size(), ErrorKind::Contract, "forcing: one constant per shell expected");
      s.forcing = [c](int n, double) { return c[n - 1]; };
    }
  }
  const GalerkinResult r = galerkin_solve_report(s, params(lambda, beta, N));
  const auto m = static_cast<py::ssize_t>(r.traj.size());
  py::array_t<double> t(m), u({m, static_cast<py::ssize_t>(N)});
  auto tv = t.mutable_unchecked<1>();
  auto uv = u.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < m; ++i) {
    tv(i) = r.traj.grid[i];
    for (int n = 0; n < N; ++n) uv(i, n) = r.traj.states[i][n];
  }
  return py::make_tuple(t, u, r.err_estimate);
}

}  // namespace

PYBIND11_MODULE(_dyadic, m) {
  m.doc() = "Dyadic shell model: spectra, the two-solution certificate and Galerkin solves";
  m.attr("__version__") = DYADIC_VERSION;

  static py::exception<Error> exc(m, "DyadicError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(exc.ptr(), py::make_tuple(e.what(), to_string(e.kind())).ptr());
    }
  });

  m.def(
      "char_poly_A0", [](double alpha, double lambda, double beta) { return char_poly_A0(alpha, params(lambda, beta, 1)); },
      py::arg("alpha"), py::arg("lambda_") = 2.0, py::arg("beta") = 2.5);

  m.def(
      "eig_A0",
      [](double lambda, double beta) {
        const EigenBasis b = eig_A0(params(lambda, beta, 1));
        return py::make_tuple(b.kappa, b.w);
      },
      py::arg("lambda_") = 2.0, py::arg("beta") = 2.5, "Real eigenvalue kappa and complex eigenvalue w of A0.");

  m.def(
      "nonlinear_energy_flux",
      [](const std::vector<double>& u, double lambda, double beta) {
        return nonlinear_energy_flux(ShellVector(u), params(lambda, beta, static_cast<int>(u.size())));
      },
      py::arg("u"), py::arg("lambda_") = 2.0, py::arg("beta") = 2.5);

  m.def(
      "spectrum",
      [](double lambda, double beta, double R, double q) {
        const Params p = params(lambda, beta, 1);
        const double r = R > 0.0 ? R : std::pow(lambda, beta);
        return to_python(json::to_json(q > 0.0 ? evaluate_q(q, p, r) : find_q(p, r)));
      },
      py::arg("lambda_") = 2.0, py::arg("beta") = 2.5, py::arg("R") = 0.0, py::arg("q") = 0.0,
      "Spectral report at a fixed q, or from the q search when q is 0.");

  m.def(
      "certify",
      [](double lambda, double beta, int shells, double q, double eps) {
        CertifyOptions opt;
        opt.q = q;
        opt.eps = eps;
        return to_python(json::to_json(certify_nonuniqueness(Params::for_construction(lambda, beta, shells), shells, opt)));
      },
      py::arg("lambda_") = 2.0, py::arg("beta") = 2.5, py::arg("shells") = 10, py::arg("q") = 0.0,
      py::arg("eps") = 0.0, "Certificate of the two solutions, as a dict.");

  m.def("solve", &solve_py, py::arg("initial"), py::arg("forcing") = py::none(), py::arg("t_end") = 1.0,
        py::arg("lambda_") = 2.0, py::arg("beta") = 2.5, py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12,
        py::arg("uniform_samples") = 200, py::arg("disable_nonlinear") = false,
        "Galerkin solve. forcing: None, one constant per shell, or f(n, t). Returns (t, u, error_estimate).");

  m.def(
      "uniqueness",
      [](double lambda, double beta, std::vector<int> shells, double perturbation) {
        UniquenessConfig cfg = default_uniqueness_config();
        cfg.n_list = shells;
        cfg.perturbation = perturbation;
        int n_max = 1;
        for (int n : shells) n_max = std::max(n_max, n);
        return to_python(json::to_json(uniqueness_experiment(params(lambda, beta, n_max), cfg)));
      },
      py::arg("lambda_") = 2.0, py::arg("beta") = 2.0, py::arg("shells") = std::vector<int>{8, 12},
      py::arg("perturbation") = 1e-6);
}
