#include "dyadic/export.hpp"

#include "dyadic/io.hpp"

namespace dyadic::io {

std::vector<double> field_sample_times(const SplitFields& fields, int per_cell) {
  const int N = fields.n_shells();
  const auto& g = fields.grid();
  std::vector<double> out{0.0};
  for (int k = N + 1; k >= 0; --k) {
    const double a = g.t(k + 1), b = g.t(k);
    for (int i = 0; i < per_cell; ++i) out.push_back(i + 1 == per_cell ? b : a + (b - a) * i / (per_cell - 1));
  }
  return out;
}

std::string fields_csv(const SplitFields& fields, const std::string& comment, int per_cell) {
  CsvWriter w({"t", "n", "v", "g", "u_plus", "u_minus", "f"}, comment);
  const int N = fields.n_shells();
  for (double t : field_sample_times(fields, per_cell)) {
    for (int n = 1; n <= N; ++n) {
      const double v = fields.v(n, t), gg = fields.g(n, t);
      w.row(t, n, {v, gg, v + gg, v - gg, fields.f(n, t)});
    }
  }
  return w.str();
}

std::string trajectory_csv(const Trajectory& traj, const std::string& comment) {
  const bool forced = traj.has_forcing();
  CsvWriter w(forced ? std::vector<std::string>{"t", "n", "u", "f"} : std::vector<std::string>{"t", "n", "u"},
              comment);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& u = traj.states[i];
    for (std::size_t n = 0; n < u.size(); ++n) {
      if (forced) {
        w.row(traj.grid[i], static_cast<int>(n + 1), {u[n], traj.forcing[i][n]});
      } else {
        w.row(traj.grid[i], static_cast<int>(n + 1), {u[n]});
      }
    }
  }
  return w.str();
}

}  // namespace dyadic::io
