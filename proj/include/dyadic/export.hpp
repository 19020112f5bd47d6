#pragma once

// CSV views of constructed fields and Galerkin trajectories.

#include <string>
#include <vector>

#include "dyadic/construction.hpp"
#include "dyadic/core.hpp"

namespace dyadic::io {

/// t = 0, then `per_cell` equally spaced points on each cell [t_{k+1}, t_k], k = N+1..0, ending at T.
std::vector<double> field_sample_times(const SplitFields& fields, int per_cell = 16);

/// Columns t, n, v, g, u_plus, u_minus, f for shells 1..N at every sample time.
std::string fields_csv(const SplitFields& fields, const std::string& comment, int per_cell = 16);

/// Columns t, n, u (and f when the trajectory carries forcing samples).
std::string trajectory_csv(const Trajectory& traj, const std::string& comment);

}  // namespace dyadic::io
