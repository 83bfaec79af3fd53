#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "conspec/dynamics.hpp"
#include "conspec/field.hpp"
#include "conspec/moments.hpp"
#include "conspec/projection.hpp"

namespace conspec {

/// One row of the projection-error table.
struct ProjectionErrors {
  int modes = 0;
  bool conservative = false;
  double err_mass = 0.0;
  double err_momentum = 0.0;
  double err_energy = 0.0;
  double err_l2 = 0.0;       // continuous L2 on [-L, L], fine trapezoid rule
  double err_l2_grid = 0.0;  // discrete L2 on the collocation nodes
};

/// Nodes of the fine rule used for the continuous L2 error.
inline constexpr int projection_error_points = 4096;

/// Plain and conservative projection errors of a named 1D density against its
/// exact moments on the whole line.
inline std::vector<ProjectionErrors> projection_errors(const std::string& name, int modes, double half_width,
                                                       int points_per_axis = 0) {
  const VelocityGrid grid = build_grid(1, modes, half_width, points_per_axis);
  const auto mixture = named_mixture(name);
  const auto density = [&](double v) { return gaussian_mixture_density(mixture, 1, {v, 0.0}); };
  const MomentVector exact = initial_condition_moments(name);

  const MomentBasis basis = build_moment_basis(grid);
  const ConstraintOperator op(basis);
  const SpectralField plain = initial_condition(name, grid);
  const SpectralField cons = conservative_project(plain, exact, op);

  std::vector<ProjectionErrors> rows;
  for (const SpectralField* f : {&plain, &cons}) {
    ProjectionErrors r;
    r.modes = modes;
    r.conservative = f == &cons;
    const MomentVector m = moments(*f, basis);
    r.err_mass = std::abs(m.mass - exact.mass);
    r.err_momentum = std::abs(m.momentum[0] - exact.momentum[0]);
    r.err_energy = std::abs(m.energy - exact.energy);

    const int fine = projection_error_points;
    const auto values = synthesize(*f, fine);
    double s = 0.0;
    for (int j = 0; j < fine; ++j) {
      const double d = density(grid.scale() * (-pi + 2.0 * pi * j / fine)) - values[static_cast<std::size_t>(j)];
      s += d * d;
    }
    r.err_l2 = std::sqrt(s * 2.0 * half_width / fine);

    const auto nodal = inverse_transform(*f);
    s = 0.0;
    for (int j = 0; j < grid.points_per_axis; ++j) {
      const double d = density(grid.physical_node(j)) - nodal[static_cast<std::size_t>(j)];
      s += d * d;
    }
    r.err_l2_grid = std::sqrt(s * 2.0 * half_width / grid.points_per_axis);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace conspec
