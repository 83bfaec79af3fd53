#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "conspec/collision.hpp"
#include "conspec/field.hpp"
#include "conspec/moments.hpp"

namespace conspec {

/// S(t) = 1 - exp(-t/8)/2 for the 2D BKW solution.
inline double bkw_shape(double t) { return 1.0 - 0.5 * std::exp(-t / 8.0); }

/// Bobylev-Krook-Wu exact solution for 2D Maxwell molecules (unit mass and temperature).
inline double bkw_exact(double t, const std::array<double, 2>& v) {
  if (t < 0.0) throw std::domain_error("bkw_exact: t must be nonnegative");
  const double S = bkw_shape(t);
  const double v2 = v[0] * v[0] + v[1] * v[1];
  return std::exp(-v2 / (2.0 * S)) / (2.0 * pi * S * S) * (2.0 * S - 1.0 + (1.0 - S) / (2.0 * S) * v2);
}

/// P_N f_BKW(t) on a 2D grid.
inline SpectralField bkw_field(double t, const VelocityGrid& grid) {
  if (grid.dim != 2) throw std::invalid_argument("bkw_field: needs a 2D grid");
  return forward_transform(sample(grid, [t](const std::array<double, 2>& v) { return bkw_exact(t, v); }), grid);
}

/// Physical L2 distance, via Parseval: (L/pi)^d (2pi)^d sum_k |a_k - b_k|^2.
inline double l2_distance(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  const int d = a.grid().dim;
  return std::sqrt(std::pow(a.grid().scale() * 2.0 * pi, d) * s);
}

inline double l2_norm(const SpectralField& a) { return l2_distance(a, SpectralField(a.grid())); }

/// Converts a collision term evaluated on the scaled box into d/dt of the
/// physical distribution: the change of variables v = (L/pi) v' contributes
/// (L/pi)^d through dv_*.
inline double collision_time_scale(const VelocityGrid& grid) { return std::pow(grid.scale(), grid.dim); }

/// Euclidean norm of the physical moments of d f/dt = Q^R_N(f,f), raw operator.
inline double moment_loss_of_Q(const SpectralField& f, const KernelDecomposition& kernel, const MomentBasis& basis,
                               bool pad = true) {
  require_same_grid(f.grid(), basis.grid, "moment_loss_of_Q");
  SpectralField q = collide_fast(f, kernel, pad);
  q *= collision_time_scale(f.grid());
  const MomentVector m = moments(q, basis);
  double s = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) s += m[j] * m[j];
  return std::sqrt(s);
}

struct DiagnosticsRow {
  double time = 0.0;
  MomentVector moments;
  double temperature = 0.0;
  double l2_to_maxwellian = 0.0;
  std::optional<double> l2_to_exact;
  double moment_loss_of_q = 0.0;
};

}  // namespace conspec
