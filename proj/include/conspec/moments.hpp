#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conspec/field.hpp"
#include "conspec/grid.hpp"

namespace conspec {

/// Collision invariants (mass, momentum, energy) of a distribution, physical units.
struct MomentVector {
  int dim = 1;
  double mass = 0.0;
  std::array<double, 2> momentum{};
  double energy = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(dim) + 2; }

  /// Component j of (mass, momentum..., energy).
  double operator[](std::size_t j) const {
    if (j == 0) return mass;
    if (j <= static_cast<std::size_t>(dim)) return momentum[j - 1];
    return energy;
  }

  double& component(std::size_t j) {
    if (j == 0) return mass;
    if (j <= static_cast<std::size_t>(dim)) return momentum[j - 1];
    return energy;
  }

  static MomentVector zero(int dim) { return MomentVector{dim, 0.0, {}, 0.0}; }

  friend bool operator==(const MomentVector&, const MomentVector&) = default;
};

/// (energy/mass - |momentum/mass|^2) / dim.
inline double temperature(const MomentVector& m) {
  if (!(m.mass > 0.0)) throw std::domain_error("temperature: mass must be positive");
  double u2 = 0.0;
  for (int j = 0; j < m.dim; ++j) u2 += (m.momentum[j] / m.mass) * (m.momentum[j] / m.mass);
  return (m.energy / m.mass - u2) / m.dim;
}

/// Analytic Fourier coefficients of Phi = (1, v_1, ..., v_d, |v|^2) on [-pi,pi]^d.
///
/// With f_k = (2pi)^-d \int f e^{-ik.v}:
///   (1)_k     = delta_k0
///   (v_j)_k   = i (-1)^{k_j} / k_j        on the j-axis, 0 elsewhere
///   (|v|^2)_k = d pi^2 / 3 at k = 0,  2 (-1)^{k_j} / k_j^2 on the j-axis
struct MomentBasis {
  VelocityGrid grid;
  std::vector<std::vector<complex>> rows;  // (dim+2) x mode_count

  std::size_t row_count() const { return rows.size(); }

  /// Physical moment = scaled moment * factor(j).
  double physical_factor(std::size_t j) const {
    const double a = grid.scale();
    double volume = std::pow(a, grid.dim);
    if (j == 0) return volume;
    if (j <= static_cast<std::size_t>(grid.dim)) return volume * a;
    return volume * a * a;
  }
};

inline MomentBasis build_moment_basis(const VelocityGrid& grid) {
  const int d = grid.dim;
  MomentBasis basis{grid, std::vector<std::vector<complex>>(static_cast<std::size_t>(d) + 2,
                                                            std::vector<complex>(grid.mode_count()))};
  for (std::size_t idx = 0; idx < grid.mode_count(); ++idx) {
    const auto k = grid.mode(idx);
    int nonzero = 0, axis = -1;
    for (int j = 0; j < d; ++j)
      if (k[j] != 0) {
        ++nonzero;
        axis = j;
      }
    if (nonzero == 0) {
      basis.rows[0][idx] = 1.0;
      basis.rows[static_cast<std::size_t>(d) + 1][idx] = d * pi * pi / 3.0;
    } else if (nonzero == 1) {
      const double kj = k[axis];
      const double sign = detail::parity(k[axis]);
      basis.rows[static_cast<std::size_t>(axis) + 1][idx] = complex(0.0, sign / kj);
      basis.rows[static_cast<std::size_t>(d) + 1][idx] = 2.0 * sign / (kj * kj);
    }
  }
  return basis;
}

/// Relative imaginary residue accepted when pairing a field with the basis.
inline constexpr double moment_imaginary_tolerance = 1e-13;

/// Moments on the scaled box: U_j = (2pi)^d sum_k f_k conj(Phi_{j,k}).
inline std::array<double, 4> scaled_moments(const SpectralField& field, const MomentBasis& basis) {
  require_same_grid(field.grid(), basis.grid, "moments");
  const double volume = std::pow(2.0 * pi, field.grid().dim);
  std::array<double, 4> out{};
  for (std::size_t j = 0; j < basis.row_count(); ++j) {
    complex sum{};
    double magnitude = 0.0;
    const auto& row = basis.rows[j];
    for (std::size_t idx = 0; idx < field.size(); ++idx) {
      if (row[idx] == complex{}) continue;
      const complex term = field[idx] * std::conj(row[idx]);
      sum += term;
      magnitude += std::abs(term);
    }
    if (std::abs(sum.imag()) > moment_imaginary_tolerance * magnitude && std::abs(sum.imag()) > 0.0)
      throw std::domain_error("moments: imaginary residue " + std::to_string(sum.imag()) +
                              " exceeds tolerance (field not Hermitian?)");
    out[j] = volume * sum.real();
  }
  return out;
}

inline MomentVector to_physical(const std::array<double, 4>& scaled, const MomentBasis& basis) {
  MomentVector m = MomentVector::zero(basis.grid.dim);
  for (std::size_t j = 0; j < m.size(); ++j) m.component(j) = scaled[j] * basis.physical_factor(j);
  return m;
}

inline std::array<double, 4> to_scaled(const MomentVector& m, const MomentBasis& basis) {
  if (m.dim != basis.grid.dim) throw std::invalid_argument("moments: dimension mismatch");
  std::array<double, 4> out{};
  for (std::size_t j = 0; j < m.size(); ++j) out[j] = m[j] / basis.physical_factor(j);
  return out;
}

inline MomentVector moments(const SpectralField& field, const MomentBasis& basis) {
  return to_physical(scaled_moments(field, basis), basis);
}

/// Maxwellian rho (2 pi T)^{-d/2} exp(-|v-u|^2 / 2T).
struct MaxwellianParameters {
  int dim = 1;
  double density = 1.0;
  std::array<double, 2> velocity{};
  double temperature = 1.0;

  double operator()(const std::array<double, 2>& v) const {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += (v[j] - velocity[j]) * (v[j] - velocity[j]);
    return density / std::pow(2.0 * pi * temperature, 0.5 * dim) * std::exp(-r2 / (2.0 * temperature));
  }
};

inline MaxwellianParameters maxwellian_parameters(const MomentVector& target) {
  if (!(target.mass > 0.0) || !std::isfinite(target.mass))
    throw std::domain_error("maxwellian: mass must be positive");
  const double T = temperature(target);
  if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error("maxwellian: temperature must be positive");
  MaxwellianParameters p{target.dim, target.mass, {}, T};
  for (int j = 0; j < target.dim; ++j) p.velocity[j] = target.momentum[j] / target.mass;
  return p;
}

/// Plain spectral projection of the Maxwellian with the given moments.
inline SpectralField maxwellian_field(const MomentVector& target, const VelocityGrid& grid) {
  if (target.dim != grid.dim) throw std::invalid_argument("maxwellian_field: dimension mismatch");
  const auto m = maxwellian_parameters(target);
  return forward_transform(sample(grid, m), grid);
}

}  // namespace conspec
