#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conspec {

inline constexpr double pi = std::numbers::pi;

// Ratio R/T between the support ball and the periodic half-period that keeps
// the periods of the truncated collision integral from overlapping.
inline constexpr double support_fraction = 2.0 / (3.0 + std::numbers::sqrt2);

/// Uniform periodic velocity grid.
///
/// All spectral work happens on the scaled box [-pi, pi]^dim; a physical
/// velocity is `scale() * v_scaled`. Modes run over k_j in [-modes, modes] on
/// every axis and samples live on `points_per_axis` equispaced nodes
/// v_j = -pi + j * 2pi / points_per_axis.
struct VelocityGrid {
  int dim = 1;
  int modes = 1;
  double half_width = pi;
  int points_per_axis = 4;

  int modes_per_axis() const { return 2 * modes + 1; }

  std::size_t mode_count() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(modes_per_axis());
    return n;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points_per_axis);
    return n;
  }

  /// Physical units per scaled unit, L / pi.
  double scale() const { return half_width / pi; }

  /// Truncation radius of the collision integral in scaled units.
  double support_radius() const { return support_fraction * pi; }

  double scaled_node(int j) const { return -pi + 2.0 * pi * j / points_per_axis; }
  double physical_node(int j) const { return scale() * scaled_node(j); }

  /// Flat index of mode k (row-major, k_1 slowest). Unused components ignored.
  std::size_t index(int k1, int k2 = 0) const {
    const auto m = static_cast<std::size_t>(modes_per_axis());
    if (dim == 1) return static_cast<std::size_t>(k1 + modes);
    return static_cast<std::size_t>(k1 + modes) * m + static_cast<std::size_t>(k2 + modes);
  }

  std::array<int, 2> mode(std::size_t idx) const {
    const auto m = static_cast<std::size_t>(modes_per_axis());
    if (dim == 1) return {static_cast<int>(idx) - modes, 0};
    return {static_cast<int>(idx / m) - modes, static_cast<int>(idx % m) - modes};
  }

  /// Index of -k.
  std::size_t mirror(std::size_t idx) const { return mode_count() - 1 - idx; }

  friend bool operator==(const VelocityGrid&, const VelocityGrid&) = default;
};

/// Validated grid. `points_per_axis == 0` selects the smallest legal value 2N+2.
inline VelocityGrid build_grid(int dim, int modes, double half_width, int points_per_axis = 0) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("build_grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (modes < 1) throw std::invalid_argument("build_grid: need at least one mode (N >= 1)");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("build_grid: half_width must be positive and finite");
  if (points_per_axis == 0) points_per_axis = 2 * modes + 2;
  if (points_per_axis < 2 * modes + 2)
    throw std::invalid_argument("build_grid: points_per_axis " + std::to_string(points_per_axis) +
                                " < 2N+2 = " + std::to_string(2 * modes + 2));
  return VelocityGrid{dim, modes, half_width, points_per_axis};
}

inline void require_same_grid(const VelocityGrid& a, const VelocityGrid& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace conspec
