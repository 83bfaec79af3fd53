#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "conspec/field.hpp"

namespace conspec::fixtures {

/// Random real-valued field: Hermitian coefficients with a mild Gaussian envelope.
inline SpectralField random_hermitian(const VelocityGrid& grid, std::mt19937_64& rng, double decay = 0.0) {
  std::normal_distribution<double> normal;
  SpectralField f(grid);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const std::size_t mirror = grid.mirror(idx);
    if (mirror < idx) continue;
    const auto k = grid.mode(idx);
    const double env = std::exp(-decay * (k[0] * k[0] + k[1] * k[1]));
    if (mirror == idx) {
      f[idx] = env * normal(rng);
    } else {
      f[idx] = env * complex(normal(rng), normal(rng));
      f[mirror] = std::conj(f[idx]);
    }
  }
  return f;
}

/// Composite Simpson rule on [a, b] with an even number of intervals.
template <class Fn>
auto simpson(Fn&& fn, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  auto s = fn(a) + fn(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  return s * (h / 3.0);
}

inline double coefficient_l2(const SpectralField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return std::sqrt(s);
}

inline double relative_difference(const SpectralField& a, const SpectralField& b) {
  return coefficient_l2(a - b) / coefficient_l2(b);
}

inline double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace conspec::fixtures
