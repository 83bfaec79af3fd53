#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conspec/fft.hpp"
#include "conspec/grid.hpp"

namespace conspec {

using complex = std::complex<double>;

/// Fourier coefficients f_k, |k_j| <= N, of a distribution on a VelocityGrid.
///
/// Coefficients follow f_k = (2pi)^-d \int f(v) e^{-ik.v} dv on the scaled box,
/// so f(v) = sum_k f_k e^{ik.v}. A real distribution has f_{-k} = conj(f_k).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const VelocityGrid& grid) : grid_(grid), coeffs_(grid.mode_count()) {}
  SpectralField(const VelocityGrid& grid, std::vector<complex> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.mode_count())
      throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }

  const VelocityGrid& grid() const { return grid_; }
  std::span<complex> coeffs() { return coeffs_; }
  std::span<const complex> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  complex& operator[](std::size_t i) { return coeffs_[i]; }
  const complex& operator[](std::size_t i) const { return coeffs_[i]; }
  complex& at(int k1, int k2 = 0) { return coeffs_[grid_.index(k1, k2)]; }
  const complex& at(int k1, int k2 = 0) const { return coeffs_[grid_.index(k1, k2)]; }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField::operator+=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField::operator-=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField::axpy");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  /// Largest |f_{-k} - conj(f_k)| relative to the largest coefficient.
  double hermitian_defect() const {
    double scale = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      scale = std::max(scale, std::abs(coeffs_[i]));
      defect = std::max(defect, std::abs(coeffs_[grid_.mirror(i)] - std::conj(coeffs_[i])));
    }
    return scale > 0.0 ? defect / scale : 0.0;
  }

  bool all_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const complex& c) {
      return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
  }

 private:
  VelocityGrid grid_;
  std::vector<complex> coeffs_;
};

namespace detail {

inline double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

inline std::vector<int> fft_dims(int dim, int n) { return std::vector<int>(static_cast<std::size_t>(dim), n); }

inline std::size_t wrap(int k, int n) { return static_cast<std::size_t>(((k % n) + n) % n); }

}  // namespace detail

/// Samples of a physical-coordinate function at the collocation nodes.
/// `fn` receives std::array<double,2>; the second entry is 0 in 1D.
template <class Fn>
std::vector<double> sample(const VelocityGrid& grid, Fn&& fn) {
  const int n = grid.points_per_axis;
  std::vector<double> out(grid.node_count());
  if (grid.dim == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(std::array<double, 2>{grid.physical_node(i), 0.0});
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
            fn(std::array<double, 2>{grid.physical_node(i), grid.physical_node(j)});
  }
  return out;
}

/// Discrete Fourier coefficients of real nodal samples, truncated to |k_j| <= N.
/// The result is exactly Hermitian.
inline SpectralField forward_transform(std::span<const double> samples, const VelocityGrid& grid) {
  if (samples.size() != grid.node_count())
    throw std::invalid_argument("forward_transform: expected " + std::to_string(grid.node_count()) +
                                " samples, got " + std::to_string(samples.size()));
  const int n = grid.points_per_axis;
  const auto dims = detail::fft_dims(grid.dim, n);
  fft::Buffer<complex> in(grid.node_count()), out(grid.node_count());
  for (std::size_t i = 0; i < samples.size(); ++i) in[i] = samples[i];
  fft::execute(fft::Kind::forward, dims, in, out);

  const double norm = 1.0 / static_cast<double>(grid.node_count());
  SpectralField field(grid);
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const auto k = grid.mode(idx);
    std::size_t src = detail::wrap(k[0], n);
    double sign = detail::parity(k[0]);
    if (grid.dim == 2) {
      src = src * static_cast<std::size_t>(n) + detail::wrap(k[1], n);
      sign *= detail::parity(k[1]);
    }
    field[idx] = sign * norm * out[src];
  }
  // (a + conj b)/2 and (b + conj a)/2 are exact conjugates in IEEE arithmetic.
  std::vector<complex> sym(field.size());
  for (std::size_t idx = 0; idx < field.size(); ++idx)
    sym[idx] = 0.5 * (field[idx] + std::conj(field[grid.mirror(idx)]));
  return SpectralField(grid, std::move(sym));
}

inline SpectralField forward_transform(const std::vector<double>& samples, const VelocityGrid& grid) {
  return forward_transform(std::span<const double>(samples), grid);
}

/// Relative imaginary residue accepted when synthesizing real samples.
inline constexpr double imaginary_tolerance = 1e-13;

/// Values of sum_k f_k e^{ik.v} on `points_per_axis` equispaced nodes
/// v_j = -pi + 2 pi j / points_per_axis (per axis). Needs points_per_axis >= 2N+1.
inline std::vector<double> synthesize(const SpectralField& field, int points_per_axis) {
  const auto& grid = field.grid();
  const int n = points_per_axis;
  if (n < grid.modes_per_axis())
    throw std::invalid_argument("synthesize: fewer nodes than modes per axis");
  const auto dims = detail::fft_dims(grid.dim, n);
  std::size_t total = 1;
  for (int d = 0; d < grid.dim; ++d) total *= static_cast<std::size_t>(n);
  fft::Buffer<complex> in(total), out(total);
  in.fill(complex{});
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const auto k = grid.mode(idx);
    std::size_t dst = detail::wrap(k[0], n);
    double sign = detail::parity(k[0]);
    if (grid.dim == 2) {
      dst = dst * static_cast<std::size_t>(n) + detail::wrap(k[1], n);
      sign *= detail::parity(k[1]);
    }
    in[dst] = sign * field[idx];
  }
  fft::execute(fft::Kind::backward, dims, in, out);

  std::vector<double> values(total);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    values[i] = out[i].real();
    max_re = std::max(max_re, std::abs(out[i].real()));
    max_im = std::max(max_im, std::abs(out[i].imag()));
  }
  if (max_im > imaginary_tolerance * std::max(max_re, 1e-300) && max_im > 0.0)
    throw std::domain_error("inverse_transform: field is not Hermitian (imaginary residue " +
                            std::to_string(max_im) + ")");
  return values;
}

/// Nodal values of the truncated Fourier series on the field's collocation grid.
inline std::vector<double> inverse_transform(const SpectralField& field) {
  return synthesize(field, field.grid().points_per_axis);
}

}  // namespace conspec
