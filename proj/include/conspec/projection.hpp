#pragma once

// Moment-constrained best approximation in the space of trigonometric
// polynomials of degree N.
//
// Among all g_N with prescribed (1, v, |v|^2) moments U, the L2-closest to f is
//
//   g_k = f_k + C_k . (U - U_N),   C_k = (2pi)^-d G^{-1} Phi_k,
//   G   = sum_k conj(Phi_k) Phi_k^T,
//
// where U_N are the moments of the truncated series. G is assembled with the
// Hermitian pairing so that it is real SPD and the constraint is met exactly.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "conspec/field.hpp"
#include "conspec/moments.hpp"

namespace conspec {

class ConstraintOperator {
 public:
  explicit ConstraintOperator(const MomentBasis& basis) : basis_(basis) {
    if (basis.grid.modes < 1) throw std::invalid_argument("ConstraintOperator: need N >= 1");
    const auto rows = static_cast<Eigen::Index>(basis.row_count());
    gram_ = Eigen::MatrixXd::Zero(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < rows; ++j) {
        complex s{};
        const auto& ri = basis.rows[static_cast<std::size_t>(i)];
        const auto& rj = basis.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < ri.size(); ++k) s += std::conj(ri[k]) * rj[k];
        gram_(i, j) = s.real();
      }
    factor_.compute(gram_);
    if (factor_.info() != Eigen::Success)
      throw std::runtime_error("ConstraintOperator: Gram matrix is not positive definite");

    const double inv_volume = 1.0 / std::pow(2.0 * pi, basis.grid.dim);
    const Eigen::MatrixXd inv = factor_.solve(Eigen::MatrixXd::Identity(rows, rows));
    const std::size_t modes = basis.grid.mode_count();
    correction_.assign(modes * basis.row_count(), complex{});
    for (std::size_t k = 0; k < modes; ++k)
      for (Eigen::Index i = 0; i < rows; ++i) {
        complex s{};
        for (Eigen::Index j = 0; j < rows; ++j) s += inv(i, j) * basis.rows[static_cast<std::size_t>(j)][k];
        correction_[k * basis.row_count() + static_cast<std::size_t>(i)] = inv_volume * s;
      }
  }

  const MomentBasis& basis() const { return basis_; }
  const VelocityGrid& grid() const { return basis_.grid; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// Component i of the correction vector C_k for flat mode index k.
  complex correction(std::size_t k, std::size_t i) const { return correction_[k * basis_.row_count() + i]; }

  /// field += sum_i C_k[i] * residual[i], residual in scaled units.
  void apply(SpectralField& field, const std::array<double, 4>& residual) const {
    const std::size_t r = basis_.row_count();
    for (std::size_t k = 0; k < field.size(); ++k) {
      complex s{};
      for (std::size_t i = 0; i < r; ++i) s += correction_[k * r + i] * residual[i];
      field[k] += s;
    }
  }

 private:
  MomentBasis basis_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  std::vector<complex> correction_;  // mode-major, (d+2) per mode
};

inline ConstraintOperator build_constraint_operator(const MomentBasis& basis) { return ConstraintOperator(basis); }

/// Closest degree-N trigonometric polynomial to `field` whose moments equal `target`.
inline SpectralField conservative_project(const SpectralField& field, const MomentVector& target,
                                          const ConstraintOperator& op) {
  require_same_grid(field.grid(), op.grid(), "conservative_project");
  for (std::size_t j = 0; j < target.size(); ++j)
    if (!std::isfinite(target[j])) throw std::invalid_argument("conservative_project: non-finite target");
  const auto current = scaled_moments(field, op.basis());
  const auto goal = to_scaled(target, op.basis());
  std::array<double, 4> residual{};
  for (std::size_t j = 0; j < target.size(); ++j) residual[j] = goal[j] - current[j];
  SpectralField out = field;
  op.apply(out, residual);
  return out;
}

/// One Gaussian component: weight * N(center, variance * I).
struct GaussianComponent {
  double weight = 1.0;
  std::array<double, 2> center{};
  double variance = 1.0;
};

/// Closed-form moments of a Gaussian mixture on R^dim.
inline MomentVector exact_moments_gaussian_mixture(const std::vector<GaussianComponent>& mixture, int dim) {
  if (mixture.empty()) throw std::invalid_argument("exact_moments_gaussian_mixture: empty mixture");
  if (dim != 1 && dim != 2) throw std::invalid_argument("exact_moments_gaussian_mixture: dim must be 1 or 2");
  MomentVector m = MomentVector::zero(dim);
  for (const auto& g : mixture) {
    if (!(g.weight > 0.0) || !(g.variance > 0.0))
      throw std::invalid_argument("exact_moments_gaussian_mixture: weights and variances must be positive");
    double c2 = 0.0;
    for (int j = 0; j < dim; ++j) {
      m.momentum[j] += g.weight * g.center[j];
      c2 += g.center[j] * g.center[j];
    }
    m.mass += g.weight;
    m.energy += g.weight * (c2 + dim * g.variance);
  }
  return m;
}

/// Density of a Gaussian mixture at a physical point.
inline double gaussian_mixture_density(const std::vector<GaussianComponent>& mixture, int dim,
                                       const std::array<double, 2>& v) {
  double f = 0.0;
  for (const auto& g : mixture) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += (v[j] - g.center[j]) * (v[j] - g.center[j]);
    f += g.weight / std::pow(2.0 * pi * g.variance, 0.5 * dim) * std::exp(-r2 / (2.0 * g.variance));
  }
  return f;
}

}  // namespace conspec
