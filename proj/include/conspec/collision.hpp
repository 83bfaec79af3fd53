#pragma once

// Truncated, periodized Boltzmann collision operator for 2D Maxwell molecules.
//
// In Fourier space
//
//   Q_k = sum_{l+m=k} [B(l,m) - B(m,m)] f_l f_m,
//   B(l,m) = \int_0^pi phi(l.e_theta) phi(m.e_{theta+pi/2}) dtheta,
//   phi(s) = 2R sinc(Rs),
//
// up to the Carleman prefactor 2 b0. The gain kernel is split with an A-point
// rule in theta, B(l,m) ~ (pi/A) sum_p alpha_p(l) alpha'_p(m), which turns the
// gain into A pointwise products in physical space. The loss diagonal B(m,m)
// uses the same rule by default, so that gain and loss cancel exactly in the
// mass mode; a fine theta rule is available for comparison against the oracle.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conspec/fft.hpp"
#include "conspec/field.hpp"
#include "conspec/moments.hpp"
#include "conspec/parallel.hpp"
#include "conspec/projection.hpp"

namespace conspec {

/// phi_R^2(s) = \int_{-R}^{R} e^{i rho s} d rho = 2R sinc(Rs).
inline double phi_r2(double s, double R) {
  const double x = R * s;
  if (std::abs(x) < 1e-8) return 2.0 * R * (1.0 - x * x / 6.0);
  return 2.0 * std::sin(x) / s;
}

/// Trapezoid rule for B(l,m) with `points` equispaced angles theta_q = pi q / points.
inline double angular_kernel(const std::array<int, 2>& l, const std::array<int, 2>& m, double R, int points) {
  double sum = 0.0;
  for (int q = 1; q <= points; ++q) {
    const double t = pi * q / points;
    const double c = std::cos(t), s = std::sin(t);
    sum += phi_r2(l[0] * c + l[1] * s, R) * phi_r2(-m[0] * s + m[1] * c, R);
  }
  return pi / points * sum;
}

/// Default resolution of the fine angular rule: well past the theta bandwidth
/// R(|l|+|m|) of the integrand for every retained mode.
inline int default_oracle_points(const VelocityGrid& grid) { return std::max(2048, 32 * grid.modes); }

/// Angular rule for the loss diagonal B(m,m).
enum class LossQuadrature {
  fine,    // fine trapezoid rule, angularly exact
  angles,  // the same A-point rule as the gain, which makes B(l,-l) = B(l,l) discretely
};

struct KernelDecomposition {
  VelocityGrid grid;
  LossQuadrature loss_rule = LossQuadrature::angles;
  int angles = 8;
  double radius = 0.0;
  double b0 = 1.0 / (2.0 * pi);
  std::vector<std::vector<double>> alpha;       // [p][mode] phi(l.e_{theta_p})
  std::vector<std::vector<double>> alpha_perp;  // [p][mode] phi(m.e_{theta_p + pi/2})
  std::vector<double> loss_diag;                // B(m,m)

  /// Carleman kernel constant for 2D Maxwell molecules: 2^{d-1} b0.
  double prefactor() const { return 2.0 * b0; }

  /// (pi/A) sum_p alpha_p(l) alpha'_p(m), indices are flat mode indices.
  double gain_kernel(std::size_t l, std::size_t m) const {
    double s = 0.0;
    for (int p = 0; p < angles; ++p) s += alpha[static_cast<std::size_t>(p)][l] * alpha_perp[static_cast<std::size_t>(p)][m];
    return pi / angles * s;
  }
};

inline KernelDecomposition precompute_kernel(const VelocityGrid& grid, int angles, double b0 = 1.0 / (2.0 * pi),
                                             LossQuadrature loss_rule = LossQuadrature::angles, int oracle_points = 0) {
  if (grid.dim != 2) throw std::invalid_argument("precompute_kernel: only d = 2 Maxwell molecules are supported");
  if (angles < 1) throw std::invalid_argument("precompute_kernel: need at least one angle");
  if (!(b0 > 0.0) || !std::isfinite(b0)) throw std::invalid_argument("precompute_kernel: b0 must be positive");
  if (oracle_points <= 0) oracle_points = default_oracle_points(grid);

  KernelDecomposition k;
  k.grid = grid;
  k.angles = angles;
  k.radius = grid.support_radius();
  k.b0 = b0;
  k.loss_rule = loss_rule;
  const std::size_t modes = grid.mode_count();
  k.alpha.assign(static_cast<std::size_t>(angles), std::vector<double>(modes));
  k.alpha_perp.assign(static_cast<std::size_t>(angles), std::vector<double>(modes));
  for (int p = 1; p <= angles; ++p) {
    const double t = pi * p / angles;
    const double c = std::cos(t), s = std::sin(t);
    auto& a = k.alpha[static_cast<std::size_t>(p - 1)];
    auto& ap = k.alpha_perp[static_cast<std::size_t>(p - 1)];
    for (std::size_t idx = 0; idx < modes; ++idx) {
      const auto m = grid.mode(idx);
      a[idx] = phi_r2(m[0] * c + m[1] * s, k.radius);
      ap[idx] = phi_r2(-m[0] * s + m[1] * c, k.radius);
    }
  }
  k.loss_diag.resize(modes);
  // B(m,m) = B(-m,-m); fill the lower half from the upper one.
  for (std::size_t idx = 0; idx < modes; ++idx) {
    const std::size_t mirror = grid.mirror(idx);
    if (mirror < idx) {
      k.loss_diag[idx] = k.loss_diag[mirror];
      continue;
    }
    const auto m = grid.mode(idx);
    k.loss_diag[idx] = loss_rule == LossQuadrature::fine ? angular_kernel(m, m, k.radius, oracle_points)
                                                         : k.gain_kernel(idx, idx);
  }
  return k;
}

namespace detail {

// Half-complex layout of an n x n real transform: n x (n/2 + 1).
struct HalfSpectrum {
  int n;
  std::size_t cols() const { return static_cast<std::size_t>(n / 2 + 1); }
  std::size_t size() const { return static_cast<std::size_t>(n) * cols(); }
};

// Nodal values (at 2 pi j / n) of the Hermitian series sum_k w_k f_k e^{ik.v}.
template <class Weight>
void to_nodes(const SpectralField& f, Weight&& weight, int n, fft::Buffer<complex>& half, fft::Buffer<double>& nodes) {
  const auto& grid = f.grid();
  const int N = grid.modes;
  const HalfSpectrum hs{n};
  half.fill(complex{});
  for (int k1 = -N; k1 <= N; ++k1)
    for (int k2 = 0; k2 <= N; ++k2) {
      const std::size_t idx = grid.index(k1, k2);
      half[wrap(k1, n) * hs.cols() + static_cast<std::size_t>(k2)] = weight(idx) * f[idx];
    }
  fft::execute_c2r({n, n}, half, nodes);
}

}  // namespace detail

/// Raw truncated collision operator (no time scale, no conservation fix).
///
/// With `pad` the products live on a (4N+2)^2 grid, which makes every
/// convolution the exact truncated sum over l+m=k. Without it they are cyclic
/// on the collocation grid and modes beyond N alias back.
inline SpectralField collide_fast(const SpectralField& f, const KernelDecomposition& kernel, bool pad = true) {
  require_same_grid(f.grid(), kernel.grid, "collide_fast");
  const auto& grid = f.grid();
  const int N = grid.modes;
  const int n = pad ? 4 * N + 2 : grid.points_per_axis;
  const detail::HalfSpectrum hs{n};
  const std::size_t nodes = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t A = static_cast<std::size_t>(kernel.angles);

  // Slot p < A holds the gain product for angle p, slot A the loss product.
  std::vector<fft::Buffer<double>> products;
  products.reserve(A + 1);
  for (std::size_t p = 0; p <= A; ++p) products.emplace_back(nodes);

  parallel_for(A + 1, thread_count(), [&](std::size_t p) {
    fft::Buffer<complex> half(hs.size());
    fft::Buffer<double> left(nodes), right(nodes);
    if (p < A) {
      detail::to_nodes(f, [&](std::size_t i) { return kernel.alpha[p][i]; }, n, half, left);
      detail::to_nodes(f, [&](std::size_t i) { return kernel.alpha_perp[p][i]; }, n, half, right);
    } else {
      detail::to_nodes(f, [](std::size_t) { return 1.0; }, n, half, left);
      detail::to_nodes(f, [&](std::size_t i) { return kernel.loss_diag[i]; }, n, half, right);
    }
    auto& out = products[p];
    for (std::size_t i = 0; i < nodes; ++i) out[i] = left[i] * right[i];
  });

  // Fixed-order reduction keeps results independent of the worker count.
  const double gain_weight = pi / kernel.angles;
  fft::Buffer<double> total(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    double g = 0.0;
    for (std::size_t p = 0; p < A; ++p) g += products[p][i];
    total[i] = gain_weight * g - products[A][i];
  }
  fft::Buffer<complex> spectrum(hs.size());
  fft::execute_r2c({n, n}, total, spectrum);

  const double scale = kernel.prefactor() / static_cast<double>(nodes);
  SpectralField q(grid);
  for (int k1 = -N; k1 <= N; ++k1)
    for (int k2 = 0; k2 <= N; ++k2) {
      const complex c = scale * spectrum[detail::wrap(k1, n) * hs.cols() + static_cast<std::size_t>(k2)];
      q.at(k1, k2) = c;
      if (k2 > 0) q.at(-k1, -k2) = std::conj(c);
    }
  // The k2 = 0 line is Hermitian only to rounding; symmetrize it exactly.
  for (int k1 = 1; k1 <= N; ++k1) {
    const complex a = q.at(k1, 0), b = q.at(-k1, 0);
    q.at(k1, 0) = 0.5 * (a + std::conj(b));
    q.at(-k1, 0) = 0.5 * (b + std::conj(a));
  }
  q.at(0, 0) = q.at(0, 0).real();
  return q;
}

enum class AngularRule {
  kernel,  // same A-point rule as collide_fast
  fine,    // fine trapezoid rule for every B(l,m)
};

/// Size guard for the O(N^{2d}) reference sum.
inline constexpr double direct_sum_limit = 1e8;

/// Reference O(N^4) evaluation of sum_{l+m=k} [B(l,m) - B(m,m)] f_l f_m.
inline SpectralField collide_direct(const SpectralField& f, const KernelDecomposition& kernel,
                                    AngularRule rule = AngularRule::kernel, int oracle_points = 0) {
  require_same_grid(f.grid(), kernel.grid, "collide_direct");
  const auto& grid = f.grid();
  const double modes = static_cast<double>(grid.mode_count());
  if (modes * modes > direct_sum_limit)
    throw std::invalid_argument("collide_direct: (2N+1)^4 exceeds the direct-sum size limit");
  if (oracle_points <= 0) oracle_points = default_oracle_points(grid);

  const int N = grid.modes;
  const std::size_t M = grid.mode_count();
  SpectralField q(grid);
  for (std::size_t l = 0; l < M; ++l) {
    const auto kl = grid.mode(l);
    for (std::size_t m = 0; m < M; ++m) {
      const auto km = grid.mode(m);
      const int k1 = kl[0] + km[0], k2 = kl[1] + km[1];
      if (std::abs(k1) > N || std::abs(k2) > N) continue;
      const double gain = rule == AngularRule::kernel ? kernel.gain_kernel(l, m)
                                                      : angular_kernel(kl, km, kernel.radius, oracle_points);
      q.at(k1, k2) += (gain - kernel.loss_diag[m]) * f[l] * f[m];
    }
  }
  q *= kernel.prefactor();
  return q;
}

enum class SchemeVariant { fs, mpfs, epfs, mepfs };

inline std::string_view to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::fs: return "fs";
    case SchemeVariant::mpfs: return "mpfs";
    case SchemeVariant::epfs: return "epfs";
    case SchemeVariant::mepfs: return "mepfs";
  }
  return "?";
}

inline SchemeVariant parse_scheme(std::string_view s) {
  if (s == "fs") return SchemeVariant::fs;
  if (s == "mpfs") return SchemeVariant::mpfs;
  if (s == "epfs") return SchemeVariant::epfs;
  if (s == "mepfs") return SchemeVariant::mepfs;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

inline bool needs_constraint(SchemeVariant v) { return v == SchemeVariant::mpfs || v == SchemeVariant::mepfs; }

/// Removes the moments of q: q - sum_k C_k <q, Phi>.
inline SpectralField remove_moments(const SpectralField& q, const ConstraintOperator& op) {
  return conservative_project(q, MomentVector::zero(q.grid().dim), op);
}

/// The equilibrium the EPFS/MEPFS variants subtract: P_N M for EPFS,
/// the conservative projection of M for MEPFS.
inline SpectralField scheme_equilibrium(SchemeVariant variant, const MomentVector& m, const VelocityGrid& grid,
                                        const ConstraintOperator* op) {
  SpectralField eq = maxwellian_field(m, grid);
  if (variant == SchemeVariant::mepfs) eq = conservative_project(eq, m, *op);
  return eq;
}

/// Collision right-hand side for one scheme variant.
///
/// EPFS and MEPFS subtract the operator applied to a Maxwellian built from
/// `equilibrium` when given, otherwise from the instantaneous moments of f.
inline SpectralField apply_scheme(const SpectralField& f, SchemeVariant variant, const KernelDecomposition& kernel,
                                  const MomentBasis& basis, const ConstraintOperator* op, bool pad = true,
                                  const std::optional<MomentVector>& equilibrium = std::nullopt) {
  require_same_grid(f.grid(), kernel.grid, "apply_scheme");
  require_same_grid(f.grid(), basis.grid, "apply_scheme");
  if (needs_constraint(variant)) {
    if (!op) throw std::invalid_argument("apply_scheme: " + std::string(to_string(variant)) + " needs a ConstraintOperator");
    require_same_grid(f.grid(), op->grid(), "apply_scheme");
  }
  switch (variant) {
    case SchemeVariant::fs:
      return collide_fast(f, kernel, pad);
    case SchemeVariant::mpfs:
      return remove_moments(collide_fast(f, kernel, pad), *op);
    case SchemeVariant::epfs:
    case SchemeVariant::mepfs: {
      const MomentVector m = equilibrium ? *equilibrium : moments(f, basis);
      const SpectralField eq = scheme_equilibrium(variant, m, f.grid(), op);
      SpectralField q = collide_fast(f, kernel, pad) - collide_fast(eq, kernel, pad);
      return variant == SchemeVariant::mepfs ? remove_moments(q, *op) : q;
    }
  }
  throw std::logic_error("apply_scheme: unreachable");
}

}  // namespace conspec
