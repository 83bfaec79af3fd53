#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conspec/collision.hpp"
#include "conspec/diagnostics.hpp"
#include "conspec/field.hpp"
#include "conspec/moments.hpp"
#include "conspec/projection.hpp"

namespace conspec {

/// A time step produced non-finite coefficients.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct SolverConfig {
  SchemeVariant scheme = SchemeVariant::fs;
  double dt = 0.01;
  double t_final = 0.0;
  int angles = 8;
  double b0 = 1.0 / (2.0 * pi);
  bool pad = true;
  LossQuadrature loss_rule = LossQuadrature::angles;
  int diagnostic_stride = 1;
  int dim = 2;
  int modes = 32;
  double half_width = 12.0;
  int points_per_axis = 0;  // 0: 2N+2

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("SolverConfig: t_final must be >= 0");
    if (diagnostic_stride < 1) throw std::invalid_argument("SolverConfig: diagnostic_stride must be >= 1");
    if (angles < 1) throw std::invalid_argument("SolverConfig: angles must be >= 1");
    if (!(b0 > 0.0)) throw std::invalid_argument("SolverConfig: b0 must be positive");
  }

  VelocityGrid grid() const { return build_grid(dim, modes, half_width, points_per_axis); }

  /// Number of steps to reach t_final (t_final / dt rounded to nearest).
  long steps() const { return std::lround(t_final / dt); }
};

struct SolverState {
  double time = 0.0;
  SpectralField field;
  MomentVector initial_moments;
};

using RightHandSide = std::function<SpectralField(const SpectralField&)>;

/// Classical four-stage Runge-Kutta step of df/dt = rhs(f).
inline SolverState rk4_step(const SolverState& state, const SolverConfig& config, const RightHandSide& rhs) {
  const double h = config.dt;
  const SpectralField& y = state.field;
  const SpectralField k1 = rhs(y);
  const SpectralField k2 = rhs(SpectralField(y).axpy(0.5 * h, k1));
  const SpectralField k3 = rhs(SpectralField(y).axpy(0.5 * h, k2));
  const SpectralField k4 = rhs(SpectralField(y).axpy(h, k3));

  SolverState next{state.time + h, y, state.initial_moments};
  SpectralField incr = k1;
  incr.axpy(2.0, k2).axpy(2.0, k3) += k4;
  next.field.axpy(h / 6.0, incr);
  if (!next.field.all_finite())
    throw NumericalError("rk4_step: non-finite coefficients at t = " + std::to_string(next.time), next.time);
  return next;
}

/// Everything needed to evolve df/dt = (L/pi)^d Q_scheme(f) on one grid.
class Solver {
 public:
  explicit Solver(const SolverConfig& config)
      : config_((config.validate(), config)),
        grid_(config.grid()),
        basis_(build_moment_basis(grid_)),
        op_(basis_),
        kernel_(precompute_kernel(grid_, config.angles, config.b0, config.loss_rule)),
        time_scale_(collision_time_scale(grid_)) {}

  const SolverConfig& config() const { return config_; }
  const VelocityGrid& grid() const { return grid_; }
  const MomentBasis& basis() const { return basis_; }
  const ConstraintOperator& constraint() const { return op_; }
  const KernelDecomposition& kernel() const { return kernel_; }

  /// Initial state; MPFS/MEPFS start from the conservative projection onto `target`
  /// (the field's own moments when absent), which is also the frozen reference.
  SolverState prepare(const SpectralField& initial, const std::optional<MomentVector>& target = std::nullopt) {
    require_same_grid(initial.grid(), grid_, "Solver::prepare");
    const MomentVector m = target ? *target : moments(initial, basis_);
    SolverState s{0.0, initial, m};
    if (needs_constraint(config_.scheme)) s.field = conservative_project(initial, m, op_);
    equilibrium_term_.reset();
    if (config_.scheme == SchemeVariant::mepfs) {
      // Moments are invariant under MEPFS, so Q(M^c_N) can be evaluated once.
      const SpectralField eq = scheme_equilibrium(config_.scheme, m, grid_, &op_);
      equilibrium_term_ = collide_fast(eq, kernel_, config_.pad);
    }
    return s;
  }

  /// d f / dt for the configured scheme.
  SpectralField rhs(const SpectralField& f) const {
    SpectralField q;
    if (config_.scheme == SchemeVariant::mepfs && equilibrium_term_) {
      q = remove_moments(collide_fast(f, kernel_, config_.pad) - *equilibrium_term_, op_);
    } else {
      q = apply_scheme(f, config_.scheme, kernel_, basis_, &op_, config_.pad);
    }
    q *= time_scale_;
    return q;
  }

  SolverState step(const SolverState& s) const {
    return rk4_step(s, config_, [this](const SpectralField& f) { return rhs(f); });
  }

  DiagnosticsRow diagnose(const SolverState& s, const std::function<SpectralField(double)>& exact = {}) const {
    DiagnosticsRow row;
    row.time = s.time;
    row.moments = moments(s.field, basis_);
    row.temperature = temperature(row.moments);
    row.l2_to_maxwellian = l2_distance(s.field, maxwellian_field(row.moments, grid_));
    if (exact) row.l2_to_exact = l2_distance(s.field, exact(s.time));
    row.moment_loss_of_q = moment_loss_of_Q(s.field, kernel_, basis_, config_.pad);
    return row;
  }

  /// Runs to t_final, handing a row to `sink` at t = 0, every diagnostic_stride
  /// steps, and at the final step.
  SolverState integrate(const SpectralField& initial, const std::function<void(const DiagnosticsRow&)>& sink,
                        const std::optional<MomentVector>& target = std::nullopt,
                        const std::function<SpectralField(double)>& exact = {}) {
    SolverState s = prepare(initial, target);
    const long steps = config_.steps();
    if (sink) sink(diagnose(s, exact));
    for (long n = 1; n <= steps; ++n) {
      s = step(s);
      s.time = static_cast<double>(n) * config_.dt;
      if (sink && (n % config_.diagnostic_stride == 0 || n == steps)) sink(diagnose(s, exact));
    }
    return s;
  }

 private:
  SolverConfig config_;
  VelocityGrid grid_;
  MomentBasis basis_;
  ConstraintOperator op_;
  KernelDecomposition kernel_;
  double time_scale_;
  std::optional<SpectralField> equilibrium_term_;
};

/// Named initial data: gauss1d, bumps1d (1D), bkw2d, bumps2d (2D).
inline std::vector<GaussianComponent> named_mixture(std::string_view name) {
  if (name == "gauss1d") return {{1.0, {0.0, 0.0}, 1.0}};
  if (name == "bumps1d") return {{0.5, {4.0, 0.0}, 1.0}, {0.5, {-2.0, 0.0}, 1.0}};
  if (name == "bumps2d") return {{0.5, {1.0, 2.0}, 1.0}, {0.5, {-2.0, -1.0}, 1.0}};
  throw std::invalid_argument("no Gaussian mixture named '" + std::string(name) + "'");
}

inline int initial_condition_dim(std::string_view name) {
  if (name == "gauss1d" || name == "bumps1d") return 1;
  if (name == "bkw2d" || name == "bumps2d") return 2;
  throw std::invalid_argument("unknown initial condition '" + std::string(name) + "'");
}

/// Moments of the named density on the whole space.
inline MomentVector initial_condition_moments(std::string_view name) {
  const int dim = initial_condition_dim(name);
  if (name == "bkw2d") return MomentVector{2, 1.0, {0.0, 0.0}, 2.0};
  return exact_moments_gaussian_mixture(named_mixture(name), dim);
}

inline SpectralField initial_condition(std::string_view name, const VelocityGrid& grid) {
  const int dim = initial_condition_dim(name);
  if (grid.dim != dim)
    throw std::invalid_argument("initial_condition: '" + std::string(name) + "' needs a " + std::to_string(dim) + "D grid");
  if (name == "bkw2d") return bkw_field(0.0, grid);
  const auto mixture = named_mixture(name);
  return forward_transform(
      sample(grid, [&](const std::array<double, 2>& v) { return gaussian_mixture_density(mixture, dim, v); }), grid);
}

}  // namespace conspec
