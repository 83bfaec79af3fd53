#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "conspec/collision.hpp"
#include "conspec/diagnostics.hpp"
#include "conspec/dynamics.hpp"
#include "support.hpp"

using namespace conspec;
using conspec::fixtures::random_hermitian;
using conspec::fixtures::relative_difference;

namespace {

const double R = support_fraction * pi;

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("CONSPEC_THREADS")) saved_ = old;
    ::setenv("CONSPEC_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (saved_.empty())
      ::unsetenv("CONSPEC_THREADS");
    else
      ::setenv("CONSPEC_THREADS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

}  // namespace

TEST(Phi, KnownValues) {
  EXPECT_DOUBLE_EQ(phi_r2(0.0, R), 2.0 * R);
  EXPECT_NEAR(phi_r2(pi / R, R), 0.0, 1e-15);
  // 2 sin(R) for R = 2 pi / (3 + sqrt 2), frozen from an independent evaluation.
  EXPECT_NEAR(phi_r2(1.0, R), 1.9783132104137542, 1e-15);
}

TEST(Phi, MatchesItsFourierIntegral) {
  for (double s : {0.3, 1.0, 2.7, 7.5}) {
    const double q = fixtures::simpson([&](double rho) { return std::cos(rho * s); }, -R, R, 20000);
    EXPECT_NEAR(phi_r2(s, R), q, 1e-12);
  }
}

TEST(Phi, EvenBoundedAndSmoothAtZero) {
  for (double s = -20.0; s <= 20.0; s += 0.173) {
    EXPECT_EQ(phi_r2(s, R), phi_r2(-s, R));
    EXPECT_LE(std::abs(phi_r2(s, R)), 2.0 * R);
  }
  EXPECT_NEAR(phi_r2(1e-9, R), phi_r2(0.0, R), 1e-15);
  EXPECT_NEAR(phi_r2(2e-8 / R, R), 2.0 * std::sin(2e-8) / (2e-8 / R), 1e-14);
}

TEST(Kernel, ZeroModeWeightsAreTwoR) {
  const auto g = build_grid(2, 4, 12.0);
  const auto k = precompute_kernel(g, 8);
  for (int p = 0; p < 8; ++p) {
    EXPECT_DOUBLE_EQ(k.alpha[static_cast<std::size_t>(p)][g.index(0, 0)], 2.0 * k.radius);
    EXPECT_DOUBLE_EQ(k.alpha_perp[static_cast<std::size_t>(p)][g.index(0, 0)], 2.0 * k.radius);
  }
}

TEST(Kernel, RejectsOneDimensionalGridsAndBadParameters) {
  EXPECT_THROW(precompute_kernel(build_grid(1, 4, 1.0), 8), std::invalid_argument);
  EXPECT_THROW(precompute_kernel(build_grid(2, 4, 1.0), 0), std::invalid_argument);
  EXPECT_THROW(precompute_kernel(build_grid(2, 4, 1.0), 8, -1.0), std::invalid_argument);
}

TEST(Kernel, AngleRuleConvergesToTheFineRule) {
  const auto g = build_grid(2, 8, 12.0);
  const auto k = precompute_kernel(g, 32);
  double err = 0.0, scale = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, g.mode_count() - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t l = pick(rng), m = pick(rng);
    const double oracle = angular_kernel(g.mode(l), g.mode(m), k.radius, 10000);
    err = std::max(err, std::abs(k.gain_kernel(l, m) - oracle));
    scale = std::max(scale, std::abs(oracle));
  }
  EXPECT_LT(err / scale, 1e-10);
}

TEST(Kernel, LossDiagonalRules) {
  const auto g = build_grid(2, 6, 12.0);
  const auto angles = precompute_kernel(g, 8);
  const auto fine = precompute_kernel(g, 8, 1.0 / (2.0 * pi), LossQuadrature::fine);
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    EXPECT_EQ(angles.loss_diag[m], angles.gain_kernel(m, m));
    EXPECT_NEAR(fine.loss_diag[m], angular_kernel(g.mode(m), g.mode(m), fine.radius, 10000), 1e-10);
    EXPECT_EQ(angles.loss_diag[m], angles.loss_diag[g.mirror(m)]);
  }
}

TEST(CollideFast, ZeroAndConstantFieldsGiveZero) {
  const auto g = build_grid(2, 6, 12.0);
  for (auto rule : {LossQuadrature::angles, LossQuadrature::fine}) {
    const auto k = precompute_kernel(g, 8, 1.0 / (2.0 * pi), rule);
    EXPECT_EQ(fixtures::max_abs(collide_fast(SpectralField(g), k)), 0.0);
    SpectralField c(g);
    c.at(0, 0) = 0.7;
    // Gain and loss are summed separately, so the cancellation is only to rounding of either.
    double scale = 0.0;
    for (double b : k.loss_diag) scale = std::max(scale, 0.49 * std::abs(b));
    EXPECT_LT(fixtures::max_abs(collide_fast(c, k)), 1e-13 * scale);
    EXPECT_LT(fixtures::max_abs(collide_direct(c, k)), 1e-13 * scale);
  }
}

TEST(CollideFast, MatchesDirectSum) {
  std::mt19937_64 rng(101);
  const auto g = build_grid(2, 8, 12.0);
  for (auto rule : {LossQuadrature::angles, LossQuadrature::fine}) {
    const auto k = precompute_kernel(g, 8, 1.0 / (2.0 * pi), rule);
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = random_hermitian(g, rng);
      EXPECT_LT(relative_difference(collide_fast(f, k), collide_direct(f, k)), 1e-11);
    }
  }
}

TEST(CollideFast, OutputIsHermitian) {
  std::mt19937_64 rng(103);
  const auto g = build_grid(2, 7, 12.0);
  const auto k = precompute_kernel(g, 8);
  EXPECT_EQ(collide_fast(random_hermitian(g, rng), k).hermitian_defect(), 0.0);
  EXPECT_EQ(collide_fast(random_hermitian(g, rng), k, false).hermitian_defect(), 0.0);
}

TEST(CollideFast, PaddingIsIrrelevantForHalfBandFields) {
  std::mt19937_64 rng(107);
  const auto g = build_grid(2, 8, 12.0);
  const auto k = precompute_kernel(g, 8);
  auto f = random_hermitian(g, rng);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto m = g.mode(i);
    if (std::abs(m[0]) > 4 || std::abs(m[1]) > 4) f[i] = 0.0;
  }
  const auto padded = collide_fast(f, k, true);
  EXPECT_LT(relative_difference(collide_fast(f, k, false), padded), 1e-12);
}

TEST(CollideFast, BitwiseIndependentOfThreadCount) {
  std::mt19937_64 rng(109);
  const auto g = build_grid(2, 10, 12.0);
  const auto k = precompute_kernel(g, 8);
  const auto f = random_hermitian(g, rng);
  SpectralField one, many;
  {
    ThreadsEnv env("1");
    one = collide_fast(f, k);
  }
  {
    ThreadsEnv env("3");
    many = collide_fast(f, k);
  }
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(one[i], many[i]);
}

TEST(CollideDirect, CommutesWithReflection) {
  std::mt19937_64 rng(113);
  const auto g = build_grid(2, 5, 12.0);
  const auto k = precompute_kernel(g, 8);
  const auto f = random_hermitian(g, rng);
  SpectralField reflected(g);
  for (std::size_t i = 0; i < f.size(); ++i) reflected[i] = f[g.mirror(i)];
  const auto q = collide_direct(f, k);
  const auto qr = collide_direct(reflected, k);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(qr[i] - q[g.mirror(i)]), 1e-13 * fixtures::max_abs(q));
}

TEST(CollideDirect, FineAngularRuleApproachesTheKernelRuleWithManyAngles) {
  std::mt19937_64 rng(127);
  const auto g = build_grid(2, 4, 12.0);
  const auto k = precompute_kernel(g, 32, 1.0 / (2.0 * pi), LossQuadrature::fine);
  const auto f = random_hermitian(g, rng);
  EXPECT_LT(relative_difference(collide_direct(f, k, AngularRule::kernel), collide_direct(f, k, AngularRule::fine)),
            1e-11);
}

TEST(CollideDirect, RefusesOversizedGrids) {
  const auto g = build_grid(2, 50, 12.0);
  const auto k = precompute_kernel(g, 1);
  EXPECT_THROW(collide_direct(SpectralField(g), k), std::invalid_argument);
}

TEST(CollideFast, MaxwellianResidualShrinksWithResolution) {
  const MomentVector m{2, 1.0, {0.0, 0.0}, 2.0};
  double previous = 0.0;
  for (int n : {16, 32}) {
    const auto g = build_grid(2, n, 12.0);
    const auto k = precompute_kernel(g, 8);
    auto q = collide_fast(maxwellian_field(m, g), k);
    q *= collision_time_scale(g);
    const double norm = l2_norm(q);
    if (n == 32) {
      EXPECT_LT(norm, 1e-6);
      EXPECT_LT(norm, previous);
    }
    previous = norm;
  }
}

TEST(Schemes, ParseAndName) {
  for (auto v : {SchemeVariant::fs, SchemeVariant::mpfs, SchemeVariant::epfs, SchemeVariant::mepfs})
    EXPECT_EQ(parse_scheme(to_string(v)), v);
  EXPECT_THROW(parse_scheme("rk4"), std::invalid_argument);
}

TEST(Schemes, MomentPreservingOutputHasNoMoments) {
  std::mt19937_64 rng(131);
  const auto g = build_grid(2, 8, 12.0);
  const auto basis = build_moment_basis(g);
  const ConstraintOperator op(basis);
  const auto k = precompute_kernel(g, 8);
  for (auto v : {SchemeVariant::mpfs, SchemeVariant::mepfs}) {
    const auto f = maxwellian_field(MomentVector{2, 1.0, {0.0, 0.0}, 2.0}, g) + 0.01 * remove_moments(random_hermitian(g, rng, 0.2), op);
    const auto q = apply_scheme(f, v, k, basis, &op);
    for (double x : scaled_moments(q, basis)) EXPECT_LT(std::abs(x), 1e-13);
  }
}

TEST(Schemes, EquilibriumPreservingVariantsVanishOnTheirEquilibrium) {
  const auto g = build_grid(2, 12, 12.0);
  const auto basis = build_moment_basis(g);
  const ConstraintOperator op(basis);
  const auto k = precompute_kernel(g, 8);
  const MomentVector m{2, 1.0, {0.2, -0.1}, 2.05};
  for (auto v : {SchemeVariant::epfs, SchemeVariant::mepfs}) {
    const auto eq = scheme_equilibrium(v, m, g, &op);
    const auto q = apply_scheme(eq, v, k, basis, &op, true, m);
    EXPECT_EQ(fixtures::max_abs(q), 0.0) << to_string(v);
  }
}

TEST(Schemes, ConstrainedVariantsNeedAnOperator) {
  const auto g = build_grid(2, 4, 12.0);
  const auto basis = build_moment_basis(g);
  const auto k = precompute_kernel(g, 8);
  SpectralField f(g);
  f.at(0, 0) = 1.0;
  EXPECT_THROW(apply_scheme(f, SchemeVariant::mpfs, k, basis, nullptr), std::invalid_argument);
  EXPECT_THROW(apply_scheme(f, SchemeVariant::mepfs, k, basis, nullptr), std::invalid_argument);
  EXPECT_NO_THROW(apply_scheme(f, SchemeVariant::fs, k, basis, nullptr));
}

TEST(Schemes, RawOperatorConservesMassMode) {
  std::mt19937_64 rng(137);
  const auto g = build_grid(2, 10, 12.0);
  const auto k = precompute_kernel(g, 8);
  const auto f = random_hermitian(g, rng, 0.1);
  const auto q = collide_fast(f, k);
  EXPECT_LT(std::abs(q.at(0, 0)), 1e-13 * fixtures::max_abs(q));
}

TEST(MomentLoss, ZeroForTrivialFields) {
  const auto g = build_grid(2, 8, 12.0);
  const auto basis = build_moment_basis(g);
  const auto k = precompute_kernel(g, 8);
  EXPECT_EQ(moment_loss_of_Q(SpectralField(g), k, basis), 0.0);
  SpectralField c(g);
  c.at(0, 0) = 0.3;
  // Reported in physical units: time scale a^2 times at most a^4 for the energy row.
  const double a = 12.0 / pi;
  EXPECT_LT(moment_loss_of_Q(c, k, basis), 1e-13 * std::pow(a, 6));
}

TEST(MomentLoss, ShrinksWithMoreModes) {
  double loss[2];
  int i = 0;
  for (int n : {16, 32}) {
    const auto g = build_grid(2, n, 12.0);
    loss[i++] = moment_loss_of_Q(bkw_field(0.0, g), precompute_kernel(g, 8), build_moment_basis(g));
  }
  EXPECT_LT(loss[1], loss[0]);
}
