#include <cmath>
#include <numbers>

#include "eplt/constructions.hpp"
#include "eplt/entanglement.hpp"
#include "eplt/errors.hpp"
#include "test_util.hpp"

using namespace eplt;
using eplt::testing::qubit_gibbs;

namespace {

// U(2) up to phase: [[cos a, −e^{iφ} sin a], [e^{iχ} sin a, e^{i(φ+χ)} cos a]].
ComplexMatrix su2(double a, double phi, double chi) {
  const Complex i(0.0, 1.0);
  ComplexMatrix u(2, 2);
  u(0, 0) = std::cos(a);
  u(0, 1) = -std::exp(i * phi) * std::sin(a);
  u(1, 0) = std::exp(i * chi) * std::sin(a);
  u(1, 1) = std::exp(i * (phi + chi)) * std::cos(a);
  return u;
}

double fidelity_with(const ComplexMatrix& rho, const ComplexMatrix& u) {
  const ComplexVector psi = max_entangled_vector(2);
  const ComplexVector phi = tensor(identity(2), u) * psi;
  return phi.dot(rho * phi).real();
}

double grid_fef(const ComplexMatrix& rho, int steps) {
  const double pi = std::numbers::pi;
  double best = 0.0;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b < 2 * steps; ++b) {
      for (int c = 0; c < 2 * steps; ++c) {
        const auto u = su2(0.5 * pi * a / steps, pi * b / steps, pi * c / steps);
        best = std::max(best, fidelity_with(rho, u));
      }
    }
  }
  return best;
}

}  // namespace

TEST(Fef, MaximallyEntangledIsOne) {
  for (int d : {2, 3}) {
    const auto r = fef(max_entangled(d), 4);
    EXPECT_NEAR(r.optimized, 1.0, 1e-12);
    EXPECT_NEAR(r.lower_bound, 1.0, 1e-12);
  }
}

TEST(Fef, IsotropicEqualsSingletFraction) {
  for (double p : {0.0, 0.2, 0.7}) {
    const auto rho = isotropic(3, p);
    const double f = p + (1 - p) / 9.0;
    EXPECT_NEAR(singlet_fraction(rho), f, 1e-14);
    EXPECT_NEAR(fef(rho, 8).optimized, f, 1e-10);
  }
}

TEST(Fef, ProductStateIsOneHalf) {
  const int digits[] = {0, 0};
  const auto rho = product_basis_state(SubsystemShape{2, 2}, digits);
  EXPECT_NEAR(fef(rho).optimized, 0.5, 1e-10);
  EXPECT_NEAR(grid_fef(rho.matrix(), 12), 0.5, 1e-12);
}

TEST(Fef, AgreesWithGridSearchOnRandomStates) {
  Rng rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const auto rho = random_mixed_state(SubsystemShape{2, 2}, rng);
    const double opt = fef(rho).optimized;
    const double grid = grid_fef(rho.matrix(), 24);
    EXPECT_GE(opt, grid - 1e-12);
    EXPECT_LE(opt - grid, 5e-3);
  }
}

TEST(Fef, InvariantUnderLocalUnitaries) {
  Rng rng(42);
  const auto rho = random_mixed_state(SubsystemShape{3, 3}, rng);
  const ComplexMatrix v = tensor(haar_unitary(3, rng), haar_unitary(3, rng));
  const DensityOperator moved(v * rho.matrix() * v.adjoint(), rho.shape());
  const auto a = fef(rho);
  const auto b = fef(moved);
  EXPECT_NEAR(a.optimized, b.optimized, 1e-8);
  EXPECT_GE(a.optimized, a.lower_bound - 1e-14);
  EXPECT_TRUE(is_unitary(a.maximizer, 1e-10));
}

TEST(Fef, Deterministic) {
  Rng rng(43);
  const auto rho = random_mixed_state(SubsystemShape{2, 2}, rng);
  const auto a = fef(rho, 6, 17);
  const auto b = fef(rho, 6, 17);
  EXPECT_EQ(a.optimized, b.optimized);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_EQ(a.restarts, 6);
}

TEST(Ppt, SingletAndIsotropicThreshold) {
  EXPECT_NEAR(ppt_min_eigenvalue(max_entangled(2)), -0.5, 1e-14);
  EXPECT_NEAR(ppt_min_eigenvalue(max_entangled(3)), -1.0 / 3.0, 1e-14);
  for (int d : {2, 3}) {
    const double edge = 1.0 / (d + 1);
    EXPECT_TRUE(is_npt(isotropic(d, edge + 1e-6)));
    EXPECT_FALSE(is_npt(isotropic(d, edge)));
    EXPECT_TRUE(isotropic_entangled(d, edge + 1e-6));
    EXPECT_FALSE(isotropic_entangled(d, edge));
  }
  // partial transpose on either party has the same spectrum
  Rng rng(44);
  const auto rho = random_mixed_state(SubsystemShape{2, 3}, rng);
  EXPECT_NEAR(ppt_min_eigenvalue(rho, 0), ppt_min_eigenvalue(rho, 1), 1e-12);
}

TEST(Ppt, ThermalizedSingletStaysEntangled) {
  const auto ga = qubit_gibbs(0.1);
  const auto gb = qubit_gibbs(0.1);
  const double eps = eplt_max_epsilon(ga, gb);
  const DensityOperator out(eplt_apply(ga, gb, eps, max_entangled(2).matrix()),
                            SubsystemShape{2, 2});
  EXPECT_TRUE(is_npt(out));
  // eigenvalue of the partial transpose in the {|01⟩, |10⟩} block
  const auto eta = eta_state(ga, eps).matrix();
  const double p0 = eta(0, 0).real();
  const double p1 = eta(1, 1).real();
  const double off = eps / 2.0;
  const double diag = (1 - eps) * p0 * p1;
  EXPECT_NEAR(ppt_min_eigenvalue(out), diag - off, 1e-12);
}

TEST(Thresholds, FlagsUseStrictInequalities) {
  const auto f = fef_threshold_flags(0.5, 2);
  EXPECT_FALSE(f.teleportation);
  EXPECT_FALSE(f.nonlocal.has_value());
  EXPECT_TRUE(fef_threshold_flags(0.5 + 1e-9, 2).teleportation);
  const auto g = fef_threshold_flags(0.8, 2, 0.78, 0.7);
  EXPECT_TRUE(*g.nonlocal);
  EXPECT_TRUE(*g.steerable);
  EXPECT_FALSE(*fef_threshold_flags(0.7, 2, 0.78, 0.7).steerable);
}

TEST(Gme, GhzIsotropicParameter) {
  for (double x : {0.0, 0.15, 0.6}) {
    EXPECT_NEAR(ghz_isotropic_parameter(ghz_isotropic(3, x)), x, 1e-12);
  }
  EXPECT_FALSE(gme_threshold_test(ghz_isotropic(3, 0.2)));
  EXPECT_TRUE(gme_threshold_test(ghz_isotropic(3, 0.2 + 1e-6)));
  EXPECT_TRUE(gme_threshold_test(ghz_isotropic(4, 0.12)));
  Rng rng(45);
  EXPECT_THROW(ghz_isotropic_parameter(random_mixed_state(SubsystemShape::uniform(2, 3), rng)),
               NotInFamilyError);
}

TEST(Thermality, SpanningStatesSpanHermitianOperators) {
  for (int n : {2, 3, 4}) {
    const auto states = spanning_states(n);
    ASSERT_EQ(static_cast<int>(states.size()), n * n);
    ComplexMatrix stacked(n * n, n * n);
    for (int k = 0; k < n * n; ++k) stacked.col(k) = vec(states[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<ComplexMatrix> lu(stacked);
    EXPECT_EQ(lu.rank(), n * n);
  }
}

TEST(Thermality, EpltPassesIdentityFails) {
  const auto ga = qubit_gibbs(0.3);
  const auto gb = qubit_gibbs(0.2);
  const auto mix = eplt::eplt(ga, gb, 0.4);
  const auto ok = verify_local_thermalization(mix, {ga, gb}, 1e-10);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.basis_size, 16);
  EXPECT_LT(ok.max_marginal_deviation, 1e-12);

  const LinearMap id = [](const ComplexMatrix& x) { return x; };
  const auto bad = verify_local_thermalization(id, SubsystemShape{2, 2}, {ga, gb}, 1e-10, true);
  EXPECT_FALSE(bad.passed());
  EXPECT_GT(bad.max_marginal_deviation, 0.5);

  const LinearMap global = [&](const ComplexMatrix&) { return tensor(ga.matrix(), gb.matrix()); };
  const auto not_losr =
      verify_local_thermalization(global, SubsystemShape{2, 2}, {ga, gb}, 1e-10, false);
  EXPECT_LT(not_losr.max_marginal_deviation, 1e-14);
  EXPECT_FALSE(not_losr.passed());
}
