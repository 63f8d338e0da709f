#include <cmath>

#include "eplt/channel.hpp"
#include "eplt/errors.hpp"
#include "eplt/thermo.hpp"
#include "test_util.hpp"

using namespace eplt;

namespace {

SpeedupScenario scenario(double tau_gamma, double tau_eta, double t_u, double delta, double p_min,
                         int d) {
  SpeedupScenario s;
  s.tau_gamma = tau_gamma;
  s.tau_eta = tau_eta;
  s.t_unitary = t_u;
  s.delta = delta;
  s.p_min = p_min;
  s.d = d;
  return s;
}

double excited_population(double energy, double kT) { return 1.0 / (1.0 + std::exp(energy / kT)); }

}  // namespace

TEST(Timing, PartialThermalization) {
  EXPECT_NEAR(t_partial_thermalization(1.0, std::exp(-2.0), 3.0), 6.0, 1e-12);
  EXPECT_EQ(t_partial_thermalization(0.01, 0.01, 3.0), 0.0);
  EXPECT_EQ(t_partial_thermalization(0.005, 0.01, 3.0), 0.0);
  EXPECT_EQ(t_partial_thermalization(0.5, 0.0, 3.0), kInfinity);
  EXPECT_EQ(t_partial_thermalization(0.0, 0.0, 3.0), 0.0);
  EXPECT_THROW(t_partial_thermalization(0.5, 0.1, 0.0), ConfigError);
}

// Relaxing for t_PT lands exactly on the δ boundary for a diagonal state.
TEST(Timing, PartialThermalizationReachesDelta) {
  const auto gamma = eplt::testing::qubit_gibbs(0.2);
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const DensityOperator rho(excited);
  const double delta = 1e-3;
  const double t = t_partial_thermalization(rho, gamma, delta, 2.0);
  const auto out = partial_thermalization(gamma, t, 2.0).apply(rho);
  EXPECT_NEAR(sup_norm(out.matrix() - gamma.matrix()), delta, 1e-12);
  EXPECT_TRUE(delta_thermalizes(out, gamma, delta));
  const auto early = partial_thermalization(gamma, 0.99 * t, 2.0).apply(rho);
  EXPECT_FALSE(delta_thermalizes(early, gamma, delta));
}

TEST(Timing, EpltBoundWorkedExamples) {
  EXPECT_NEAR(t_eplt_bound(SpeedupScenario::worked_example(2), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(t_eplt_bound(SpeedupScenario::worked_example(3), 2.5), 2.5 + 100.0 * std::log(1.5),
              1e-10);
}

TEST(Quench, GibbsStateOfQuenchedGapIsEta) {
  for (double kT : {0.5, 1.0, 2.0}) {
    const double e = 1.0;
    const double q = excited_population(e, kT);
    const auto gamma = eplt::testing::qubit_gibbs(q);
    for (double eps : {0.0, 0.1, 0.3}) {
      if (eps >= 2 * q) continue;
      const double quenched = quench_energy(e, kT, eps);
      const auto eta = eta_state(gamma, eps);
      EXPECT_NEAR(excited_population(quenched, kT), eta.matrix()(1, 1).real(), 1e-12)
          << "kT=" << kT << " eps=" << eps;
    }
    EXPECT_NEAR(quench_energy(e, kT, 0.0), e, 1e-12);
  }
}

TEST(Quench, PoleAndBeyond) {
  const double kT = 1.0;
  const double pole = quench_pole(1.0, kT);
  EXPECT_NEAR(pole, 2.0 * excited_population(1.0, kT), 1e-15);
  EXPECT_EQ(quench_energy(1.0, kT, pole), kInfinity);
  EXPECT_TRUE(quench_diagnostic(1.0, kT, pole).has_value());
  EXPECT_EQ(quench_energy(1.0, kT, pole + 0.01), kInfinity);
  EXPECT_NE(quench_diagnostic(1.0, kT, pole + 0.01)->find("exceeds"), std::string::npos);
  EXPECT_FALSE(quench_diagnostic(1.0, kT, pole - 0.01).has_value());
  EXPECT_GT(quench_energy(1.0, kT, pole - 1e-6), 10.0);
  // no overflow deep in the cold regime
  EXPECT_GT(quench_pole(600.0, 1.0), 0.0);
  EXPECT_NEAR(quench_pole(-800.0, 1.0), 2.0, 1e-15);
}

TEST(Iterations, NDeltaWorkedExample) {
  const auto s = SpeedupScenario::worked_example(2);
  const double x = 8.0 * std::log2(2.0 * std::sqrt(2.0) / 1e-3);
  EXPECT_NEAR(n_delta_argument(s), x, 1e-12);
  EXPECT_EQ(n_delta(s), 92);
  EXPECT_NEAR(t_finite_eplt(s, 92), 92.0, 1e-12);
}

TEST(Iterations, NDeltaIsStrictlyAboveIntegerArgument) {
  const double c = 4.0 * 0.5 * std::sqrt(2.0);
  for (int k : {16, 40, 77}) {
    auto s = scenario(100.0, 100.0, 1.0, c * std::exp2(-k / 8.0), 0.5, 2);
    EXPECT_EQ(n_delta(s), k + 1) << "k=" << k;
    s.delta *= 1.0 - 1e-6;
    EXPECT_EQ(n_delta(s), k + 1);
    s.delta = c * std::exp2(-k / 8.0) * (1.0 + 1e-6);
    EXPECT_EQ(n_delta(s), k);
  }
  // precision looser than the prefactor: no twirl steps needed
  EXPECT_EQ(n_delta(scenario(1.0, 1.0, 1.0, 0.9, 0.05, 2)), 0);
}

TEST(Speedup, ConditionIsStrict) {
  const double edge = speedup_constant();
  EXPECT_NEAR(edge, 8.0 / std::log(2.0), 1e-15);
  EXPECT_FALSE(speedup_condition(scenario(edge, 1.0, 1.0, 1e-3, 0.5, 2)));
  EXPECT_TRUE(speedup_condition(scenario(edge * (1 + 1e-9), 1.0, 1.0, 1e-3, 0.5, 2)));
}

// At the threshold distance, τ_γ ln(D/δ) equals the finite time computed with
// the real-valued step count x + 1 ≥ N_δ, so states above it are won.
TEST(Speedup, ThresholdMatchesContinuousStepCount) {
  for (int d : {2, 3}) {
    const auto s = SpeedupScenario::worked_example(d);
    const double threshold = speedup_state_threshold(s);
    const double x = n_delta_argument(s);
    const double relaxed = s.tau_eta * std::log(1.0 / (s.d * s.p_min)) + (x + 1.0) * s.t_unitary;
    EXPECT_NEAR(t_partial_thermalization(threshold, s.delta, s.tau_gamma), relaxed, 1e-9);
    EXPECT_TRUE(race_report(s, threshold * (1 + 1e-6)).finite_wins);
  }
}

TEST(Failure, Log2Values) {
  const auto s = SpeedupScenario::worked_example(2);
  EXPECT_NEAR(precision_failure_log2(s), -4.0 * std::log2(2000.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(iteration_failure_log2(92), -46.0, 0.0);
  EXPECT_NEAR(chebyshev_tail(4, 0.5), 0.25, 1e-15);
  EXPECT_EQ(chebyshev_tail(1, 0.1), 1.0);
  EXPECT_NEAR(chebyshev_tail_log2(92, -23.0), -46.0, 0.0);
  EXPECT_EQ(chebyshev_tail_log2(2, 5.0), -12.0);
  EXPECT_EQ(chebyshev_tail_log2(2, -5.0), 0.0);
}

TEST(Race, IdealCrossoverSeparatesWinners) {
  auto s = SpeedupScenario::worked_example(3);
  const double distance = 0.5;
  const auto base = race_report(s, distance, 1.0);
  ASSERT_GT(base.crossover_ideal, 0.0);
  s.delta = base.crossover_ideal * 0.999;
  EXPECT_TRUE(race_report(s, distance, 1.0).ideal_wins);
  s.delta = base.crossover_ideal * 1.001;
  EXPECT_FALSE(race_report(s, distance, 1.0).ideal_wins);
}

TEST(Race, FiniteCrossoverIsGuaranteedBelow) {
  for (int d : {2, 3}) {
    auto s = SpeedupScenario::worked_example(d);
    const double distance = 0.3;
    const double cross = race_report(s, distance).crossover_finite;
    ASSERT_GT(cross, 0.0);
    for (int k = 1; k <= 400; ++k) {
      s.delta = cross * std::exp2(-k / 10.0);
      EXPECT_TRUE(race_report(s, distance).finite_wins) << "delta=" << s.delta;
    }
    if (cross < 1.0) {
      s.delta = cross * (1.0 + 1e-9);
      EXPECT_FALSE(race_report(s, distance).finite_wins);
    }
  }
}

TEST(Race, NoCrossoverWithoutSpeedupCondition) {
  const auto s = scenario(5.0, 5.0, 1.0, 1e-3, 0.5, 2);
  const auto r = race_report(s, 0.4);
  EXPECT_FALSE(r.speedup_condition);
  EXPECT_EQ(r.crossover_finite, 0.0);
  EXPECT_TRUE(r.twirl_time_assumed);
}

TEST(Scenario, Validation) {
  EXPECT_THROW(scenario(0.0, 1.0, 1.0, 1e-3, 0.5, 2).validate(), ConfigError);
  EXPECT_THROW(scenario(1.0, 1.0, 1.0, 1.0, 0.5, 2).validate(), ConfigError);
  EXPECT_THROW(scenario(1.0, 1.0, 1.0, 1e-3, 0.6, 2).validate(), ConfigError);
  EXPECT_THROW(scenario(1.0, 1.0, 1.0, 1e-3, 0.5, 1).validate(), ConfigError);
  EXPECT_NO_THROW(scenario(1.0, 1.0, 1.0, 1e-3, 0.5, 2).validate());
}

TEST(Convergence, AveragedWorstInputStaysBelowBound) {
  const auto r = twirl_convergence(2, 3, 60, 5, 40);
  EXPECT_EQ(r.factors, 3);
  EXPECT_LE(r.worst_input_mean_square, 0.125);
  EXPECT_GT(r.mean_square, 0.0);
  EXPECT_LE(r.tail_frequency, r.tail_bound);
  const auto again = twirl_convergence(2, 3, 60, 5, 40);
  EXPECT_EQ(r.mean_square, again.mean_square);
}
