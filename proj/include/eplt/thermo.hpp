#pragma once

// Time and energy bookkeeping for local thermalization: relaxation times,
// quench energies, finite-twirl iteration counts and the speed-up race
// between partial thermalization and twirl-based thermalization.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "eplt/states.hpp"

namespace eplt {

/// Sentinel for divergent times and energies.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SpeedupScenario {
  double tau_gamma = 1.0;  // relaxation timescale towards γ
  double tau_eta = 1.0;    // relaxation timescale towards η
  double t_unitary = 1.0;  // duration of one twirl unitary
  double delta = 1e-3;     // target sup-norm precision
  double p_min = 0.5;
  int d = 2;

  /// Throws ConfigError unless times > 0, 0 < p_min ≤ 1/d, 0 < δ < 1.
  void validate() const;

  /// τ_η = τ_γ = 100 t_U, P_min = 2/d², δ = 10⁻³.
  static SpeedupScenario worked_example(int d);
};

/// ‖out − γ‖_∞ ≤ δ (inclusive, up to kTieTolerance).
bool delta_thermalizes(const DensityOperator& out, const DensityOperator& gamma, double delta);

/// τ ln(distance/δ), 0 when distance ≤ δ, kInfinity when δ = 0 < distance.
double t_partial_thermalization(double distance, double delta, double tau);
double t_partial_thermalization(const DensityOperator& rho, const DensityOperator& gamma,
                                double delta, double tau);

/// t_twirl + τ_η ln(1/(d P_min)).
double t_eplt_bound(const SpeedupScenario& s, double t_twirl);

/// Largest ε before the quenched gap diverges: 2 e^{−E/kT}/Z.
double quench_pole(double energy, double kT);

/// Gap E^ε of H = E|1⟩⟨1| whose Gibbs state at kT equals η^ε. Returns
/// kInfinity at the pole and beyond it; see quench_diagnostic.
double quench_energy(double energy, double kT, double epsilon);
/// Explanation when quench_energy returns the sentinel.
std::optional<std::string> quench_diagnostic(double energy, double kT, double epsilon);

/// 8 log₂(d² P_min √2/δ).
double n_delta_argument(const SpeedupScenario& s);
/// Smallest integer strictly larger than n_delta_argument (clamped at 0).
int n_delta(const SpeedupScenario& s);
/// t_{N-EPLT} = τ_η ln(1/(d P_min)) + N t_U.
double t_finite_eplt(const SpeedupScenario& s, int n);

/// 8/ln 2.
double speedup_constant();
/// τ_γ > t_U · 8/ln 2 (strict).
bool speedup_condition(const SpeedupScenario& s);

/// f = (dP_min)^{−τ_η/τ_γ} e^{t_U/τ_γ} (d²P_min√2)^{(t_U/τ_γ)(8/ln2)}.
double speedup_prefactor(const SpeedupScenario& s);
/// f · δ^{1 − (t_U/τ_γ)(8/ln 2)}.
double speedup_state_threshold(const SpeedupScenario& s);

/// log₂ of the failure probability (δ/(d²P_min√2))⁴.
double precision_failure_log2(const SpeedupScenario& s);
/// log₂ of the failure probability 2^{−N/2} after N twirl steps.
double iteration_failure_log2(int n);

/// min(1, 1/(λ² 2^N)).
double chebyshev_tail(int n, double slack);
/// log₂ of chebyshev_tail with the slack given as log₂ λ.
double chebyshev_tail_log2(int n, double slack_log2);

struct RaceReport {
  double distance = 0.0;     // ‖ρ − γ‖_∞
  double delta = 0.0;
  double t_pt = 0.0;         // partial thermalization
  double t_twirl = 0.0;      // twirl time assumed for the ideal bound
  bool twirl_time_assumed = false;  // t_twirl defaulted to 0
  double t_eplt_bound = 0.0;
  int n_delta = 0;
  double t_finite = 0.0;     // finite-twirl EPLT time
  bool speedup_condition = false;
  double state_threshold = 0.0;
  bool ideal_wins = false;   // t_eplt_bound < t_pt
  bool finite_wins = false;  // t_finite < t_pt
  /// EPLT (ideal twirl) is faster for every δ below this value.
  double crossover_ideal = 0.0;
  /// Finite-twirl EPLT is faster for every δ in (0, crossover_finite); 0
  /// when no such interval exists.
  double crossover_finite = 0.0;
  double failure_log2 = 0.0;  // −N_δ/2
};

RaceReport race_report(const SpeedupScenario& s, double distance,
                       std::optional<double> t_twirl = std::nullopt);
RaceReport race_report(const SpeedupScenario& s, const DensityOperator& rho,
                       const DensityOperator& gamma, std::optional<double> t_twirl = std::nullopt);

/// Monte Carlo statistics of the probe-set deviation between the exact
/// twirl and N sampled factors.
struct TwirlConvergence {
  int factors = 0;
  int realizations = 0;
  double mean_square = 0.0;      // mean of ‖T − T^(N)‖²_probe
  double standard_error = 0.0;   // of that mean
  /// max over probes of the mean of ‖(T − T^(N))(ρ)‖²_∞: averaging before
  /// taking the worst input instead of after.
  double worst_input_mean_square = 0.0;
  double slack = 0.0;            // λ used for the tail count
  double tail_frequency = 0.0;   // fraction with ‖·‖² − 2^{−N} > λ
  double tail_bound = 0.0;       // chebyshev_tail(N, λ)
};

/// Realization r uses seed derive_seed(seed, r); slack defaults to 2^{−N/4}.
TwirlConvergence twirl_convergence(int d, int factors, int realizations, std::uint64_t seed,
                                   int probe_count = 200,
                                   std::optional<double> slack = std::nullopt);

}  // namespace eplt
