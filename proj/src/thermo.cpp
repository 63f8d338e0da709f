#include "eplt/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

#include "eplt/constructions.hpp"

namespace eplt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void SpeedupScenario::validate() const {
  require(d >= 2, "scenario dimension must be at least 2");
  require(tau_gamma > 0.0 && std::isfinite(tau_gamma), "tau_gamma must be positive");
  require(tau_eta > 0.0 && std::isfinite(tau_eta), "tau_eta must be positive");
  require(t_unitary > 0.0 && std::isfinite(t_unitary), "t_unitary must be positive");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(p_min > 0.0 && p_min <= 1.0 / d + kTieTolerance, "p_min must lie in (0, 1/d]");
}

SpeedupScenario SpeedupScenario::worked_example(int d) {
  SpeedupScenario s;
  s.t_unitary = 1.0;
  s.tau_gamma = 100.0;
  s.tau_eta = 100.0;
  s.delta = 1e-3;
  s.d = d;
  s.p_min = 2.0 / (static_cast<double>(d) * d);
  return s;
}

bool delta_thermalizes(const DensityOperator& out, const DensityOperator& gamma, double delta) {
  if (out.dim() != gamma.dim()) {
    throw DimensionError("states to compare have different dimensions");
  }
  return sup_norm(out.matrix() - gamma.matrix()) <= delta + kTieTolerance;
}

double t_partial_thermalization(double distance, double delta, double tau) {
  require(tau > 0.0, "relaxation timescale must be positive");
  require(delta >= 0.0, "precision must be non-negative");
  if (distance <= delta + kTieTolerance) return 0.0;
  if (delta == 0.0) return kInfinity;
  return tau * std::log(distance / delta);
}

double t_partial_thermalization(const DensityOperator& rho, const DensityOperator& gamma,
                                double delta, double tau) {
  if (rho.dim() != gamma.dim()) {
    throw DimensionError("states to compare have different dimensions");
  }
  return t_partial_thermalization(sup_norm(rho.matrix() - gamma.matrix()), delta, tau);
}

double t_eplt_bound(const SpeedupScenario& s, double t_twirl) {
  s.validate();
  require(t_twirl >= 0.0, "twirl time must be non-negative");
  return t_twirl + s.tau_eta * std::log(1.0 / (s.d * s.p_min));
}

double quench_pole(double energy, double kT) {
  require(kT > 0.0 && std::isfinite(kT), "kT must be positive and finite");
  // 2 e^{−E/kT}/(1 + e^{−E/kT}), written to avoid overflow for large |E/kT|.
  const double x = energy / kT;
  return x >= 0.0 ? 2.0 * std::exp(-x) / (1.0 + std::exp(-x)) : 2.0 / (1.0 + std::exp(x));
}

std::optional<std::string> quench_diagnostic(double energy, double kT, double epsilon) {
  const double pole = quench_pole(energy, kT);
  std::ostringstream msg;
  if (std::abs(epsilon - pole) <= kTieTolerance) {
    msg << "epsilon = " << epsilon << " sits at the pole " << pole
        << ": the quenched excited level must be pushed to infinite energy";
    return msg.str();
  }
  if (epsilon > pole) {
    msg << "epsilon = " << epsilon << " exceeds the pole " << pole
        << ": no finite gap has eta as its Gibbs state";
    return msg.str();
  }
  return std::nullopt;
}

double quench_energy(double energy, double kT, double epsilon) {
  require(epsilon >= 0.0 && epsilon < 1.0 + kTieTolerance, "epsilon must lie in [0, 1]");
  if (quench_diagnostic(energy, kT, epsilon)) return kInfinity;
  // Excited population q; E^ε = kT ln((2(1−q) − ε)/(2q − ε)).
  const double pole = quench_pole(energy, kT);
  const double q = pole / 2.0;
  return kT * std::log((2.0 * (1.0 - q) - epsilon) / (2.0 * q - epsilon));
}

double n_delta_argument(const SpeedupScenario& s) {
  s.validate();
  return 8.0 * std::log2(static_cast<double>(s.d) * s.d * s.p_min * std::sqrt(2.0) / s.delta);
}

int n_delta(const SpeedupScenario& s) {
  const double x = n_delta_argument(s);
  const double nearest = std::round(x);
  const double base = std::abs(x - nearest) < 1e-9 ? nearest : std::floor(x);
  return static_cast<int>(std::max(0.0, base + 1.0));
}

double t_finite_eplt(const SpeedupScenario& s, int n) {
  s.validate();
  require(n >= 0, "iteration count must be non-negative");
  return s.tau_eta * std::log(1.0 / (s.d * s.p_min)) + n * s.t_unitary;
}

double speedup_constant() { return 8.0 / std::log(2.0); }

bool speedup_condition(const SpeedupScenario& s) {
  s.validate();
  const double bound = s.t_unitary * speedup_constant();
  return s.tau_gamma > bound + kTieTolerance * std::max(1.0, bound);
}

double speedup_prefactor(const SpeedupScenario& s) {
  s.validate();
  const double r = s.t_unitary / s.tau_gamma;
  const double c = static_cast<double>(s.d) * s.d * s.p_min * std::sqrt(2.0);
  return std::pow(s.d * s.p_min, -s.tau_eta / s.tau_gamma) * std::exp(r) *
         std::pow(c, r * speedup_constant());
}

double speedup_state_threshold(const SpeedupScenario& s) {
  const double r = s.t_unitary / s.tau_gamma;
  return speedup_prefactor(s) * std::pow(s.delta, 1.0 - r * speedup_constant());
}

double precision_failure_log2(const SpeedupScenario& s) {
  s.validate();
  return 4.0 * std::log2(s.delta / (static_cast<double>(s.d) * s.d * s.p_min * std::sqrt(2.0)));
}

double iteration_failure_log2(int n) { return -0.5 * n; }

double chebyshev_tail(int n, double slack) {
  require(n >= 1, "number of twirl factors must be at least 1");
  require(slack > 0.0, "Chebyshev slack must be positive");
  return std::min(1.0, 1.0 / (slack * slack * std::ldexp(1.0, n)));
}

double chebyshev_tail_log2(int n, double slack_log2) {
  require(n >= 1, "number of twirl factors must be at least 1");
  return std::min(0.0, -2.0 * slack_log2 - n);
}

namespace {

// EPLT advantage t_PT − t_{N-EPLT} at precision δ with the iteration count
// held at n.
double advantage(const SpeedupScenario& s, double distance, double delta, int n) {
  return s.tau_gamma * std::log(distance / delta) - t_finite_eplt(s, n);
}

// Sup of δ' such that the finite-twirl EPLT beats partial thermalization for
// every δ ∈ (0, δ'). N_δ = n on the interval (c·2^{−n/8}, c·2^{−(n−1)/8}].
double finite_crossover(const SpeedupScenario& s, double distance) {
  if (distance <= 0.0 || !speedup_condition(s)) return 0.0;
  const double c = static_cast<double>(s.d) * s.d * s.p_min * std::sqrt(2.0);
  auto lower = [&](int n) { return c * std::exp2(-n / 8.0); };
  auto upper = [&](int n) { return n == 0 ? 1.0 : std::min(1.0, c * std::exp2(-(n - 1) / 8.0)); };

  int first = 0;
  while (lower(first) >= upper(first)) ++first;
  // The worst case on interval n sits at its upper end; under the speed-up
  // condition that worst case grows with n, so the first winning interval
  // starts the guaranteed region.
  const int n_max = 20000;
  int n0 = -1;
  for (int n = first; n < n_max; ++n) {
    if (lower(n) <= 0.0) break;
    if (advantage(s, distance, upper(n), n) > 0.0) {
      n0 = n;
      break;
    }
  }
  if (n0 < 0) return 0.0;
  if (n0 == first) return 1.0;

  // Partial win inside interval n0−1, where the advantage decreases in δ.
  const int m = n0 - 1;
  double lo = lower(m);
  double hi = upper(m);
  if (advantage(s, distance, lo, m) <= 0.0) return lo;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
    const double mid = std::sqrt(lo * hi);
    (advantage(s, distance, mid, m) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

RaceReport race_report(const SpeedupScenario& s, double distance, std::optional<double> t_twirl) {
  s.validate();
  require(distance >= 0.0, "distance must be non-negative");
  RaceReport r;
  r.distance = distance;
  r.delta = s.delta;
  r.twirl_time_assumed = !t_twirl.has_value();
  r.t_twirl = t_twirl.value_or(0.0);
  r.t_pt = t_partial_thermalization(distance, s.delta, s.tau_gamma);
  r.t_eplt_bound = t_eplt_bound(s, r.t_twirl);
  r.n_delta = n_delta(s);
  r.t_finite = t_finite_eplt(s, r.n_delta);
  r.speedup_condition = speedup_condition(s);
  r.state_threshold = speedup_state_threshold(s);
  r.ideal_wins = r.t_eplt_bound < r.t_pt;
  r.finite_wins = r.t_finite < r.t_pt;
  r.crossover_ideal = distance > 0.0 ? distance * std::exp(-r.t_eplt_bound / s.tau_gamma) : 0.0;
  r.crossover_finite = finite_crossover(s, distance);
  r.failure_log2 = iteration_failure_log2(r.n_delta);
  return r;
}

RaceReport race_report(const SpeedupScenario& s, const DensityOperator& rho,
                       const DensityOperator& gamma, std::optional<double> t_twirl) {
  if (rho.dim() != gamma.dim()) {
    throw DimensionError("states to compare have different dimensions");
  }
  return race_report(s, sup_norm(rho.matrix() - gamma.matrix()), t_twirl);
}

TwirlConvergence twirl_convergence(int d, int factors, int realizations, std::uint64_t seed,
                                   int probe_count, std::optional<double> slack) {
  require(factors >= 1, "number of twirl factors must be at least 1");
  require(realizations >= 2, "need at least two realizations");
  TwirlConvergence out;
  out.factors = factors;
  out.realizations = realizations;
  out.slack = slack.value_or(std::exp2(-factors / 4.0));
  out.tail_bound = chebyshev_tail(factors, out.slack);
  const auto probes = probe_states(d, probe_count, derive_seed(seed, 0xffffffffULL));
  const double floor_value = std::ldexp(1.0, -factors);

  double sum = 0.0;
  double sum_sq = 0.0;
  int tail = 0;
  std::vector<double> per_probe(probes.size(), 0.0);
  for (int r = 0; r < realizations; ++r) {
    const auto sample = twirl_sampled(d, factors, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const auto devs = twirl_deviations(sample, probes);
    double dev = 0.0;
    for (std::size_t k = 0; k < devs.size(); ++k) {
      per_probe[k] += devs[k] * devs[k];
      dev = std::max(dev, devs[k]);
    }
    const double sq = dev * dev;
    sum += sq;
    sum_sq += sq * sq;
    if (sq - floor_value > out.slack) ++tail;
  }
  const double n = realizations;
  out.mean_square = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * out.mean_square * out.mean_square) / (n - 1));
  out.standard_error = std::sqrt(variance / n);
  out.tail_frequency = tail / n;
  out.worst_input_mean_square = *std::max_element(per_probe.begin(), per_probe.end()) / n;
  return out;
}

}  // namespace eplt
