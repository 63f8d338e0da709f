#pragma once

// Entanglement witnesses and the channel-level local-thermality check.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eplt/channel.hpp"

namespace eplt {

/// ⟨Ψ_d⁺|ρ|Ψ_d⁺⟩ for a d×d state.
double singlet_fraction(const DensityOperator& rho);

struct FefResult {
  double lower_bound = 0.0;  // singlet fraction, always feasible
  double optimized = 0.0;    // best value found; a lower bound on F_max
  ComplexMatrix maximizer;   // U with Φ = (I⊗U)|Ψ_d⁺⟩
  int restarts = 0;
  int best_restart = 0;
};

/// Fully entangled fraction by ascent over local unitaries U. Each restart
/// runs the monotone fixed-point iteration U ← polar(G(U)), where G is the
/// gradient of ⟨Φ_U|ρ|Φ_U⟩ reshaped to a d×d matrix. Restart 0 starts from
/// U = I, the others from Haar-random unitaries seeded per restart.
FefResult fef(const DensityOperator& rho, int restarts = 32, std::uint64_t seed = 0xfef);

/// Smallest eigenvalue of the partial transpose on `party`.
double ppt_min_eigenvalue(const DensityOperator& rho, int party = 1);
/// ppt_min_eigenvalue < −tol.
bool is_npt(const DensityOperator& rho, double tol = kTieTolerance);

/// Fidelity of isotropic(d, p) with Ψ_d⁺ strictly above 1/d.
bool isotropic_entangled(int d, double p);

struct FefFlags {
  bool teleportation = false;          // F > 1/d
  std::optional<bool> nonlocal;        // F > F_N when F_N is supplied
  std::optional<bool> steerable;       // F > F_S when F_S is supplied
};

FefFlags fef_threshold_flags(double fef, int d, std::optional<double> f_nonlocal = std::nullopt,
                             std::optional<double> f_steerable = std::nullopt);

/// x for ρ = x·|GHZ⟩⟨GHZ| + (1−x)·I/2^N. Throws NotInFamilyError when ρ
/// deviates from that form by more than `tol` entrywise.
double ghz_isotropic_parameter(const DensityOperator& rho, double tol = 1e-8);
/// x > 1/(1 + 2^{N−1}) on the GHZ-isotropic family.
bool gme_threshold_test(const DensityOperator& rho);

struct ThermalityReport {
  bool is_losr_form = false;
  double max_marginal_deviation = 0.0;
  std::vector<double> marginal_deviations;  // worst case per party
  int basis_size = 0;
  double tolerance = 0.0;

  bool passed() const { return is_losr_form && max_marginal_deviation < tolerance; }
};

/// n² pure states spanning the Hermitian operators on C^n: |i⟩, (|i⟩+|j⟩)/√2
/// and (|i⟩+i|j⟩)/√2 for i < j.
std::vector<ComplexMatrix> spanning_states(int n);

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// Applies `map` to every spanning state and compares each single-party
/// marginal with its target.
ThermalityReport verify_local_thermalization(const LinearMap& map, const SubsystemShape& shape,
                                             const std::vector<DensityOperator>& gammas,
                                             double tolerance, bool is_losr_form);
ThermalityReport verify_local_thermalization(const LosrMixture& mix,
                                             const std::vector<DensityOperator>& gammas,
                                             double tolerance);

}  // namespace eplt
