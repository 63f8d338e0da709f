#pragma once

// Local-thermalization channel families built from twirling and mixing.

#include <cstdint>
#include <vector>

#include "eplt/channel.hpp"
#include "eplt/designs.hpp"

namespace eplt {

/// Haar average of (U⊗U*)ρ(U⊗U*)†, in closed form: the isotropic state with
/// the same singlet fraction F, p = (F − 1/d²)/(1 − 1/d²). Accepts any
/// Hermitian operator on a d×d bipartition (linear extension).
ComplexMatrix twirl_exact(const ComplexMatrix& x, const SubsystemShape& shape);
DensityOperator twirl_exact(const DensityOperator& rho);

/// The U⊗U* twirl as a uniform LOSR mixture over `ensemble`.
LosrMixture twirl_mixture(int d, const TwirlEnsemble& ensemble);

/// Realization of ∏_k [½ id + ½ (U_k⊗U_k*)·(U_k⊗U_k*)†] for Haar-random U_k.
struct SampledTwirl {
  SubsystemShape shape;
  std::vector<ComplexMatrix> unitaries;  // U_1 … U_N in application order
  ComplexMatrix superoperator;           // column-stacking, composed product

  ComplexMatrix apply(const ComplexMatrix& x) const;
  QuantumChannel channel() const;
};

SampledTwirl twirl_sampled(int d, int factors, Rng& rng);
SampledTwirl twirl_sampled(int d, int factors, std::uint64_t seed);

/// Fixed probe inputs for sup-norm estimates of channel differences:
/// |Ψ_d⁺⟩ followed by `count` Haar-random pure states.
std::vector<ComplexMatrix> probe_states(int d, int count, std::uint64_t seed);

/// ‖T(ρ) − T^(N)(ρ)‖_∞ for every probe ρ.
std::vector<double> twirl_deviations(const SampledTwirl& sample,
                                     const std::vector<ComplexMatrix>& probes);
/// max over probes of ‖T(ρ) − T^(N)(ρ)‖_∞, a lower bound on the channel sup norm.
double twirl_deviation(const SampledTwirl& sample, const std::vector<ComplexMatrix>& probes);

/// Largest admissible ε = d·P_min for the pair of thermal marginals.
double eplt_max_epsilon(const DensityOperator& gamma_a, const DensityOperator& gamma_b);

/// (1−ε)(η_A^ε ⊗ η_B^ε) + ε·T(·) as a finite LOSR mixture: one constant
/// product term plus the twirl ensemble. Throws RangeError (carrying ε*)
/// outside 0 ≤ ε ≤ d·P_min.
LosrMixture eplt(const DensityOperator& gamma_a, const DensityOperator& gamma_b, double epsilon,
                 const TwirlEnsemble& ensemble);
LosrMixture eplt(const DensityOperator& gamma_a, const DensityOperator& gamma_b, double epsilon);

/// Same channel in closed form through twirl_exact.
ComplexMatrix eplt_apply(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                         double epsilon, const ComplexMatrix& x);

/// [D^{(1−ε_A)}_{η_A} ⊗ D^{(1−ε_B)}_{η_B}] ∘ T as a finite LOSR mixture.
LosrMixture eplt_alternative(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                             double epsilon_a, double epsilon_b, const TwirlEnsemble& ensemble);
LosrMixture eplt_alternative(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                             double epsilon_a, double epsilon_b);
ComplexMatrix eplt_alternative_apply(const DensityOperator& gamma_a,
                                     const DensityOperator& gamma_b, double epsilon_a,
                                     double epsilon_b, const ComplexMatrix& x);

/// Projection onto GHZ-diagonal form: λ₀^± kept, and for j ≥ 1 the ± pair
/// replaced by its average.
ComplexMatrix ghz_twirl(const ComplexMatrix& x, int parties);
DensityOperator ghz_twirl(const DensityOperator& rho);

/// The GHZ twirl as 2·3^{N−1} product unitaries: optional X^{⊗N} after
/// local phases diag(1, e^{iθ_k}), θ_k ∈ (2π/3)Z with Σθ_k ≡ 0.
LosrMixture ghz_twirl_mixture(int parties);

/// (1−ε)⊗η_i + ε·T_GHZ(·) on qubits; ε ∈ [0, 2·min_i λ_min(γ_i)].
LosrMixture eplt_multipartite(const std::vector<DensityOperator>& gammas, double epsilon);
ComplexMatrix eplt_multipartite_apply(const std::vector<DensityOperator>& gammas, double epsilon,
                                      const ComplexMatrix& x);

/// Zero-temperature protocol for two-fold degenerate ground spaces: measure
/// {Π₀, I−Π₀} locally, replace the excited branch by Π₀/2, then twirl
/// within the ground space. Throws NoEpltError for a unique ground state
/// and ConfigError for degeneracy above two.
LosrMixture zero_temp_protocol(const ComplexMatrix& ham_a, const ComplexMatrix& ham_b);
ComplexMatrix zero_temp_apply(const ComplexMatrix& ham_a, const ComplexMatrix& ham_b,
                              const ComplexMatrix& x);

}  // namespace eplt
