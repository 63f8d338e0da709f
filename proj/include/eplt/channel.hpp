#pragma once

// Completely positive trace-preserving maps in Kraus form, and finite
// mixtures of product channels (local operations with shared randomness).

#include <vector>

#include "eplt/qmat.hpp"
#include "eplt/states.hpp"

namespace eplt {

class QuantumChannel {
 public:
  /// Validates Σ K†K = I within tol.trace_preservation.
  QuantumChannel(std::vector<ComplexMatrix> kraus, SubsystemShape shape,
                 const ToleranceProfile& tol = {});

  /// Minimal Kraus family from the Choi matrix of a column-stacking
  /// superoperator; eigenvalues below `cutoff` are dropped.
  static QuantumChannel from_superoperator(const ComplexMatrix& superop, SubsystemShape shape,
                                           double cutoff = 1e-12);

  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  const SubsystemShape& shape() const noexcept { return shape_; }
  int dim() const noexcept { return shape_.total(); }

  /// Linear action Σ K X K† on an arbitrary operator.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  DensityOperator apply(const DensityOperator& rho) const;

  /// Matrix S with vec(E(X)) = S·vec(X) (column stacking).
  ComplexMatrix superoperator() const;
  /// Σ |i⟩⟨j| ⊗ E(|i⟩⟨j|), input factor first.
  ComplexMatrix choi() const;
  /// Equivalent family with at most dim² operators.
  QuantumChannel canonical() const;

 private:
  std::vector<ComplexMatrix> kraus_;
  SubsystemShape shape_;
};

/// (this ∘ inner): Kraus products K_a L_b.
QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);
/// Product channel a ⊗ b on the concatenated shape.
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);

QuantumChannel identity_channel(const SubsystemShape& shape);
QuantumChannel unitary_channel(const ComplexMatrix& u, const SubsystemShape& shape,
                               const ToleranceProfile& tol = {});
/// Discards the input and prepares σ: Kraus √λ_k |v_k⟩⟨j| over an input
/// basis |j⟩ (computational unless `measurement_basis` is given).
QuantumChannel constant_channel(const DensityOperator& sigma);
QuantumChannel constant_channel(const DensityOperator& sigma, const ComplexMatrix& measurement_basis);

/// ρ ↦ pσ + (1−p)ρ.
QuantumChannel mixing_channel(const DensityOperator& sigma, double p);
/// Exponential relaxation towards γ: mixing_channel(γ, 1 − e^{−t/τ}).
QuantumChannel partial_thermalization(const DensityOperator& gamma, double t, double tau);
/// Mixing weight 1 − e^{−t/τ} realized by relaxation for time t.
double relaxation_weight(double t, double tau);

/// One weighted product term Σ ⊗_k E_k of an LOSR mixture.
struct LosrTerm {
  double weight = 0.0;
  std::vector<QuantumChannel> locals;
};

/// Finite convex combination of product channels.
class LosrMixture {
 public:
  /// Validates weights (non-negative, summing to 1 within 1e-12) and that
  /// every term has one local channel per party of `shape`, of matching
  /// dimension.
  LosrMixture(std::vector<LosrTerm> terms, SubsystemShape shape);

  const std::vector<LosrTerm>& terms() const noexcept { return terms_; }
  const SubsystemShape& shape() const noexcept { return shape_; }
  int parties() const noexcept { return shape_.parties(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// False when the mixture approximates its target (sampled designs).
  bool exact() const noexcept { return exact_; }
  /// Documented approximation error when !exact(); 0 otherwise.
  double approximation_error() const noexcept { return approximation_error_; }
  LosrMixture with_approximation(double error) const;

  ComplexMatrix apply(const ComplexMatrix& x) const;
  DensityOperator apply(const DensityOperator& rho) const;

  /// Full-space channel with one Kraus family. Only for small systems.
  QuantumChannel to_channel() const;

 private:
  std::vector<LosrTerm> terms_;
  SubsystemShape shape_;
  bool exact_ = true;
  double approximation_error_ = 0.0;
};

/// Applies a Kraus family acting on one party of a composite operator.
ComplexMatrix apply_on_party(const ComplexMatrix& x, const SubsystemShape& shape, int party,
                             const std::vector<ComplexMatrix>& kraus);

}  // namespace eplt
