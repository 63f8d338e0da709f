#pragma once

// Unitary dilation of a finite LOSR mixture with a classically correlated
// bath: each party holds a controlled unitary V_X = Σ_i U^i_X ⊗ |i⟩⟨i| acting
// on system X, a Stinespring ancilla X′ (dimension d²) and a register X″
// (dimension D = number of mixture terms). The bath starts in
// |00⟩⟨00|_{A′B′} ⊗ Σ_i p_i |ii⟩⟨ii|_{A″B″}.

#include <vector>

#include "eplt/channel.hpp"

namespace eplt {

/// Stinespring unitary on system ⊗ ancilla (ancilla dimension d², system
/// first) whose columns at ancilla index 0 carry the canonical Kraus family.
ComplexMatrix stinespring_unitary(const QuantumChannel& channel);

class BathDilation {
 public:
  BathDilation(std::vector<double> probabilities, std::vector<ComplexMatrix> branches_a,
               std::vector<ComplexMatrix> branches_b, int dim_a, int dim_b);

  int terms() const noexcept { return static_cast<int>(probabilities_.size()); }
  int dim_a() const noexcept { return dim_a_; }
  int dim_b() const noexcept { return dim_b_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  /// Per-term unitaries U^i_X on X X′.
  const std::vector<ComplexMatrix>& branches_a() const noexcept { return branches_a_; }
  const std::vector<ComplexMatrix>& branches_b() const noexcept { return branches_b_; }

  /// Shape A′ B′ A″ B″ of the bath.
  SubsystemShape ancilla_shape() const;

  /// Controlled unitary Σ_i U^i ⊗ |i⟩⟨i| on X X′ X″ (party 0 = A, 1 = B).
  /// Throws ConfigError when the dense matrix would exceed `max_dim`.
  ComplexMatrix controlled_unitary(int party, int max_dim = 4096) const;
  /// Dense bath state on A′B′A″B″; same size guard.
  ComplexMatrix bath_state(int max_dim = 4096) const;

  /// tr_{A′B′A″B″}[(V_A⊗V_B)(ρ ⊗ bath)(V_A⊗V_B)†], evaluated branch by
  /// branch through the ancilla-|0⟩ columns of each U^i.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// Same map from the dense controlled unitaries and bath state.
  ComplexMatrix apply_dense(const ComplexMatrix& rho, int max_dim = 4096) const;

  /// Checks the bath is |00⟩⟨00| ⊗ Σ p_i|ii⟩⟨ii| with valid p and that every
  /// branch unitary is unitary within `tol`.
  bool verify_structure(double tol = 1e-9) const;

 private:
  std::vector<double> probabilities_;
  std::vector<ComplexMatrix> branches_a_;
  std::vector<ComplexMatrix> branches_b_;
  int dim_a_;
  int dim_b_;
};

/// Throws DimensionError for mixtures that are not bipartite.
BathDilation build_bath_dilation(const LosrMixture& mix);

/// Largest sup-norm deviation between the dilation and the mixture over
/// `count` random states.
double dilation_deviation(const BathDilation& dilation, const LosrMixture& mix, int count,
                          std::uint64_t seed);

}  // namespace eplt
