#pragma once

// Finite unitary ensembles whose U⊗U* average reproduces the Haar twirl.

#include <cstdint>
#include <vector>

#include "eplt/qmat.hpp"

namespace eplt {

bool is_prime(int n);

/// Generalized Pauli (Weyl) operators X^a Z^b, a, b ∈ Z_d. A unitary 1-design.
std::vector<ComplexMatrix> weyl_operators(int d);

/// Single-qudit Clifford group modulo global phase for prime d, generated
/// by closure from the Fourier and phase gates (24 elements for d = 2, 216
/// for d = 3). Exact unitary 2-design.
std::vector<ComplexMatrix> clifford_group(int d);

/// Ensemble used to realize the U⊗U* twirl as a uniform finite mixture.
struct TwirlEnsemble {
  std::vector<ComplexMatrix> unitaries;
  bool exact = true;
};

/// Clifford group when d is prime; otherwise Weyl operators composed with
/// `haar_samples` Haar-random unitaries. The sampled variant still averages
/// every local marginal to I/d exactly and fixes |Ψ_d⁺⟩, but only
/// approximates the isotropic projection.
TwirlEnsemble twirl_ensemble(int d, int haar_samples = 256, std::uint64_t seed = 0x5eed);

/// (1/n²) Σ |tr(U_i† U_j)|⁴; equals 2 exactly for unitary 2-designs (d ≥ 2).
double frame_potential(const std::vector<ComplexMatrix>& unitaries);

}  // namespace eplt
