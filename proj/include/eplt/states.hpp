#pragma once

#include <optional>
#include <string>

#include "eplt/qmat.hpp"

namespace eplt {

/// Unit-trace positive-semidefinite operator with its subsystem structure.
/// Construction validates the invariants; instances are immutable.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix mat, SubsystemShape shape, const ToleranceProfile& tol = {});
  /// Single-system state; the shape is {dim}.
  explicit DensityOperator(ComplexMatrix mat, const ToleranceProfile& tol = {});

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const SubsystemShape& shape() const noexcept { return shape_; }
  int dim() const noexcept { return static_cast<int>(mat_.rows()); }

  /// Ascending spectrum.
  RealVector spectrum() const;
  double purity() const;
  /// Reduced state on the listed parties.
  DensityOperator marginal(std::span<const int> keep) const;
  DensityOperator marginal(int party) const;

 private:
  ComplexMatrix mat_;
  SubsystemShape shape_;
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Temperature with an explicit infinite case.
class Temperature {
 public:
  static Temperature finite(double kelvin);
  static Temperature infinite() { return Temperature(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_zero() const noexcept { return !infinite_ && value_ == 0.0; }
  /// Finite value; throws for the infinite case.
  double value() const;

 private:
  Temperature(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Hamiltonian, temperature and Boltzmann constant defining a Gibbs state.
/// Energies and temperatures are in units with k = 1 unless overridden.
struct ThermalSpec {
  ComplexMatrix hamiltonian;
  Temperature temperature = Temperature::infinite();
  double boltzmann = 1.0;

  /// Convenience: a finite temperature given as kT directly (k = 1).
  static ThermalSpec at_kT(ComplexMatrix hamiltonian, double kT);
};

/// Degeneracy of the lowest eigenvalue, using a relative gap of 1e-9.
int ground_degeneracy(const ComplexMatrix& hamiltonian, const ToleranceProfile& tol = {});

/// Orthonormal basis (columns) of the ground space. Within a degenerate
/// eigenspace the basis is fixed by Gram-Schmidt on the computational basis
/// vectors with the largest overlap, so diagonal Hamiltonians yield
/// computational basis vectors.
ComplexMatrix ground_space_basis(const ComplexMatrix& hamiltonian,
                                 const ToleranceProfile& tol = {});

/// e^{-H/kT}/Z. At T = ∞ returns I/d; at T = 0 returns Π₀/g, the uniform
/// mixture on the g-fold degenerate ground space.
DensityOperator thermal_state(const ThermalSpec& spec, const ToleranceProfile& tol = {});

/// Reason no entanglement-preserving local thermalization can target this
/// marginal: a zero-temperature Gibbs state with a unique ground state is
/// pure. Empty when no such obstruction exists.
std::optional<std::string> eplt_obstruction(const ThermalSpec& spec,
                                            const ToleranceProfile& tol = {});
inline bool admits_eplt(const ThermalSpec& spec) { return !eplt_obstruction(spec); }

/// Smallest eigenvalue over both spectra (P_min).
double min_thermal_population(const DensityOperator& gamma_a, const DensityOperator& gamma_b);

/// γ + ε/(1−ε)(γ − I/d). Throws NotAStateError carrying the violated
/// eigenvalue when the result is not positive semidefinite, which happens
/// exactly for ε > d·λ_min(γ). ε = 1 is accepted only for γ = I/d, where the
/// limit is I/d.
DensityOperator eta_state(const DensityOperator& gamma, double epsilon,
                          const ToleranceProfile& tol = {});

/// Projector onto |Ψ_d⁺⟩ = Σ|nn⟩/√d.
ComplexVector max_entangled_vector(int d);
DensityOperator max_entangled(int d);

/// Lowest admissible isotropic parameter, −1/(d²−1).
double isotropic_min_parameter(int d);
/// p·|Ψ_d⁺⟩⟨Ψ_d⁺| + (1−p)·I/d² for p ∈ [−1/(d²−1), 1].
DensityOperator isotropic(int d, double p);

enum class GhzSign { Plus, Minus };

/// (|j⟩⊗|0⟩ ± |2^{N−1}−j−1⟩⊗|1⟩)/√2 with j written on the first N−1 qubits
/// (big-endian) and the last qubit carrying the ± branch.
ComplexVector ghz_basis_vector(int parties, int j, GhzSign sign);
DensityOperator ghz_basis(int parties, int j, GhzSign sign);

/// x·|GHZ⟩⟨GHZ| + (1−x)·I/2^N.
DensityOperator ghz_isotropic(int parties, double x);

/// Computational basis product state |i_1 … i_N⟩⟨…|.
DensityOperator product_basis_state(const SubsystemShape& shape, std::span<const int> digits);

/// Haar-random pure state.
DensityOperator random_pure_state(const SubsystemShape& shape, Rng& rng);
/// Full-rank Hilbert–Schmidt random state (normalized G G† with G Ginibre).
DensityOperator random_mixed_state(const SubsystemShape& shape, Rng& rng);

}  // namespace eplt
