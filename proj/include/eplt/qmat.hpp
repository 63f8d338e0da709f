#pragma once

// Dense complex linear algebra used by every other module: tensor products,
// partial trace/transpose over an ordered list of subsystems, Hermitian
// eigendecomposition, the operator (sup) norm and Haar-random unitaries.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eplt/errors.hpp"

namespace eplt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Numerical tolerances shared by validation routines.
struct ToleranceProfile {
  double hermitian = 1e-9;
  double unitary = 1e-9;
  double reconstruction = 1e-8;
  double psd = 1e-10;
  double trace = 1e-10;
  double trace_preservation = 1e-9;
};

/// Margin used to resolve strict threshold comparisons: a value within this
/// distance of a threshold counts as equal to it.
inline constexpr double kTieTolerance = 1e-12;

/// Ordered local dimensions of a composite system.
class SubsystemShape {
 public:
  SubsystemShape() = default;
  SubsystemShape(std::initializer_list<int> dims);
  explicit SubsystemShape(std::vector<int> dims);

  /// `parties` copies of local dimension `d`.
  static SubsystemShape uniform(int d, int parties);

  const std::vector<int>& dims() const noexcept { return dims_; }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  /// Product of the local dimensions.
  int total() const noexcept;

  SubsystemShape concat(const SubsystemShape& other) const;
  /// Shape restricted to the listed parties, in the order given.
  SubsystemShape select(std::span<const int> parties) const;

  /// Throws DimensionError unless `m` is square with side total().
  void check(const ComplexMatrix& m) const;

  bool operator==(const SubsystemShape&) const = default;

 private:
  std::vector<int> dims_;
};

ComplexMatrix identity(int d);

/// Kronecker product a ⊗ b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
/// Left-to-right Kronecker product of a list (identity 1x1 when empty).
ComplexMatrix tensor(std::span<const ComplexMatrix> factors);

/// Reduced operator on the parties in `keep` (in increasing party order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const int> keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::initializer_list<int> keep);

/// Transpose on the indices of a single party.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const SubsystemShape& shape,
                                int party);

/// Embeds an operator on `party` into the full space as I ⊗ op ⊗ I.
ComplexMatrix embed(const ComplexMatrix& op, const SubsystemShape& shape, int party);

struct Eigensystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// Hermitian eigendecomposition. Throws NotHermitianError when
/// ‖m − m†‖_max exceeds tol.hermitian; the input is symmetrized before
/// solving.
Eigensystem eig_hermitian(const ComplexMatrix& m, const ToleranceProfile& tol = {});

/// Largest singular value.
double sup_norm(const ComplexMatrix& m);

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix, with the diagonal phases of R folded into Q.
ComplexMatrix haar_unitary(int d, Rng& rng);
ComplexMatrix haar_unitary(int d, std::uint64_t seed);

/// Unitary polar factor W V† of a = W Σ V†.
ComplexMatrix polar_unitary(const ComplexMatrix& a);

/// Deterministic per-task seed derived from a base seed and a task index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Column-stacking vectorization: vec(X)[i + j·n] = X(i, j).
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, int n);

}  // namespace eplt
