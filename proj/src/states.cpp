#include "eplt/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace eplt {

namespace {

double relative_energy_tolerance(const RealVector& energies) {
  return 1e-9 * std::max(1.0, energies.cwiseAbs().maxCoeff());
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix mat, SubsystemShape shape,
                                 const ToleranceProfile& tol)
    : mat_(std::move(mat)), shape_(std::move(shape)) {
  shape_.check(mat_);
  if (!is_hermitian(mat_, tol.hermitian)) {
    throw NotHermitianError("density operator is not Hermitian");
  }
  mat_ = 0.5 * (mat_ + mat_.adjoint()).eval();
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream msg;
    msg << "density operator has trace " << tr;
    throw NotAStateError(msg.str());
  }
  const double lmin = eig_hermitian(mat_, tol).values(0);
  if (lmin < -tol.psd) {
    std::ostringstream msg;
    msg << "density operator has negative eigenvalue " << lmin;
    throw NotAStateError(msg.str(), lmin);
  }
}

DensityOperator::DensityOperator(ComplexMatrix mat, const ToleranceProfile& tol)
    : DensityOperator(mat, SubsystemShape{static_cast<int>(mat.rows())}, tol) {}

RealVector DensityOperator::spectrum() const { return eig_hermitian(mat_).values; }

double DensityOperator::purity() const { return (mat_ * mat_).trace().real(); }

DensityOperator DensityOperator::marginal(std::span<const int> keep) const {
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  return DensityOperator(partial_trace(mat_, shape_, sorted), shape_.select(sorted));
}

DensityOperator DensityOperator::marginal(int party) const {
  const int keep[] = {party};
  return marginal(keep);
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(tensor(a.matrix(), b.matrix()), a.shape().concat(b.shape()));
}

Temperature Temperature::finite(double kelvin) {
  if (!(kelvin >= 0.0) || std::isinf(kelvin)) {
    throw ConfigError("temperature must be a finite non-negative number");
  }
  return Temperature(kelvin, false);
}

double Temperature::value() const {
  if (infinite_) {
    throw ConfigError("infinite temperature has no finite value");
  }
  return value_;
}

ThermalSpec ThermalSpec::at_kT(ComplexMatrix hamiltonian, double kT) {
  return ThermalSpec{std::move(hamiltonian), Temperature::finite(kT), 1.0};
}

int ground_degeneracy(const ComplexMatrix& hamiltonian, const ToleranceProfile& tol) {
  const auto es = eig_hermitian(hamiltonian, tol);
  const double gap_tol = relative_energy_tolerance(es.values);
  int g = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) - es.values(0) <= gap_tol) ++g;
  }
  return g;
}

ComplexMatrix ground_space_basis(const ComplexMatrix& hamiltonian, const ToleranceProfile& tol) {
  const auto es = eig_hermitian(hamiltonian, tol);
  const int g = ground_degeneracy(hamiltonian, tol);
  const int d = static_cast<int>(hamiltonian.rows());
  const ComplexMatrix vg = es.vectors.leftCols(g);
  const ComplexMatrix proj = vg * vg.adjoint();

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return proj.col(a).norm() > proj.col(b).norm() + 1e-12;
  });

  ComplexMatrix basis(d, g);
  int found = 0;
  for (int k : order) {
    if (found == g) break;
    ComplexVector v = proj.col(k);
    for (int c = 0; c < found; ++c) {
      v -= basis.col(c) * basis.col(c).dot(v);
    }
    const double nv = v.norm();
    if (nv > 1e-8) {
      basis.col(found++) = v / nv;
    }
  }
  return basis;
}

DensityOperator thermal_state(const ThermalSpec& spec, const ToleranceProfile& tol) {
  const auto& h = spec.hamiltonian;
  const int d = static_cast<int>(h.rows());
  if (h.rows() != h.cols() || d < 1) {
    throw DimensionError("Hamiltonian must be square");
  }
  if (!(spec.boltzmann > 0.0)) {
    throw ConfigError("Boltzmann constant must be positive");
  }
  if (spec.temperature.is_infinite()) {
    return DensityOperator(identity(d) / static_cast<double>(d), tol);
  }
  if (spec.temperature.is_zero()) {
    const ComplexMatrix basis = ground_space_basis(h, tol);
    const ComplexMatrix proj = basis * basis.adjoint();
    return DensityOperator(proj / static_cast<double>(basis.cols()), tol);
  }
  const double kT = spec.boltzmann * spec.temperature.value();
  const auto es = eig_hermitian(h, tol);
  RealVector weights(d);
  for (int i = 0; i < d; ++i) {
    weights(i) = std::exp(-(es.values(i) - es.values(0)) / kT);
  }
  weights /= weights.sum();
  const ComplexMatrix gamma =
      es.vectors * weights.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  return DensityOperator(gamma, tol);
}

std::optional<std::string> eplt_obstruction(const ThermalSpec& spec,
                                            const ToleranceProfile& tol) {
  if (spec.temperature.is_zero() && ground_degeneracy(spec.hamiltonian, tol) == 1) {
    return "zero temperature with a unique ground state: the thermal marginal is pure, "
           "so no entanglement can survive";
  }
  return std::nullopt;
}

double min_thermal_population(const DensityOperator& gamma_a, const DensityOperator& gamma_b) {
  if (gamma_a.dim() != gamma_b.dim()) {
    throw DimensionError("thermal states must have equal local dimension");
  }
  const double pmin = std::min(gamma_a.spectrum()(0), gamma_b.spectrum()(0));
  return std::max(0.0, pmin);
}

DensityOperator eta_state(const DensityOperator& gamma, double epsilon,
                          const ToleranceProfile& tol) {
  const int d = gamma.dim();
  const ComplexMatrix mixed = identity(d) / static_cast<double>(d);
  if (!(epsilon >= 0.0) || epsilon > 1.0) {
    throw RangeError("epsilon must lie in [0, 1]", d * gamma.spectrum()(0));
  }
  if (epsilon == 1.0) {
    if (sup_norm(gamma.matrix() - mixed) > tol.psd) {
      throw NotAStateError("epsilon = 1 requires the maximally mixed thermal state",
                           -std::numeric_limits<double>::infinity());
    }
    return DensityOperator(mixed, gamma.shape(), tol);
  }
  const ComplexMatrix eta = gamma.matrix() + (epsilon / (1.0 - epsilon)) * (gamma.matrix() - mixed);
  const double lmin = eig_hermitian(eta, tol).values(0);
  if (lmin < -tol.psd) {
    std::ostringstream msg;
    msg << "eta state at epsilon = " << epsilon << " has negative eigenvalue " << lmin
        << " (admissible epsilon <= " << d * gamma.spectrum()(0) << ")";
    throw NotAStateError(msg.str(), lmin);
  }
  return DensityOperator(eta, gamma.shape(), tol);
}

ComplexVector max_entangled_vector(int d) {
  if (d < 2) {
    throw DimensionError("maximally entangled state needs d >= 2");
  }
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int n = 0; n < d; ++n) {
    v(n * d + n) = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return v;
}

DensityOperator max_entangled(int d) {
  const ComplexVector v = max_entangled_vector(d);
  return DensityOperator(v * v.adjoint(), SubsystemShape{d, d});
}

double isotropic_min_parameter(int d) { return -1.0 / (static_cast<double>(d) * d - 1.0); }

DensityOperator isotropic(int d, double p) {
  const double lo = isotropic_min_parameter(d);
  if (p < lo - kTieTolerance || p > 1.0 + kTieTolerance) {
    std::ostringstream msg;
    msg << "isotropic parameter " << p << " outside [" << lo << ", 1]";
    const double dd = static_cast<double>(d) * d;
    throw NotAStateError(msg.str(), std::min(p + (1.0 - p) / dd, (1.0 - p) / dd));
  }
  const ComplexVector v = max_entangled_vector(d);
  const int n = d * d;
  const ComplexMatrix m = p * (v * v.adjoint()) + (1.0 - p) * identity(n) / static_cast<double>(n);
  return DensityOperator(m, SubsystemShape{d, d});
}

ComplexVector ghz_basis_vector(int parties, int j, GhzSign sign) {
  if (parties < 2) {
    throw DimensionError("GHZ basis needs at least two qubits");
  }
  const int half = 1 << (parties - 1);
  if (j < 0 || j >= half) {
    throw DimensionError("GHZ basis index " + std::to_string(j) + " out of range [0, " +
                         std::to_string(half) + ")");
  }
  ComplexVector v = ComplexVector::Zero(2 * half);
  const double s = 1.0 / std::sqrt(2.0);
  v(2 * j) = s;
  v(2 * (half - j - 1) + 1) = (sign == GhzSign::Plus ? s : -s);
  return v;
}

DensityOperator ghz_basis(int parties, int j, GhzSign sign) {
  const ComplexVector v = ghz_basis_vector(parties, j, sign);
  return DensityOperator(v * v.adjoint(), SubsystemShape::uniform(2, parties));
}

DensityOperator ghz_isotropic(int parties, double x) {
  const ComplexVector v = ghz_basis_vector(parties, 0, GhzSign::Plus);
  const int n = 1 << parties;
  const ComplexMatrix m = x * (v * v.adjoint()) + (1.0 - x) * identity(n) / static_cast<double>(n);
  return DensityOperator(m, SubsystemShape::uniform(2, parties));
}

DensityOperator product_basis_state(const SubsystemShape& shape, std::span<const int> digits) {
  if (static_cast<int>(digits.size()) != shape.parties()) {
    throw DimensionError("one digit per party required");
  }
  int index = 0;
  for (int k = 0; k < shape.parties(); ++k) {
    if (digits[static_cast<std::size_t>(k)] < 0 || digits[static_cast<std::size_t>(k)] >= shape.dim(k)) {
      throw DimensionError("basis digit out of range");
    }
    index = index * shape.dim(k) + digits[static_cast<std::size_t>(k)];
  }
  ComplexMatrix m = ComplexMatrix::Zero(shape.total(), shape.total());
  m(index, index) = 1.0;
  return DensityOperator(m, shape);
}

DensityOperator random_pure_state(const SubsystemShape& shape, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = shape.total();
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v.normalize();
  return DensityOperator(v * v.adjoint(), shape);
}

DensityOperator random_mixed_state(const SubsystemShape& shape, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = shape.total();
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(rho, shape);
}

}  // namespace eplt
