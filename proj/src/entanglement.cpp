#include "eplt/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eplt {

namespace {

int square_bipartition(const DensityOperator& rho) {
  const auto& s = rho.shape();
  if (s.parties() != 2 || s.dim(0) != s.dim(1)) {
    throw DimensionError("expected a d x d bipartite state");
  }
  return s.dim(0);
}

ComplexVector entangled_from_unitary(const ComplexMatrix& u) {
  const int d = static_cast<int>(u.rows());
  ComplexVector phi(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      phi(n * d + m) = u(m, n) * norm;
    }
  }
  return phi;
}

struct Ascent {
  double value;
  ComplexMatrix u;
};

Ascent ascend(const ComplexMatrix& rho, ComplexMatrix u) {
  const int d = static_cast<int>(u.rows());
  ComplexVector phi = entangled_from_unitary(u);
  double value = phi.dot(rho * phi).real();
  for (int iter = 0; iter < 2000; ++iter) {
    const ComplexVector g = rho * phi;
    ComplexMatrix grad(d, d);
    for (int n = 0; n < d; ++n) {
      for (int m = 0; m < d; ++m) grad(m, n) = g(n * d + m);
    }
    if (grad.norm() < 1e-300) break;
    const ComplexMatrix next = polar_unitary(grad);
    const ComplexVector next_phi = entangled_from_unitary(next);
    const double next_value = next_phi.dot(rho * next_phi).real();
    if (next_value < value) break;
    const double gain = next_value - value;
    u = next;
    phi = next_phi;
    value = next_value;
    if (gain < 1e-15) break;
  }
  return {value, u};
}

}  // namespace

double singlet_fraction(const DensityOperator& rho) {
  const int d = square_bipartition(rho);
  const ComplexVector psi = max_entangled_vector(d);
  return psi.dot(rho.matrix() * psi).real();
}

FefResult fef(const DensityOperator& rho, int restarts, std::uint64_t seed) {
  const int d = square_bipartition(rho);
  if (restarts < 1) {
    throw ConfigError("fef needs at least one restart");
  }
  FefResult out;
  out.lower_bound = singlet_fraction(rho);
  out.restarts = restarts;
  out.optimized = -1.0;
  for (int r = 0; r < restarts; ++r) {
    const ComplexMatrix start =
        r == 0 ? identity(d) : haar_unitary(d, derive_seed(seed, static_cast<std::uint64_t>(r)));
    Ascent a = ascend(rho.matrix(), start);
    if (a.value > out.optimized) {
      out.optimized = a.value;
      out.maximizer = std::move(a.u);
      out.best_restart = r;
    }
  }
  out.optimized = std::clamp(std::max(out.optimized, out.lower_bound), 0.0, 1.0);
  return out;
}

double ppt_min_eigenvalue(const DensityOperator& rho, int party) {
  if (rho.shape().parties() != 2) {
    throw DimensionError("PPT test needs a bipartite state");
  }
  return eig_hermitian(partial_transpose(rho.matrix(), rho.shape(), party)).values(0);
}

bool is_npt(const DensityOperator& rho, double tol) { return ppt_min_eigenvalue(rho) < -tol; }

bool isotropic_entangled(int d, double p) {
  if (p < isotropic_min_parameter(d) - kTieTolerance || p > 1.0 + kTieTolerance) {
    throw RangeError("isotropic parameter outside its admissible range", 1.0);
  }
  const double fidelity = p + (1.0 - p) / (static_cast<double>(d) * d);
  return fidelity > 1.0 / d + kTieTolerance;
}

FefFlags fef_threshold_flags(double fef, int d, std::optional<double> f_nonlocal,
                             std::optional<double> f_steerable) {
  if (!(fef >= -kTieTolerance && fef <= 1.0 + kTieTolerance)) {
    throw RangeError("fully entangled fraction must lie in [0, 1]", 1.0);
  }
  FefFlags flags;
  flags.teleportation = fef > 1.0 / d + kTieTolerance;
  if (f_nonlocal) flags.nonlocal = fef > *f_nonlocal + kTieTolerance;
  if (f_steerable) flags.steerable = fef > *f_steerable + kTieTolerance;
  return flags;
}

double ghz_isotropic_parameter(const DensityOperator& rho, double tol) {
  const int parties = rho.shape().parties();
  for (int d : rho.shape().dims()) {
    if (d != 2) throw DimensionError("GHZ family is defined on qubits");
  }
  if (parties < 2) throw DimensionError("GHZ family needs at least two qubits");
  const int n = rho.dim();
  const ComplexVector ghz = ghz_basis_vector(parties, 0, GhzSign::Plus);
  const double f = ghz.dot(rho.matrix() * ghz).real();
  const double x = (f - 1.0 / n) / (1.0 - 1.0 / n);
  const ComplexMatrix model = x * (ghz * ghz.adjoint()) + (1.0 - x) / n * identity(n);
  const double dev = (rho.matrix() - model).cwiseAbs().maxCoeff();
  if (dev > tol) {
    std::ostringstream msg;
    msg << "state is not of the form x*GHZ + (1-x)*I/2^N (deviation " << dev << ")";
    throw NotInFamilyError(msg.str());
  }
  return x;
}

bool gme_threshold_test(const DensityOperator& rho) {
  const double x = ghz_isotropic_parameter(rho);
  const double threshold = 1.0 / (1.0 + std::ldexp(1.0, rho.shape().parties() - 1));
  return x > threshold + kTieTolerance;
}

std::vector<ComplexMatrix> spanning_states(int n) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(i, i) = 1.0;
    out.push_back(std::move(p));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (Complex phase : {Complex(1, 0), Complex(0, 1)}) {
        ComplexVector v = ComplexVector::Zero(n);
        v(i) = s;
        v(j) = s * phase;
        out.push_back(v * v.adjoint());
      }
    }
  }
  return out;
}

ThermalityReport verify_local_thermalization(const LinearMap& map, const SubsystemShape& shape,
                                             const std::vector<DensityOperator>& gammas,
                                             double tolerance, bool is_losr_form) {
  if (static_cast<int>(gammas.size()) != shape.parties()) {
    throw DimensionError("need one target marginal per party");
  }
  for (int k = 0; k < shape.parties(); ++k) {
    if (gammas[static_cast<std::size_t>(k)].dim() != shape.dim(k)) {
      throw DimensionError("target marginal dimension does not match its party");
    }
  }
  ThermalityReport report;
  report.is_losr_form = is_losr_form;
  report.tolerance = tolerance;
  report.marginal_deviations.assign(static_cast<std::size_t>(shape.parties()), 0.0);
  const auto inputs = spanning_states(shape.total());
  report.basis_size = static_cast<int>(inputs.size());
  for (const auto& x : inputs) {
    const ComplexMatrix y = map(x);
    for (int k = 0; k < shape.parties(); ++k) {
      const int keep[] = {k};
      const ComplexMatrix marginal = partial_trace(y, shape, keep);
      const double dev = sup_norm(marginal - gammas[static_cast<std::size_t>(k)].matrix());
      auto& slot = report.marginal_deviations[static_cast<std::size_t>(k)];
      slot = std::max(slot, dev);
    }
  }
  report.max_marginal_deviation =
      *std::max_element(report.marginal_deviations.begin(), report.marginal_deviations.end());
  return report;
}

ThermalityReport verify_local_thermalization(const LosrMixture& mix,
                                             const std::vector<DensityOperator>& gammas,
                                             double tolerance) {
  return verify_local_thermalization([&mix](const ComplexMatrix& x) { return mix.apply(x); },
                                     mix.shape(), gammas, tolerance, true);
}

}  // namespace eplt
