#include "eplt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eplt {

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus, SubsystemShape shape,
                               const ToleranceProfile& tol)
    : kraus_(std::move(kraus)), shape_(std::move(shape)) {
  if (kraus_.empty()) {
    throw NotAChannelError("channel needs at least one Kraus operator");
  }
  const int n = shape_.total();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& k : kraus_) {
    shape_.check(k);
    sum.noalias() += k.adjoint() * k;
  }
  const double dev = sup_norm(sum - identity(n));
  if (dev > tol.trace_preservation) {
    std::ostringstream msg;
    msg << "Kraus family is not trace preserving (deviation " << dev << ")";
    throw NotAChannelError(msg.str());
  }
}

QuantumChannel QuantumChannel::from_superoperator(const ComplexMatrix& superop,
                                                  SubsystemShape shape, double cutoff) {
  const int n = shape.total();
  if (superop.rows() != n * n || superop.cols() != n * n) {
    throw DimensionError("superoperator does not match the subsystem shape");
  }
  ComplexMatrix choi(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix block = unvec(superop.col(i + j * n), n);
      choi.block(i * n, j * n, n, n) = block;
    }
  }
  ToleranceProfile loose;
  loose.hermitian = 1e-8;
  const auto es = eig_hermitian(choi, loose);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index k = es.values.size(); k-- > 0;) {
    const double lam = es.values(k);
    if (lam <= cutoff) break;
    ComplexMatrix op(n, n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        op(a, i) = std::sqrt(lam) * es.vectors(i * n + a, k);
      }
    }
    kraus.push_back(std::move(op));
  }
  return QuantumChannel(std::move(kraus), std::move(shape));
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& x) const {
  shape_.check(x);
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus_) {
    out.noalias() += k * x * k.adjoint();
  }
  return out;
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
  if (!(rho.shape() == shape_)) {
    throw DimensionError("state shape does not match the channel");
  }
  return DensityOperator(apply(rho.matrix()), shape_);
}

ComplexMatrix QuantumChannel::superoperator() const {
  const int n = dim();
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& k : kraus_) {
    s.noalias() += tensor(k.conjugate(), k);
  }
  return s;
}

ComplexMatrix QuantumChannel::choi() const {
  const int n = dim();
  ComplexMatrix j = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& k : kraus_) {
    ComplexVector v(n * n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        v(i * n + a) = k(a, i);
      }
    }
    j.noalias() += v * v.adjoint();
  }
  return j;
}

QuantumChannel QuantumChannel::canonical() const {
  return from_superoperator(superoperator(), shape_);
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  if (!(outer.shape() == inner.shape())) {
    throw DimensionError("cannot compose channels of different shape");
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& a : outer.kraus()) {
    for (const auto& b : inner.kraus()) {
      kraus.push_back(a * b);
    }
  }
  return QuantumChannel(std::move(kraus), outer.shape());
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) {
      kraus.push_back(tensor(ka, kb));
    }
  }
  return QuantumChannel(std::move(kraus), a.shape().concat(b.shape()));
}

QuantumChannel identity_channel(const SubsystemShape& shape) {
  return QuantumChannel({identity(shape.total())}, shape);
}

QuantumChannel unitary_channel(const ComplexMatrix& u, const SubsystemShape& shape,
                               const ToleranceProfile& tol) {
  if (!is_unitary(u, tol.unitary)) {
    throw NotAChannelError("operator is not unitary");
  }
  return QuantumChannel({u}, shape, tol);
}

QuantumChannel constant_channel(const DensityOperator& sigma) {
  return constant_channel(sigma, identity(sigma.dim()));
}

QuantumChannel constant_channel(const DensityOperator& sigma,
                                const ComplexMatrix& measurement_basis) {
  const int n = sigma.dim();
  if (measurement_basis.rows() != n || measurement_basis.cols() != n) {
    throw DimensionError("measurement basis does not match the state dimension");
  }
  const auto es = eig_hermitian(sigma.matrix());
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < n; ++k) {
    const double lam = es.values(k);
    if (lam <= 1e-15) continue;
    for (int j = 0; j < n; ++j) {
      kraus.push_back(std::sqrt(lam) * es.vectors.col(k) * measurement_basis.col(j).adjoint());
    }
  }
  return QuantumChannel(std::move(kraus), sigma.shape());
}

QuantumChannel mixing_channel(const DensityOperator& sigma, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw RangeError("mixing weight must lie in [0, 1]", 1.0);
  }
  std::vector<ComplexMatrix> kraus;
  if (p < 1.0) {
    kraus.push_back(std::sqrt(1.0 - p) * identity(sigma.dim()));
  }
  if (p > 0.0) {
    const auto prepare = constant_channel(sigma);
    for (const auto& k : prepare.kraus()) {
      kraus.push_back(std::sqrt(p) * k);
    }
  }
  return QuantumChannel(std::move(kraus), sigma.shape());
}

double relaxation_weight(double t, double tau) {
  if (!(t >= 0.0)) {
    throw ConfigError("relaxation time must be non-negative");
  }
  if (!(tau > 0.0)) {
    throw ConfigError("relaxation timescale must be positive");
  }
  if (std::isinf(t)) return 1.0;
  return -std::expm1(-t / tau);
}

QuantumChannel partial_thermalization(const DensityOperator& gamma, double t, double tau) {
  return mixing_channel(gamma, relaxation_weight(t, tau));
}

ComplexMatrix apply_on_party(const ComplexMatrix& x, const SubsystemShape& shape, int party,
                             const std::vector<ComplexMatrix>& kraus) {
  shape.check(x);
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus) {
    const ComplexMatrix full = embed(k, shape, party);
    out.noalias() += full * x * full.adjoint();
  }
  return out;
}

LosrMixture::LosrMixture(std::vector<LosrTerm> terms, SubsystemShape shape)
    : terms_(std::move(terms)), shape_(std::move(shape)) {
  if (terms_.empty()) {
    throw NotAChannelError("LOSR mixture needs at least one term");
  }
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(t.weight >= 0.0)) {
      throw NotAChannelError("LOSR mixture weights must be non-negative");
    }
    if (static_cast<int>(t.locals.size()) != shape_.parties()) {
      throw NotAChannelError("LOSR term must hold one local channel per party");
    }
    for (int k = 0; k < shape_.parties(); ++k) {
      const auto& local = t.locals[static_cast<std::size_t>(k)];
      if (local.shape().parties() != 1 || local.dim() != shape_.dim(k)) {
        throw NotAChannelError("local channel does not act on a single party of matching dimension");
      }
    }
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "LOSR mixture weights sum to " << total;
    throw NotAChannelError(msg.str());
  }
}

LosrMixture LosrMixture::with_approximation(double error) const {
  LosrMixture out = *this;
  out.exact_ = false;
  out.approximation_error_ = error;
  return out;
}

ComplexMatrix LosrMixture::apply(const ComplexMatrix& x) const {
  shape_.check(x);
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    const bool all_unitary = std::all_of(t.locals.begin(), t.locals.end(),
                                         [](const QuantumChannel& c) { return c.kraus().size() == 1; });
    if (all_unitary) {
      std::vector<ComplexMatrix> factors;
      factors.reserve(t.locals.size());
      for (const auto& c : t.locals) factors.push_back(c.kraus().front());
      const ComplexMatrix u = tensor(factors);
      out.noalias() += t.weight * (u * x * u.adjoint());
    } else {
      ComplexMatrix y = x;
      for (int k = 0; k < shape_.parties(); ++k) {
        y = apply_on_party(y, shape_, k, t.locals[static_cast<std::size_t>(k)].kraus());
      }
      out += t.weight * y;
    }
  }
  return out;
}

DensityOperator LosrMixture::apply(const DensityOperator& rho) const {
  if (!(rho.shape() == shape_)) {
    throw DimensionError("state shape does not match the mixture");
  }
  return DensityOperator(apply(rho.matrix()), shape_);
}

QuantumChannel LosrMixture::to_channel() const {
  std::vector<ComplexMatrix> kraus;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    std::vector<ComplexMatrix> acc{ComplexMatrix::Identity(1, 1) * std::sqrt(t.weight)};
    for (const auto& local : t.locals) {
      std::vector<ComplexMatrix> next;
      next.reserve(acc.size() * local.kraus().size());
      for (const auto& a : acc) {
        for (const auto& k : local.kraus()) next.push_back(tensor(a, k));
      }
      acc = std::move(next);
    }
    kraus.insert(kraus.end(), acc.begin(), acc.end());
  }
  return QuantumChannel(std::move(kraus), shape_);
}

}  // namespace eplt
