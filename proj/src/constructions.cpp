#include "eplt/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eplt {

namespace {

int bipartite_local_dim(const SubsystemShape& shape) {
  if (shape.parties() != 2 || shape.dim(0) != shape.dim(1)) {
    throw DimensionError("twirl needs a bipartition d x d with equal local dimensions");
  }
  return shape.dim(0);
}

void check_epsilon(double epsilon, double limit, const char* what) {
  if (!(epsilon >= 0.0) || epsilon > limit + kTieTolerance) {
    std::ostringstream msg;
    msg << what << " = " << epsilon << " outside the admissible range [0, " << limit << "]";
    throw RangeError(msg.str(), limit);
  }
}

double local_max_epsilon(const DensityOperator& gamma) {
  return std::max(0.0, gamma.dim() * gamma.spectrum()(0));
}

// ε·(mixture − exact) estimated on a fixed probe set.
double twirl_mixture_error(int d, const LosrMixture& mix) {
  double worst = 0.0;
  const SubsystemShape shape{d, d};
  for (const auto& probe : probe_states(d, 64, 0xa11ce)) {
    const ComplexMatrix diff = mix.apply(probe) - twirl_exact(probe, shape);
    worst = std::max(worst, sup_norm(diff));
  }
  return worst;
}

std::vector<LosrTerm> twirl_terms(const TwirlEnsemble& ensemble, double total_weight, int d) {
  std::vector<LosrTerm> terms;
  terms.reserve(ensemble.unitaries.size());
  const double w = total_weight / static_cast<double>(ensemble.unitaries.size());
  const SubsystemShape local{d};
  for (const auto& u : ensemble.unitaries) {
    terms.push_back({w, {QuantumChannel({u}, local), QuantumChannel({u.conjugate()}, local)}});
  }
  return terms;
}

}  // namespace

ComplexMatrix twirl_exact(const ComplexMatrix& x, const SubsystemShape& shape) {
  const int d = bipartite_local_dim(shape);
  shape.check(x);
  const ComplexVector psi = max_entangled_vector(d);
  const int n = d * d;
  const Complex fidelity = psi.dot(x * psi);
  const Complex trace = x.trace();
  const Complex beta = (trace - fidelity) / static_cast<double>(n - 1);
  const Complex alpha = fidelity - beta;
  return alpha * (psi * psi.adjoint()) + beta * identity(n);
}

DensityOperator twirl_exact(const DensityOperator& rho) {
  return DensityOperator(twirl_exact(rho.matrix(), rho.shape()), rho.shape());
}

LosrMixture twirl_mixture(int d, const TwirlEnsemble& ensemble) {
  LosrMixture mix(twirl_terms(ensemble, 1.0, d), SubsystemShape{d, d});
  if (!ensemble.exact) {
    return mix.with_approximation(twirl_mixture_error(d, mix));
  }
  return mix;
}

ComplexMatrix SampledTwirl::apply(const ComplexMatrix& x) const {
  shape.check(x);
  return unvec(superoperator * vec(x), shape.total());
}

QuantumChannel SampledTwirl::channel() const {
  return QuantumChannel::from_superoperator(superoperator, shape);
}

SampledTwirl twirl_sampled(int d, int factors, Rng& rng) {
  if (factors < 0) {
    throw ConfigError("number of twirl factors must be non-negative");
  }
  const int n = d * d;
  SampledTwirl out{SubsystemShape{d, d}, {}, ComplexMatrix::Identity(n * n, n * n)};
  out.unitaries.reserve(static_cast<std::size_t>(factors));
  const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
  for (int k = 0; k < factors; ++k) {
    ComplexMatrix u = haar_unitary(d, rng);
    const ComplexMatrix v = tensor(u, u.conjugate());
    const ComplexMatrix step = 0.5 * (id + tensor(v.conjugate(), v));
    out.superoperator = step * out.superoperator;
    out.unitaries.push_back(std::move(u));
  }
  return out;
}

SampledTwirl twirl_sampled(int d, int factors, std::uint64_t seed) {
  Rng rng(seed);
  return twirl_sampled(d, factors, rng);
}

std::vector<ComplexMatrix> probe_states(int d, int count, std::uint64_t seed) {
  std::vector<ComplexMatrix> probes;
  probes.reserve(static_cast<std::size_t>(count) + 1);
  probes.push_back(max_entangled(d).matrix());
  Rng rng(seed);
  const SubsystemShape shape{d, d};
  for (int k = 0; k < count; ++k) {
    probes.push_back(random_pure_state(shape, rng).matrix());
  }
  return probes;
}

std::vector<double> twirl_deviations(const SampledTwirl& sample,
                                     const std::vector<ComplexMatrix>& probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& p : probes) {
    const ComplexMatrix diff = twirl_exact(p, sample.shape) - sample.apply(p);
    const auto es = eig_hermitian(diff);
    out.push_back(std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1))));
  }
  return out;
}

double twirl_deviation(const SampledTwirl& sample, const std::vector<ComplexMatrix>& probes) {
  const auto all = twirl_deviations(sample, probes);
  return all.empty() ? 0.0 : *std::max_element(all.begin(), all.end());
}

double eplt_max_epsilon(const DensityOperator& gamma_a, const DensityOperator& gamma_b) {
  return gamma_a.dim() * min_thermal_population(gamma_a, gamma_b);
}

LosrMixture eplt(const DensityOperator& gamma_a, const DensityOperator& gamma_b, double epsilon,
                 const TwirlEnsemble& ensemble) {
  const int d = gamma_a.dim();
  const double limit = eplt_max_epsilon(gamma_a, gamma_b);
  check_epsilon(epsilon, limit, "epsilon");
  epsilon = std::min(epsilon, limit);

  std::vector<LosrTerm> terms;
  if (epsilon < 1.0) {
    const DensityOperator eta_a = eta_state(gamma_a, epsilon);
    const DensityOperator eta_b = eta_state(gamma_b, epsilon);
    terms.push_back({1.0 - epsilon, {constant_channel(eta_a), constant_channel(eta_b)}});
  }
  if (epsilon > 0.0) {
    auto twirl = twirl_terms(ensemble, epsilon, d);
    terms.insert(terms.end(), std::make_move_iterator(twirl.begin()),
                 std::make_move_iterator(twirl.end()));
  }
  LosrMixture mix(std::move(terms), SubsystemShape{d, d});
  if (!ensemble.exact) {
    return mix.with_approximation(epsilon * twirl_mixture_error(d, twirl_mixture(d, {ensemble.unitaries, true})));
  }
  return mix;
}

LosrMixture eplt(const DensityOperator& gamma_a, const DensityOperator& gamma_b, double epsilon) {
  return eplt(gamma_a, gamma_b, epsilon, twirl_ensemble(gamma_a.dim()));
}

ComplexMatrix eplt_apply(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                         double epsilon, const ComplexMatrix& x) {
  const int d = gamma_a.dim();
  const double limit = eplt_max_epsilon(gamma_a, gamma_b);
  check_epsilon(epsilon, limit, "epsilon");
  epsilon = std::min(epsilon, limit);
  const SubsystemShape shape{d, d};
  ComplexMatrix out = epsilon * twirl_exact(x, shape);
  if (epsilon < 1.0) {
    const ComplexMatrix product =
        tensor(eta_state(gamma_a, epsilon).matrix(), eta_state(gamma_b, epsilon).matrix());
    out += (1.0 - epsilon) * x.trace() * product;
  }
  return out;
}

LosrMixture eplt_alternative(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                             double epsilon_a, double epsilon_b, const TwirlEnsemble& ensemble) {
  if (gamma_a.dim() != gamma_b.dim()) {
    throw DimensionError("thermal states must have equal local dimension");
  }
  const int d = gamma_a.dim();
  const double limit_a = local_max_epsilon(gamma_a);
  const double limit_b = local_max_epsilon(gamma_b);
  check_epsilon(epsilon_a, limit_a, "epsilon_A");
  check_epsilon(epsilon_b, limit_b, "epsilon_B");
  epsilon_a = std::min(epsilon_a, limit_a);
  epsilon_b = std::min(epsilon_b, limit_b);

  const QuantumChannel mix_a = mixing_channel(eta_state(gamma_a, epsilon_a), 1.0 - epsilon_a);
  const QuantumChannel mix_b = mixing_channel(eta_state(gamma_b, epsilon_b), 1.0 - epsilon_b);
  const SubsystemShape local{d};
  const double w = 1.0 / static_cast<double>(ensemble.unitaries.size());
  std::vector<LosrTerm> terms;
  terms.reserve(ensemble.unitaries.size());
  for (const auto& u : ensemble.unitaries) {
    terms.push_back({w,
                     {compose(mix_a, QuantumChannel({u}, local)),
                      compose(mix_b, QuantumChannel({u.conjugate()}, local))}});
  }
  LosrMixture mix(std::move(terms), SubsystemShape{d, d});
  if (!ensemble.exact) {
    return mix.with_approximation(twirl_mixture_error(d, twirl_mixture(d, {ensemble.unitaries, true})));
  }
  return mix;
}

LosrMixture eplt_alternative(const DensityOperator& gamma_a, const DensityOperator& gamma_b,
                             double epsilon_a, double epsilon_b) {
  return eplt_alternative(gamma_a, gamma_b, epsilon_a, epsilon_b, twirl_ensemble(gamma_a.dim()));
}

ComplexMatrix eplt_alternative_apply(const DensityOperator& gamma_a,
                                     const DensityOperator& gamma_b, double epsilon_a,
                                     double epsilon_b, const ComplexMatrix& x) {
  const int d = gamma_a.dim();
  check_epsilon(epsilon_a, local_max_epsilon(gamma_a), "epsilon_A");
  check_epsilon(epsilon_b, local_max_epsilon(gamma_b), "epsilon_B");
  epsilon_a = std::min(epsilon_a, local_max_epsilon(gamma_a));
  epsilon_b = std::min(epsilon_b, local_max_epsilon(gamma_b));
  const SubsystemShape shape{d, d};
  const auto mix_a = mixing_channel(eta_state(gamma_a, epsilon_a), 1.0 - epsilon_a);
  const auto mix_b = mixing_channel(eta_state(gamma_b, epsilon_b), 1.0 - epsilon_b);
  ComplexMatrix y = twirl_exact(x, shape);
  y = apply_on_party(y, shape, 0, mix_a.kraus());
  return apply_on_party(y, shape, 1, mix_b.kraus());
}

ComplexMatrix ghz_twirl(const ComplexMatrix& x, int parties) {
  const SubsystemShape shape = SubsystemShape::uniform(2, parties);
  shape.check(x);
  const int half = 1 << (parties - 1);
  const int n = 2 * half;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < half; ++j) {
    const ComplexVector plus = ghz_basis_vector(parties, j, GhzSign::Plus);
    const ComplexVector minus = ghz_basis_vector(parties, j, GhzSign::Minus);
    const Complex lp = plus.dot(x * plus);
    const Complex lm = minus.dot(x * minus);
    if (j == 0) {
      out += lp * (plus * plus.adjoint()) + lm * (minus * minus.adjoint());
    } else {
      const Complex avg = 0.5 * (lp + lm);
      out += avg * (plus * plus.adjoint() + minus * minus.adjoint());
    }
  }
  return out;
}

DensityOperator ghz_twirl(const DensityOperator& rho) {
  for (int d : rho.shape().dims()) {
    if (d != 2) throw DimensionError("GHZ twirl acts on qubits only");
  }
  return DensityOperator(ghz_twirl(rho.matrix(), rho.shape().parties()), rho.shape());
}

LosrMixture ghz_twirl_mixture(int parties) {
  if (parties < 2) {
    throw DimensionError("GHZ twirl needs at least two qubits");
  }
  const SubsystemShape local{2};
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  int phase_patterns = 1;
  for (int k = 1; k < parties; ++k) phase_patterns *= 3;
  const double w = 1.0 / (2.0 * phase_patterns);

  std::vector<LosrTerm> terms;
  terms.reserve(static_cast<std::size_t>(2 * phase_patterns));
  for (int flip = 0; flip < 2; ++flip) {
    for (int pattern = 0; pattern < phase_patterns; ++pattern) {
      std::vector<int> t(static_cast<std::size_t>(parties), 0);
      int rest = pattern;
      int sum = 0;
      for (int k = 0; k + 1 < parties; ++k) {
        t[static_cast<std::size_t>(k)] = rest % 3;
        sum += rest % 3;
        rest /= 3;
      }
      t.back() = (3 - sum % 3) % 3;
      LosrTerm term{w, {}};
      for (int k = 0; k < parties; ++k) {
        ComplexMatrix phase = ComplexMatrix::Identity(2, 2);
        phase(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi * t[static_cast<std::size_t>(k)] / 3.0);
        const ComplexMatrix u = flip ? ComplexMatrix(x * phase) : phase;
        term.locals.emplace_back(std::vector<ComplexMatrix>{u}, local);
      }
      terms.push_back(std::move(term));
    }
  }
  return LosrMixture(std::move(terms), SubsystemShape::uniform(2, parties));
}

namespace {

double multipartite_limit(const std::vector<DensityOperator>& gammas) {
  if (gammas.size() < 2) {
    throw DimensionError("multipartite construction needs at least two parties");
  }
  double pmin = 1.0;
  for (const auto& g : gammas) {
    if (g.dim() != 2) throw DimensionError("multipartite construction acts on qubits only");
    pmin = std::min(pmin, g.spectrum()(0));
  }
  return std::max(0.0, 2.0 * pmin);
}

}  // namespace

LosrMixture eplt_multipartite(const std::vector<DensityOperator>& gammas, double epsilon) {
  const double limit = multipartite_limit(gammas);
  check_epsilon(epsilon, limit, "epsilon");
  epsilon = std::min(epsilon, limit);
  const int parties = static_cast<int>(gammas.size());

  std::vector<LosrTerm> terms;
  if (epsilon < 1.0) {
    LosrTerm constant{1.0 - epsilon, {}};
    for (const auto& g : gammas) constant.locals.push_back(constant_channel(eta_state(g, epsilon)));
    terms.push_back(std::move(constant));
  }
  if (epsilon > 0.0) {
    const auto twirl = ghz_twirl_mixture(parties);
    for (auto t : twirl.terms()) {
      t.weight *= epsilon;
      terms.push_back(std::move(t));
    }
  }
  return LosrMixture(std::move(terms), SubsystemShape::uniform(2, parties));
}

ComplexMatrix eplt_multipartite_apply(const std::vector<DensityOperator>& gammas, double epsilon,
                                      const ComplexMatrix& x) {
  const double limit = multipartite_limit(gammas);
  check_epsilon(epsilon, limit, "epsilon");
  epsilon = std::min(epsilon, limit);
  const int parties = static_cast<int>(gammas.size());
  ComplexMatrix out = epsilon * ghz_twirl(x, parties);
  if (epsilon < 1.0) {
    std::vector<ComplexMatrix> etas;
    for (const auto& g : gammas) etas.push_back(eta_state(g, epsilon).matrix());
    out += (1.0 - epsilon) * x.trace() * tensor(etas);
  }
  return out;
}

namespace {

struct GroundStructure {
  ComplexMatrix ground;   // d × 2 isometry onto the ground space
  ComplexMatrix excited;  // d × (d−2) isometry onto its complement
};

GroundStructure ground_structure(const ComplexMatrix& ham) {
  const int g = ground_degeneracy(ham);
  if (g == 1) {
    throw NoEpltError("unique ground state: the zero-temperature marginal is pure");
  }
  if (g != 2) {
    throw ConfigError("zero-temperature protocol supports two-fold ground degeneracy only, got " +
                      std::to_string(g));
  }
  GroundStructure s;
  s.ground = ground_space_basis(ham);
  const int d = static_cast<int>(ham.rows());
  const auto es = eig_hermitian(identity(d) - s.ground * s.ground.adjoint());
  s.excited = es.vectors.rightCols(d - 2);
  return s;
}

QuantumChannel ground_filter(const GroundStructure& s) {
  const int d = static_cast<int>(s.ground.rows());
  std::vector<ComplexMatrix> kraus{s.ground * s.ground.adjoint()};
  for (int a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < s.excited.cols(); ++b) {
      kraus.push_back(s.ground.col(a) * s.excited.col(b).adjoint() / std::sqrt(2.0));
    }
  }
  return QuantumChannel(std::move(kraus), SubsystemShape{d});
}

ComplexMatrix lift(const GroundStructure& s, const ComplexMatrix& u) {
  const int d = static_cast<int>(s.ground.rows());
  return s.ground * u * s.ground.adjoint() + (identity(d) - s.ground * s.ground.adjoint());
}

}  // namespace

LosrMixture zero_temp_protocol(const ComplexMatrix& ham_a, const ComplexMatrix& ham_b) {
  const GroundStructure sa = ground_structure(ham_a);
  const GroundStructure sb = ground_structure(ham_b);
  const QuantumChannel filter_a = ground_filter(sa);
  const QuantumChannel filter_b = ground_filter(sb);
  const SubsystemShape local_a{static_cast<int>(ham_a.rows())};
  const SubsystemShape local_b{static_cast<int>(ham_b.rows())};

  const auto design = clifford_group(2);
  const double w = 1.0 / static_cast<double>(design.size());
  std::vector<LosrTerm> terms;
  terms.reserve(design.size());
  for (const auto& u : design) {
    terms.push_back({w,
                     {compose(QuantumChannel({lift(sa, u)}, local_a), filter_a),
                      compose(QuantumChannel({lift(sb, u.conjugate())}, local_b), filter_b)}});
  }
  return LosrMixture(std::move(terms), local_a.concat(local_b));
}

ComplexMatrix zero_temp_apply(const ComplexMatrix& ham_a, const ComplexMatrix& ham_b,
                              const ComplexMatrix& x) {
  const GroundStructure sa = ground_structure(ham_a);
  const GroundStructure sb = ground_structure(ham_b);
  const SubsystemShape shape{static_cast<int>(ham_a.rows()), static_cast<int>(ham_b.rows())};
  ComplexMatrix y = apply_on_party(x, shape, 0, ground_filter(sa).kraus());
  y = apply_on_party(y, shape, 1, ground_filter(sb).kraus());
  const ComplexMatrix iso = tensor(sa.ground, sb.ground);
  const ComplexMatrix compressed = iso.adjoint() * y * iso;
  return iso * twirl_exact(compressed, SubsystemShape{2, 2}) * iso.adjoint();
}

}  // namespace eplt
