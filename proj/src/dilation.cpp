#include "eplt/dilation.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace eplt {

ComplexMatrix stinespring_unitary(const QuantumChannel& channel) {
  const int d = channel.dim();
  const int m = d * d;
  QuantumChannel minimal = channel.kraus().size() > static_cast<std::size_t>(m)
                               ? channel.canonical()
                               : channel;
  const auto& kraus = minimal.kraus();

  ComplexMatrix w = ComplexMatrix::Zero(d * m, d);
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    for (int s = 0; s < d; ++s) {
      w.row(s * m + static_cast<int>(k)) = kraus[k].row(s);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(w);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d * m, d * m);

  ComplexMatrix u(d * m, d * m);
  int next = d;
  for (int c = 0; c < d * m; ++c) {
    if (c % m == 0) {
      u.col(c) = w.col(c / m);
    } else {
      u.col(c) = q.col(next++);
    }
  }
  return u;
}

namespace {

// Kraus operators of U restricted to ancilla input |0⟩: K_k(s, ψ) = U(s·m + k, ψ·m).
std::vector<ComplexMatrix> branch_kraus(const ComplexMatrix& u, int d) {
  const int m = d * d;
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(m), ComplexMatrix(d, d));
  for (int k = 0; k < m; ++k) {
    for (int s = 0; s < d; ++s) {
      for (int psi = 0; psi < d; ++psi) {
        out[static_cast<std::size_t>(k)](s, psi) = u(s * m + k, psi * m);
      }
    }
  }
  return out;
}

// Permutation P with (P x)[new index] = x[old index], where the new order of
// parties is `order` (order[j] = old party placed at position j).
Eigen::PermutationMatrix<Eigen::Dynamic> party_permutation(const std::vector<int>& dims,
                                                           const std::vector<int>& order) {
  const int parties = static_cast<int>(dims.size());
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<int> new_dims(static_cast<std::size_t>(parties));
  for (int j = 0; j < parties; ++j) new_dims[static_cast<std::size_t>(j)] = dims[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];

  Eigen::PermutationMatrix<Eigen::Dynamic> p(total);
  std::vector<int> digits(static_cast<std::size_t>(parties));
  for (int old_index = 0; old_index < total; ++old_index) {
    int rest = old_index;
    for (int k = parties; k-- > 0;) {
      digits[static_cast<std::size_t>(k)] = rest % dims[static_cast<std::size_t>(k)];
      rest /= dims[static_cast<std::size_t>(k)];
    }
    int new_index = 0;
    for (int j = 0; j < parties; ++j) {
      new_index = new_index * new_dims[static_cast<std::size_t>(j)] +
                  digits[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    }
    p.indices()(old_index) = new_index;
  }
  return p;
}

void guard_size(long long n, int max_dim, const char* what) {
  if (n > max_dim) {
    throw ConfigError(std::string(what) + " of dimension " + std::to_string(n) +
                      " exceeds the dense limit " + std::to_string(max_dim));
  }
}

}  // namespace

BathDilation::BathDilation(std::vector<double> probabilities,
                           std::vector<ComplexMatrix> branches_a,
                           std::vector<ComplexMatrix> branches_b, int dim_a, int dim_b)
    : probabilities_(std::move(probabilities)),
      branches_a_(std::move(branches_a)),
      branches_b_(std::move(branches_b)),
      dim_a_(dim_a),
      dim_b_(dim_b) {
  if (probabilities_.empty() || probabilities_.size() != branches_a_.size() ||
      probabilities_.size() != branches_b_.size()) {
    throw DimensionError("dilation needs one branch unitary per party and term");
  }
}

SubsystemShape BathDilation::ancilla_shape() const {
  return SubsystemShape{dim_a_ * dim_a_, dim_b_ * dim_b_, terms(), terms()};
}

ComplexMatrix BathDilation::controlled_unitary(int party, int max_dim) const {
  const int d = party == 0 ? dim_a_ : dim_b_;
  const auto& branches = party == 0 ? branches_a_ : branches_b_;
  const int n = d * d * d;
  const int big = n * terms();
  guard_size(big, max_dim, "controlled unitary");
  ComplexMatrix v = ComplexMatrix::Zero(big, big);
  // Ordering X X′ X″ with the register least significant.
  for (int i = 0; i < terms(); ++i) {
    const auto& u = branches[static_cast<std::size_t>(i)];
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        v(r * terms() + i, c * terms() + i) = u(r, c);
      }
    }
  }
  return v;
}

ComplexMatrix BathDilation::bath_state(int max_dim) const {
  const int ma = dim_a_ * dim_a_;
  const int mb = dim_b_ * dim_b_;
  const long long n = static_cast<long long>(ma) * mb * terms() * terms();
  guard_size(n, max_dim, "bath state");
  ComplexMatrix register_state = ComplexMatrix::Zero(terms() * terms(), terms() * terms());
  for (int i = 0; i < terms(); ++i) {
    register_state(i * terms() + i, i * terms() + i) = probabilities_[static_cast<std::size_t>(i)];
  }
  ComplexMatrix ground = ComplexMatrix::Zero(ma * mb, ma * mb);
  ground(0, 0) = 1.0;
  return tensor(ground, register_state);
}

ComplexMatrix BathDilation::apply(const ComplexMatrix& rho) const {
  const SubsystemShape shape{dim_a_, dim_b_};
  shape.check(rho);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < terms(); ++i) {
    const double p = probabilities_[static_cast<std::size_t>(i)];
    if (p == 0.0) continue;
    const auto ka = branch_kraus(branches_a_[static_cast<std::size_t>(i)], dim_a_);
    const auto kb = branch_kraus(branches_b_[static_cast<std::size_t>(i)], dim_b_);
    ComplexMatrix y = apply_on_party(rho, shape, 0, ka);
    y = apply_on_party(y, shape, 1, kb);
    out += p * y;
  }
  return out;
}

ComplexMatrix BathDilation::apply_dense(const ComplexMatrix& rho, int max_dim) const {
  const SubsystemShape system{dim_a_, dim_b_};
  system.check(rho);
  const ComplexMatrix bath = bath_state(max_dim);
  const SubsystemShape full{dim_a_, dim_b_, dim_a_ * dim_a_, dim_b_ * dim_b_, terms(), terms()};
  guard_size(full.total(), max_dim, "dilated space");

  // V_A ⊗ V_B lives on A A′ A″ B B′ B″; bring it to A B A′ B′ A″ B″.
  const ComplexMatrix local = tensor(controlled_unitary(0, max_dim), controlled_unitary(1, max_dim));
  const std::vector<int> local_dims{dim_a_, dim_a_ * dim_a_, terms(), dim_b_, dim_b_ * dim_b_, terms()};
  const auto perm = party_permutation(local_dims, {0, 3, 1, 4, 2, 5});
  const ComplexMatrix v = perm * local * perm.transpose();

  const ComplexMatrix joint = tensor(rho, bath);
  return partial_trace(v * joint * v.adjoint(), full, {0, 1});
}

bool BathDilation::verify_structure(double tol) const {
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  if (std::abs(total - 1.0) > tol) return false;
  for (const auto& u : branches_a_) {
    if (!is_unitary(u, tol)) return false;
  }
  for (const auto& u : branches_b_) {
    if (!is_unitary(u, tol)) return false;
  }
  return true;
}

BathDilation build_bath_dilation(const LosrMixture& mix) {
  if (mix.parties() != 2) {
    throw DimensionError("bath dilation is built for bipartite mixtures");
  }
  std::vector<double> probabilities;
  std::vector<ComplexMatrix> branches_a;
  std::vector<ComplexMatrix> branches_b;
  for (const auto& term : mix.terms()) {
    probabilities.push_back(term.weight);
    branches_a.push_back(stinespring_unitary(term.locals[0]));
    branches_b.push_back(stinespring_unitary(term.locals[1]));
  }
  return BathDilation(std::move(probabilities), std::move(branches_a), std::move(branches_b),
                      mix.shape().dim(0), mix.shape().dim(1));
}

double dilation_deviation(const BathDilation& dilation, const LosrMixture& mix, int count,
                          std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const ComplexMatrix rho = random_mixed_state(mix.shape(), rng).matrix();
    worst = std::max(worst, sup_norm(dilation.apply(rho) - mix.apply(rho)));
  }
  return worst;
}

}  // namespace eplt
