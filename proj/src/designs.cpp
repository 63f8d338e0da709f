#include "eplt/designs.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <set>
#include <string>

namespace eplt {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

namespace {

Complex root_of_unity(int d, long long k) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % d) / d;
  return std::polar(1.0, angle);
}

ComplexMatrix shift(int d) {
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

ComplexMatrix clock(int d) {
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = root_of_unity(d, j);
  return z;
}

// Removes the global phase so that the first entry of significant magnitude
// is real positive, then rounds entries into a hashable key.
std::pair<ComplexMatrix, std::vector<long long>> canonical_form(const ComplexMatrix& u) {
  Complex phase(1.0, 0.0);
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    bool found = false;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (std::abs(u(r, c)) > 1e-6) {
        phase = std::conj(u(r, c)) / std::abs(u(r, c));
        found = true;
        break;
      }
    }
    if (found) break;
  }
  ComplexMatrix v = u * phase;
  std::vector<long long> key;
  key.reserve(static_cast<std::size_t>(2 * v.size()));
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      key.push_back(std::llround(v(r, c).real() * 1e6));
      key.push_back(std::llround(v(r, c).imag() * 1e6));
    }
  }
  return {std::move(v), std::move(key)};
}

}  // namespace

std::vector<ComplexMatrix> weyl_operators(int d) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d * d));
  const ComplexMatrix x = shift(d);
  const ComplexMatrix z = clock(d);
  ComplexMatrix xa = identity(d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix zb = identity(d);
    for (int b = 0; b < d; ++b) {
      out.push_back(xa * zb);
      zb = zb * z;
    }
    xa = xa * x;
  }
  return out;
}

std::vector<ComplexMatrix> clifford_group(int d) {
  if (!is_prime(d)) {
    throw DimensionError("Clifford 2-design is built for prime dimensions only, got " +
                         std::to_string(d));
  }
  std::vector<ComplexMatrix> generators;
  // Fourier gate
  ComplexMatrix f(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      f(j, k) = root_of_unity(d, static_cast<long long>(j) * k) / std::sqrt(static_cast<double>(d));
    }
  }
  generators.push_back(f);
  // Phase gate: diag(1, i) for qubits, diag(ω^{j²}) for odd primes.
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    p(j, j) = (d == 2) ? (j == 0 ? Complex(1, 0) : Complex(0, 1))
                       : root_of_unity(d, static_cast<long long>(j) * j);
  }
  generators.push_back(p);
  generators.push_back(shift(d));
  generators.push_back(clock(d));

  const long long expected =
      static_cast<long long>(d) * d * d * (static_cast<long long>(d) * d - 1);
  std::set<std::vector<long long>> seen;
  std::vector<ComplexMatrix> group;
  std::deque<ComplexMatrix> frontier;

  auto visit = [&](const ComplexMatrix& u) {
    auto [v, key] = canonical_form(u);
    if (seen.insert(std::move(key)).second) {
      group.push_back(v);
      frontier.push_back(std::move(v));
    }
  };
  visit(identity(d));
  while (!frontier.empty()) {
    const ComplexMatrix u = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : generators) visit(g * u);
    if (static_cast<long long>(group.size()) > expected) {
      throw Error("Clifford closure exceeded the expected group order");
    }
  }
  if (static_cast<long long>(group.size()) != expected) {
    throw Error("Clifford closure produced " + std::to_string(group.size()) +
                " elements, expected " + std::to_string(expected));
  }
  return group;
}

TwirlEnsemble twirl_ensemble(int d, int haar_samples, std::uint64_t seed) {
  if (is_prime(d)) {
    return {clifford_group(d), true};
  }
  if (haar_samples < 1) {
    throw ConfigError("sampled twirl ensemble needs at least one Haar sample");
  }
  const auto weyl = weyl_operators(d);
  Rng rng(seed);
  TwirlEnsemble out{{}, false};
  out.unitaries.reserve(weyl.size() * static_cast<std::size_t>(haar_samples));
  for (int s = 0; s < haar_samples; ++s) {
    const ComplexMatrix u = haar_unitary(d, rng);
    for (const auto& w : weyl) out.unitaries.push_back(w * u);
  }
  return out;
}

double frame_potential(const std::vector<ComplexMatrix>& unitaries) {
  const double n = static_cast<double>(unitaries.size());
  double acc = 0.0;
  for (const auto& a : unitaries) {
    for (const auto& b : unitaries) {
      acc += std::pow(std::abs((a.adjoint() * b).trace()), 4);
    }
  }
  return acc / (n * n);
}

}  // namespace eplt
