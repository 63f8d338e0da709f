#include "eplt/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace eplt {

SubsystemShape::SubsystemShape(std::initializer_list<int> dims)
    : SubsystemShape(std::vector<int>(dims)) {}

SubsystemShape::SubsystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_) {
    if (d < 1) {
      throw DimensionError("local dimension must be positive, got " + std::to_string(d));
    }
  }
}

SubsystemShape SubsystemShape::uniform(int d, int parties) {
  return SubsystemShape(std::vector<int>(static_cast<std::size_t>(parties), d));
}

int SubsystemShape::total() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

SubsystemShape SubsystemShape::concat(const SubsystemShape& other) const {
  std::vector<int> out = dims_;
  out.insert(out.end(), other.dims_.begin(), other.dims_.end());
  return SubsystemShape(std::move(out));
}

SubsystemShape SubsystemShape::select(std::span<const int> parties) const {
  std::vector<int> out;
  out.reserve(parties.size());
  for (int p : parties) {
    if (p < 0 || p >= this->parties()) {
      throw DimensionError("party index " + std::to_string(p) + " out of range");
    }
    out.push_back(dims_[static_cast<std::size_t>(p)]);
  }
  return SubsystemShape(std::move(out));
}

void SubsystemShape::check(const ComplexMatrix& m) const {
  if (m.rows() != m.cols()) {
    throw DimensionError("operator is not square");
  }
  if (m.rows() != total()) {
    throw DimensionError("operator dimension " + std::to_string(m.rows()) +
                         " does not match subsystem shape of total dimension " +
                         std::to_string(total()));
  }
}

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) {
    out = tensor(out, f);
  }
  return out;
}

namespace {

// Mixed-radix digits of a flat index, party 0 most significant.
std::vector<int> digits_of(int index, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const int> keep) {
  shape.check(m);
  if (keep.empty()) {
    throw DimensionError("partial_trace needs at least one kept party");
  }
  const auto& dims = shape.dims();
  std::vector<bool> kept(dims.size(), false);
  for (int p : keep) {
    if (p < 0 || p >= shape.parties()) {
      throw DimensionError("party index " + std::to_string(p) + " out of range");
    }
    if (kept[static_cast<std::size_t>(p)]) {
      throw DimensionError("party index " + std::to_string(p) + " repeated");
    }
    kept[static_cast<std::size_t>(p)] = true;
  }

  int kept_dim = 1;
  int traced_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    (kept[k] ? kept_dim : traced_dim) *= dims[k];
  }

  // groups[t][r] is the full index with traced part t and kept part r.
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(traced_dim),
                                       std::vector<int>(static_cast<std::size_t>(kept_dim)));
  const int n = shape.total();
  for (int i = 0; i < n; ++i) {
    const auto digits = digits_of(i, dims);
    int r = 0;
    int t = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k]) {
        r = r * dims[k] + digits[k];
      } else {
        t = t * dims[k] + digits[k];
      }
    }
    groups[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] = i;
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (const auto& g : groups) {
    for (int r = 0; r < kept_dim; ++r) {
      for (int c = 0; c < kept_dim; ++c) {
        out(r, c) += m(g[static_cast<std::size_t>(r)], g[static_cast<std::size_t>(c)]);
      }
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::initializer_list<int> keep) {
  return partial_trace(m, shape, std::span<const int>(keep.begin(), keep.size()));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const SubsystemShape& shape,
                                int party) {
  shape.check(m);
  if (party < 0 || party >= shape.parties()) {
    throw DimensionError("party index " + std::to_string(party) + " out of range");
  }
  const auto& dims = shape.dims();
  int stride = 1;
  for (std::size_t k = static_cast<std::size_t>(party) + 1; k < dims.size(); ++k) {
    stride *= dims[k];
  }
  const int d = dims[static_cast<std::size_t>(party)];
  const int n = shape.total();

  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const int di = (i / stride) % d;
    for (int j = 0; j < n; ++j) {
      const int dj = (j / stride) % d;
      const int ii = i + (dj - di) * stride;
      const int jj = j + (di - dj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const SubsystemShape& shape, int party) {
  if (party < 0 || party >= shape.parties()) {
    throw DimensionError("party index " + std::to_string(party) + " out of range");
  }
  if (op.rows() != shape.dim(party) || op.cols() != shape.dim(party)) {
    throw DimensionError("local operator does not match the party dimension");
  }
  int left = 1;
  int right = 1;
  for (int k = 0; k < shape.parties(); ++k) {
    if (k < party) left *= shape.dim(k);
    if (k > party) right *= shape.dim(k);
  }
  return tensor(tensor(identity(left), op), identity(right));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return sup_norm(m.adjoint() * m - identity(static_cast<int>(m.rows()))) <= tol;
}

Eigensystem eig_hermitian(const ComplexMatrix& m, const ToleranceProfile& tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("eig_hermitian needs a square matrix");
  }
  if (m.size() > 0) {
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol.hermitian) {
      throw NotHermitianError("matrix is not Hermitian (asymmetry " + std::to_string(asym) +
                              ")");
    }
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double sup_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  if (d < 1) {
    throw DimensionError("haar_unitary needs d >= 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

ComplexMatrix haar_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    throw DimensionError("unvec: vector length is not n^2");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace eplt
