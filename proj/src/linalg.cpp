#include "rbx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "rbx/rng.hpp"

namespace rbx {

namespace {

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatchError(std::string(what) + ": dimension mismatch (" +
                                 std::to_string(a) + " vs " +
                                 std::to_string(b) + ")");
  }
}

// Subtracts the projection of w onto each basis vector, in order.
void orthogonalize_against(Vector& w, const std::vector<Vector>& basis) {
  for (const Vector& b : basis) {
    double c = dot(w, b);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
  }
}

// Cyclic Jacobi eigendecomposition of a small symmetric matrix, eigenvalues
// descending. Used for subspace intersection where the full spectrum of a
// p x p cross-Gram operator is needed.
std::vector<std::pair<double, Vector>> jacobi_sym_eigen(std::size_t n,
                                                        std::vector<double> a) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
    if (off == 0.0) break;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      scale = std::max(scale, std::fabs(a[i * n + i]));
    if (off <= 1e-15 * std::max(1.0, scale)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (apq == 0.0) continue;
        double app = a[p * n + p];
        double aqq = a[q * n + q];
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p];
          double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k];
          double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k * n + p];
          double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::pair<double, Vector>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + i];
    pairs[i] = {a[i * n + i], std::move(col)};
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  return pairs;
}

constexpr std::uint64_t kPowerIterationSeed = 0x52425845494745ULL;

}  // namespace

// ---------------------------------------------------------------------------
// Dataset / Subspace / ResidualCovariance
// ---------------------------------------------------------------------------

Dataset::Dataset(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {
  if (ambient_dim_ == 0) throw Error("dataset: ambient dimension must be positive");
}

Dataset::Dataset(std::size_t ambient_dim, std::vector<ExperienceVector> items)
    : Dataset(ambient_dim) {
  for (auto& item : items) add(std::move(item.coords), item.weight);
}

void Dataset::add(Vector coords, double weight) {
  check_same_dim(coords.size(), ambient_dim_, "dataset item");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error("dataset item: weight must be positive, got " +
                std::to_string(weight));
  }
  items_.push_back({std::move(coords), weight});
}

double Dataset::total_weight() const {
  double total = 0.0;
  for (const auto& item : items_) total += item.weight;
  return total;
}

Dataset Dataset::merged(const Dataset& a, const Dataset& b) {
  check_same_dim(a.ambient_dim(), b.ambient_dim(), "dataset merge");
  Dataset out(a.ambient_dim());
  for (const auto& item : a.items()) out.add(item.coords, item.weight);
  for (const auto& item : b.items()) out.add(item.coords, item.weight);
  return out;
}

Subspace::Subspace(std::size_t ambient_dim, std::vector<Vector> basis,
                   double tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), tol_(tol) {
  if (ambient_dim_ == 0) throw Error("subspace: ambient dimension must be positive");
  if (tol_ < 0.0) throw Error("subspace: tolerance must be nonnegative");
  if (basis_.size() > ambient_dim_) {
    throw Error("subspace: basis larger than ambient dimension");
  }
  for (const Vector& b : basis_) {
    check_same_dim(b.size(), ambient_dim_, "subspace basis vector");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = i; j < basis_.size(); ++j) {
      double expected = (i == j) ? 1.0 : 0.0;
      if (std::fabs(dot(basis_[i], basis_[j]) - expected) > tol_) {
        throw Error("subspace: basis is not orthonormal at tolerance " +
                    std::to_string(tol_));
      }
    }
  }
}

Subspace Subspace::zero(std::size_t ambient_dim, double tol) {
  return Subspace(ambient_dim, {}, tol);
}

Subspace Subspace::standard(std::size_t ambient_dim, std::size_t k, double tol) {
  if (k > ambient_dim) throw Error("subspace: k exceeds ambient dimension");
  std::vector<Vector> basis(k, Vector(ambient_dim, 0.0));
  for (std::size_t i = 0; i < k; ++i) basis[i][i] = 1.0;
  return Subspace(ambient_dim, std::move(basis), tol);
}

ResidualCovariance::ResidualCovariance(std::size_t ambient_dim,
                                       std::vector<double> matrix)
    : ambient_dim_(ambient_dim), matrix_(std::move(matrix)) {
  if (ambient_dim_ == 0) {
    throw Error("covariance: ambient dimension must be positive");
  }
  if (matrix_.size() != ambient_dim_ * ambient_dim_) {
    throw DimensionMismatchError("covariance: matrix size does not match n*n");
  }
  for (std::size_t i = 0; i < ambient_dim_; ++i) {
    for (std::size_t j = i + 1; j < ambient_dim_; ++j) {
      double diff = std::fabs(at(i, j) - at(j, i));
      double mag = std::max({1.0, std::fabs(at(i, j)), std::fabs(at(j, i))});
      if (diff > 1e-12 * mag) {
        throw Error("covariance: matrix is not symmetric");
      }
    }
  }
}

double ResidualCovariance::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < ambient_dim_; ++i) t += at(i, i);
  return t;
}

double ResidualCovariance::max_abs_entry() const {
  double m = 0.0;
  for (double x : matrix_) m = std::max(m, std::fabs(x));
  return m;
}

Vector ResidualCovariance::apply(const Vector& v) const {
  check_same_dim(v.size(), ambient_dim_, "covariance apply");
  Vector out(ambient_dim_, 0.0);
  for (std::size_t i = 0; i < ambient_dim_; ++i) {
    double acc = 0.0;
    const double* row = matrix_.data() + i * ambient_dim_;
    for (std::size_t j = 0; j < ambient_dim_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

double dot(const Vector& a, const Vector& b) {
  check_same_dim(a.size(), b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

void canonicalize_sign(Vector& v, double tol) {
  for (double x : v) {
    if (std::fabs(x) > tol) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Orthonormalization, projection, residuals
// ---------------------------------------------------------------------------

Subspace orthonormalize(std::size_t ambient_dim,
                        const std::vector<Vector>& vectors, double tol) {
  if (!(tol > 0.0)) throw Error("orthonormalize: tolerance must be positive");
  std::vector<Vector> basis;
  for (const Vector& v : vectors) {
    check_same_dim(v.size(), ambient_dim, "orthonormalize input");
    Vector w = v;
    orthogonalize_against(w, basis);
    orthogonalize_against(w, basis);  // re-orthogonalization pass
    double len = norm(w);
    if (len > tol) {
      for (double& x : w) x /= len;
      basis.push_back(std::move(w));
    }
  }
  return Subspace(ambient_dim, std::move(basis), tol);
}

Subspace orthonormalize(const std::vector<Vector>& vectors, double tol) {
  if (vectors.empty()) {
    throw Error(
        "orthonormalize: cannot infer ambient dimension from an empty list; "
        "use the overload taking the dimension");
  }
  return orthonormalize(vectors.front().size(), vectors, tol);
}

Vector project(const Subspace& s, const Vector& v) {
  check_same_dim(v.size(), s.ambient_dim(), "project");
  Vector out(s.ambient_dim(), 0.0);
  for (const Vector& b : s.basis()) {
    double c = dot(v, b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * b[i];
  }
  return out;
}

Vector residual(const Subspace& s, const Vector& v) {
  check_same_dim(v.size(), s.ambient_dim(), "residual");
  Vector r = v;
  orthogonalize_against(r, s.basis());
  return r;
}

Subspace residual_span(const Subspace& s, const Dataset& d, double tol) {
  check_same_dim(s.ambient_dim(), d.ambient_dim(), "residual_span");
  std::vector<Vector> residuals;
  residuals.reserve(d.size());
  for (const auto& item : d.items()) residuals.push_back(residual(s, item.coords));
  return orthonormalize(s.ambient_dim(), residuals, tol);
}

Subspace complement(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  double tol = s.tol() > 0.0 ? s.tol() : kDefaultTol;
  std::vector<Vector> basis = s.basis();
  std::vector<Vector> added;
  for (std::size_t i = 0; i < n; ++i) {
    Vector w(n, 0.0);
    w[i] = 1.0;
    orthogonalize_against(w, basis);
    orthogonalize_against(w, basis);
    double len = norm(w);
    if (len > tol) {
      for (double& x : w) x /= len;
      basis.push_back(w);
      added.push_back(std::move(w));
    }
  }
  return Subspace(n, std::move(added), tol);
}

IntersectionResult intersect(const Subspace& u, const Subspace& w, double tol) {
  check_same_dim(u.ambient_dim(), w.ambient_dim(), "intersect");
  if (!(tol > 0.0)) throw Error("intersect: tolerance must be positive");
  const std::size_t p = u.dim();
  if (p == 0) {
    return {Subspace::zero(u.ambient_dim(), tol), true};
  }

  // M = (B_u^T B_w)(B_w^T B_u); eigenvalues are squared principal cosines.
  std::vector<double> cross(p * w.dim(), 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < w.dim(); ++k)
      cross[i * w.dim() + k] = dot(u.basis()[i], w.basis()[k]);
  std::vector<double> m(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w.dim(); ++k)
        acc += cross[i * w.dim() + k] * cross[j * w.dim() + k];
      m[i * p + j] = acc;
      m[j * p + i] = acc;
    }
  }

  auto pairs = jacobi_sym_eigen(p, std::move(m));
  std::vector<Vector> meet;
  std::size_t in_w = 0;
  std::size_t in_w_perp = 0;
  for (const auto& [value, coeffs] : pairs) {
    double mu = std::clamp(value, 0.0, 1.0);
    if (mu >= 1.0 - tol) {
      ++in_w;
      Vector x(u.ambient_dim(), 0.0);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 0; k < x.size(); ++k)
          x[k] += coeffs[i] * u.basis()[i][k];
      canonicalize_sign(x, tol);
      meet.push_back(std::move(x));
    } else if (mu <= tol) {
      ++in_w_perp;
    }
  }
  bool reducible = (in_w + in_w_perp == p);
  return {Subspace(u.ambient_dim(), std::move(meet), tol), reducible};
}

bool contains(const Subspace& outer, const Subspace& inner, double tol) {
  check_same_dim(outer.ambient_dim(), inner.ambient_dim(), "contains");
  for (const Vector& b : inner.basis()) {
    if (norm(residual(outer, b)) > tol) return false;
  }
  return true;
}

Subspace extend_basis(const Subspace& s, const Vector& v) {
  check_same_dim(v.size(), s.ambient_dim(), "extend_basis");
  Vector w = v;
  orthogonalize_against(w, s.basis());
  orthogonalize_against(w, s.basis());
  double len = norm(w);
  double tol = s.tol() > 0.0 ? s.tol() : kDefaultTol;
  if (len <= tol) {
    throw Error("extend_basis: direction already lies in the subspace");
  }
  for (double& x : w) x /= len;
  std::vector<Vector> basis = s.basis();
  basis.push_back(std::move(w));
  return Subspace(s.ambient_dim(), std::move(basis), tol);
}

Subspace direct_sum(const Subspace& a, const Subspace& b) {
  check_same_dim(a.ambient_dim(), b.ambient_dim(), "direct_sum");
  double tol = a.tol() > 0.0 ? a.tol() : kDefaultTol;
  std::vector<Vector> all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  Subspace out = orthonormalize(a.ambient_dim(), all, tol);
  if (out.dim() != a.dim() + b.dim()) {
    throw Error("direct_sum: subspaces overlap, sum is not direct");
  }
  return out;
}

ResidualCovariance residual_covariance(const Subspace& s, const Dataset& d) {
  check_same_dim(s.ambient_dim(), d.ambient_dim(), "residual_covariance");
  const std::size_t n = s.ambient_dim();
  std::vector<double> m(n * n, 0.0);
  for (const auto& item : d.items()) {
    Vector r = residual(s, item.coords);
    for (std::size_t i = 0; i < n; ++i) {
      double wi = item.weight * r[i];
      for (std::size_t j = i; j < n; ++j) m[i * n + j] += wi * r[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m[i * n + j] = m[j * n + i];
  return ResidualCovariance(n, std::move(m));
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

EigenPair top_eigenpair(const ResidualCovariance& m, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error("top_eigenpair: tolerance must be positive");
  if (max_iter < 1) throw Error("top_eigenpair: max_iter must be >= 1");
  const std::size_t n = m.ambient_dim();

  if (m.max_abs_entry() <= tol) {
    return EigenPair{0.0, {}, false, 0};
  }

  Rng rng(kPowerIterationSeed);
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (double& x : v) x += 1e-3 * rng.uniform(-1.0, 1.0);
  double len = norm(v);
  for (double& x : v) x /= len;

  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector w = m.apply(v);
    lambda = dot(v, w);
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = w[i] - lambda * v[i];
      resid += r * r;
    }
    resid = std::sqrt(resid);
    if (resid <= tol * std::max(1.0, lambda)) {
      canonicalize_sign(v, tol);
      return EigenPair{lambda, std::move(v), true, it};
    }
    double wlen = norm(w);
    if (wlen <= 1e-300) {
      // Iterate fell into the kernel; restart from a fresh seeded draw.
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      double vlen = norm(v);
      for (double& x : v) x /= vlen;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wlen;
  }
  throw ConvergenceError("top_eigenpair: power iteration did not converge in " +
                             std::to_string(max_iter) + " iterations",
                         v, lambda);
}

std::vector<EigenPair> eigen_spectrum(const ResidualCovariance& m, double tol,
                                      int max_iter, std::size_t max_pairs) {
  std::vector<EigenPair> out;
  const std::size_t n = m.ambient_dim();
  std::vector<double> work = m.data();
  double top = 0.0;
  while (out.size() < std::min(max_pairs, n)) {
    EigenPair pair = top_eigenpair(ResidualCovariance(n, work), tol, max_iter);
    if (!pair.has_direction) break;
    if (out.empty()) {
      top = pair.value;
    } else if (pair.value <= tol * std::max(1.0, top)) {
      break;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        work[i * n + j] -= pair.value * pair.vector[i] * pair.vector[j];
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace rbx
