#ifndef RBX_TYPES_HPP
#define RBX_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbx {

using Vector = std::vector<double>;

constexpr double kDefaultTol = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Raised when a proposed extension does not contain the base subspace.
class InvalidExtensionError : public Error {
 public:
  using Error::Error;
};

// Raised when the residual span is zero and no novelty direction exists.
class NoResidualError : public Error {
 public:
  using Error::Error;
};

// Raised when a novelty subspace fails the W-reducibility condition.
class ReducibilityError : public Error {
 public:
  using Error::Error;
};

class InvalidDirectionError : public Error {
 public:
  using Error::Error;
};

// Power iteration ran out of iterations; carries the last iterate so the
// caller can inspect how far it got.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Vector last_iterate,
                   double last_estimate)
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        last_estimate_(last_estimate) {}

  const Vector& last_iterate() const { return last_iterate_; }
  double last_estimate() const { return last_estimate_; }

 private:
  Vector last_iterate_;
  double last_estimate_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Core data types
// ---------------------------------------------------------------------------

// One element of the ambient space with a positive multiset multiplicity.
struct ExperienceVector {
  Vector coords;
  double weight = 1.0;
};

// Weighted finite multiset of experience vectors in a fixed ambient dimension.
class Dataset {
 public:
  explicit Dataset(std::size_t ambient_dim);
  Dataset(std::size_t ambient_dim, std::vector<ExperienceVector> items);

  void add(Vector coords, double weight = 1.0);

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<ExperienceVector>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  double total_weight() const;

  // Multiset union; items of `a` precede items of `b`.
  static Dataset merged(const Dataset& a, const Dataset& b);

 private:
  std::size_t ambient_dim_;
  std::vector<ExperienceVector> items_;
};

// Ordered orthonormal basis spanning a subspace of R^n. The zero subspace is
// an empty basis. `tol` is the orthonormality tolerance used at construction
// and the default tolerance for operations that take no explicit one.
class Subspace {
 public:
  Subspace(std::size_t ambient_dim, std::vector<Vector> basis,
           double tol = kDefaultTol);

  static Subspace zero(std::size_t ambient_dim, double tol = kDefaultTol);
  // span{e_1, ..., e_k} inside R^n
  static Subspace standard(std::size_t ambient_dim, std::size_t k,
                           double tol = kDefaultTol);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  double tol() const { return tol_; }

 private:
  std::size_t ambient_dim_;
  std::vector<Vector> basis_;
  double tol_;
};

// Symmetric PSD matrix sum_u weight(u) r(u) r(u)^T of dataset residuals.
class ResidualCovariance {
 public:
  // `matrix` is dense row-major, length n*n, symmetric.
  ResidualCovariance(std::size_t ambient_dim, std::vector<double> matrix);

  std::size_t ambient_dim() const { return ambient_dim_; }
  double at(std::size_t i, std::size_t j) const {
    return matrix_[i * ambient_dim_ + j];
  }
  const std::vector<double>& data() const { return matrix_; }
  double trace() const;
  double max_abs_entry() const;
  Vector apply(const Vector& v) const;  // matrix-vector product

 private:
  std::size_t ambient_dim_;
  std::vector<double> matrix_;
};

// Result of a symmetric eigensolve. `has_direction` is false when the input
// matrix is numerically zero and no meaningful direction exists.
struct EigenPair {
  double value = 0.0;
  Vector vector;
  bool has_direction = false;
  int iterations = 0;
};

}  // namespace rbx

#endif  // RBX_TYPES_HPP
