#ifndef RBX_LINALG_HPP
#define RBX_LINALG_HPP

#include <cstddef>
#include <vector>

#include "rbx/types.hpp"

namespace rbx {

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);

// Flips the sign of v so that its first coordinate with |value| > tol is
// positive. Vectors with no such coordinate are left untouched.
void canonicalize_sign(Vector& v, double tol);

// Orthonormal basis of span(vectors) via modified Gram-Schmidt with one
// re-orthogonalization pass. A vector is dropped when its component
// orthogonal to the previously accepted basis has norm <= tol.
Subspace orthonormalize(std::size_t ambient_dim,
                        const std::vector<Vector>& vectors, double tol);
// Convenience overload; the input must be nonempty so the ambient dimension
// can be inferred.
Subspace orthonormalize(const std::vector<Vector>& vectors, double tol);

// Orthogonal projection of v onto S.
Vector project(const Subspace& s, const Vector& v);

// v - project(S, v)
Vector residual(const Subspace& s, const Vector& v);

// span{ residual(S, u) : u in D } at tolerance tol.
Subspace residual_span(const Subspace& s, const Dataset& d, double tol);

// Orthonormal basis of the orthogonal complement; dim = n - dim(S).
Subspace complement(const Subspace& s);

struct IntersectionResult {
  Subspace meet;    // orthonormal basis of U ∩ W
  bool reducible;   // dim(U∩W) + dim(U∩W⊥) == dim(U)
};

// Intersection of two subspaces. Principal cosines are computed from the
// cross-Gram operator restricted to U; tol classifies squared cosines as
// 1 (inside W), 0 (inside W⊥) or neither.
IntersectionResult intersect(const Subspace& u, const Subspace& w, double tol);

// true iff every basis vector of `inner` lies in `outer` within tol.
bool contains(const Subspace& outer, const Subspace& inner, double tol);

// S ⊕ span{v}: appends the normalized component of v orthogonal to S.
// Throws if that component has norm <= S.tol().
Subspace extend_basis(const Subspace& s, const Vector& v);

// Orthogonal direct sum; throws if the summands overlap at tolerance a.tol().
Subspace direct_sum(const Subspace& a, const Subspace& b);

// sum_u weight(u) r_S(u) r_S(u)^T
ResidualCovariance residual_covariance(const Subspace& s, const Dataset& d);

// Largest eigenpair of a symmetric PSD matrix by power iteration. Converges
// when ||M v - lambda v|| <= tol * max(1, lambda); the start vector is the
// normalized all-ones vector plus a small fixed-seed pseudorandom
// perturbation. The returned eigenvector follows the sign convention of
// canonicalize_sign. A numerically zero matrix (all entries <= tol in
// magnitude) yields eigenvalue 0 with has_direction == false.
EigenPair top_eigenpair(const ResidualCovariance& m, double tol, int max_iter);

constexpr int kEigenMaxIter = 5'000'000;

// Eigenvalues/vectors extracted by repeated power iteration with deflation,
// largest first. Stops after max_pairs, when the deflated matrix is
// numerically zero, or when the next value drops below tol * max(1, top).
std::vector<EigenPair> eigen_spectrum(const ResidualCovariance& m, double tol,
                                      int max_iter, std::size_t max_pairs);

}  // namespace rbx

#endif  // RBX_LINALG_HPP
