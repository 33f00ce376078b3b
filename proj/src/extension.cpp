#include "rbx/extension.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "rbx/linalg.hpp"

namespace rbx {

namespace {

struct CanonicalInfo {
  bool exists = false;
  Vector direction;
  double eigenvalue = 0.0;
  double gap = 0.0;
};

CanonicalInfo compute_canonical(const Subspace& c, const Dataset& d,
                                const MdlConfig& cfg) {
  if (c.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("canonical_direction: dimensions differ");
  }
  Subspace w = residual_span(c, d, cfg.tol());
  if (w.dim() == 0) return {};

  ResidualCovariance sigma = residual_covariance(c, d);
  EigenPair top = top_eigenpair(sigma, cfg.tol(), kEigenMaxIter);
  if (!top.has_direction) return {};

  // Deflate once to expose the runner-up eigenvalue; the gap tells callers
  // whether the top direction was unique.
  const std::size_t n = c.ambient_dim();
  std::vector<double> deflated = sigma.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      deflated[i * n + j] -= top.value * top.vector[i] * top.vector[j];
  double second = 0.0;
  EigenPair runner_up =
      top_eigenpair(ResidualCovariance(n, std::move(deflated)), cfg.tol(),
                    kEigenMaxIter);
  if (runner_up.has_direction) second = std::max(0.0, runner_up.value);

  return {true, std::move(top.vector), top.value,
          std::max(0.0, top.value - second)};
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::rejected:
      return "rejected";
    case StopReason::rank_bound:
      return "rank_bound";
    case StopReason::exhausted_residuals:
      return "exhausted_residuals";
  }
  return "unknown";
}

std::size_t ExtensionTrace::accepted_steps() const {
  std::size_t count = 0;
  for (const auto& step : steps) {
    if (step.accepted) ++count;
  }
  return count;
}

CanonicalDirection canonical_direction(const Subspace& c, const Dataset& d,
                                       const MdlConfig& cfg) {
  CanonicalInfo info = compute_canonical(c, d, cfg);
  if (!info.exists) {
    throw NoResidualError(
        "canonical_direction: the dataset has no residual component outside "
        "the subspace");
  }
  return {std::move(info.direction), info.eigenvalue};
}

ExtensionProposal propose_one_dim(const Subspace& c, const Dataset& d,
                                  const MdlConfig& cfg) {
  CanonicalInfo info = compute_canonical(c, d, cfg);
  ExtensionProposal p;
  if (!info.exists) {
    double dl = description_length(c, d, cfg);
    p.dl_before = dl;
    p.dl_after = dl;
    return p;  // rejected, zero gain, no direction
  }
  Subspace c_prime = extend_basis(c, info.direction);
  p.direction = std::move(info.direction);
  p.eigenvalue = info.eigenvalue;
  p.eigen_gap = info.gap;
  p.gain = gain(c, c_prime, d, cfg);
  p.dl_before = description_length(c, d, cfg);
  p.dl_after = description_length(c_prime, d, cfg);
  p.accepted = p.dl_after < p.dl_before;  // same strict rule as is_accepted
  return p;
}

ExtensionTrace extend_greedy(const Subspace& c, const Dataset& d,
                             const MdlConfig& cfg) {
  if (c.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("extend_greedy: dimensions differ");
  }
  std::vector<ExtensionProposal> steps;
  Subspace space = c;
  std::size_t accepted = 0;
  StopReason reason = StopReason::exhausted_residuals;
  for (;;) {
    if (accepted >= static_cast<std::size_t>(cfg.rank_bound())) {
      reason = StopReason::rank_bound;
      break;
    }
    ExtensionProposal p = propose_one_dim(space, d, cfg);
    if (!p.has_direction()) {
      reason = StopReason::exhausted_residuals;
      break;
    }
    bool take = p.accepted;
    Vector direction = p.direction;
    steps.push_back(std::move(p));
    if (!take) {
      reason = StopReason::rejected;
      break;
    }
    space = extend_basis(space, direction);
    ++accepted;
  }
  return ExtensionTrace{std::move(steps), std::move(space), reason};
}

StrippedExtension strip_to_residual_support(const Subspace& c,
                                            const Subspace& u, const Dataset& d,
                                            const MdlConfig& cfg) {
  if (c.ambient_dim() != u.ambient_dim() ||
      c.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("strip_to_residual_support: dimensions differ");
  }
  for (const Vector& b : u.basis()) {
    if (norm(project(c, b)) > cfg.tol()) {
      throw InvalidExtensionError(
          "strip_to_residual_support: novelty subspace is not orthogonal to "
          "the base subspace");
    }
  }
  Subspace w = residual_span(c, d, cfg.tol());
  IntersectionResult inter = intersect(u, w, cfg.tol());
  if (!inter.reducible) {
    throw ReducibilityError(
        "strip_to_residual_support: novelty subspace is not reducible with "
        "respect to the residual span");
  }
  Subspace original = direct_sum(c, u);
  Subspace stripped = direct_sum(c, inter.meet);
  double dl_original = description_length(original, d, cfg);
  double dl_stripped = description_length(stripped, d, cfg);
  return {std::move(stripped), dl_original, dl_stripped};
}

std::size_t novelty_rank(const Subspace& c, const Subspace& c_prime) {
  if (c.ambient_dim() != c_prime.ambient_dim()) {
    throw DimensionMismatchError("novelty_rank: ambient dimensions differ");
  }
  double tol = std::max(c.tol(), c_prime.tol());
  if (tol <= 0.0) tol = kDefaultTol;
  if (!contains(c_prime, c, tol)) {
    throw InvalidExtensionError("novelty_rank: C is not contained in C'");
  }
  // Rank of the projection difference, measured on its columns rather than
  // inferred from basis counts.
  const std::size_t n = c.ambient_dim();
  std::vector<double> delta(n * n, 0.0);
  for (const Vector& b : c_prime.basis()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) delta[i * n + j] += b[i] * b[j];
  }
  for (const Vector& b : c.basis()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) delta[i * n + j] -= b[i] * b[j];
  }
  std::vector<Vector> columns(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) columns[j][i] = delta[i * n + j];
  return orthonormalize(n, columns, tol).dim();
}

void validate_admissible(const Subspace& c, const Subspace& u, const Dataset& d,
                         const MdlConfig& cfg) {
  if (c.ambient_dim() != u.ambient_dim() ||
      c.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("validate_admissible: dimensions differ");
  }
  for (const Vector& b : u.basis()) {
    if (norm(project(c, b)) > cfg.tol()) {
      throw InvalidExtensionError(
          "admissible extension: novelty must be orthogonal to the base "
          "subspace");
    }
  }
  if (u.dim() > static_cast<std::size_t>(cfg.rank_bound())) {
    throw InvalidExtensionError(
        "admissible extension: novelty rank " + std::to_string(u.dim()) +
        " exceeds the bound " + std::to_string(cfg.rank_bound()));
  }
  Subspace w = residual_span(c, d, cfg.tol());
  if (!intersect(u, w, cfg.tol()).reducible) {
    throw ReducibilityError(
        "admissible extension: novelty subspace is not reducible with respect "
        "to the residual span");
  }
}

}  // namespace rbx
