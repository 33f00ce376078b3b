#ifndef RBX_EXTENSION_HPP
#define RBX_EXTENSION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "rbx/mdl.hpp"
#include "rbx/types.hpp"

namespace rbx {

// One-dimensional extension candidate. `direction` is empty (and
// has_direction() false) when the residual span is zero and nothing can be
// proposed; such proposals are rejected with zero gain.
struct ExtensionProposal {
  Vector direction;
  double gain = 0.0;
  double dl_before = 0.0;
  double dl_after = 0.0;
  bool accepted = false;
  double eigenvalue = 0.0;
  // Gap to the second residual-covariance eigenvalue at proposal time;
  // near-zero gap means the chosen direction is one of several equally good.
  double eigen_gap = 0.0;

  bool has_direction() const { return !direction.empty(); }
};

enum class StopReason { rejected, rank_bound, exhausted_residuals };
const char* to_string(StopReason reason);

struct ExtensionTrace {
  std::vector<ExtensionProposal> steps;
  Subspace final_space;
  StopReason stop_reason;

  std::size_t accepted_steps() const;
};

struct CanonicalDirection {
  Vector direction;   // unit, sign-conventioned, inside the residual span
  double eigenvalue;  // equals the identity-loss gain of extending by it
};

// Top eigenvector of the residual covariance. Throws NoResidualError when the
// residual span is zero (nothing outside C to explain).
CanonicalDirection canonical_direction(const Subspace& c, const Dataset& d,
                                       const MdlConfig& cfg);

// Builds the canonical one-dimensional extension proposal and evaluates it
// under cfg. Degenerate inputs produce rejected proposals, not failures.
ExtensionProposal propose_one_dim(const Subspace& c, const Dataset& d,
                                  const MdlConfig& cfg);

// Greedy growth: repeatedly accept the canonical one-dimensional extension of
// the current space until a proposal is rejected, the novelty-rank bound is
// reached, or the residuals are exhausted. A trailing rejected proposal is
// recorded; degenerate (directionless) ones are not.
ExtensionTrace extend_greedy(const Subspace& c, const Dataset& d,
                             const MdlConfig& cfg);

struct StrippedExtension {
  Subspace stripped;   // C ⊕ (U ∩ W)
  double dl_original;  // L(C ⊕ U; D)
  double dl_stripped;  // L(C ⊕ (U ∩ W); D), never larger than dl_original
};

// Drops the part of a novelty subspace U that is orthogonal to the residual
// span. U must lie in C's complement and be W-reducible; non-reducible U
// raises ReducibilityError since the dominance argument does not apply.
StrippedExtension strip_to_residual_support(const Subspace& c,
                                            const Subspace& u, const Dataset& d,
                                            const MdlConfig& cfg);

// rank(P_C' - P_C) computed at the subspaces' tolerance; equals
// dim(C') - dim(C) for orthogonal extensions. Requires C ⊆ C'.
std::size_t novelty_rank(const Subspace& c, const Subspace& c_prime);

// Admissibility guard: U ⊆ C⊥, dim(U) <= cfg.rank_bound(), and U reducible
// with respect to the residual span of (C, D). Throws on violation.
void validate_admissible(const Subspace& c, const Subspace& u, const Dataset& d,
                         const MdlConfig& cfg);

}  // namespace rbx

#endif  // RBX_EXTENSION_HPP
