#ifndef RBX_IMAGINATION_HPP
#define RBX_IMAGINATION_HPP

#include <string>
#include <vector>

#include "rbx/extension.hpp"
#include "rbx/mdl.hpp"
#include "rbx/types.hpp"

namespace rbx {

// Internally generated experience, kept apart from external data.
struct SimulationBatch {
  Dataset items;
  std::string provenance;
};

enum class Mechanism { enrichment, amplification, both, inert };
const char* to_string(Mechanism m);

struct MechanismReport {
  std::size_t dim_w_ext = 0;
  std::size_t dim_w_all = 0;
  bool enrichment = false;  // residual span grew
  // Orthonormal basis of the complement of W_ext inside W_all.
  std::vector<Vector> new_directions;
  // Acceptance flipped without span growth.
  bool amplification = false;
  ExtensionProposal proposal_ext;
  ExtensionProposal proposal_all;
  Mechanism classification = Mechanism::inert;
};

// Compares residual spans and canonical proposals with and without the
// simulated batch and labels the batch's effect.
MechanismReport classify_simulation(const Subspace& c, const Dataset& d_ext,
                                    const SimulationBatch& d_sim,
                                    const MdlConfig& cfg);

struct GainDecomposition {
  double g_ext;
  double g_sim;
  double g_all;  // equals g_ext + g_sim up to rounding
};

GainDecomposition gain_decomposition(const Subspace& c, const Subspace& c_prime,
                                     const Dataset& d_ext,
                                     const SimulationBatch& d_sim,
                                     const MdlConfig& cfg);

// Builds a simulated batch that re-weights copies of the external items whose
// residuals align with `direction`, multiplying the aggregate squared
// alignment along it by (1 + factor). The direction must already lie in the
// external residual span; amplification cannot create new directions.
// factor == 0 yields an empty batch. Tolerances come from c.tol().
SimulationBatch amplify(const Subspace& c, const Dataset& d_ext,
                        const Vector& direction, double factor);

}  // namespace rbx

#endif  // RBX_IMAGINATION_HPP
