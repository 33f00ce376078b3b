#include "rbx/imagination.hpp"

#include <cmath>
#include <utility>

#include "rbx/linalg.hpp"

namespace rbx {

const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::enrichment:
      return "enrichment";
    case Mechanism::amplification:
      return "amplification";
    case Mechanism::both:
      return "both";
    case Mechanism::inert:
      return "inert";
  }
  return "unknown";
}

MechanismReport classify_simulation(const Subspace& c, const Dataset& d_ext,
                                    const SimulationBatch& d_sim,
                                    const MdlConfig& cfg) {
  if (c.ambient_dim() != d_ext.ambient_dim() ||
      c.ambient_dim() != d_sim.items.ambient_dim()) {
    throw DimensionMismatchError("classify_simulation: dimensions differ");
  }
  Dataset d_all = Dataset::merged(d_ext, d_sim.items);

  MechanismReport report;
  Subspace w_ext = residual_span(c, d_ext, cfg.tol());
  Subspace w_all = residual_span(c, d_all, cfg.tol());
  report.dim_w_ext = w_ext.dim();
  report.dim_w_all = w_all.dim();
  report.enrichment = report.dim_w_all > report.dim_w_ext;

  // Complement of W_ext inside W_all.
  std::vector<Vector> enriched;
  for (const Vector& b : w_all.basis()) enriched.push_back(residual(w_ext, b));
  report.new_directions =
      orthonormalize(c.ambient_dim(), enriched, cfg.tol()).basis();

  report.proposal_ext = propose_one_dim(c, d_ext, cfg);
  report.proposal_all = propose_one_dim(c, d_all, cfg);

  bool flipped = !report.proposal_ext.accepted && report.proposal_all.accepted;
  report.amplification = flipped && report.dim_w_all == report.dim_w_ext;

  if (report.enrichment && flipped) {
    report.classification = Mechanism::both;
  } else if (report.enrichment) {
    report.classification = Mechanism::enrichment;
  } else if (report.amplification) {
    report.classification = Mechanism::amplification;
  } else {
    report.classification = Mechanism::inert;
  }
  return report;
}

GainDecomposition gain_decomposition(const Subspace& c, const Subspace& c_prime,
                                     const Dataset& d_ext,
                                     const SimulationBatch& d_sim,
                                     const MdlConfig& cfg) {
  Dataset d_all = Dataset::merged(d_ext, d_sim.items);
  double g_ext = gain(c, c_prime, d_ext, cfg);
  double g_sim = gain(c, c_prime, d_sim.items, cfg);
  double g_all = gain(c, c_prime, d_all, cfg);
  return {g_ext, g_sim, g_all};
}

SimulationBatch amplify(const Subspace& c, const Dataset& d_ext,
                        const Vector& direction, double factor) {
  if (c.ambient_dim() != d_ext.ambient_dim()) {
    throw DimensionMismatchError("amplify: dimensions differ");
  }
  if (direction.size() != c.ambient_dim()) {
    throw DimensionMismatchError("amplify: direction has wrong dimension");
  }
  double tol = c.tol() > 0.0 ? c.tol() : kDefaultTol;
  if (std::fabs(norm(direction) - 1.0) > std::max(tol, 1e-9)) {
    throw InvalidDirectionError("amplify: direction must be a unit vector");
  }
  if (factor < 0.0) throw Error("amplify: factor must be nonnegative");

  Subspace w_ext = residual_span(c, d_ext, tol);
  if (norm(residual(w_ext, direction)) > tol) {
    throw InvalidDirectionError(
        "amplify: direction lies outside the external residual span; "
        "amplification cannot create new directions");
  }

  Dataset items(c.ambient_dim());
  if (factor > 0.0) {
    for (const auto& item : d_ext.items()) {
      double alignment = dot(residual(c, item.coords), direction);
      if (std::fabs(alignment) > tol) {
        items.add(item.coords, factor * item.weight);
      }
    }
  }
  return SimulationBatch{std::move(items),
                         "amplified external residual structure"};
}

}  // namespace rbx
