#include "rbx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

#include "rbx/extension.hpp"
#include "rbx/imagination.hpp"
#include "rbx/linalg.hpp"
#include "rbx/mdl.hpp"
#include "rbx/rng.hpp"

namespace rbx::verify {

namespace {

// Salts separating the per-check draw streams from the instance stream.
constexpr std::uint64_t kSaltLowRank = 0xA11CE5ULL;
constexpr std::uint64_t kSaltReducible = 0xB0B5ULL;
constexpr std::uint64_t kSaltOrthogonal = 0xCAFEULL;
constexpr std::uint64_t kSaltThreshold = 0xD1CEULL;
constexpr std::uint64_t kSaltSignatures = 0xFACEULL;

std::uint64_t fnv1a_bytes(std::uint64_t h, const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t x) {
  return fnv1a_bytes(h, &x, sizeof(x));
}

std::uint64_t fnv1a_double(std::uint64_t h, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  return fnv1a_u64(h, bits);
}

std::string hex16(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[x & 0xF];
    x >>= 4;
  }
  return out;
}

Vector gaussian_vector(Rng& rng, std::size_t n, double magnitude) {
  Vector v(n);
  for (double& x : v) x = magnitude * rng.normal();
  return v;
}

// Random dim-dimensional subspace of R^n.
Subspace random_subspace(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<Vector> vecs;
  while (true) {
    vecs.clear();
    for (std::size_t i = 0; i < dim; ++i)
      vecs.push_back(gaussian_vector(rng, n, 1.0));
    Subspace s = orthonormalize(n, vecs, 1e-12);
    if (s.dim() == dim) return s;
  }
}

// Random subspace of the span of `space`, drawn as Gaussian combinations of
// its basis.
Subspace random_subspace_within(Rng& rng, const Subspace& space,
                                std::size_t dim) {
  const std::size_t n = space.ambient_dim();
  if (dim == 0) return Subspace::zero(n, 1e-12);
  while (true) {
    std::vector<Vector> vecs;
    for (std::size_t i = 0; i < dim; ++i) {
      Vector v(n, 0.0);
      for (const Vector& b : space.basis()) {
        double c = rng.normal();
        for (std::size_t k = 0; k < n; ++k) v[k] += c * b[k];
      }
      vecs.push_back(std::move(v));
    }
    Subspace s = orthonormalize(n, vecs, 1e-12);
    if (s.dim() == dim) return s;
  }
}

Vector random_unit_within(Rng& rng, const Subspace& space) {
  const std::size_t n = space.ambient_dim();
  while (true) {
    Vector v(n, 0.0);
    for (const Vector& b : space.basis()) {
      double c = rng.normal();
      for (std::size_t k = 0; k < n; ++k) v[k] += c * b[k];
    }
    double len = norm(v);
    if (len > 1e-6) {
      for (double& x : v) x /= len;
      return v;
    }
  }
}

// Dataset of points inside `space`; residuals against it vanish.
Dataset dataset_inside(Rng& rng, const Subspace& space, std::size_t count,
                       const InstanceGenerator& gen) {
  Dataset d(space.ambient_dim());
  for (std::size_t i = 0; i < count; ++i) {
    Vector v(space.ambient_dim(), 0.0);
    for (const Vector& b : space.basis()) {
      double c = gen.magnitude * rng.normal();
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += c * b[k];
    }
    d.add(std::move(v), rng.uniform(gen.weight.lo, gen.weight.hi));
  }
  return d;
}

double length_scale(const Dataset& d) {
  double s = 1.0;
  for (const auto& item : d.items()) s = std::max(s, norm(item.coords));
  return s;
}

double residual_energy(const Subspace& c, const Dataset& d) {
  double total = 0.0;
  for (const auto& item : d.items()) {
    Vector r = residual(c, item.coords);
    total += item.weight * dot(r, r);
  }
  return total;
}

void record(CheckReport& report, const Instance& inst, const char* label,
            double observed, double bound) {
  report.max_deviation = std::max(report.max_deviation, observed);
  if (observed > bound) {
    std::string digest = inst.digest;
    if (label != nullptr && label[0] != '\0') {
      digest += "/";
      digest += label;
    }
    report.failures.push_back({inst.seed, digest, observed, bound});
  }
}

void record_flag(CheckReport& report, const Instance& inst, const char* label,
                 bool ok) {
  if (!ok) {
    std::string digest = inst.digest;
    if (label != nullptr && label[0] != '\0') {
      digest += "/";
      digest += label;
    }
    report.failures.push_back({inst.seed, digest, 1.0, 0.0});
  }
}

template <typename Fn>
CheckReport run_trials(const char* name, const InstanceGenerator& gen,
                       std::size_t trials, Fn per_trial) {
  CheckReport report;
  report.name = name;
  for (std::size_t t = 0; t < trials; ++t) {
    Instance inst = gen.instance(t);
    ++report.instances;
    try {
      per_trial(inst, report);
    } catch (const Error& e) {
      report.failures.push_back(
          {inst.seed, inst.digest + "/error:" + e.what(), 1.0, 0.0});
    }
  }
  return report;
}

// Reducible novelty subspace: a part inside W, a part inside C-perp ∩ W-perp.
struct ReducibleDraw {
  Subspace w;
  Subspace inside_w;       // A = U ∩ W by construction
  Subspace inside_w_perp;  // B = U ∩ W-perp by construction
  Subspace u;
};

ReducibleDraw draw_reducible(Rng& rng, const Instance& inst) {
  Subspace w = residual_span(inst.c, inst.d, kDefaultTol);
  Subspace outside = complement(direct_sum(inst.c, w));
  std::size_t da =
      static_cast<std::size_t>(rng.int_in(0, static_cast<int>(std::min<std::size_t>(3, w.dim()))));
  std::size_t db = static_cast<std::size_t>(
      rng.int_in(0, static_cast<int>(std::min<std::size_t>(2, outside.dim()))));
  Subspace a = random_subspace_within(rng, w, da);
  Subspace b = random_subspace_within(rng, outside, db);
  Subspace u = direct_sum(a, b);
  return {std::move(w), std::move(a), std::move(b), std::move(u)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

std::uint64_t InstanceGenerator::trial_seed(std::size_t trial) const {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
}

Instance InstanceGenerator::instance(std::size_t trial) const {
  return instance_from_seed(trial_seed(trial));
}

Instance InstanceGenerator::instance_from_seed(std::uint64_t trial_seed) const {
  Rng rng(trial_seed);
  int n_lo = std::max(1, ambient_dim.lo);
  int n = rng.int_in(n_lo, std::max(n_lo, ambient_dim.hi));
  int c_hi = std::min(subspace_dim.hi, n);
  int c_lo = std::min(subspace_dim.lo, c_hi);
  int dim_c = rng.int_in(c_lo, c_hi);
  Subspace c = dim_c == 0
                   ? Subspace::zero(static_cast<std::size_t>(n))
                   : Subspace(static_cast<std::size_t>(n),
                              random_subspace(rng, static_cast<std::size_t>(n),
                                              static_cast<std::size_t>(dim_c))
                                  .basis());
  int size_lo = std::max(0, dataset_size.lo);
  int count = rng.int_in(size_lo, std::max(size_lo, dataset_size.hi));
  Dataset d(static_cast<std::size_t>(n));
  for (int i = 0; i < count; ++i) {
    d.add(gaussian_vector(rng, static_cast<std::size_t>(n), magnitude),
          rng.uniform(weight.lo, weight.hi));
  }
  double energy = residual_energy(c, d);
  double lambda = rng.uniform(0.05, 1.25) * std::max(1.0, energy);

  std::uint64_t h = 0xCBF29CE484222325ULL;
  h = fnv1a_u64(h, static_cast<std::uint64_t>(n));
  h = fnv1a_u64(h, static_cast<std::uint64_t>(dim_c));
  for (const Vector& b : c.basis())
    for (double x : b) h = fnv1a_double(h, x);
  h = fnv1a_u64(h, static_cast<std::uint64_t>(count));
  for (const auto& item : d.items()) {
    for (double x : item.coords) h = fnv1a_double(h, x);
    h = fnv1a_double(h, item.weight);
  }
  h = fnv1a_double(h, lambda);

  return Instance{trial_seed, std::move(c), std::move(d), lambda, hex16(h)};
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

CheckReport check_low_rank_novelty(const InstanceGenerator& gen,
                                   std::size_t trials) {
  return run_trials(
      "low_rank_novelty", gen, trials,
      [](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltLowRank));
        int r = rng.int_in(1, 4);
        Subspace comp = complement(inst.c);
        std::size_t du = static_cast<std::size_t>(rng.int_in(
            0, static_cast<int>(std::min<std::size_t>(
                   static_cast<std::size_t>(r), comp.dim()))));
        Subspace u = random_subspace_within(rng, comp, du);
        Subspace c_prime = direct_sum(inst.c, u);
        std::size_t rank = novelty_rank(inst.c, c_prime);
        record(report, inst, "rank_vs_dim",
               std::fabs(static_cast<double>(rank) - static_cast<double>(du)),
               0.0);
        record_flag(report, inst, "rank_bound",
                    rank <= static_cast<std::size_t>(r));
      });
}

CheckReport check_fit_invariance(const InstanceGenerator& gen,
                                 std::size_t trials) {
  return run_trials(
      "fit_invariance", gen, trials,
      [](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltReducible));
        ReducibleDraw draw = draw_reducible(rng, inst);
        MdlConfig cfg(inst.lambda, LossSpec::identity());
        StrippedExtension stripped =
            strip_to_residual_support(inst.c, draw.u, inst.d, cfg);
        Subspace c_prime = direct_sum(inst.c, draw.u);
        Subspace c_hat = direct_sum(inst.c, draw.inside_w);  // oracle
        double bound = 1e-8 * length_scale(inst.d);
        double worst = 0.0;
        for (const auto& item : inst.d.items()) {
          Vector p_full = project(c_prime, item.coords);
          Vector p_stripped = project(stripped.stripped, item.coords);
          Vector p_oracle = project(c_hat, item.coords);
          double dev = 0.0;
          for (std::size_t i = 0; i < p_full.size(); ++i) {
            dev += (p_full[i] - p_stripped[i]) * (p_full[i] - p_stripped[i]);
          }
          worst = std::max(worst, std::sqrt(dev));
          dev = 0.0;
          for (std::size_t i = 0; i < p_full.size(); ++i) {
            dev += (p_full[i] - p_oracle[i]) * (p_full[i] - p_oracle[i]);
          }
          worst = std::max(worst, std::sqrt(dev));
        }
        record(report, inst, "projection", worst, bound);
        record_flag(report, inst, "meet_dim",
                    stripped.stripped.dim() ==
                        inst.c.dim() + draw.inside_w.dim());
      });
}

CheckReport check_no_orthogonal_gain(const InstanceGenerator& gen,
                                     std::size_t trials) {
  return run_trials(
      "no_orthogonal_gain", gen, trials,
      [](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltOrthogonal));
        Subspace w = residual_span(inst.c, inst.d, kDefaultTol);
        Subspace outside = complement(direct_sum(inst.c, w));
        std::size_t du = static_cast<std::size_t>(rng.int_in(
            0, static_cast<int>(std::min<std::size_t>(3, outside.dim()))));
        Subspace u = random_subspace_within(rng, outside, du);
        Subspace c_prime = du == 0 ? inst.c : direct_sum(inst.c, u);
        double log_scale = rng.uniform(0.5, 3.0);
        const LossSpec losses[] = {LossSpec::identity(),
                                   LossSpec::scaled_log(log_scale)};
        const char* labels[] = {"identity", "scaled_log"};
        for (int li = 0; li < 2; ++li) {
          MdlConfig cfg(inst.lambda, losses[li]);
          double before = description_length(inst.c, inst.d, cfg);
          double after = description_length(c_prime, inst.d, cfg);
          double expected = inst.lambda * static_cast<double>(du);
          double bound = 1e-8 * std::max(1.0, std::fabs(before));
          record(report, inst, labels[li],
                 std::fabs((after - before) - expected), bound);
          Acceptance acc = is_accepted(inst.c, c_prime, inst.d, cfg);
          record_flag(report, inst, labels[li], !acc.accepted);
        }
      });
}

CheckReport check_threshold(const InstanceGenerator& gen, std::size_t trials) {
  return run_trials(
      "threshold", gen, trials,
      [](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltThreshold));
        Subspace cperp = complement(inst.c);
        if (cperp.dim() == 0) return;  // no one-dimensional extension exists
        double log_scale = rng.uniform(0.5, 3.0);
        const LossSpec losses[] = {LossSpec::identity(),
                                   LossSpec::scaled_log(log_scale)};
        const char* labels[] = {"identity", "scaled_log"};
        for (int candidate = 0; candidate < 10; ++candidate) {
          Vector v = random_unit_within(rng, cperp);
          Subspace c_prime = extend_basis(inst.c, v);
          for (int li = 0; li < 2; ++li) {
            MdlConfig probe(1.0, losses[li]);
            double g = gain(inst.c, c_prime, inst.d, probe);
            std::vector<double> lambdas = {inst.lambda};
            if (g > 1e-6) {
              lambdas.push_back(0.5 * g);
              lambdas.push_back(0.99 * g);
              lambdas.push_back(1.01 * g);
              lambdas.push_back(2.0 * g);
            }
            for (double lambda : lambdas) {
              MdlConfig cfg(lambda, losses[li]);
              Acceptance acc = is_accepted(inst.c, c_prime, inst.d, cfg);
              bool expected = g > lambda;
              // Two independent arithmetic routes must agree on the verdict.
              report.max_deviation = std::max(
                  report.max_deviation, std::fabs(acc.margin - (g - lambda)));
              record_flag(report, inst, labels[li], acc.accepted == expected);
            }
          }
        }
      });
}

CheckReport check_dominance(const InstanceGenerator& gen, std::size_t trials) {
  return run_trials(
      "dominance", gen, trials,
      [](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltReducible));
        ReducibleDraw draw = draw_reducible(rng, inst);
        double log_scale = rng.uniform(0.5, 3.0);
        const LossSpec losses[] = {LossSpec::identity(),
                                   LossSpec::scaled_log(log_scale)};
        const char* labels[] = {"identity", "scaled_log"};
        for (int li = 0; li < 2; ++li) {
          MdlConfig cfg(inst.lambda, losses[li]);
          StrippedExtension res =
              strip_to_residual_support(inst.c, draw.u, inst.d, cfg);
          double bound = 1e-8 * std::max(1.0, std::fabs(res.dl_original));
          record(report, inst, labels[li],
                 std::max(0.0, res.dl_stripped - res.dl_original), bound);
          // The gap is exactly the penalty on the W-perp part.
          double expected =
              inst.lambda * static_cast<double>(draw.inside_w_perp.dim());
          record(report, inst, labels[li],
                 std::fabs((res.dl_original - res.dl_stripped) - expected),
                 bound);
          Subspace c_prime = direct_sum(inst.c, draw.u);
          Acceptance original = is_accepted(inst.c, c_prime, inst.d, cfg);
          if (original.accepted) {
            Acceptance after =
                is_accepted(inst.c, res.stripped, inst.d, cfg);
            record_flag(report, inst, labels[li], after.accepted);
          }
        }
      });
}

CheckReport check_signatures(const InstanceGenerator& gen, std::size_t trials,
                             const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) {
    throw Error("check_signatures: lambda grid must be nonempty");
  }
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > lambda_grid[i - 1])) {
      throw Error("check_signatures: lambda grid must be strictly increasing");
    }
  }
  return run_trials(
      "signatures", gen, trials,
      [&gen, &lambda_grid](const Instance& inst, CheckReport& report) {
        Rng rng(splitmix64(inst.seed ^ kSaltSignatures));
        const std::size_t n = inst.c.ambient_dim();

        // Signature 2: perfectly fitted data never grows the basis.
        std::size_t zero_count = static_cast<std::size_t>(rng.int_in(0, 8));
        Dataset d_zero = dataset_inside(rng, inst.c, zero_count, gen);
        for (double lambda : lambda_grid) {
          MdlConfig cfg(lambda, LossSpec::identity());
          ExtensionTrace trace = extend_greedy(inst.c, d_zero, cfg);
          record_flag(report, inst, "sig2", trace.accepted_steps() == 0);
          record_flag(report, inst, "sig2_stop",
                      trace.stop_reason == StopReason::exhausted_residuals);
        }

        // Signature 3: accepted dimensions are a nonincreasing step function
        // of lambda with steps at the residual-covariance eigenvalues.
        ResidualCovariance sigma = residual_covariance(inst.c, inst.d);
        std::vector<EigenPair> spectrum =
            eigen_spectrum(sigma, kDefaultTol, kEigenMaxIter, n);
        double top = spectrum.empty() ? 0.0 : spectrum.front().value;
        double tau = 1e-6 * std::max(1.0, top);
        std::size_t previous = n + 1;
        for (double lambda : lambda_grid) {
          MdlConfig cfg(lambda, LossSpec::identity(), kDefaultTol,
                        static_cast<int>(n));
          ExtensionTrace trace = extend_greedy(inst.c, inst.d, cfg);
          std::size_t count = trace.accepted_steps();
          record_flag(report, inst, "sig3_monotone", count <= previous);
          previous = count;
          std::size_t lower = 0;
          std::size_t upper = 0;
          for (const auto& pair : spectrum) {
            if (pair.value > lambda + tau) ++lower;
            if (pair.value > lambda - tau) ++upper;
          }
          record_flag(report, inst, "sig3_steps",
                      count >= lower && count <= upper);
        }

        // Signature 4: an inert batch changes no verdict.
        std::size_t sim_count = static_cast<std::size_t>(rng.int_in(1, 8));
        SimulationBatch batch{dataset_inside(rng, inst.c, sim_count, gen),
                              "already explained simulation"};
        MdlConfig cfg(inst.lambda, LossSpec::identity());
        MechanismReport mech =
            classify_simulation(inst.c, inst.d, batch, cfg);
        record_flag(report, inst, "sig4_inert",
                    mech.classification == Mechanism::inert);
        record_flag(report, inst, "sig4_verdict",
                    mech.proposal_all.accepted == mech.proposal_ext.accepted);
        record(report, inst, "sig4_gain",
               std::fabs(mech.proposal_all.gain - mech.proposal_ext.gain),
               1e-8 * std::max(1.0, std::fabs(mech.proposal_ext.gain)));
      });
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(50);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = static_cast<double>(i) / 49.0;
    grid[i] = std::pow(10.0, -2.0 + 4.0 * t);
  }
  return grid;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "low_rank_novelty", "fit_invariance", "no_orthogonal_gain",
      "threshold",        "dominance",      "signatures"};
  return names;
}

CheckReport run_check(const std::string& name, const InstanceGenerator& gen,
                      std::size_t trials,
                      const std::vector<double>& lambda_grid) {
  if (name == "low_rank_novelty") return check_low_rank_novelty(gen, trials);
  if (name == "fit_invariance") return check_fit_invariance(gen, trials);
  if (name == "no_orthogonal_gain") return check_no_orthogonal_gain(gen, trials);
  if (name == "threshold") return check_threshold(gen, trials);
  if (name == "dominance") return check_dominance(gen, trials);
  if (name == "signatures") return check_signatures(gen, trials, lambda_grid);
  throw ConfigError("unknown check name: " + name);
}

std::vector<CheckReport> run_all(const InstanceGenerator& gen,
                                 std::size_t trials,
                                 const std::vector<double>& lambda_grid) {
  std::vector<CheckReport> reports;
  for (const std::string& name : check_names()) {
    reports.push_back(run_check(name, gen, trials, lambda_grid));
  }
  return reports;
}

}  // namespace rbx::verify
