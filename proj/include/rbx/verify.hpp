#ifndef RBX_VERIFY_HPP
#define RBX_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rbx/types.hpp"

namespace rbx::verify {

struct IntRange {
  int lo;
  int hi;  // inclusive
};

struct RealRange {
  double lo;
  double hi;
};

// One generated problem instance. `seed` regenerates it exactly via
// InstanceGenerator::instance_from_seed.
struct Instance {
  std::uint64_t seed;
  Subspace c;
  Dataset d;
  double lambda;
  std::string digest;  // 16-hex-digit content hash
};

// Deterministic instance stream: trial k is a pure function of (seed, ranges,
// k). Defaults keep dimensions small enough for brute-force oracles.
struct InstanceGenerator {
  std::uint64_t seed = 0;
  IntRange ambient_dim{2, 8};
  IntRange subspace_dim{0, 4};   // clamped to the drawn ambient dimension
  IntRange dataset_size{0, 64};
  RealRange weight{0.25, 4.0};
  double magnitude = 1.0;

  std::uint64_t trial_seed(std::size_t trial) const;
  Instance instance(std::size_t trial) const;
  Instance instance_from_seed(std::uint64_t trial_seed) const;
};

struct Failure {
  std::uint64_t seed;
  std::string digest;
  double observed;
  double bound;
};

struct CheckReport {
  std::string name;
  std::size_t instances = 0;
  std::vector<Failure> failures;
  double max_deviation = 0.0;

  bool passed() const { return failures.empty(); }
};

// Each check replays the listed proposition on `trials` generated instances;
// violations are recorded, not thrown.
CheckReport check_low_rank_novelty(const InstanceGenerator& gen,
                                   std::size_t trials);
CheckReport check_fit_invariance(const InstanceGenerator& gen,
                                 std::size_t trials);
CheckReport check_no_orthogonal_gain(const InstanceGenerator& gen,
                                     std::size_t trials);
CheckReport check_threshold(const InstanceGenerator& gen, std::size_t trials);
CheckReport check_dominance(const InstanceGenerator& gen, std::size_t trials);
CheckReport check_signatures(const InstanceGenerator& gen, std::size_t trials,
                             const std::vector<double>& lambda_grid);

// 50-point logarithmic grid used by check_signatures when none is supplied.
std::vector<double> default_lambda_grid();

const std::vector<std::string>& check_names();
CheckReport run_check(const std::string& name, const InstanceGenerator& gen,
                      std::size_t trials, const std::vector<double>& lambda_grid);
std::vector<CheckReport> run_all(const InstanceGenerator& gen,
                                 std::size_t trials,
                                 const std::vector<double>& lambda_grid);

}  // namespace rbx::verify

#endif  // RBX_VERIFY_HPP
