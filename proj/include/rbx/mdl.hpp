#ifndef RBX_MDL_HPP
#define RBX_MDL_HPP

#include <functional>
#include <string>
#include <utility>

#include "rbx/types.hpp"

namespace rbx {

// Nondecreasing loss applied to squared residual norms. Construction runs a
// sampled monotonicity check on a fixed grid and requires a finite value at 0.
class LossSpec {
 public:
  static LossSpec identity();
  static LossSpec scaled_log(double scale);  // x -> scale * log(1 + x)
  static LossSpec custom(std::string name, std::function<double(double)> fn);

  double operator()(double squared_residual) const {
    return fn_(squared_residual);
  }
  const std::string& kind() const { return kind_; }
  double scale() const { return scale_; }
  bool is_identity() const { return kind_ == "identity"; }

 private:
  LossSpec(std::string kind, double scale, std::function<double(double)> fn);
  void validate() const;

  std::string kind_;
  double scale_;
  std::function<double(double)> fn_;
};

// Effectively unbounded novelty rank for callers that do not care.
constexpr int kUnboundedRank = 1 << 30;

class MdlConfig {
 public:
  MdlConfig(double lambda, LossSpec loss, double tol = kDefaultTol,
            int rank_bound = kUnboundedRank);

  double lambda() const { return lambda_; }
  const LossSpec& loss() const { return loss_; }
  double tol() const { return tol_; }
  int rank_bound() const { return rank_bound_; }

 private:
  double lambda_;
  LossSpec loss_;
  double tol_;
  int rank_bound_;
};

// L(S;D) = sum_u weight(u) * loss(||u - proj_S u||^2) + lambda * dim(S),
// summed in dataset item order.
double description_length(const Subspace& s, const Dataset& d,
                          const MdlConfig& cfg);

// Aggregate fit improvement sum_u weight(u) * [loss(||r_C(u)||^2) -
// loss(||r_C'(u)||^2)]. Requires C ⊆ C' within cfg.tol().
double gain(const Subspace& c, const Subspace& c_prime, const Dataset& d,
            const MdlConfig& cfg);

struct Acceptance {
  bool accepted;
  double margin;  // L(C;D) - L(C';D); accepted iff margin > 0, ties reject
};

Acceptance is_accepted(const Subspace& c, const Subspace& c_prime,
                       const Dataset& d, const MdlConfig& cfg);

}  // namespace rbx

#endif  // RBX_MDL_HPP
