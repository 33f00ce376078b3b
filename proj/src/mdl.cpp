#include "rbx/mdl.hpp"

#include <cmath>

#include "rbx/linalg.hpp"

namespace rbx {

namespace {

// Sampling grid for the construction-time monotonicity check.
const double kLossGrid[] = {0.0,  1e-12, 1e-9, 1e-6, 1e-3, 1e-2, 0.1,  0.5,
                            1.0,  2.0,   5.0,  10.0, 1e2,  1e4,  1e6, 1e9,
                            1e12};

void require_extension_of(const Subspace& c, const Subspace& c_prime,
                          double tol) {
  if (c.ambient_dim() != c_prime.ambient_dim()) {
    throw DimensionMismatchError("extension: ambient dimensions differ");
  }
  if (!contains(c_prime, c, tol)) {
    throw InvalidExtensionError(
        "extension: the proposed space does not contain the base subspace");
  }
}

}  // namespace

LossSpec::LossSpec(std::string kind, double scale,
                   std::function<double(double)> fn)
    : kind_(std::move(kind)), scale_(scale), fn_(std::move(fn)) {
  validate();
}

void LossSpec::validate() const {
  double at_zero = fn_(0.0);
  if (!std::isfinite(at_zero)) {
    throw Error("loss '" + kind_ + "': value at 0 is not finite");
  }
  double prev = at_zero;
  for (double x : kLossGrid) {
    double y = fn_(x);
    if (!std::isfinite(y)) {
      throw Error("loss '" + kind_ + "': non-finite value at grid point");
    }
    if (y < prev) {
      throw Error("loss '" + kind_ + "': not nondecreasing on the sample grid");
    }
    prev = y;
  }
}

LossSpec LossSpec::identity() {
  return LossSpec("identity", 1.0, [](double x) { return x; });
}

LossSpec LossSpec::scaled_log(double scale) {
  if (!(scale > 0.0)) throw Error("scaled-log loss: scale must be positive");
  return LossSpec("scaled-log", scale,
                  [scale](double x) { return scale * std::log1p(x); });
}

LossSpec LossSpec::custom(std::string name, std::function<double(double)> fn) {
  return LossSpec(std::move(name), 1.0, std::move(fn));
}

MdlConfig::MdlConfig(double lambda, LossSpec loss, double tol, int rank_bound)
    : lambda_(lambda), loss_(std::move(loss)), tol_(tol),
      rank_bound_(rank_bound) {
  if (!(lambda_ > 0.0)) throw Error("mdl config: lambda must be positive");
  if (!(tol_ > 0.0)) throw Error("mdl config: tol must be positive");
  if (rank_bound_ < 1) throw Error("mdl config: rank bound must be >= 1");
}

double description_length(const Subspace& s, const Dataset& d,
                          const MdlConfig& cfg) {
  if (s.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("description_length: dimensions differ");
  }
  double fit = 0.0;
  for (const auto& item : d.items()) {
    Vector r = residual(s, item.coords);
    fit += item.weight * cfg.loss()(dot(r, r));
  }
  return fit + cfg.lambda() * static_cast<double>(s.dim());
}

double gain(const Subspace& c, const Subspace& c_prime, const Dataset& d,
            const MdlConfig& cfg) {
  require_extension_of(c, c_prime, cfg.tol());
  if (c.ambient_dim() != d.ambient_dim()) {
    throw DimensionMismatchError("gain: dimensions differ");
  }
  double total = 0.0;
  for (const auto& item : d.items()) {
    Vector r_before = residual(c, item.coords);
    Vector r_after = residual(c_prime, item.coords);
    total += item.weight *
             (cfg.loss()(dot(r_before, r_before)) -
              cfg.loss()(dot(r_after, r_after)));
  }
  return total;
}

Acceptance is_accepted(const Subspace& c, const Subspace& c_prime,
                       const Dataset& d, const MdlConfig& cfg) {
  require_extension_of(c, c_prime, cfg.tol());
  double before = description_length(c, d, cfg);
  double after = description_length(c_prime, d, cfg);
  // Strict comparison: an exact tie rejects.
  return Acceptance{after < before, before - after};
}

}  // namespace rbx
