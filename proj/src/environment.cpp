#include "geofree/environment.hpp"

#include <stdexcept>
#include <utility>

namespace geofree {

const char* to_string(LossFamily f) {
  return f == LossFamily::sq_dist ? "sq_dist" : "dist";
}

const char* to_string(Adversary a) {
  switch (a) {
    case Adversary::fixed_target:
      return "fixed";
    case Adversary::shifting_targets:
      return "shifting";
    case Adversary::random_targets:
      return "random";
  }
  return "unknown";
}

LossFamily parse_loss_family(const std::string& s) {
  if (s == "sq_dist") return LossFamily::sq_dist;
  if (s == "dist") return LossFamily::dist;
  throw std::invalid_argument("unknown loss family '" + s + "' (expected sq_dist or dist)");
}

Adversary parse_adversary(const std::string& s) {
  if (s == "fixed") return Adversary::fixed_target;
  if (s == "shifting") return Adversary::shifting_targets;
  if (s == "random") return Adversary::random_targets;
  throw std::invalid_argument("unknown adversary '" + s + "' (expected fixed, shifting or random)");
}

LossOracle::LossOracle(const GscConvexSet& K, EnvironmentSpec spec, long horizon, std::uint64_t seed)
    : spec_(spec) {
  if (horizon < 1) {
    throw std::invalid_argument("environment horizon must be positive");
  }
  if (!(spec_.weight > 0.0)) {
    throw std::invalid_argument("loss weight must be positive");
  }
  if (spec_.period < 0) {
    throw std::invalid_argument("switch period must be non-negative");
  }
  Rng rng = make_stream(seed, "environment");
  targets_.reserve(static_cast<std::size_t>(horizon));
  switch (spec_.adversary) {
    case Adversary::fixed_target: {
      const Point a = sample_in_set(K, rng);
      targets_.assign(static_cast<std::size_t>(horizon), a);
      break;
    }
    case Adversary::shifting_targets: {
      const Point a = sample_in_set(K, rng);
      const Point b = sample_in_set(K, rng);
      const long period = spec_.period > 0 ? spec_.period : std::max(1L, (horizon + 1) / 2);
      for (long t = 0; t < horizon; ++t) {
        targets_.push_back((t / period) % 2 == 0 ? a : b);
      }
      break;
    }
    case Adversary::random_targets:
      for (long t = 0; t < horizon; ++t) {
        targets_.push_back(sample_in_set(K, rng));
      }
      break;
  }
  const LossConstants c = loss_constants(spec_, K.geometry().R);
  G_ = c.G;
  M_ = c.M;
  alpha_ = c.alpha;
}

LossOracle::LossOracle(const GscConvexSet& K, EnvironmentSpec spec, std::vector<Point> targets)
    : spec_(spec), targets_(std::move(targets)) {
  if (targets_.empty()) {
    throw std::invalid_argument("environment needs at least one target");
  }
  if (!(spec_.weight > 0.0)) {
    throw std::invalid_argument("loss weight must be positive");
  }
  for (const Point& a : targets_) {
    require_same_space(K.center(), a);
    if (!membership(K, a)) {
      throw std::invalid_argument("scripted targets must lie in the feasible set");
    }
  }
  const LossConstants c = loss_constants(spec_, K.geometry().R);
  G_ = c.G;
  M_ = c.M;
  alpha_ = c.alpha;
}

LossConstants loss_constants(const EnvironmentSpec& spec, double R) {
  const double w = spec.weight;
  if (spec.family == LossFamily::sq_dist) {
    return {2.0 * R * w, 0.5 * w * 9.0 * R * R, w};
  }
  return {w, 3.0 * R * w, 0.0};
}

const Point& LossOracle::target(long t) const {
  if (t < 1 || t > horizon()) {
    throw std::out_of_range("round index outside the environment horizon");
  }
  return targets_[static_cast<std::size_t>(t - 1)];
}

double LossOracle::value(long t, const Point& x) const {
  const double d = dist(x, target(t));
  return spec_.family == LossFamily::sq_dist ? 0.5 * spec_.weight * d * d : spec_.weight * d;
}

Tangent LossOracle::gradient(long t, const Point& x) const {
  const Tangent to_a = log(x, target(t));
  if (spec_.family == LossFamily::sq_dist) {
    return -spec_.weight * to_a;
  }
  const double d = norm(to_a);
  return d == 0.0 ? zero_tangent(x) : (-spec_.weight / d) * to_a;
}

Evaluation LossOracle::evaluate(long t, const Point& x) const {
  const Tangent to_a = log(x, target(t));
  const double d = norm(to_a);
  if (spec_.family == LossFamily::sq_dist) {
    return {0.5 * spec_.weight * d * d, -spec_.weight * to_a};
  }
  return {spec_.weight * d, d == 0.0 ? zero_tangent(x) : (-spec_.weight / d) * to_a};
}

Objective LossOracle::interval_objective(long s, long e) const {
  if (s < 1 || e > horizon() || s > e) {
    throw std::out_of_range("invalid round interval");
  }
  return [this, s, e](const Point& x) {
    Evaluation total{0.0, zero_tangent(x)};
    Vec grad = Vec::Zero(x.coords.size());
    for (long t = s; t <= e; ++t) {
      const Evaluation ev = evaluate(t, x);
      total.value += ev.value;
      grad += ev.gradient.vec;
    }
    total.gradient.vec = grad;
    return total;
  };
}

}  // namespace geofree
