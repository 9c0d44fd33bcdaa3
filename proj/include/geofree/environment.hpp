#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geofree/sets.hpp"

namespace geofree {

enum class LossFamily { sq_dist, dist };
enum class Adversary { fixed_target, shifting_targets, random_targets };

const char* to_string(LossFamily f);
const char* to_string(Adversary a);
LossFamily parse_loss_family(const std::string& s);
Adversary parse_adversary(const std::string& s);

struct EnvironmentSpec {
  LossFamily family = LossFamily::sq_dist;
  double weight = 1.0;
  Adversary adversary = Adversary::random_targets;
  // Rounds between target switches for shifting_targets; 0 means half the horizon.
  long period = 0;
};

struct LossConstants {
  double G = 0.0;
  double M = 0.0;
  double alpha = 0.0;
};

LossConstants loss_constants(const EnvironmentSpec& spec, double R);

// Losses f_t(x) = w/2 dist(x, a_t)^2 (sq_dist) or w dist(x, a_t) (dist) with targets a_t in K.
// G bounds the gradient on B_p(R); M bounds |f_t| on B_p(2R), which covers every feedback point.
class LossOracle {
 public:
  LossOracle(const GscConvexSet& K, EnvironmentSpec spec, long horizon, std::uint64_t seed);
  // Scripted targets, one per round; the adversary field of spec is ignored.
  LossOracle(const GscConvexSet& K, EnvironmentSpec spec, std::vector<Point> targets);

  double value(long t, const Point& x) const;
  Tangent gradient(long t, const Point& x) const;
  Evaluation evaluate(long t, const Point& x) const;

  const Point& target(long t) const;
  long horizon() const { return static_cast<long>(targets_.size()); }
  const EnvironmentSpec& spec() const { return spec_; }

  double G() const { return G_; }
  double M() const { return M_; }
  double alpha() const { return alpha_; }

  // Sum of the losses over rounds [s, e] (1-based, inclusive) as one objective.
  Objective interval_objective(long s, long e) const;

 private:
  EnvironmentSpec spec_;
  std::vector<Point> targets_;
  double G_ = 0.0;
  double M_ = 0.0;
  double alpha_ = 0.0;
};

}  // namespace geofree
