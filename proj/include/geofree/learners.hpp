#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geofree/environment.hpp"
#include "geofree/projections.hpp"

namespace geofree {

enum class Theorem { t4, t5, t6, t9, t10 };

const char* to_string(Theorem t);

struct Schedule {
  Theorem theorem = Theorem::t4;
  GeometryParams geometry;
  double zeta = 1.0;  // zeta(kappa, 2R)
  double rbar = 0.0;
  double G = 0.0;
  double M = 0.0;
  double alpha = 0.0;
  long T = 0;
  // Rounds actually played; a multiple of B for the block learner, T otherwise.
  long T_padded = 0;
  double eta = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  double beta = 0.0;
  double delta_prime = 0.0;
  long B = 0;
  // Per-block step sizes and tolerances (block learner only), indexed from block 1.
  std::vector<double> block_eta;
  std::vector<double> block_eps;
};

Schedule make_schedule(Theorem thm, const GeometryParams& g, double G, double M, double alpha, long T);

struct RoundRecord {
  long t = 0;
  std::vector<Point> played;
  // Query points when they differ from the played points (one-point bandit).
  std::vector<Point> feedback;
  // Loss charged to the learner: f_t at the first played point.
  double loss = 0.0;
  double grad_norm = 0.0;
  // Cumulative oracle counters after the round.
  OracleStats calls;
};

struct RegretTrace {
  std::string algorithm;
  long T = 0;
  long T_padded = 0;
  std::vector<RoundRecord> rounds;
  std::vector<double> cum_loss;
  OracleStats stats;

  long infeasible_plays = 0;
  // Algorithm-specific loop invariants (two-point: x_t in beta K and y_t in K).
  long invariant_violations = 0;
  long projections = 0;
  long projection_iterations = 0;
  long projections_over_bound = 0;
  // Two-point: max ||g_t|| / (delta' G).
  double max_estimate_ratio = 0.0;
  // Block learner: max dist(x_i, ytilde_i)^2 / (3 eps_i) over blocks.
  double max_block_gap_ratio = 0.0;

  void push(RoundRecord r);
};

using ProjectionOracle = std::function<Point(const Point&)>;
using StepSchedule = std::function<double(long)>;

// Infeasible Riemannian OGD: play ytilde_t, step along the gradient, project with `project`.
RegretTrace run_infeasible_rogd(const LossOracle& env, const GscConvexSet& K, const ProjectionOracle& project,
                                const Point& start, const StepSchedule& eta, long T);

RegretTrace run_so_full_info(const LossOracle& env, SetOracle& oracle, const Schedule& s);
RegretTrace run_so_bandit_one_point(const LossOracle& env, SetOracle& oracle, const Schedule& s, Rng& rng);
RegretTrace run_so_bandit_two_point(const LossOracle& env, SetOracle& oracle, const Schedule& s, Rng& rng);
RegretTrace run_loo_block_ogd(const LossOracle& env, SetOracle& oracle, const Schedule& s);

}  // namespace geofree
