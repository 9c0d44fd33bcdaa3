#include "geofree/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace geofree {

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::t4:
      return "T4";
    case Theorem::t5:
      return "T5";
    case Theorem::t6:
      return "T6";
    case Theorem::t9:
      return "T9";
    case Theorem::t10:
      return "T10";
  }
  return "unknown";
}

Schedule make_schedule(Theorem thm, const GeometryParams& g, double G, double M, double alpha, long T) {
  g.validate();
  if (T < 1) {
    throw std::invalid_argument("horizon T must be at least 1");
  }
  if (!(G > 0.0)) {
    throw std::invalid_argument("gradient bound G must be positive");
  }
  Schedule s;
  s.theorem = thm;
  s.geometry = g;
  s.zeta = zeta(g.kappa, 2.0 * g.R);
  s.rbar = r_bar(g);
  s.G = G;
  s.M = M;
  s.alpha = alpha;
  s.T = T;
  s.T_padded = T;
  const double Td = static_cast<double>(T);
  const double R = g.R;

  auto pad = [&](double b) {
    s.B = std::max(1L, std::lround(b));
    s.T_padded = (T + s.B - 1) / s.B * s.B;
  };

  switch (thm) {
    case Theorem::t4:
      s.eta = 2.0 * R / (G * std::sqrt(s.zeta * Td));
      s.delta = 1.0 / (2.0 * std::sqrt(Td));
      break;
    case Theorem::t5:
      if (T < 2) {
        throw std::invalid_argument("the one-point schedule needs T >= 2");
      }
      s.eta = 1.0 / std::sqrt(Td);
      s.delta = std::pow(Td, -0.25);
      s.tau = s.delta;
      s.delta_prime = delta_prime_one_point(g, s.tau);
      break;
    case Theorem::t6:
      if (T < 2) {
        throw std::invalid_argument("the two-point schedule needs T >= 2");
      }
      s.eta = 1.0;
      s.delta = 1.0 / std::sqrt(Td);
      s.beta = 1.0 - s.delta;
      s.delta_prime = delta_prime_two_point(g, s.beta);
      break;
    case Theorem::t9: {
      s.eta = R * s.zeta / G * std::pow(Td, -0.75);
      const double eps = 60.0 * R * R * s.zeta * s.zeta / std::sqrt(Td);
      pad(5.0 * std::sqrt(Td));
      const long blocks = s.T_padded / s.B;
      s.block_eta.assign(static_cast<std::size_t>(blocks), s.eta);
      s.block_eps.assign(static_cast<std::size_t>(blocks), eps);
      break;
    }
    case Theorem::t10: {
      if (!(alpha > 0.0)) {
        throw std::invalid_argument("the strongly convex block schedule needs alpha > 0");
      }
      pad(std::pow(alpha * R / G, 2.0 / 3.0) * std::pow(Td, 2.0 / 3.0));
      if (T < 3 * s.B) {
        throw std::invalid_argument("the strongly convex block schedule needs T >= 3B (B = " +
                                    std::to_string(s.B) + ")");
      }
      const long blocks = s.T_padded / s.B;
      for (long i = 1; i <= blocks; ++i) {
        const double id = static_cast<double>(i);
        s.block_eta.push_back(2.0 / (alpha * id * static_cast<double>(s.B)));
        const double c = 20.0 * G / (alpha * (id + 3.0));
        s.block_eps.push_back(c * c * s.zeta);
      }
      s.eta = s.block_eta.front();
      break;
    }
  }
  return s;
}

void RegretTrace::push(RoundRecord r) {
  const double prev = cum_loss.empty() ? 0.0 : cum_loss.back();
  cum_loss.push_back(prev + r.loss);
  rounds.push_back(std::move(r));
}

namespace {

RegretTrace start_trace(const char* name, const Schedule& s, const LossOracle& env) {
  if (env.horizon() < s.T_padded) {
    throw std::invalid_argument("environment horizon is shorter than the schedule");
  }
  RegretTrace tr;
  tr.algorithm = name;
  tr.T = s.T;
  tr.T_padded = s.T_padded;
  tr.rounds.reserve(static_cast<std::size_t>(s.T_padded));
  tr.cum_loss.reserve(static_cast<std::size_t>(s.T_padded));
  return tr;
}

Point so_project(SetOracle& oracle, const Schedule& s, const Point& y, RegretTrace& tr) {
  const ProjectionResult pr = so_infeasible_projection(oracle, s.rbar, s.delta, y);
  ++tr.projections;
  tr.projection_iterations += pr.iterations;
  if (pr.over_bound) {
    ++tr.projections_over_bound;
  }
  return pr.y;
}

void count_feasibility(const GscConvexSet& K, const std::vector<Point>& played, RegretTrace& tr) {
  for (const Point& x : played) {
    if (!membership(K, x)) {
      ++tr.infeasible_plays;
    }
  }
}

}  // namespace

RegretTrace run_infeasible_rogd(const LossOracle& env, const GscConvexSet& K, const ProjectionOracle& project,
                                const Point& start, const StepSchedule& eta, long T) {
  if (env.horizon() < T) {
    throw std::invalid_argument("environment horizon is shorter than T");
  }
  RegretTrace tr;
  tr.algorithm = "infeasible-rogd";
  tr.T = T;
  tr.T_padded = T;
  Point y = start;
  for (long t = 1; t <= T; ++t) {
    const Evaluation e = env.evaluate(t, y);
    RoundRecord rec;
    rec.t = t;
    rec.played = {y};
    rec.loss = e.value;
    rec.grad_norm = norm(e.gradient);
    count_feasibility(K, rec.played, tr);
    tr.push(std::move(rec));
    if (t < T) {
      y = project(exp(y, -eta(t) * e.gradient));
    }
  }
  return tr;
}

RegretTrace run_so_full_info(const LossOracle& env, SetOracle& oracle, const Schedule& s) {
  if (s.theorem != Theorem::t4) {
    throw std::invalid_argument("full-information learner needs the T4 schedule");
  }
  const GscConvexSet& K = oracle.set();
  RegretTrace tr = start_trace("so-full", s, env);
  Point y = K.center();
  for (long t = 1; t <= s.T_padded; ++t) {
    const Evaluation e = env.evaluate(t, y);
    RoundRecord rec;
    rec.t = t;
    rec.played = {y};
    rec.loss = e.value;
    rec.grad_norm = norm(e.gradient);
    count_feasibility(K, rec.played, tr);
    if (t < s.T_padded) {
      y = so_project(oracle, s, exp(y, -s.eta * e.gradient), tr);
    }
    rec.calls = oracle.stats();
    tr.push(std::move(rec));
  }
  tr.stats = oracle.stats();
  return tr;
}

RegretTrace run_so_bandit_one_point(const LossOracle& env, SetOracle& oracle, const Schedule& s, Rng& rng) {
  if (s.theorem != Theorem::t5) {
    throw std::invalid_argument("one-point bandit learner needs the T5 schedule");
  }
  const GscConvexSet& K = oracle.set();
  const Point& p = K.center();
  RegretTrace tr = start_trace("so-bandit-1", s, env);
  Point y = p;
  for (long t = 1; t <= s.T_padded; ++t) {
    const Point z = sample_sphere(y, s.delta_prime, rng);
    const Point played = scale_toward(p, 1.0 / (1.0 + s.tau), z);
    const double fz = env.value(t, z);
    const Tangent u = log(y, z);
    const Tangent g = (fz / norm(u)) * u;
    RoundRecord rec;
    rec.t = t;
    rec.played = {played};
    rec.feedback = {z};
    rec.loss = env.value(t, played);
    rec.grad_norm = norm(g);
    count_feasibility(K, rec.played, tr);
    if (t < s.T_padded) {
      y = so_project(oracle, s, exp(y, -s.eta * g), tr);
    }
    rec.calls = oracle.stats();
    tr.push(std::move(rec));
  }
  tr.stats = oracle.stats();
  return tr;
}

RegretTrace run_so_bandit_two_point(const LossOracle& env, SetOracle& oracle, const Schedule& s, Rng& rng) {
  if (s.theorem != Theorem::t6) {
    throw std::invalid_argument("two-point bandit learner needs the T6 schedule");
  }
  const GscConvexSet& K = oracle.set();
  const Point& p = K.center();
  RegretTrace tr = start_trace("so-bandit-2", s, env);
  Point x = p;
  Point y = p;
  for (long t = 1; t <= s.T_padded; ++t) {
    if (!membership(K, y) || !membership(K, scale_toward(p, 1.0 / s.beta, x))) {
      ++tr.invariant_violations;
    }
    const Point z = sample_sphere(x, s.delta_prime, rng);
    const Point z_anti = antipode(x, z);
    const double f1 = env.value(t, z);
    const double f2 = env.value(t, z_anti);
    const Tangent u = log(x, z);
    const Tangent g = (0.5 * (f1 - f2) / norm(u)) * u;
    RoundRecord rec;
    rec.t = t;
    rec.played = {z, z_anti};
    rec.loss = f1;
    rec.grad_norm = norm(g);
    tr.max_estimate_ratio = std::max(tr.max_estimate_ratio, rec.grad_norm / (s.delta_prime * s.G));
    count_feasibility(K, rec.played, tr);
    if (t < s.T_padded) {
      y = so_project(oracle, s, exp(y, -s.eta * transport(x, y, g)), tr);
      x = scale_toward(p, s.beta, y);
    }
    rec.calls = oracle.stats();
    tr.push(std::move(rec));
  }
  tr.stats = oracle.stats();
  return tr;
}

RegretTrace run_loo_block_ogd(const LossOracle& env, SetOracle& oracle, const Schedule& s) {
  if (s.theorem != Theorem::t9 && s.theorem != Theorem::t10) {
    throw std::invalid_argument("block learner needs the T9 or T10 schedule");
  }
  const GscConvexSet& K = oracle.set();
  const Point& p = K.center();
  RegretTrace tr = start_trace("loo-block", s, env);
  const long blocks = s.T_padded / s.B;
  // Index i holds x_i and ytilde_i; x_0 = x_1 = ytilde_0 = ytilde_1 = p.
  std::vector<Point> xs{p, p};
  std::vector<Point> ys{p, p};
  Point y_next = p;
  long t = 0;

  auto play_block = [&](long i) {
    const Point& x_play = xs[static_cast<std::size_t>(i - 1)];
    const Point& y_grad = ys[static_cast<std::size_t>(i - 1)];
    Vec acc = Vec::Zero(y_grad.coords.size());
    for (long b = 0; b < s.B; ++b) {
      ++t;
      const Tangent grad = env.gradient(t, y_grad);
      acc += grad.vec;
      RoundRecord rec;
      rec.t = t;
      rec.played = {x_play};
      rec.loss = env.value(t, x_play);
      rec.grad_norm = norm(grad);
      count_feasibility(K, rec.played, tr);
      rec.calls = oracle.stats();
      tr.push(std::move(rec));
    }
    const Tangent step{y_grad, acc};
    y_next = exp(y_grad, -s.block_eta[static_cast<std::size_t>(i - 1)] * step);
  };

  play_block(1);
  for (long i = 2; i <= blocks; ++i) {
    const double eps = s.block_eps[static_cast<std::size_t>(i - 1)];
    const ProjectionResult pr =
        loo_infeasible_projection(oracle, xs[static_cast<std::size_t>(i - 2)], y_next, eps);
    ++tr.projections;
    tr.projection_iterations += pr.iterations;
    if (pr.over_bound) {
      ++tr.projections_over_bound;
    }
    const double gap = dist(*pr.x, pr.y);
    tr.max_block_gap_ratio = std::max(tr.max_block_gap_ratio, gap * gap / (3.0 * eps));
    xs.push_back(*pr.x);
    ys.push_back(pr.y);
    play_block(i);
  }
  tr.stats = oracle.stats();
  return tr;
}

}  // namespace geofree
