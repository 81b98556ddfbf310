#ifndef IRAC_SOLUTION_HPP
#define IRAC_SOLUTION_HPP

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "irac/instance.hpp"
#include "irac/link.hpp"

namespace irac {

/// One point of the outer-loop trace: penalized objective value at the
/// iterate produced under penalty parameter beta.
struct TracePoint {
  double beta = 0.0;
  double objective = 0.0;
};

/// A solver's answer: collaboration bits, transmit powers, and metadata.
/// Every solver except the all-edge baseline returns feasible solutions
/// with p[k] = 0 wherever x[k] = 0.
struct Solution {
  std::vector<int> x;
  std::vector<double> p;
  double objective_P1 = 0.0;  // sum over users of (1 - x_k) * L_k
  std::vector<TracePoint> surrogate_trace;
  FeasibilityReport feasibility;
  std::string solver_name;
  double wall_time = 0.0;  // seconds, solve only
  int iterations = 0;
  std::string status = "ok";  // "ok" or "max-iters"
};

inline double objective_p1(const Instance& inst, const std::vector<int>& x) {
  double obj = 0.0;
  for (int k = 0; k < inst.num_users(); ++k)
    obj += (1.0 - x[k]) * inst.users[k].switching_gain;
  return obj;
}

/// System-level score of one (x, p): true rendering loss per Eq-style
/// switching (selected model's loss vs truth), calibrated PSNR, and the
/// worst per-user latency.
struct SystemMetrics {
  struct PerUser {
    double loss = 0.0;
    double psnr = 0.0;
    double latency = 0.0;
  };
  double total_loss = 0.0;
  double mean_psnr = 0.0;
  double max_latency = 0.0;
  std::vector<PerUser> per_user;
};

inline SystemMetrics evaluate_solution(const Instance& inst, const std::vector<int>& x,
                                       const std::vector<double>& p) {
  require(inst.quality.has_value(), "evaluate_solution: instance has no quality profile");
  const int K = inst.num_users();
  require(static_cast<int>(x.size()) == K && static_cast<int>(p.size()) == K,
          "evaluate_solution: x and p must have length K");
  const auto& q = *inst.quality;
  SystemMetrics m;
  m.per_user.resize(K);
  double psnr_sum = 0.0;
  for (int k = 0; k < K; ++k) {
    auto& row = m.per_user[k];
    row.loss = (1.0 - x[k]) * q.loss_local[k] + x[k] * q.loss_edge[k];
    row.psnr = (x[k] == 1) ? q.psnr_edge[k] : q.psnr_local[k];
    row.latency =
        end_to_end_latency(inst.users[k], x[k], p[k], inst.T0, inst.local_render_time);
    m.total_loss += row.loss;
    psnr_sum += row.psnr;
    m.max_latency = std::max(m.max_latency, row.latency);
  }
  m.mean_psnr = psnr_sum / K;
  return m;
}

inline nlohmann::json to_json(const FeasibilityReport& r) {
  return {{"rate_residuals", r.rate_residuals},
          {"power_slack", r.power_slack},
          {"cardinality_slack", r.cardinality_slack},
          {"bound_violations", r.bound_violations},
          {"feasible", r.feasible},
          {"tolerance", r.tolerance}};
}

inline nlohmann::json to_json(const Solution& s) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : s.surrogate_trace)
    trace.push_back({{"beta", t.beta}, {"objective", t.objective}});
  return {{"schema", "irac-solution/1"},
          {"solver_name", s.solver_name},
          {"x", s.x},
          {"p", s.p},
          {"objective_P1", s.objective_P1},
          {"surrogate_trace", trace},
          {"feasibility", to_json(s.feasibility)},
          {"wall_time", s.wall_time},
          {"iterations", s.iterations},
          {"status", s.status}};
}

}  // namespace irac

#endif  // IRAC_SOLUTION_HPP
