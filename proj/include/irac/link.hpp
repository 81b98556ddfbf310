#ifndef IRAC_LINK_HPP
#define IRAC_LINK_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "irac/common.hpp"
#include "irac/instance.hpp"

namespace irac {

// -------------------------------------------------------------------------
// Closed-form link physics. With MRC beamforming and N >> K the rate law
// is single user: R = B * log2(1 + gamma * p / sigma^2).
// -------------------------------------------------------------------------

/// Achievable downlink rate in bits/s.
inline double achievable_rate(double gamma, double p, double sigma2, double bandwidth) {
  require(std::isfinite(gamma) && std::isfinite(p) && std::isfinite(sigma2) &&
              std::isfinite(bandwidth),
          "achievable_rate: non-finite input");
  require(gamma > 0 && p >= 0 && sigma2 > 0 && bandwidth > 0,
          "achievable_rate: need gamma>0, p>=0, sigma2>0, B>0");
  return bandwidth * std::log1p(gamma * p / sigma2) / M_LN2;
}

/// Rate-constraint exponent x*V / ((T-T0)*B) for collaboration fraction x.
inline double rate_exponent(const UserLink& u, double x, double T, double T0) {
  return x * u.volume / ((T - T0) * u.bandwidth);
}

/// Minimum transmit power meeting the rate constraint for collaboration
/// fraction x: g(x) = sigma^2/gamma * (2^(x*V/((T-T0)*B)) - 1).
/// Convex, increasing, and g(0) = 0.
inline double min_power_for_fraction(const UserLink& u, double x, double T, double T0) {
  require(T > T0, "min_power_for_fraction: need T > T0");
  require(x >= 0.0 && x <= 1.0, "min_power_for_fraction: x must be in [0,1]");
  require(u.channel_gain > 0 && u.noise > 0 && u.bandwidth > 0 && u.volume > 0,
          "min_power_for_fraction: invalid user fields");
  return u.noise / u.channel_gain * std::expm1(rate_exponent(u, x, T, T0) * M_LN2);
}

/// Derivative g'(x); needed for the per-user stationarity inversion in the
/// convex subproblem.
inline double min_power_slope(const UserLink& u, double x, double T, double T0) {
  double b = u.volume / ((T - T0) * u.bandwidth);
  return u.noise / u.channel_gain * b * M_LN2 * std::exp2(b * x);
}

inline double kInfiniteLatency() { return std::numeric_limits<double>::infinity(); }

/// End-to-end latency of one user. Local rendering (x=0) takes
/// local_render_time; remote rendering takes T0 plus the download time
/// V/R(p). x=1 with p=0 yields the +infinity sentinel rather than an error
/// so all-edge schemes keep a total order when starved of power.
inline double end_to_end_latency(const UserLink& u, int x, double p, double T0,
                                 double local_render_time) {
  require(x == 0 || x == 1, "end_to_end_latency: x must be binary");
  require(p >= 0, "end_to_end_latency: p must be >= 0");
  if (x == 0) return local_render_time;
  double rate = achievable_rate(u.channel_gain, p, u.noise, u.bandwidth);
  if (rate <= 0.0) return kInfiniteLatency();
  return T0 + u.volume / rate;
}

// -------------------------------------------------------------------------
// Feasibility checking
// -------------------------------------------------------------------------

struct FeasibilityReport {
  std::vector<double> rate_residuals;  // bits/s slack of each rate constraint
  double power_slack = 0.0;            // watts, P - sum(p)
  double cardinality_slack = 0.0;      // S - sum(x)
  std::vector<std::string> bound_violations;
  bool feasible = false;
  double tolerance = 1e-9;  // relative, applied per constraint scale
};

/// Evaluates every constraint of the collaboration problem for a candidate
/// (x, p) with relative tolerance `tol`. The verdict is computed on
/// dimensionless residuals (each raw residual divided by its constraint
/// scale).
inline FeasibilityReport check_feasibility(const Instance& inst, const std::vector<int>& x,
                                           const std::vector<double>& p, double tol = 1e-9) {
  const int K = inst.num_users();
  require(static_cast<int>(x.size()) == K && static_cast<int>(p.size()) == K,
          "check_feasibility: x and p must have length K");
  FeasibilityReport rep;
  rep.tolerance = tol;
  rep.rate_residuals.resize(K);

  bool ok = true;
  double sum_p = 0.0;
  int sum_x = 0;
  for (int k = 0; k < K; ++k) {
    const auto& u = inst.users[k];
    if (x[k] != 0 && x[k] != 1) {
      rep.bound_violations.push_back("x[" + std::to_string(k) + "] not binary");
      ok = false;
    }
    if (!(p[k] >= 0) || !std::isfinite(p[k])) {
      rep.bound_violations.push_back("p[" + std::to_string(k) + "] negative or non-finite");
      ok = false;
    }
    double rate = achievable_rate(u.channel_gain, std::max(0.0, p[k]), u.noise, u.bandwidth);
    double required = (x[k] == 1) ? u.volume / (inst.T - inst.T0) : 0.0;
    rep.rate_residuals[k] = rate - required;
    double scale = u.volume / (inst.T - inst.T0);
    if (rep.rate_residuals[k] < -tol * scale) {
      rep.bound_violations.push_back("rate constraint violated for user " + std::to_string(k));
      ok = false;
    }
    sum_p += std::max(0.0, p[k]);
    sum_x += (x[k] != 0) ? 1 : 0;
  }
  rep.power_slack = inst.P - sum_p;
  if (rep.power_slack < -tol * inst.P) {
    rep.bound_violations.push_back("power budget exceeded");
    ok = false;
  }
  rep.cardinality_slack = static_cast<double>(inst.S) - sum_x;
  if (rep.cardinality_slack < -tol * std::max(1.0, static_cast<double>(inst.S))) {
    rep.bound_violations.push_back("collaboration cap exceeded");
    ok = false;
  }
  rep.feasible = ok;
  return rep;
}

}  // namespace irac

#endif  // IRAC_LINK_HPP
