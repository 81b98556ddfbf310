#ifndef IRAC_TESTS_GRID_ORACLE_HPP
#define IRAC_TESTS_GRID_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "irac/instance.hpp"

namespace irac::test {

// Independent oracle for the convex inner subproblem
//
//   minimize    sum_k a_k x_k
//   subject to  sum_k g_k(x_k) <= P,  sum_k x_k <= S,  x in [0,1]^K
//
// by feasibility-filtered grid search: a dense coarse grid (step 1/8)
// followed by incumbent-centered refinement passes that halve the step
// down to ~1e-9 (passing through the 1e-3 resolution on the way). The
// problem is convex with a linear objective, so the refinement converges
// to the global optimum. None of the dual machinery of the solver under
// test is used here.
class SubproblemGridOracle {
public:
  SubproblemGridOracle(const Instance& inst, const std::vector<double>& a)
      : a_(a), P_(inst.P), S_(inst.S), K_(static_cast<int>(a.size())) {
    c_.resize(K_);
    b_.resize(K_);
    for (int k = 0; k < K_; ++k) {
      const auto& u = inst.users[k];
      c_[k] = u.noise / u.channel_gain;
      b_[k] = u.volume / ((inst.T - inst.T0) * u.bandwidth);
    }
  }

  double g(int k, double x) const { return c_[k] * std::expm1(b_[k] * x * M_LN2); }

  /// Best objective over the refined grid; `best_x` receives the argmin.
  double solve(std::vector<double>* best_x = nullptr) const {
    std::vector<double> center(K_, 0.0);
    double best = 0.0;  // x = 0 is always feasible with objective 0
    std::vector<double> incumbent(K_, 0.0);

    // Dense coarse pass over the full box.
    scan_level(1.0 / 8.0, nullptr, best, incumbent);
    // Refinement passes around the incumbent, interleaved with boundary
    // slides (coordinate-pair moves along the curved power boundary, which
    // plain pattern steps cannot follow when the g' ratio is large).
    double step = 1.0 / 16.0;
    while (step > 1e-9) {
      std::vector<double> local = incumbent;
      scan_level(step, &local, best, incumbent);
      slide_passes(step, best, incumbent);
      step *= 0.5;
    }
    slide_passes(1e-9, best, incumbent);
    if (best_x) *best_x = incumbent;
    return best;
  }

private:
  // Evaluates all grid points of one level. With no center the grid is the
  // full box at the given step; with a center, candidates are center + j*step
  // for j in [-2, 2], clamped and deduplicated. DFS keeps running partial
  // sums and prunes on the monotone constraints plus an objective bound.
  void scan_level(double step, const std::vector<double>* center, double& best,
                  std::vector<double>& incumbent) const {
    std::vector<std::vector<double>> cand(K_);
    for (int k = 0; k < K_; ++k) {
      std::vector<double>& cs = cand[k];
      if (center) {
        for (int j = -2; j <= 2; ++j) {
          double v = std::clamp((*center)[k] + j * step, 0.0, 1.0);
          cs.push_back(v);
        }
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      } else {
        for (double v = 0.0; v < 1.0 + step / 2; v += step) cs.push_back(std::min(v, 1.0));
      }
    }
    // Precompute per-candidate objective and power contributions plus the
    // suffix of best-possible remaining objective for pruning.
    std::vector<std::vector<double>> av(K_), gv(K_);
    std::vector<double> suffix_min(K_ + 1, 0.0);
    for (int k = 0; k < K_; ++k) {
      av[k].resize(cand[k].size());
      gv[k].resize(cand[k].size());
      for (std::size_t i = 0; i < cand[k].size(); ++i) {
        av[k][i] = a_[k] * cand[k][i];
        gv[k][i] = g(k, cand[k][i]);
      }
    }
    for (int k = K_ - 1; k >= 0; --k) {
      double m = av[k][0];
      for (double v : av[k]) m = std::min(m, v);
      suffix_min[k] = suffix_min[k + 1] + m;
    }

    std::vector<std::size_t> idx(K_, 0);
    dfs(0, 0.0, 0.0, 0.0, cand, av, gv, suffix_min, idx, best, incumbent);
  }

  void dfs(int k, double obj, double power, double card,
           const std::vector<std::vector<double>>& cand,
           const std::vector<std::vector<double>>& av, const std::vector<std::vector<double>>& gv,
           const std::vector<double>& suffix_min, std::vector<std::size_t>& idx, double& best,
           std::vector<double>& incumbent) const {
    if (power > P_ * (1 + 1e-12) || card > S_ + 1e-9) return;
    if (obj + suffix_min[k] >= best) return;  // cannot improve
    if (k == K_) {
      best = obj;
      incumbent.resize(K_);
      for (int j = 0; j < K_; ++j) incumbent[j] = cand[j][idx[j]];
      return;
    }
    for (std::size_t i = 0; i < cand[k].size(); ++i) {
      idx[k] = i;
      dfs(k + 1, obj + av[k][i], power + gv[k][i], card + cand[k][i], cand, av, gv, suffix_min,
          idx, best, incumbent);
    }
  }

  /// Smallest x with g(k, x) = w.
  double ginv(int k, double w) const { return std::log1p(w / c_[k]) / (b_[k] * M_LN2); }

  double objective(const std::vector<double>& x) const {
    double o = 0.0;
    for (int k = 0; k < K_; ++k) o += a_[k] * x[k];
    return o;
  }

  bool feasible(const std::vector<double>& x) const {
    double power = 0.0, card = 0.0;
    for (int k = 0; k < K_; ++k) {
      if (x[k] < -1e-12 || x[k] > 1 + 1e-12) return false;
      power += g(k, x[k]);
      card += x[k];
    }
    return power <= P_ * (1 + 1e-12) && card <= S_ + 1e-9;
  }

  // For every ordered coordinate pair (i, j): scan x_i over a local 1-D
  // grid and complete x_j on the power or cardinality boundary (or at a
  // bound). Repeats until no pair improves the incumbent.
  void slide_passes(double step, double& best, std::vector<double>& x) const {
    for (int guard = 0; guard < 60; ++guard) {
      bool improved = false;
      for (int i = 0; i < K_ && !improved; ++i)
        for (int j = 0; j < K_ && !improved; ++j) {
          if (i == j) continue;
          double rest_power = 0.0, rest_card = 0.0;
          for (int k = 0; k < K_; ++k)
            if (k != i && k != j) {
              rest_power += g(k, x[k]);
              rest_card += x[k];
            }
          for (int m = -8; m <= 8; ++m) {
            double xi = std::clamp(x[i] + m * step, 0.0, 1.0);
            double power_left = P_ - rest_power - g(i, xi);
            double card_left = static_cast<double>(S_) - rest_card - xi;
            if (power_left < -1e-18 || card_left < -1e-12) continue;
            double cands[4] = {0.0, std::clamp(ginv(j, std::max(0.0, power_left)), 0.0, 1.0),
                               std::clamp(card_left, 0.0, 1.0), std::min(1.0, x[j])};
            for (double xj : cands) {
              std::vector<double> trial = x;
              trial[i] = xi;
              trial[j] = xj;
              if (!feasible(trial)) continue;
              double obj = objective(trial);
              if (obj < best - 1e-15) {
                best = obj;
                x = std::move(trial);
                improved = true;
                break;
              }
            }
            if (improved) break;
          }
        }
      if (!improved) break;
    }
  }

  std::vector<double> a_, c_, b_;
  double P_;
  int S_;
  int K_;
};

}  // namespace irac::test

#endif  // IRAC_TESTS_GRID_ORACLE_HPP
