#ifndef IRAC_BASELINES_HPP
#define IRAC_BASELINES_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "irac/common.hpp"
#include "irac/instance.hpp"
#include "irac/link.hpp"
#include "irac/pmm.hpp"
#include "irac/rng.hpp"
#include "irac/solution.hpp"

namespace irac {

// -------------------------------------------------------------------------
// Comparison schemes. All return the same Solution record as pmm_solve so
// they can be evaluated head to head. Every scheme except the all-edge one
// returns strictly feasible solutions.
// -------------------------------------------------------------------------

namespace detail {

inline Solution finish_solution(const Instance& inst, std::vector<int> x, std::vector<double> p,
                                const char* name,
                                std::chrono::steady_clock::time_point t0, int iterations = 0) {
  Solution sol;
  sol.x = std::move(x);
  sol.p = std::move(p);
  sol.objective_P1 = objective_p1(inst, sol.x);
  sol.feasibility = check_feasibility(inst, sol.x, sol.p);
  sol.solver_name = name;
  sol.iterations = iterations;
  sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

}  // namespace detail

/// Everyone renders locally (all x = 0). Always feasible.
inline Solution solve_user_gs(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  return detail::finish_solution(inst, std::vector<int>(K, 0), std::vector<double>(K, 0.0),
                                 "user_gs", t0);
}

/// Everyone renders remotely (all x = 1). Powers are the per-user minima,
/// scaled down proportionally to exhaust P exactly when over budget. The
/// result is returned even when infeasible (deadline or cap violations);
/// this scheme exists to demonstrate why all-edge rendering breaks down.
inline Solution solve_edge_gs(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  std::vector<int> x(K, 1);
  std::vector<double> p = recover_power(inst, x);
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (total > inst.P) {
    double scale = inst.P / total;
    for (auto& v : p) v *= scale;
  }
  return detail::finish_solution(inst, std::move(x), std::move(p), "edge_gs", t0);
}

/// Admission by channel quality: users sorted by channel gain get their
/// minimum full-collaboration power while the budgets allow. Ignores the
/// switching gains entirely (pure sum-rate thinking).
inline Solution solve_max_rate(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  const auto pc = detail::power_curves(inst);
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (inst.users[i].channel_gain != inst.users[j].channel_gain)
      return inst.users[i].channel_gain > inst.users[j].channel_gain;
    return i < j;
  });
  std::vector<int> x(K, 0);
  std::vector<double> p(K, 0.0);
  double used = 0.0;
  int count = 0;
  for (int k : order) {
    if (count >= inst.S) break;
    if (used + pc[k].g1 <= inst.P) {
      x[k] = 1;
      p[k] = pc[k].g1;
      used += pc[k].g1;
      ++count;
    }
  }
  return detail::finish_solution(inst, std::move(x), std::move(p), "max_rate", t0);
}

/// Largest-switching-gain-first admission at minimum power; users that do
/// not fit the remaining budget are skipped and the scan continues.
inline Solution solve_greedy(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  const auto pc = detail::power_curves(inst);
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (inst.users[i].switching_gain != inst.users[j].switching_gain)
      return inst.users[i].switching_gain > inst.users[j].switching_gain;
    return i < j;
  });
  std::vector<int> x(K, 0);
  std::vector<double> p(K, 0.0);
  double used = 0.0;
  int count = 0;
  for (int k : order) {
    if (count >= inst.S) break;
    if (used + pc[k].g1 <= inst.P) {
      x[k] = 1;
      p[k] = pc[k].g1;
      used += pc[k].g1;
      ++count;
    }
  }
  return detail::finish_solution(inst, std::move(x), std::move(p), "greedy", t0);
}

/// Continuous relaxation (no penalty term) followed by round-and-repair.
inline Solution solve_rounding(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  std::vector<double> a(K);
  for (int k = 0; k < K; ++k) a[k] = -inst.users[k].switching_gain;
  SubproblemResult relax = solve_subproblem_linear(inst, a);
  std::vector<int> x = round_and_repair(inst, relax.x);
  std::vector<double> p = recover_power(inst, x);
  return detail::finish_solution(inst, std::move(x), std::move(p), "rounding", t0, 1);
}

/// Iterative local search over single-bit flips and in/out swaps, seeded
/// from the greedy solution; the first feasible improving move is taken.
inline Solution solve_local_search(const Instance& inst, int max_iters = 1000,
                                   std::uint64_t seed = 0) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  const auto pc = detail::power_curves(inst);
  Solution greedy = solve_greedy(inst);
  std::vector<int> x = greedy.x;

  auto budget_state = [&](const std::vector<int>& bits, double& power, int& count) {
    power = 0.0;
    count = 0;
    for (int k = 0; k < K; ++k)
      if (bits[k]) {
        power += pc[k].g1;
        ++count;
      }
  };

  Rng rng(splitmix64(seed ^ 0xB10C5EA2CLL));
  std::vector<int> scan(K);
  std::iota(scan.begin(), scan.end(), 0);

  int iters = 0;
  bool improved = true;
  while (improved && iters < max_iters) {
    improved = false;
    ++iters;
    // deterministic seeded shuffle of the scan order
    for (int i = K - 1; i > 0; --i)
      std::swap(scan[i], scan[static_cast<int>(rng.below(i + 1))]);

    double power;
    int count;
    budget_state(x, power, count);

    // Flips 0 -> 1 (a feasible activation always improves the objective).
    for (int k : scan) {
      if (x[k] || inst.users[k].switching_gain <= 0.0) continue;
      if (count + 1 <= inst.S && power + pc[k].g1 <= inst.P) {
        x[k] = 1;
        improved = true;
        break;
      }
    }
    if (improved) continue;

    // Swaps: bring one user in, drop another, if the gain rises and the
    // budgets still hold.
    for (int in : scan) {
      if (x[in]) continue;
      for (int out : scan) {
        if (!x[out]) continue;
        double gain = inst.users[in].switching_gain - inst.users[out].switching_gain;
        if (gain <= 1e-15) continue;
        if (power - pc[out].g1 + pc[in].g1 <= inst.P) {
          x[in] = 1;
          x[out] = 0;
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
  }
  std::vector<double> p = recover_power(inst, x);
  return detail::finish_solution(inst, std::move(x), std::move(p), "local_search", t0, iters);
}

constexpr int kBruteForceMaxUsers = 22;

/// Exhaustive oracle over all binary patterns within the cardinality cap.
/// Ties break toward fewer active users, then the lexicographically
/// smallest vector. Capped at 22 users.
inline Solution solve_brute_force(const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const int K = inst.num_users();
  require(K <= kBruteForceMaxUsers,
          "solve_brute_force: " + std::to_string(K) + " users exceeds the cap of " +
              std::to_string(kBruteForceMaxUsers));
  const auto pc = detail::power_curves(inst);

  double best_gain = -1.0;
  int best_count = 0;
  std::uint64_t best_lex = 0;
  std::uint64_t best_mask = 0;

  for (std::uint64_t mask = 0; mask < (1ull << K); ++mask) {
    int count = __builtin_popcountll(mask);
    if (count > inst.S) continue;
    double power = 0.0, gain = 0.0;
    std::uint64_t lex = 0;
    for (int k = 0; k < K; ++k) {
      lex <<= 1;
      if (mask & (1ull << k)) {
        power += pc[k].g1;
        gain += inst.users[k].switching_gain;
        lex |= 1;
      }
    }
    if (power > inst.P) continue;
    bool better = gain > best_gain ||
                  (gain == best_gain &&
                   (count < best_count || (count == best_count && lex < best_lex)));
    if (better) {
      best_gain = gain;
      best_count = count;
      best_lex = lex;
      best_mask = mask;
    }
  }

  std::vector<int> x(K, 0);
  for (int k = 0; k < K; ++k) x[k] = (best_mask >> k) & 1;
  std::vector<double> p = recover_power(inst, x);
  return detail::finish_solution(inst, std::move(x), std::move(p), "brute_force", t0);
}

}  // namespace irac

#endif  // IRAC_BASELINES_HPP
