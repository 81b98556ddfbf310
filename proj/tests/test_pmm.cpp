#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "irac/baselines.hpp"
#include "irac/pmm.hpp"
#include "irac/rng.hpp"
#include "grid_oracle.hpp"
#include "support.hpp"

using namespace irac;

namespace {

std::vector<double> random_box_vector(Rng& rng, int n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

/// Instance with hand-set link parameters: gamma chosen so g_k(1) is the
/// requested power cost (with b = 1, i.e. V = (T-T0)*B).
Instance hand_instance(const std::vector<double>& gains, const std::vector<double>& g1,
                       double P, int S) {
  Instance inst;
  inst.P = P;
  inst.S = S;
  inst.T = 2.0;
  inst.T0 = 1.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    UserLink u;
    u.switching_gain = gains[k];
    u.bandwidth = 1.0;
    u.volume = 1.0;  // b = V/((T-T0)B) = 1, so g(1) = noise/gamma
    u.noise = 1.0;
    u.channel_gain = 1.0 / g1[k];  // g(1) = (2^1 - 1) * noise/gamma = g1[k]
    inst.users.push_back(u);
  }
  return inst;
}

}  // namespace

TEST_CASE("penalty formula and box domain") {
  CHECK(penalty({0.0, 1.0, 1.0, 0.0}, 0.7) == 0.0);
  CHECK(penalty(std::vector<double>(20, 0.5), 1.0) == Catch::Approx(5.0).margin(1e-15));

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    auto x = random_box_vector(rng, 12);
    double beta = std::exp(rng.uniform(-3, 3));
    double naive = 0.0;
    for (double v : x) naive += v * (1.0 - v) / beta;
    CHECK(penalty(x, beta) == Catch::Approx(naive).margin(1e-15));
  }
  CHECK_THROWS_AS(penalty({1.2}, 1.0), ValidationError);
  CHECK_THROWS_AS(penalty({0.5}, 0.0), ValidationError);
}

TEST_CASE("surrogate penalty satisfies the majorization identities") {
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    int n = 1 + static_cast<int>(rng.below(10));
    auto x = random_box_vector(rng, n);
    auto xp = random_box_vector(rng, n);
    double beta = std::exp(rng.uniform(-3, 3));

    auto [val, grad] = surrogate_penalty(x, xp, beta);

    // local equivalence at x = x_prev
    auto [val_at, grad_at] = surrogate_penalty(xp, xp, beta);
    CHECK(val_at == Catch::Approx(penalty(xp, beta)).margin(1e-12));
    for (int k = 0; k < n; ++k)
      CHECK(grad_at[k] == Catch::Approx((1.0 - 2.0 * xp[k]) / beta).margin(1e-12));

    // upper bound with the exact quadratic gap
    double gap = 0.0;
    for (int k = 0; k < n; ++k) gap += (x[k] - xp[k]) * (x[k] - xp[k]) / beta;
    CHECK(val - penalty(x, beta) == Catch::Approx(gap).margin(1e-12));
    CHECK(val + 1e-15 >= penalty(x, beta));

    // affine in x, hence midpoint-convex
    auto y = random_box_vector(rng, n);
    std::vector<double> mid(n);
    for (int k = 0; k < n; ++k) mid[k] = 0.5 * (x[k] + y[k]);
    auto [vm, gm] = surrogate_penalty(mid, xp, beta);
    auto [vy, gy] = surrogate_penalty(y, xp, beta);
    CHECK(vm <= 0.5 * (val + vy) + 1e-12);
  }
}

TEST_CASE("subproblem trivial cases") {
  SECTION("ample budgets take every negative coefficient to one") {
    Instance inst = hand_instance({0, 0, 0}, {1e-3, 1e-3, 1e-3}, 1e9, 3);
    auto res = solve_subproblem_linear(inst, {-0.5, -0.1, -2.0});
    for (double v : res.x) CHECK(v == 1.0);
    CHECK(res.kkt.max() < 1e-10);
  }
  SECTION("cardinality one picks the most negative coefficient") {
    Instance inst = hand_instance({0, 0}, {1e-3, 1e-3}, 1e9, 1);
    auto res = solve_subproblem_linear(inst, {-3.0, -1.0});
    CHECK(res.x[0] == 1.0);
    CHECK(res.x[1] == 0.0);
    CHECK(res.kkt.max() < 1e-10);
  }
  SECTION("nonnegative coefficients keep everyone at zero") {
    Instance inst = hand_instance({0, 0}, {1e-3, 1e-3}, 1e9, 2);
    auto res = solve_subproblem_linear(inst, {0.5, 0.0});
    CHECK(res.x[0] == 0.0);
    CHECK(res.x[1] == 0.0);
  }
}

TEST_CASE("subproblem matches the refined grid oracle on random instances") {
  Rng rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int K = 2 + static_cast<int>(rng.below(5));  // 2..6 users
    int S = 1 + static_cast<int>(rng.below(K));
    Instance inst = test::random_instance(K, S, 9000 + trial,
                                          std::exp(rng.uniform(-6.5, -3.5)));
    std::vector<double> a(K);
    for (int k = 0; k < K; ++k) a[k] = rng.uniform(-0.08, 0.04);

    auto res = solve_subproblem_linear(inst, a);
    double solver_obj = 0.0, power = 0.0, card = 0.0;
    for (int k = 0; k < K; ++k) {
      solver_obj += a[k] * res.x[k];
      power += min_power_for_fraction(inst.users[k], res.x[k], inst.T, inst.T0);
      card += res.x[k];
    }
    // returned point is feasible and KKT-certified
    CHECK(power <= inst.P * (1 + 1e-9));
    CHECK(card <= inst.S + 1e-9);
    CHECK(res.kkt.max() < 1e-10);

    // The grid oracle is feasibility-filtered, so it can only sit above
    // the continuous optimum; the solver must match or beat it, and the
    // KKT certificate above pins the solver to the optimum from below.
    test::SubproblemGridOracle oracle(inst, a);
    double grid_obj = oracle.solve();
    CHECK(solver_obj <= grid_obj + 1e-6);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("grid oracle itself agrees with a dense 1e-3 grid for K=2") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    Instance inst = test::random_instance(2, 2, 7100 + trial, std::exp(rng.uniform(-7, -4)));
    std::vector<double> a = {rng.uniform(-0.08, 0.02), rng.uniform(-0.08, 0.02)};
    test::SubproblemGridOracle oracle(inst, a);
    double refined = oracle.solve();

    double dense = 0.0;
    for (int i = 0; i <= 1000; ++i)
      for (int j = 0; j <= 1000; ++j) {
        double x0 = i / 1000.0, x1 = j / 1000.0;
        if (x0 + x1 > inst.S + 1e-12) continue;
        if (oracle.g(0, x0) + oracle.g(1, x1) > inst.P * (1 + 1e-12)) continue;
        dense = std::min(dense, a[0] * x0 + a[1] * x1);
      }
    CHECK(refined <= dense + 1e-12);                  // refinement must beat the dense grid
    CHECK(refined >= dense - 4e-3 * 0.08 - 1e-12);    // and stay within step resolution of it
  }
}

TEST_CASE("recover_power meets the rate constraints with equality") {
  Instance inst = test::random_instance(6, 3, 31);
  SECTION("all-local needs no power") {
    auto p = recover_power(inst, std::vector<int>(6, 0));
    for (double v : p) CHECK(v == 0.0);
  }
  SECTION("binary vectors within budget pass feasibility") {
    std::vector<int> x = {1, 0, 1, 0, 0, 0};
    Instance rich = inst;
    rich.P = 1.0;
    auto p = recover_power(rich, x);
    CHECK(check_feasibility(rich, x, p).feasible);
  }
  SECTION("fractional x: delivered bits equal the fraction exactly") {
    Rng rng(37);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x(6);
      for (auto& v : x) v = rng.uniform();
      auto p = recover_power(inst, x);
      for (int k = 0; k < 6; ++k) {
        double delivered =
            achievable_rate(inst.users[k].channel_gain, p[k], inst.users[k].noise,
                            inst.users[k].bandwidth) *
            (inst.T - inst.T0);
        CHECK(delivered == Catch::Approx(x[k] * inst.users[k].volume).epsilon(1e-9).margin(1e-12));
      }
    }
  }
}

TEST_CASE("round_and_repair restores feasibility") {
  SECTION("binary feasible input is unchanged") {
    Instance inst = hand_instance({0.05, 0.02}, {1e-3, 2e-3}, 0.01, 2);
    auto x = round_and_repair(inst, {1.0, 0.0});
    CHECK(x == std::vector<int>{1, 0});
  }
  SECTION("S = 0 forces all-local") {
    Instance inst = hand_instance({0.05, 0.02}, {1e-3, 2e-3}, 0.01, 0);
    auto x = round_and_repair(inst, {0.5, 0.5});
    CHECK(x == std::vector<int>{0, 0});
  }
  SECTION("power admits only one user: the better gain-per-watt stays") {
    // user 0: L/g = 0.05/0.004 = 12.5 ; user 1: L/g = 0.03/0.001 = 30
    Instance inst = hand_instance({0.05, 0.03}, {4e-3, 1e-3}, 4.5e-3, 2);
    auto x = round_and_repair(inst, {0.9, 0.9});
    // enumeration: {1,0} costs 4e-3 (fits), {0,1} costs 1e-3 (fits), both = 5e-3 (no)
    CHECK(x == std::vector<int>{0, 1});
    auto p = recover_power(inst, x);
    CHECK(check_feasibility(inst, x, p).feasible);
  }
}

TEST_CASE("pmm_solve trivial instances") {
  SECTION("zero gains everywhere stay local") {
    Instance inst = hand_instance({0.0, 0.0, 0.0}, {1e-3, 1e-3, 1e-3}, 0.01, 3);
    Solution s = pmm_solve(inst);
    CHECK(s.x == std::vector<int>{0, 0, 0});
    CHECK(s.objective_P1 == 0.0);
    CHECK(s.feasibility.feasible);
  }
  SECTION("ample budgets collaborate everyone with positive gain") {
    Instance inst = hand_instance({0.02, 0.03}, {1e-3, 1e-3}, 1e6, 2);
    Solution s = pmm_solve(inst);
    CHECK(s.x == std::vector<int>{1, 1});
    CHECK(s.objective_P1 == Catch::Approx(0.0).margin(1e-15));
    for (int k = 0; k < 2; ++k) CHECK(s.p[k] > 0.0);
  }
}

TEST_CASE("pmm_solve is deterministic and feasible with zero power on local users") {
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = test::random_instance(12, 6, 5500 + trial);
    Solution s1 = pmm_solve(inst);
    Solution s2 = pmm_solve(inst);
    CHECK(s1.x == s2.x);
    CHECK(s1.p == s2.p);
    CHECK(s1.objective_P1 == s2.objective_P1);
    CHECK(s1.feasibility.feasible);
    for (int k = 0; k < 12; ++k)
      if (s1.x[k] == 0) CHECK(s1.p[k] == 0.0);
  }
}

TEST_CASE("pmm trace is non-increasing within each penalty epoch") {
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = test::random_instance(10, 5, 6600 + trial);
    Solution s = pmm_solve(inst);
    for (std::size_t i = 1; i < s.surrogate_trace.size(); ++i) {
      if (s.surrogate_trace[i].beta == s.surrogate_trace[i - 1].beta)
        CHECK(s.surrogate_trace[i].objective <=
              s.surrogate_trace[i - 1].objective + 1e-9);
    }
    CHECK(s.status == "ok");
  }
}

TEST_CASE("pmm lands within 5% of the brute-force optimum") {
  int close = 0, total = 30;
  for (int trial = 0; trial < total; ++trial) {
    Instance inst = test::random_instance(10, 5, 8800 + trial);
    Solution pmm = pmm_solve(inst);
    Solution opt = solve_brute_force(inst);
    CHECK(pmm.objective_P1 >= opt.objective_P1 - 1e-9);
    if (pmm.objective_P1 <= opt.objective_P1 * 1.05 + 1e-12) ++close;
  }
  CHECK(close >= total * 9 / 10);
}
