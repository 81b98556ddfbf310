#ifndef IRAC_TESTS_SUPPORT_HPP
#define IRAC_TESTS_SUPPORT_HPP

#include <cstdint>

#include "irac/instance.hpp"
#include "irac/rng.hpp"

namespace irac::test {

/// Smaller-antenna variant of the default scenario so unit tests generate
/// instances quickly; the channel statistics stay realistic.
inline ScenarioConfig small_scenario(int users, int max_collab, std::uint64_t seed,
                                     double power_watts = 10e-3) {
  ScenarioConfig cfg;
  cfg.num_users = users;
  cfg.max_collab = max_collab;
  cfg.num_antennas = 64;
  cfg.power_budget = power_watts;
  cfg.seed = seed;
  return cfg;
}

inline Instance random_instance(int users, int max_collab, std::uint64_t seed,
                                double power_watts = 10e-3) {
  return generate_instance(small_scenario(users, max_collab, seed, power_watts), 0);
}

}  // namespace irac::test

#endif  // IRAC_TESTS_SUPPORT_HPP
