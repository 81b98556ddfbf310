#ifndef IRAC_INSTANCE_HPP
#define IRAC_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "irac/common.hpp"
#include "irac/metrics.hpp"
#include "irac/rng.hpp"

namespace irac {

// -------------------------------------------------------------------------
// Configuration types
// -------------------------------------------------------------------------

/// Latent rendering-quality model. Mean losses anchor to the measured
/// large/small model benchmark (0.029 edge / 0.041 local); per-user values
/// jitter lognormally around them.
struct QualityConfig {
  double mean_loss_edge = 0.029;
  double mean_loss_local = 0.041;
  double loss_jitter = 0.15;  // relative std of the lognormal jitter
  double psnr_calib_A = psnr_calibration_intercept();  // dB
  double psnr_calib_B = psnr_calibration_slope();      // dB per decade
};

/// Scenario parameters in SI units (watts, hertz, seconds, bits, meters).
/// Defaults are the benchmark profile: K=20 users, N=600 antennas,
/// S=10 edge slots, 100x100 m^2 area, pathloss exponent 3, noise -70 dBm,
/// 2 MHz per user, 60 ms deadline with 6.5 ms edge render time.
struct ScenarioConfig {
  int num_users = 20;
  int num_antennas = 600;
  int max_collab = 10;
  double area_side = 100.0;
  double pathloss_exponent = 3.0;
  double noise_power = 1e-10;  // watts (-70 dBm)
  double bandwidth = 2e6;      // Hz per user
  double data_volume = 1.5e6;  // bits per frame (documented default; unmeasured)
  double deadline = 60e-3;     // seconds (T)
  double edge_render_time = 6.5e-3;   // seconds (T0)
  double local_render_time = 16.7e-3; // seconds, reporting only
  double power_budget = 10e-3;        // watts
  double loss_weight = 0.2;           // lambda in the rendering error
  QualityConfig quality;
  std::uint64_t seed = 1;
};

/// Per-user latent quality values, all derived from one scenario draw.
struct QualityProfile {
  std::vector<double> loss_local;      // L(Phi_k(s), truth)
  std::vector<double> loss_edge;       // L(Phi_edge(s), truth)
  std::vector<double> switching_gain;  // L(Phi_edge(s), Phi_k(s))
  std::vector<double> psnr_local;      // dB
  std::vector<double> psnr_edge;       // dB
  int size() const { return static_cast<int>(loss_local.size()); }
};

/// One user's link and gain data.
struct UserLink {
  double switching_gain = 0.0;  // L_k, unitless
  double channel_gain = 0.0;    // gamma_k = ||h_k||^2, power gain
  double bandwidth = 0.0;       // Hz
  double volume = 0.0;          // bits
  double noise = 0.0;           // watts
};

/// One collaboration/power-allocation problem.
struct Instance {
  std::vector<UserLink> users;
  double P = 0.0;   // watts, total edge transmit budget
  int S = 0;        // max collaborating users
  double T = 0.0;   // seconds, end-to-end deadline
  double T0 = 0.0;  // seconds, edge render time
  double local_render_time = 16.7e-3;  // seconds, reporting only
  std::optional<QualityProfile> quality;
  std::uint64_t seed = 0;

  int num_users() const { return static_cast<int>(users.size()); }
};

// -------------------------------------------------------------------------
// Validation
// -------------------------------------------------------------------------

inline std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> v;
  if (c.num_users < 1) v.push_back("num_users must be >= 1");
  if (c.num_antennas < 1) v.push_back("num_antennas must be >= 1");
  if (c.max_collab < 0) v.push_back("max_collab must be >= 0");
  if (!(c.deadline > c.edge_render_time)) v.push_back("deadline must exceed edge_render_time");
  if (!(c.edge_render_time > 0)) v.push_back("edge_render_time must be positive");
  if (!(c.power_budget > 0)) v.push_back("power_budget must be positive");
  if (!(c.noise_power > 0)) v.push_back("noise_power must be positive");
  if (!(c.bandwidth > 0)) v.push_back("bandwidth must be positive");
  if (!(c.data_volume > 0)) v.push_back("data_volume must be positive");
  if (!(c.loss_weight >= 0 && c.loss_weight < 1)) v.push_back("loss_weight must be in [0,1)");
  if (!(c.quality.mean_loss_edge > 0 && c.quality.mean_loss_edge < c.quality.mean_loss_local &&
        c.quality.mean_loss_local < 1))
    v.push_back("quality means must satisfy 0 < mean_loss_edge < mean_loss_local < 1");
  if (!(c.quality.loss_jitter >= 0)) v.push_back("loss_jitter must be >= 0");
  return v;
}

/// Returns the list of violated invariants (empty = valid). Never throws.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> v;
  if (inst.users.empty()) v.push_back("instance has no users");
  for (int k = 0; k < inst.num_users(); ++k) {
    const auto& u = inst.users[k];
    auto tag = [k](const char* field) {
      return "user " + std::to_string(k) + ": " + field;
    };
    if (!(u.channel_gain > 0) || !std::isfinite(u.channel_gain))
      v.push_back(tag("channel_gain must be positive and finite"));
    if (!(u.switching_gain >= 0) || !std::isfinite(u.switching_gain))
      v.push_back(tag("switching_gain must be >= 0"));
    if (!(u.bandwidth > 0)) v.push_back(tag("bandwidth must be positive"));
    if (!(u.volume > 0)) v.push_back(tag("volume must be positive"));
    if (!(u.noise > 0)) v.push_back(tag("noise must be positive"));
  }
  if (!(inst.T > inst.T0)) v.push_back("deadline T must exceed edge render time T0");
  if (!(inst.T0 > 0)) v.push_back("T0 must be positive");
  if (!(inst.P > 0)) v.push_back("power budget P must be positive");
  if (inst.S < 0) v.push_back("collaboration cap S must be >= 0");
  if (inst.quality) {
    const auto& q = *inst.quality;
    if (q.size() != inst.num_users()) v.push_back("quality profile size != num_users");
    for (int k = 0; k < q.size() && k < inst.num_users(); ++k) {
      double lo = std::fabs(q.loss_local[k] - q.loss_edge[k]);
      double hi = q.loss_local[k] + q.loss_edge[k];
      if (!(q.switching_gain[k] >= lo - 1e-12 && q.switching_gain[k] <= hi + 1e-12))
        v.push_back("user " + std::to_string(k) + ": switching_gain violates triangle bounds");
    }
  }
  return v;
}

// -------------------------------------------------------------------------
// Generation
//
// Stream layout for one instance (seeded by derive_seed(seed, run_index)):
//   1. K positions, two uniforms each (x, then y)
//   2. per user, 2*N standard normals for the channel vector entries
//   3. per user, quality draws: loss_edge, then loss_local attempts, then
//      the switching-gain uniform
// -------------------------------------------------------------------------

/// Draws per-user quality values. loss_local is resampled (up to 100
/// attempts) until it exceeds loss_edge, then clamped to the mean ratio as
/// a last resort. The switching gain is uniform within its triangle bounds.
inline QualityProfile sample_quality_profile(Rng& rng, const QualityConfig& qc, int K) {
  require(qc.mean_loss_edge > 0 && qc.mean_loss_edge < qc.mean_loss_local &&
              qc.mean_loss_local < 1 && qc.loss_jitter >= 0,
          "sample_quality_profile: invalid QualityConfig");
  QualityProfile q;
  q.loss_local.resize(K);
  q.loss_edge.resize(K);
  q.switching_gain.resize(K);
  q.psnr_local.resize(K);
  q.psnr_edge.resize(K);
  const double cap = 1.0 - 1e-9;
  for (int k = 0; k < K; ++k) {
    double le = std::min(cap, rng.lognormal_mean_relstd(qc.mean_loss_edge, qc.loss_jitter));
    double ll = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      ll = rng.lognormal_mean_relstd(qc.mean_loss_local, qc.loss_jitter);
      if (ll > le) {
        ok = true;
        break;
      }
    }
    if (!ok) ll = le * (qc.mean_loss_local / qc.mean_loss_edge);
    ll = std::min(cap, ll);
    double lo = std::fabs(ll - le), hi = ll + le;
    double gain = rng.uniform(lo, hi);
    q.loss_edge[k] = le;
    q.loss_local[k] = ll;
    q.switching_gain[k] = gain;
    q.psnr_edge[k] = psnr_from_loss(le, qc.psnr_calib_A, qc.psnr_calib_B);
    q.psnr_local[k] = psnr_from_loss(ll, qc.psnr_calib_A, qc.psnr_calib_B);
  }
  return q;
}

/// Generates one random scenario: users uniform in the square, edge server
/// at the origin, Rayleigh channel vectors with pathloss d^-alpha (distance
/// clamped below at 1 m), and a sampled quality profile. Pure function of
/// (config, run_index).
inline Instance generate_instance(const ScenarioConfig& cfg, std::uint64_t run_index) {
  auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::string msg = "generate_instance: invalid config:";
    for (const auto& s : violations) msg += "\n  - " + s;
    throw ValidationError(msg);
  }
  Rng rng(derive_seed(cfg.seed, run_index));
  const int K = cfg.num_users;
  const int N = cfg.num_antennas;

  std::vector<double> dist(K);
  for (int k = 0; k < K; ++k) {
    double x = rng.uniform(0.0, cfg.area_side);
    double y = rng.uniform(0.0, cfg.area_side);
    dist[k] = std::max(1.0, std::hypot(x, y));  // far-field clamp at 1 m
  }

  Instance inst;
  inst.users.resize(K);
  inst.P = cfg.power_budget;
  inst.S = cfg.max_collab;
  inst.T = cfg.deadline;
  inst.T0 = cfg.edge_render_time;
  inst.local_render_time = cfg.local_render_time;
  inst.seed = derive_seed(cfg.seed, run_index);

  for (int k = 0; k < K; ++k) {
    double rho = std::pow(dist[k], -cfg.pathloss_exponent);
    // ||h_k||^2 with h entries CN(0, rho): each entry is re + i*im with
    // re, im ~ N(0, rho/2).
    double scale = std::sqrt(rho / 2.0);
    double gamma = 0.0;
    for (int a = 0; a < N; ++a) {
      double re = scale * rng.normal();
      double im = scale * rng.normal();
      gamma += re * re + im * im;
    }
    auto& u = inst.users[k];
    u.channel_gain = gamma;
    u.bandwidth = cfg.bandwidth;
    u.volume = cfg.data_volume;
    u.noise = cfg.noise_power;
  }

  QualityProfile q = sample_quality_profile(rng, cfg.quality, K);
  for (int k = 0; k < K; ++k) inst.users[k].switching_gain = q.switching_gain[k];
  inst.quality = std::move(q);
  return inst;
}

// -------------------------------------------------------------------------
// JSON serialization ("irac-instance/1", "irac-scenario/1")
// -------------------------------------------------------------------------

inline nlohmann::json to_json(const QualityConfig& qc) {
  return {{"mean_loss_edge", qc.mean_loss_edge},
          {"mean_loss_local", qc.mean_loss_local},
          {"loss_jitter", qc.loss_jitter},
          {"psnr_calib_A", qc.psnr_calib_A},
          {"psnr_calib_B", qc.psnr_calib_B}};
}

inline QualityConfig quality_config_from_json(const nlohmann::json& j) {
  QualityConfig qc;
  qc.mean_loss_edge = j.value("mean_loss_edge", qc.mean_loss_edge);
  qc.mean_loss_local = j.value("mean_loss_local", qc.mean_loss_local);
  qc.loss_jitter = j.value("loss_jitter", qc.loss_jitter);
  qc.psnr_calib_A = j.value("psnr_calib_A", qc.psnr_calib_A);
  qc.psnr_calib_B = j.value("psnr_calib_B", qc.psnr_calib_B);
  return qc;
}

inline nlohmann::json to_json(const ScenarioConfig& c) {
  return {{"schema", "irac-scenario/1"},
          {"num_users", c.num_users},
          {"num_antennas", c.num_antennas},
          {"max_collab", c.max_collab},
          {"area_side", c.area_side},
          {"pathloss_exponent", c.pathloss_exponent},
          {"noise_power", c.noise_power},
          {"bandwidth", c.bandwidth},
          {"data_volume", c.data_volume},
          {"deadline", c.deadline},
          {"edge_render_time", c.edge_render_time},
          {"local_render_time", c.local_render_time},
          {"power_budget", c.power_budget},
          {"loss_weight", c.loss_weight},
          {"quality_config", to_json(c.quality)},
          {"seed", c.seed}};
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

/// Parses a scenario on top of the defaults; unknown keys are rejected so
/// typos fail loudly. Accepts "noise_power_dbm" and "power_budget_mw" as
/// convenience units (the benchmark scenario is quoted in dBm / mW).
inline ScenarioConfig scenario_config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "schema", "num_users", "num_antennas", "max_collab", "area_side",
      "pathloss_exponent", "noise_power", "noise_power_dbm", "bandwidth",
      "data_volume", "deadline", "edge_render_time", "local_render_time",
      "power_budget", "power_budget_mw", "loss_weight", "quality_config", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const auto& k : known) found |= (it.key() == k);
    require(found, "scenario config: unknown field '" + it.key() + "'");
  }
  ScenarioConfig c;
  c.num_users = j.value("num_users", c.num_users);
  c.num_antennas = j.value("num_antennas", c.num_antennas);
  c.max_collab = j.value("max_collab", c.max_collab);
  c.area_side = j.value("area_side", c.area_side);
  c.pathloss_exponent = j.value("pathloss_exponent", c.pathloss_exponent);
  c.noise_power = j.value("noise_power", c.noise_power);
  if (j.contains("noise_power_dbm")) c.noise_power = dbm_to_watts(j["noise_power_dbm"].get<double>());
  c.bandwidth = j.value("bandwidth", c.bandwidth);
  c.data_volume = j.value("data_volume", c.data_volume);
  c.deadline = j.value("deadline", c.deadline);
  c.edge_render_time = j.value("edge_render_time", c.edge_render_time);
  c.local_render_time = j.value("local_render_time", c.local_render_time);
  c.power_budget = j.value("power_budget", c.power_budget);
  if (j.contains("power_budget_mw")) c.power_budget = j["power_budget_mw"].get<double>() * 1e-3;
  c.loss_weight = j.value("loss_weight", c.loss_weight);
  if (j.contains("quality_config")) c.quality = quality_config_from_json(j["quality_config"]);
  c.seed = j.value("seed", c.seed);
  return c;
}

inline nlohmann::json to_json(const QualityProfile& q) {
  return {{"loss_local", q.loss_local},
          {"loss_edge", q.loss_edge},
          {"switching_gain", q.switching_gain},
          {"psnr_local", q.psnr_local},
          {"psnr_edge", q.psnr_edge}};
}

inline QualityProfile quality_profile_from_json(const nlohmann::json& j) {
  QualityProfile q;
  q.loss_local = j.at("loss_local").get<std::vector<double>>();
  q.loss_edge = j.at("loss_edge").get<std::vector<double>>();
  q.switching_gain = j.at("switching_gain").get<std::vector<double>>();
  q.psnr_local = j.at("psnr_local").get<std::vector<double>>();
  q.psnr_edge = j.at("psnr_edge").get<std::vector<double>>();
  require(q.loss_local.size() == q.loss_edge.size() &&
              q.loss_local.size() == q.switching_gain.size() &&
              q.loss_local.size() == q.psnr_local.size() &&
              q.loss_local.size() == q.psnr_edge.size(),
          "quality profile: field lengths differ");
  return q;
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : inst.users)
    users.push_back({{"switching_gain", u.switching_gain},
                     {"channel_gain", u.channel_gain},
                     {"bandwidth", u.bandwidth},
                     {"volume", u.volume},
                     {"noise", u.noise}});
  nlohmann::json j = {{"schema", "irac-instance/1"},
                      {"seed", inst.seed},
                      {"P", inst.P},
                      {"S", inst.S},
                      {"T", inst.T},
                      {"T0", inst.T0},
                      {"local_render_time", inst.local_render_time},
                      {"users", users}};
  if (inst.quality) j["quality_profile"] = to_json(*inst.quality);
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  require(j.value("schema", "") == std::string("irac-instance/1"),
          "instance: missing or unsupported schema field (want irac-instance/1)");
  Instance inst;
  inst.seed = j.value("seed", std::uint64_t{0});
  inst.P = j.at("P").get<double>();
  inst.S = j.at("S").get<int>();
  inst.T = j.at("T").get<double>();
  inst.T0 = j.at("T0").get<double>();
  inst.local_render_time = j.value("local_render_time", 16.7e-3);
  for (const auto& ju : j.at("users")) {
    UserLink u;
    u.switching_gain = ju.at("switching_gain").get<double>();
    u.channel_gain = ju.at("channel_gain").get<double>();
    u.bandwidth = ju.at("bandwidth").get<double>();
    u.volume = ju.at("volume").get<double>();
    u.noise = ju.at("noise").get<double>();
    inst.users.push_back(u);
  }
  if (j.contains("quality_profile"))
    inst.quality = quality_profile_from_json(j["quality_profile"]);
  return inst;
}

/// Stable fingerprint of an instance; keys in nlohmann objects are sorted,
/// so the dump is canonical.
inline std::uint64_t instance_hash(const Instance& inst) {
  return fnv1a(to_json(inst).dump());
}

}  // namespace irac

#endif  // IRAC_INSTANCE_HPP
