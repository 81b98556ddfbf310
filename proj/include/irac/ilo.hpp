#ifndef IRAC_ILO_HPP
#define IRAC_ILO_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "irac/common.hpp"
#include "irac/instance.hpp"
#include "irac/pmm.hpp"
#include "irac/rng.hpp"
#include "irac/solution.hpp"

namespace irac {

// =========================================================================
// Imitation learning fast path: a three-layer MLP (100/72/K units, ReLU)
// trained with focal loss and AdamW to predict the collaboration bits of
// the penalty-MM solver. Powers are recovered analytically, so the network
// only predicts x.
// =========================================================================

// -------------------------------------------------------------------------
// Features
// -------------------------------------------------------------------------

/// Raw per-user features (switching gain, log10 channel gain), flattened in
/// user order: user k occupies slots (2k, 2k+1). The log keeps the channel
/// feature within a few units under pathloss spreads of many decades.
inline std::vector<double> feature_encode(const Instance& inst) {
  std::vector<double> f(2 * inst.num_users());
  for (int k = 0; k < inst.num_users(); ++k) {
    const auto& u = inst.users[k];
    require(u.channel_gain > 0, "feature_encode: channel gain must be positive");
    require(std::isfinite(u.switching_gain), "feature_encode: non-finite switching gain");
    f[2 * k] = u.switching_gain;
    f[2 * k + 1] = std::log10(u.channel_gain);
  }
  return f;
}

/// Per-feature z-score statistics fitted on the training split.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> std;

  static FeatureStats identity(int dim) {
    FeatureStats s;
    s.mean.assign(dim, 0.0);
    s.std.assign(dim, 1.0);
    return s;
  }

  static FeatureStats fit(const std::vector<std::vector<double>>& rows) {
    require(!rows.empty(), "FeatureStats::fit: empty feature set");
    const std::size_t dim = rows[0].size();
    FeatureStats s;
    s.mean.assign(dim, 0.0);
    s.std.assign(dim, 0.0);
    for (const auto& r : rows)
      for (std::size_t j = 0; j < dim; ++j) s.mean[j] += r[j];
    for (auto& m : s.mean) m /= static_cast<double>(rows.size());
    for (const auto& r : rows)
      for (std::size_t j = 0; j < dim; ++j) {
        double d = r[j] - s.mean[j];
        s.std[j] += d * d;
      }
    for (auto& v : s.std) {
      v = std::sqrt(v / static_cast<double>(rows.size()));
      if (v < 1e-12) v = 1.0;  // constant feature: leave it centered only
    }
    return s;
  }

  std::vector<double> normalize(const std::vector<double>& f) const {
    require(f.size() == mean.size(), "FeatureStats: dimension mismatch");
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = (f[j] - mean[j]) / std[j];
    return out;
  }

  std::vector<double> denormalize(const std::vector<double>& f) const {
    require(f.size() == mean.size(), "FeatureStats: dimension mismatch");
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j] * std[j] + mean[j];
    return out;
  }
};

// -------------------------------------------------------------------------
// Model
// -------------------------------------------------------------------------

struct MlpModel {
  std::vector<int> layer_sizes;               // e.g. {2K, 100, 72, K}
  std::vector<std::vector<double>> weights;   // per layer, row-major (out x in)
  std::vector<std::vector<double>> biases;    // per layer
  FeatureStats stats;
  double threshold = 0.5;
  std::uint64_t train_digest = 0;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int layer_count() const { return static_cast<int>(layer_sizes.size()) - 1; }
};

/// Glorot-uniform initialized model for the given layer sizes.
inline MlpModel mlp_init(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  require(layer_sizes.size() >= 2, "mlp_init: need at least one layer");
  MlpModel m;
  m.layer_sizes = layer_sizes;
  m.stats = FeatureStats::identity(layer_sizes.front());
  Rng rng(splitmix64(seed ^ 0x11f0c0de));
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    int fan_in = layer_sizes[l], fan_out = layer_sizes[l + 1];
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
    for (auto& v : w) v = rng.uniform(-bound, bound);
    m.weights.push_back(std::move(w));
    m.biases.push_back(std::vector<double>(fan_out, 0.0));
  }
  return m;
}

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Forward pass keeping pre-activations for backprop. `input` must already
/// be normalized.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // a[0] = input, ..., a[L] = scores
  std::vector<std::vector<double>> pre;          // z per layer
};

inline void mlp_forward_traced(const MlpModel& m, const std::vector<double>& input,
                               ForwardTrace& t) {
  const int L = m.layer_count();
  t.activations.assign(L + 1, {});
  t.pre.assign(L, {});
  t.activations[0] = input;
  for (int l = 0; l < L; ++l) {
    const int in = m.layer_sizes[l], out = m.layer_sizes[l + 1];
    std::vector<double>& z = t.pre[l];
    z.assign(out, 0.0);
    const auto& a = t.activations[l];
    for (int i = 0; i < out; ++i) {
      double acc = m.biases[l][i];
      const double* wrow = m.weights[l].data() + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) acc += wrow[j] * a[j];
      z[i] = acc;
    }
    std::vector<double>& an = t.activations[l + 1];
    an.resize(out);
    if (l + 1 < L)
      for (int i = 0; i < out; ++i) an[i] = z[i] > 0.0 ? z[i] : 0.0;  // ReLU
    else
      for (int i = 0; i < out; ++i) an[i] = logistic(z[i]);
  }
}

}  // namespace detail

/// Per-user collaboration scores in (0,1). Features are raw (as from
/// feature_encode); normalization is applied internally from the model's
/// fitted statistics.
inline std::vector<double> mlp_forward(const MlpModel& m, const std::vector<double>& features) {
  require(static_cast<int>(features.size()) == m.input_size(),
          "mlp_forward: feature length does not match the input layer");
  detail::ForwardTrace t;
  detail::mlp_forward_traced(m, m.stats.normalize(features), t);
  return t.activations.back();
}

// -------------------------------------------------------------------------
// Focal loss
// -------------------------------------------------------------------------

constexpr double kScoreClamp = 1e-7;

/// Mean focal loss over all entries: -alpha_t (1 - p_t)^gamma log(p_t)
/// with p_t the predicted probability of the true class. Scores at exactly
/// 0 or 1 are clamped to [1e-7, 1 - 1e-7].
inline double focal_loss(const std::vector<double>& scores, const std::vector<int>& labels,
                         double gamma_f, double alpha) {
  require(scores.size() == labels.size() && !scores.empty(), "focal_loss: size mismatch");
  require(gamma_f >= 0.0 && alpha > 0.0 && alpha < 1.0, "focal_loss: invalid parameters");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    require(labels[i] == 0 || labels[i] == 1, "focal_loss: labels must be binary");
    double s = std::clamp(scores[i], kScoreClamp, 1.0 - kScoreClamp);
    double pt = labels[i] == 1 ? s : 1.0 - s;
    double at = labels[i] == 1 ? alpha : 1.0 - alpha;
    total += -at * std::pow(1.0 - pt, gamma_f) * std::log(pt);
  }
  return total / static_cast<double>(scores.size());
}

namespace detail {

/// d(loss entry)/d(score), without the 1/n batch factor.
inline double focal_grad_entry(double score, int label, double gamma_f, double alpha) {
  double s = std::clamp(score, kScoreClamp, 1.0 - kScoreClamp);
  double pt = label == 1 ? s : 1.0 - s;
  double at = label == 1 ? alpha : 1.0 - alpha;
  // d/dpt of -at (1-pt)^g log(pt)
  double d = -at * std::pow(1.0 - pt, gamma_f) / pt;
  if (gamma_f > 0.0) d += at * gamma_f * std::pow(1.0 - pt, gamma_f - 1.0) * std::log(pt);
  return label == 1 ? d : -d;  // dpt/ds = +1 or -1
}

}  // namespace detail

// -------------------------------------------------------------------------
// Dataset
// -------------------------------------------------------------------------

struct DatasetSample {
  std::uint64_t seed = 0;            // stream seed of the generated instance
  std::uint32_t index = 0;           // run index within the dataset scenario
  std::vector<double> features;      // raw feature_encode output
  std::vector<int> labels;           // collaboration bits from pmm_solve
  std::vector<double> powers;        // transmit powers from pmm_solve
};

struct Dataset {
  ScenarioConfig scenario;
  std::vector<DatasetSample> samples;
  int skipped = 0;  // samples dropped because the solver failed

  int num_users() const { return scenario.num_users; }
  std::size_t size() const { return samples.size(); }
};

/// Runs the demonstration generator: n independent instances solved by
/// penalty-MM. Deterministic per (scenario.seed, n); parallel across
/// samples. Solver failures are skipped and counted.
inline Dataset generate_dataset(const ScenarioConfig& scenario, int n_samples,
                                const PmmParams& params = {}) {
  Dataset ds;
  ds.scenario = scenario;
  std::vector<DatasetSample> slots(n_samples);
  std::vector<char> ok(n_samples, 0);
  parallel_for(n_samples, [&](std::size_t i) {
    try {
      Instance inst = generate_instance(scenario, i);
      Solution sol = pmm_solve(inst, params);
      DatasetSample& s = slots[i];
      s.seed = inst.seed;
      s.index = static_cast<std::uint32_t>(i);
      s.features = feature_encode(inst);
      s.labels = sol.x;
      s.powers = sol.p;
      ok[i] = 1;
    } catch (const std::exception&) {
      ok[i] = 0;
    }
  });
  for (int i = 0; i < n_samples; ++i) {
    if (ok[i])
      ds.samples.push_back(std::move(slots[i]));
    else
      ++ds.skipped;
  }
  return ds;
}

inline void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_dataset: cannot write " + path);
  nlohmann::json header = {{"schema", "irac-dataset/1"},
                           {"num_users", ds.scenario.num_users},
                           {"count", ds.samples.size()},
                           {"skipped", ds.skipped},
                           {"scenario", to_json(ds.scenario)}};
  out << header.dump() << "\n";
  for (const auto& s : ds.samples) {
    nlohmann::json row = {{"index", s.index},
                          {"seed", s.seed},
                          {"features", s.features},
                          {"labels", s.labels},
                          {"powers", s.powers}};
    out << row.dump() << "\n";
  }
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_dataset: cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "load_dataset: empty file");
  nlohmann::json header = nlohmann::json::parse(line);
  require(header.value("schema", "") == std::string("irac-dataset/1"),
          "load_dataset: missing or unsupported schema (want irac-dataset/1)");
  Dataset ds;
  ds.scenario = scenario_config_from_json(header.at("scenario"));
  ds.skipped = header.value("skipped", 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    DatasetSample s;
    s.index = row.at("index").get<std::uint32_t>();
    s.seed = row.at("seed").get<std::uint64_t>();
    s.features = row.at("features").get<std::vector<double>>();
    s.labels = row.at("labels").get<std::vector<int>>();
    s.powers = row.at("powers").get<std::vector<double>>();
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

namespace detail {

/// Deterministic completion shared with the demonstrating solver: repair
/// to feasibility, then consume leftover budget largest-gain-first. The
/// demonstrations were produced with the same completion, so reproducing
/// it on the network's candidate removes the systematic under-selection
/// that thresholding alone leaves behind.
inline std::vector<int> repair_and_fill(const Instance& inst, const std::vector<double>& cand) {
  std::vector<int> x = round_and_repair(inst, cand);
  const auto pc = power_curves(inst);
  std::vector<int> order(inst.num_users());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (inst.users[i].switching_gain != inst.users[j].switching_gain)
      return inst.users[i].switching_gain > inst.users[j].switching_gain;
    return i < j;
  });
  greedy_fill(inst, pc, order, x);
  return x;
}

}  // namespace detail

// -------------------------------------------------------------------------
// Training
// -------------------------------------------------------------------------

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 6e-4;
  int batch_size = 96;
  double weight_decay = 1e-2;
  double focal_gamma = 2.0;
  double focal_alpha = 0.25;
  bool calibrate_threshold = true;  // fit the decision threshold on the train split
  std::uint64_t seed = 1;
};

struct EpochStats {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_loss = 0.0;
  double test_accuracy = 0.0;
};

namespace detail {

struct AdamState {
  std::vector<std::vector<double>> mw, vw, mb, vb;
  long t = 0;
};

/// Loss and per-user-bit accuracy of the model over a sample set.
inline std::pair<double, double> dataset_eval(const MlpModel& m, const Dataset& ds,
                                              double gamma_f, double alpha) {
  if (ds.samples.empty()) return {0.0, 0.0};
  double loss = 0.0;
  long correct = 0, total = 0;
  for (const auto& s : ds.samples) {
    auto scores = mlp_forward(m, s.features);
    loss += focal_loss(scores, s.labels, gamma_f, alpha);
    for (std::size_t k = 0; k < scores.size(); ++k) {
      correct += ((scores[k] >= 0.5) == (s.labels[k] == 1)) ? 1 : 0;
      ++total;
    }
  }
  return {loss / static_cast<double>(ds.samples.size()),
          static_cast<double>(correct) / static_cast<double>(total)};
}

/// Backpropagates one sample; gradients are accumulated (no batch factor).
inline double backprop_sample(const MlpModel& m, const std::vector<double>& norm_features,
                              const std::vector<int>& labels, double gamma_f, double alpha,
                              std::vector<std::vector<double>>& gw,
                              std::vector<std::vector<double>>& gb) {
  const int L = m.layer_count();
  ForwardTrace t;
  mlp_forward_traced(m, norm_features, t);
  const auto& scores = t.activations[L];
  double loss = focal_loss(scores, labels, gamma_f, alpha);

  // output layer delta: dL/ds * s(1-s), without the 1/n factors
  std::vector<double> delta(m.output_size());
  for (int i = 0; i < m.output_size(); ++i) {
    double s = scores[i];
    delta[i] = focal_grad_entry(s, labels[i], gamma_f, alpha) * s * (1.0 - s) /
               static_cast<double>(m.output_size());
  }
  for (int l = L - 1; l >= 0; --l) {
    const int in = m.layer_sizes[l], out = m.layer_sizes[l + 1];
    const auto& a = t.activations[l];
    for (int i = 0; i < out; ++i) {
      double d = delta[i];
      gb[l][i] += d;
      double* grow = gw[l].data() + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) grow[j] += d * a[j];
    }
    if (l > 0) {
      std::vector<double> prev(in, 0.0);
      for (int i = 0; i < out; ++i) {
        double d = delta[i];
        const double* wrow = m.weights[l].data() + static_cast<std::size_t>(i) * in;
        for (int j = 0; j < in; ++j) prev[j] += d * wrow[j];
      }
      for (int j = 0; j < in; ++j)
        if (t.pre[l - 1][j] <= 0.0) prev[j] = 0.0;  // ReLU gate
      delta = std::move(prev);
    }
  }
  return loss;
}

}  // namespace detail

/// Mini-batch AdamW on focal loss with decoupled weight decay (applied to
/// weight matrices only). Deterministic for a fixed config seed. The
/// history records per-epoch train/test loss and per-user-bit accuracy
/// (test columns are zero when no test set is supplied).
inline std::pair<MlpModel, std::vector<EpochStats>> train(const Dataset& train_set,
                                                          const Dataset& test_set,
                                                          const TrainConfig& cfg) {
  require(!train_set.samples.empty(), "train: empty dataset");
  require(cfg.epochs > 0 && cfg.learning_rate > 0 && cfg.batch_size > 0 &&
              cfg.weight_decay >= 0 && cfg.focal_gamma >= 0 && cfg.focal_alpha > 0 &&
              cfg.focal_alpha < 1,
          "train: invalid TrainConfig");
  const int K = static_cast<int>(train_set.samples[0].labels.size());
  const int in_dim = static_cast<int>(train_set.samples[0].features.size());

  MlpModel model = mlp_init({in_dim, 100, 72, K}, cfg.seed);
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(train_set.samples.size());
    for (const auto& s : train_set.samples) rows.push_back(s.features);
    model.stats = FeatureStats::fit(rows);
    model.train_digest = fnv1a(nlohmann::json({{"epochs", cfg.epochs},
                                               {"lr", cfg.learning_rate},
                                               {"batch", cfg.batch_size},
                                               {"wd", cfg.weight_decay},
                                               {"fg", cfg.focal_gamma},
                                               {"fa", cfg.focal_alpha},
                                               {"seed", cfg.seed}})
                                   .dump());
  }
  // normalize once up front
  std::vector<std::vector<double>> norm(train_set.samples.size());
  for (std::size_t i = 0; i < train_set.samples.size(); ++i)
    norm[i] = model.stats.normalize(train_set.samples[i].features);

  detail::AdamState st;
  const int L = model.layer_count();
  st.mw.resize(L);
  st.vw.resize(L);
  st.mb.resize(L);
  st.vb.resize(L);
  std::vector<std::vector<double>> gw(L), gb(L);
  for (int l = 0; l < L; ++l) {
    st.mw[l].assign(model.weights[l].size(), 0.0);
    st.vw[l].assign(model.weights[l].size(), 0.0);
    st.mb[l].assign(model.biases[l].size(), 0.0);
    st.vb[l].assign(model.biases[l].size(), 0.0);
    gw[l].assign(model.weights[l].size(), 0.0);
    gb[l].assign(model.biases[l].size(), 0.0);
  }

  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Rng shuffle_rng(splitmix64(cfg.seed ^ 0xADA3FULL));
  std::vector<std::size_t> idx(train_set.samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  std::vector<EpochStats> history;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = idx.size() - 1; i > 0; --i)
      std::swap(idx[i], idx[shuffle_rng.below(i + 1)]);

    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < idx.size(); start += cfg.batch_size) {
      std::size_t end = std::min(idx.size(), start + cfg.batch_size);
      for (int l = 0; l < L; ++l) {
        std::fill(gw[l].begin(), gw[l].end(), 0.0);
        std::fill(gb[l].begin(), gb[l].end(), 0.0);
      }
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i)
        batch_loss += detail::backprop_sample(model, norm[idx[i]],
                                              train_set.samples[idx[i]].labels,
                                              cfg.focal_gamma, cfg.focal_alpha, gw, gb);
      const double inv_n = 1.0 / static_cast<double>(end - start);
      batch_loss *= inv_n;
      if (!std::isfinite(batch_loss))
        throw SolverError(
            "train: loss became non-finite; lower the learning rate (current " +
            format_g(cfg.learning_rate) + ")");
      epoch_loss += batch_loss;
      ++batches;

      ++st.t;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(st.t));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(st.t));
      for (int l = 0; l < L; ++l) {
        for (std::size_t j = 0; j < model.weights[l].size(); ++j) {
          double g = gw[l][j] * inv_n;
          st.mw[l][j] = b1 * st.mw[l][j] + (1 - b1) * g;
          st.vw[l][j] = b2 * st.vw[l][j] + (1 - b2) * g * g;
          double step = (st.mw[l][j] / c1) / (std::sqrt(st.vw[l][j] / c2) + eps);
          model.weights[l][j] -= cfg.learning_rate * (step + cfg.weight_decay * model.weights[l][j]);
        }
        for (std::size_t j = 0; j < model.biases[l].size(); ++j) {
          double g = gb[l][j] * inv_n;
          st.mb[l][j] = b1 * st.mb[l][j] + (1 - b1) * g;
          st.vb[l][j] = b2 * st.vb[l][j] + (1 - b2) * g * g;
          model.biases[l][j] -= cfg.learning_rate * (st.mb[l][j] / c1) /
                                (std::sqrt(st.vb[l][j] / c2) + eps);
        }
      }
    }

    EpochStats es;
    es.train_loss = epoch_loss / std::max(1, batches);
    auto [tl, ta] = detail::dataset_eval(model, train_set, cfg.focal_gamma, cfg.focal_alpha);
    es.train_accuracy = ta;
    (void)tl;
    if (!test_set.samples.empty()) {
      auto [el, ea] = detail::dataset_eval(model, test_set, cfg.focal_gamma, cfg.focal_alpha);
      es.test_loss = el;
      es.test_accuracy = ea;
    }
    history.push_back(es);
  }

  if (cfg.calibrate_threshold) {
    // Fit the decision threshold on (a subsample of) the training split,
    // scoring the full deployed pipeline (threshold + repair + fill)
    // against the demonstration bits. History accuracies above stay
    // defined at the raw 0.5 cut.
    const std::size_t n_cal = std::min<std::size_t>(train_set.samples.size(), 512);
    const std::size_t stride = std::max<std::size_t>(1, train_set.samples.size() / n_cal);
    std::vector<std::vector<double>> scores;
    std::vector<Instance> instances;
    std::vector<const DatasetSample*> picked;
    for (std::size_t i = 0; i < train_set.samples.size(); i += stride) {
      const auto& s = train_set.samples[i];
      scores.push_back(mlp_forward(model, s.features));
      instances.push_back(generate_instance(train_set.scenario, s.index));
      picked.push_back(&s);
    }
    double best_thr = 0.5;
    long best_hits = -1;
    for (int step = 0; step <= 20; ++step) {
      double thr = 0.30 + 0.02 * step;
      long hits = 0;
      for (std::size_t i = 0; i < picked.size(); ++i) {
        std::vector<double> cand(scores[i].size());
        for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = scores[i][k] >= thr ? 1.0 : 0.0;
        std::vector<int> x = detail::repair_and_fill(instances[i], cand);
        for (std::size_t k = 0; k < x.size(); ++k)
          hits += (x[k] == picked[i]->labels[k]) ? 1 : 0;
      }
      bool better = hits > best_hits ||
                    (hits == best_hits &&
                     std::fabs(thr - 0.5) < std::fabs(best_thr - 0.5) - 1e-12);
      if (better) {
        best_hits = hits;
        best_thr = thr;
      }
    }
    model.threshold = best_thr;
  }
  return {std::move(model), std::move(history)};
}

// -------------------------------------------------------------------------
// Inference
// -------------------------------------------------------------------------

/// Scores the instance, thresholds at the model's calibrated decision
/// threshold, and completes to a feasible Solution (repair + gain-ordered
/// fill) with analytically recovered powers. Feasible even for an
/// untrained model.
inline Solution infer(const MlpModel& model, const Instance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  require(model.output_size() == inst.num_users(),
          "infer: model was trained for a different user count");
  std::vector<double> scores = mlp_forward(model, feature_encode(inst));
  std::vector<double> cand(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k)
    cand[k] = scores[k] >= model.threshold ? 1.0 : 0.0;
  Solution sol;
  sol.solver_name = "ilo";
  sol.x = detail::repair_and_fill(inst, cand);
  sol.p = recover_power(inst, sol.x);
  sol.objective_P1 = objective_p1(inst, sol.x);
  sol.feasibility = check_feasibility(inst, sol.x, sol.p);
  sol.iterations = 1;
  sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

// -------------------------------------------------------------------------
// Model file I/O: one JSON header line, then the flat little-endian f64
// weight payload (weights layer by layer, then biases layer by layer).
// -------------------------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; this platform is not");

inline void save_model(const MlpModel& m, const std::string& path) {
  std::size_t n = 0;
  for (const auto& w : m.weights) n += w.size();
  for (const auto& b : m.biases) n += b.size();
  nlohmann::json header = {{"schema", "irac-model/1"},
                           {"layer_sizes", m.layer_sizes},
                           {"feature_mean", m.stats.mean},
                           {"feature_std", m.stats.std},
                           {"threshold", m.threshold},
                           {"train_digest", m.train_digest},
                           {"payload_doubles", n}};
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_model: cannot write " + path);
  out << header.dump() << "\n";
  auto dump = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  for (const auto& w : m.weights) dump(w);
  for (const auto& b : m.biases) dump(b);
}

inline MlpModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_model: cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "load_model: missing header");
  nlohmann::json header = nlohmann::json::parse(line);
  require(header.value("schema", "") == std::string("irac-model/1"),
          "load_model: missing or unsupported schema (want irac-model/1)");
  MlpModel m;
  m.layer_sizes = header.at("layer_sizes").get<std::vector<int>>();
  m.stats.mean = header.at("feature_mean").get<std::vector<double>>();
  m.stats.std = header.at("feature_std").get<std::vector<double>>();
  m.threshold = header.value("threshold", 0.5);
  m.train_digest = header.value("train_digest", std::uint64_t{0});
  std::size_t want = header.at("payload_doubles").get<std::size_t>();
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    n += static_cast<std::size_t>(m.layer_sizes[l]) * m.layer_sizes[l + 1];
    n += m.layer_sizes[l + 1];
  }
  require(n == want, "load_model: payload size does not match layer sizes");
  auto read_block = [&](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
    require(static_cast<std::size_t>(in.gcount()) == count * sizeof(double),
            "load_model: truncated payload");
  };
  m.weights.resize(m.layer_sizes.size() - 1);
  m.biases.resize(m.layer_sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l)
    read_block(m.weights[l], static_cast<std::size_t>(m.layer_sizes[l]) * m.layer_sizes[l + 1]);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l)
    read_block(m.biases[l], m.layer_sizes[l + 1]);
  return m;
}

// -------------------------------------------------------------------------
// Evaluation against the demonstrating solver
// -------------------------------------------------------------------------

struct IloEvaluation {
  double bit_accuracy = 0.0;       // per-user-bit agreement with the labels
  double vector_accuracy = 0.0;    // whole-vector agreement
  double mean_psnr_pmm = 0.0;      // dB, demonstration solutions
  double mean_psnr_ilo = 0.0;      // dB, network solutions after repair
  double psnr_gap = 0.0;           // dB, pmm minus ilo
  double median_infer_seconds = 0.0;
  double median_pmm_seconds = 0.0; // re-solved on a subset for timing
  int infeasible = 0;              // must stay zero (repair guarantees it)
  std::size_t samples = 0;
};

/// Replays a dataset: regenerates each instance, runs inference, and
/// compares quality and speed against the stored demonstrations. The
/// demonstrating solver is re-timed on `timing_subset` instances.
inline IloEvaluation ilo_evaluate(const MlpModel& model, const Dataset& ds,
                                  int timing_subset = 200, const PmmParams& params = {}) {
  IloEvaluation ev;
  ev.samples = ds.samples.size();
  require(!ds.samples.empty(), "ilo_evaluate: empty dataset");
  long bit_ok = 0, bits = 0, vec_ok = 0;
  std::vector<double> infer_times;
  double psnr_pmm = 0.0, psnr_ilo = 0.0;
  for (const auto& s : ds.samples) {
    Instance inst = generate_instance(ds.scenario, s.index);
    Solution got = infer(model, inst);
    infer_times.push_back(got.wall_time);
    if (!got.feasibility.feasible) ++ev.infeasible;
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      bit_ok += (got.x[k] == s.labels[k]) ? 1 : 0;
      ++bits;
    }
    vec_ok += (got.x == s.labels) ? 1 : 0;
    psnr_pmm += evaluate_solution(inst, s.labels, s.powers).mean_psnr;
    psnr_ilo += evaluate_solution(inst, got.x, got.p).mean_psnr;
  }
  ev.bit_accuracy = static_cast<double>(bit_ok) / static_cast<double>(bits);
  ev.vector_accuracy = static_cast<double>(vec_ok) / static_cast<double>(ds.samples.size());
  ev.mean_psnr_pmm = psnr_pmm / static_cast<double>(ds.samples.size());
  ev.mean_psnr_ilo = psnr_ilo / static_cast<double>(ds.samples.size());
  ev.psnr_gap = ev.mean_psnr_pmm - ev.mean_psnr_ilo;

  std::sort(infer_times.begin(), infer_times.end());
  ev.median_infer_seconds = infer_times[infer_times.size() / 2];

  int nt = std::min<int>(timing_subset, static_cast<int>(ds.samples.size()));
  if (nt > 0) {
    std::vector<double> pmm_times(nt);
    parallel_for(nt, [&](std::size_t i) {
      Instance inst = generate_instance(ds.scenario, ds.samples[i].index);
      pmm_times[i] = pmm_solve(inst, params).wall_time;
    });
    std::sort(pmm_times.begin(), pmm_times.end());
    ev.median_pmm_seconds = pmm_times[pmm_times.size() / 2];
  }
  return ev;
}

inline nlohmann::json to_json(const IloEvaluation& ev) {
  return {{"bit_accuracy", ev.bit_accuracy},
          {"vector_accuracy", ev.vector_accuracy},
          {"mean_psnr_pmm", ev.mean_psnr_pmm},
          {"mean_psnr_ilo", ev.mean_psnr_ilo},
          {"psnr_gap", ev.psnr_gap},
          {"median_infer_seconds", ev.median_infer_seconds},
          {"median_pmm_seconds", ev.median_pmm_seconds},
          {"infeasible", ev.infeasible},
          {"samples", ev.samples}};
}

}  // namespace irac

#endif  // IRAC_ILO_HPP
