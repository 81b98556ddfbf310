#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "irac/link.hpp"
#include "irac/metrics.hpp"
#include "irac/rng.hpp"
#include "irac/solution.hpp"
#include "support.hpp"

using namespace irac;

namespace {

Image random_image(int w, int l, Rng& rng) {
  Image img(w, l);
  for (auto& v : img.samples) v = rng.uniform();
  return img;
}

Image constant_image(int w, int l, double value) { return Image(w, l, value); }

// Brute-force per-window SSIM with its own weight computation; the
// implementation under test uses separable convolutions instead.
double ssim_oracle(const Image& a, const Image& b) {
  const int win = 11, half = 5;
  const double sigma = 1.5;
  double w2d[11][11];
  double wsum = 0.0;
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) {
      double di = i - half, dj = j - half;
      w2d[i][j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
      wsum += w2d[i][j];
    }
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) w2d[i][j] /= wsum;

  const double c1 = 1e-4, c2 = 9e-4;
  double total = 0.0;
  int count = 0;
  for (int ch = 0; ch < 3; ++ch)
    for (int r = 0; r + win <= a.length; ++r)
      for (int c = 0; c + win <= a.width; ++c) {
        double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
        for (int i = 0; i < win; ++i)
          for (int j = 0; j < win; ++j) {
            double va = a.at(r + i, c + j, ch);
            double vb = b.at(r + i, c + j, ch);
            mx += w2d[i][j] * va;
            my += w2d[i][j] * vb;
            mxx += w2d[i][j] * va * va;
            myy += w2d[i][j] * vb * vb;
            mxy += w2d[i][j] * va * vb;
          }
        double vx = mxx - mx * mx, vy = myy - my * my, cxy = mxy - mx * my;
        total += ((2 * mx * my + c1) * (2 * cxy + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++count;
      }
  return total / count;
}

}  // namespace

TEST_CASE("ssim of an image with itself is exactly one") {
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Image a = random_image(13 + t, 16, rng);
    CHECK(ssim(a, a) == 1.0);
  }
}

TEST_CASE("ssim matches the constant-image closed form") {
  Image zeros = constant_image(16, 16, 0.0);
  Image ones = constant_image(16, 16, 1.0);
  // means 0 and 1, zero variances: ((C1)(C2)) / ((1 + C1)(C2)) = C1/(1+C1)
  double want = kSsimC1 / (1.0 + kSsimC1);
  CHECK(ssim(zeros, ones) == Catch::Approx(want).margin(1e-12));
  CHECK(ssim(ones, zeros) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("ssim agrees with the naive per-window oracle") {
  Rng rng(17);
  for (int t = 0; t < 6; ++t) {
    Image a = random_image(16, 16, rng);
    Image b = random_image(16, 16, rng);
    CHECK(ssim(a, b) == Catch::Approx(ssim_oracle(a, b)).margin(1e-10));
  }
}

TEST_CASE("ssim is symmetric") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    Image a = random_image(14, 18, rng);
    Image b = random_image(14, 18, rng);
    CHECK(ssim(a, b) == Catch::Approx(ssim(b, a)).margin(1e-12));
  }
}

TEST_CASE("ssim rejects mismatched or undersized images") {
  Rng rng(31);
  Image a = random_image(16, 16, rng);
  Image b = random_image(16, 17, rng);
  CHECK_THROWS_AS(ssim(a, b), ValidationError);
  Image tiny = random_image(10, 16, rng);
  CHECK_THROWS_AS(ssim(tiny, tiny), ValidationError);
}

TEST_CASE("rendering_error basics") {
  Rng rng(37);
  Image a = random_image(16, 16, rng);
  CHECK(rendering_error(a, a, 0.2) == 0.0);

  Image b = a;
  for (auto& v : b.samples) v = std::min(1.0, v * 0.9 + 0.03);
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) l1 += std::fabs(a.samples[i] - b.samples[i]);
  l1 /= a.samples.size();
  CHECK(rendering_error(a, b, 0.0) == Catch::Approx(l1).margin(1e-15));

  CHECK_THROWS_AS(rendering_error(a, b, 1.0), ValidationError);
}

TEST_CASE("rendering_error on constant images matches the analytic value") {
  Image a = constant_image(16, 16, 0.0);
  Image b = constant_image(16, 16, 0.1);
  // means 0 and 0.1 with zero variances:
  // SSIM = C1 / (0.01 + C1); error = 0.8*0.1 + 0.2*(1 - SSIM)
  double ssim_const = kSsimC1 / (0.01 + kSsimC1);
  double want = 0.8 * 0.1 + 0.2 * (1.0 - ssim_const);
  CHECK(rendering_error(a, b, 0.2) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("rendering_error is a premetric on fuzzed pairs") {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    Image a = random_image(12, 12, rng);
    Image b = random_image(12, 12, rng);
    double e = rendering_error(a, b, 0.2);
    CHECK(e >= 0.0);
    CHECK(e > 0.0);  // random pairs differ almost surely
    CHECK(rendering_error(a, a, 0.2) == 0.0);
  }
}

TEST_CASE("switching_gain_from_images is the rendering error of the render pair") {
  Rng rng(43);
  Image e = random_image(16, 16, rng);
  Image l = random_image(16, 16, rng);
  CHECK(switching_gain_from_images(e, l, 0.2) == rendering_error(e, l, 0.2));
  CHECK(switching_gain_from_images(e, e, 0.2) == 0.0);

  Image shifted = e;
  for (auto& v : shifted.samples) v = std::min(1.0, v);
  Image base = constant_image(16, 16, 0.4);
  Image offs = constant_image(16, 16, 0.45);
  CHECK(switching_gain_from_images(base, offs, 0.0) == Catch::Approx(0.05).margin(1e-12));
}

TEST_CASE("psnr calibration hits the anchors and decreases in loss") {
  CHECK(psnr_from_loss(0.029) == Catch::Approx(27.49).margin(0.01));
  CHECK(psnr_from_loss(0.041) == Catch::Approx(24.99).margin(0.01));

  // midpoint from the solved two-point line
  double a = psnr_calibration_intercept(), b = psnr_calibration_slope();
  CHECK(psnr_from_loss(0.0345) == Catch::Approx(a + b * std::log10(0.0345)).margin(1e-12));

  Rng rng(47);
  for (int t = 0; t < 100; ++t) {
    double l1 = std::exp(rng.uniform(-6, -1));
    double l2 = l1 * (1.0 + rng.uniform(0.01, 2.0));
    CHECK(psnr_from_loss(l1) > psnr_from_loss(l2));
  }
  CHECK_THROWS_AS(psnr_from_loss(0.0), ValidationError);
  CHECK_THROWS_AS(psnr_from_loss(-0.1), ValidationError);
}

TEST_CASE("evaluate_solution scores solutions against the quality profile") {
  QualityConfig qc;
  qc.loss_jitter = 0.0;
  Rng rng(53);
  Instance inst = test::random_instance(10, 5, 404, 1.0);
  inst.quality = sample_quality_profile(rng, qc, 10);
  for (int k = 0; k < 10; ++k)
    inst.users[k].switching_gain = inst.quality->switching_gain[k];

  SECTION("all-local equals the sum of local losses") {
    auto m = evaluate_solution(inst, std::vector<int>(10, 0), std::vector<double>(10, 0.0));
    CHECK(m.total_loss == Catch::Approx(10 * 0.041).epsilon(1e-12));
    CHECK(m.max_latency == Catch::Approx(inst.local_render_time));
  }

  SECTION("m collaborating users shift the anchor mix") {
    std::vector<int> x(10, 0);
    std::vector<double> p(10, 0.0);
    for (int k = 0; k < 4; ++k) {
      x[k] = 1;
      p[k] = min_power_for_fraction(inst.users[k], 1.0, inst.T, inst.T0);
    }
    auto m = evaluate_solution(inst, x, p);
    CHECK(m.total_loss == Catch::Approx(6 * 0.041 + 4 * 0.029).epsilon(1e-12));
  }

  SECTION("random x matches a per-user accumulation oracle") {
    Rng r2(59);
    for (int t = 0; t < 10; ++t) {
      std::vector<int> x(10);
      std::vector<double> p(10, 0.0);
      for (int k = 0; k < 10; ++k) {
        x[k] = r2.uniform() < 0.5;
        if (x[k]) p[k] = min_power_for_fraction(inst.users[k], 1.0, inst.T, inst.T0);
      }
      auto m = evaluate_solution(inst, x, p);
      double want = 0.0;
      for (int k = 0; k < 10; ++k)
        want += x[k] ? inst.quality->loss_edge[k] : inst.quality->loss_local[k];
      CHECK(m.total_loss == Catch::Approx(want).margin(1e-12));
    }
  }

  SECTION("missing profile is a domain error") {
    Instance bare = inst;
    bare.quality.reset();
    CHECK_THROWS_AS(
        evaluate_solution(bare, std::vector<int>(10, 0), std::vector<double>(10, 0.0)),
        ValidationError);
  }
}

TEST_CASE("objective identity links the P1 surrogate to the true loss") {
  Rng rng(61);
  Instance inst = test::random_instance(8, 4, 505, 1.0);
  QualityConfig qc;
  qc.loss_jitter = 0.15;
  inst.quality = sample_quality_profile(rng, qc, 8);

  std::vector<int> x(8);
  std::vector<double> p(8, 0.0);
  for (int k = 0; k < 8; ++k) x[k] = rng.uniform() < 0.5;

  const auto& q = *inst.quality;
  double sum_edge = 0.0;
  for (int k = 0; k < 8; ++k) sum_edge += q.loss_edge[k];

  SECTION("zero triangle slack: exact equality") {
    for (int k = 0; k < 8; ++k)
      inst.users[k].switching_gain = q.loss_local[k] - q.loss_edge[k];
    auto m = evaluate_solution(inst, x, p);
    double p1 = 0.0;
    for (int k = 0; k < 8; ++k) p1 += (1.0 - x[k]) * inst.users[k].switching_gain;
    CHECK(m.total_loss - sum_edge == Catch::Approx(p1).margin(1e-12));
  }

  SECTION("positive slack: the surrogate upper-bounds the true variable part") {
    for (int k = 0; k < 8; ++k) inst.users[k].switching_gain = q.switching_gain[k];
    auto m = evaluate_solution(inst, x, p);
    double p1 = 0.0;
    for (int k = 0; k < 8; ++k) p1 += (1.0 - x[k]) * inst.users[k].switching_gain;
    CHECK(p1 >= m.total_loss - sum_edge - 1e-12);
  }
}

TEST_CASE("ppm files round-trip through quantization") {
  Rng rng(67);
  Image img = random_image(20, 15, rng);
  // snap to the 8-bit grid first so the round trip is exact
  for (auto& v : img.samples) v = std::round(v * 255.0) / 255.0;
  std::string path = "test_roundtrip.ppm";
  write_ppm(path, img);
  Image back = read_ppm(path);
  REQUIRE(back.width == img.width);
  REQUIRE(back.length == img.length);
  for (std::size_t i = 0; i < img.samples.size(); ++i)
    CHECK(back.samples[i] == Catch::Approx(img.samples[i]).margin(1e-12));
  std::remove(path.c_str());
}
