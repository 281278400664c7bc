#include "doctest.h"

#include <cmath>

#include "okd/noise.hpp"
#include "okd/protocol.hpp"

using namespace okd;

TEST_CASE("engine streams") {
  Engine a = make_engine(7, stream::kBases);
  Engine b = make_engine(7, stream::kBases);
  Engine c = make_engine(7, stream::kDrift);
  Engine d = make_engine(8, stream::kBases);
  const auto va = a(), vb = b(), vc = c(), vd = d();
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
}

TEST_CASE("drift_process") {
  CHECK(drift_process({0.0, 0.0, 10, 3}, 50) == std::vector<double>(50, 0.0));
  CHECK_THROWS_AS(drift_process({}, 0), std::invalid_argument);
  CHECK_THROWS_AS(drift_process({-0.1, 0.0, 0, 0}, 5), std::invalid_argument);

  const NoiseConfig cfg{0.1, 0.0, 4, 9};
  CHECK(drift_process(cfg, 40) == drift_process(cfg, 40));

  // Increments restart at every lock: the first offset of each block is a
  // single step.
  const std::vector<double> x = drift_process(cfg, 40);
  for (std::size_t k = 0; k < 40; ++k) {
    if (k % 4 != 0) CHECK(x[k] != x[k - 1]);
  }
}

TEST_CASE("drift variance grows linearly between locks") {
  constexpr std::size_t kRuns = 10000, kLen = 20;
  constexpr double sigma = 0.1;
  std::vector<double> sum2(kLen, 0.0), sum(kLen, 0.0);
  for (std::size_t r = 0; r < kRuns; ++r) {
    const auto x = drift_process({sigma, 0.0, kLen, r}, kLen);
    for (std::size_t k = 0; k < kLen; ++k) {
      sum[k] += x[k];
      sum2[k] += x[k] * x[k];
    }
  }
  for (std::size_t k = 0; k < kLen; ++k) {
    CAPTURE(k);
    const double mean = sum[k] / kRuns;
    const double var = sum2[k] / kRuns - mean * mean;
    const double expected = static_cast<double>(k + 1) * sigma * sigma;
    CHECK(std::abs(var - expected) < 0.1 * expected);
    CHECK(std::abs(mean) < 4.0 * std::sqrt(expected / kRuns));
  }

  // lock every slot: constant variance
  double s2 = 0.0;
  const auto x = drift_process({sigma, 0.0, 0, 1}, kRuns);
  for (double v : x) s2 += v * v;
  CHECK(s2 / kRuns == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("perturb_detection") {
  const Detection clean = detection_from_intensities(0.0, 1.0, 1.0, 0.05);
  CHECK(clean.classification == Classification::Bit0);

  SUBCASE("zero sigma is the identity and draws nothing") {
    Engine rng = make_engine(1, stream::kDetector);
    Engine ref = make_engine(1, stream::kDetector);
    const Detection d = perturb_detection(clean, NoiseConfig{}, 0.05, rng);
    CHECK(d.intensity_a == clean.intensity_a);
    CHECK(d.visibility == clean.visibility);
    CHECK(d.classification == clean.classification);
    CHECK(rng() == ref());
  }
  SUBCASE("noise keeps intensities non-negative and visibility bounded") {
    Engine rng = make_engine(2, stream::kDetector);
    const NoiseConfig cfg{0.0, 0.3, 0, 2};
    int errors = 0;
    for (int k = 0; k < 2000; ++k) {
      const Detection d = perturb_detection(clean, cfg, 0.05, rng);
      CHECK(d.intensity_a >= 0.0);
      CHECK(d.intensity_b >= 0.0);
      CHECK(d.visibility >= -1.0);
      CHECK(d.visibility <= 1.0);
      CHECK(d.interference >= 0.0);
      errors += d.classification == Classification::Error;
    }
    CHECK(errors > 0);
  }
  SUBCASE("relative phase is preserved") {
    const Detection half = detection_from_intensities(0.25, 0.25, 0.5, 0.05);  // cos = 0
    Engine rng = make_engine(3, stream::kDetector);
    const Detection d = perturb_detection(half, {0.0, 0.05, 0, 3}, 0.05, rng);
    CHECK(d.interference == doctest::Approx(d.intensity_a + d.intensity_b));
  }
}

TEST_CASE("coherence length") {
  CHECK(coherence_length(1e10) == doctest::Approx(0.0299792458).epsilon(1e-12));
  CHECK(coherence_length(1.0) == kSpeedOfLight);
  CHECK_THROWS_AS(coherence_length(0.0), std::invalid_argument);
  CHECK_THROWS_AS(coherence_length(-5.0), std::invalid_argument);
}

namespace {

double discard_fraction(double sigma, std::uint64_t seed) {
  SessionConfig c;
  c.n_slots = 5000;
  c.classifier.rng_seed = seed;
  c.noise = {sigma, 0.0, 0, seed};
  const SessionResult r = run_session(c);
  return 1.0 - static_cast<double>(r.key.final_bob.size()) / 5000.0;
}

}  // namespace

TEST_CASE("discard rate grows with phase noise") {
  CHECK(discard_fraction(0.0, 4) == 0.0);
  double prev = 0.0;
  for (double sigma : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    CAPTURE(sigma);
    const double f = discard_fraction(sigma, 4);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(prev > 0.5);
}

TEST_CASE("zero noise is transparent") {
  SessionConfig c;
  c.n_slots = 400;
  c.classifier.rng_seed = 6;
  const SessionResult base = run_session(c);
  c.noise = {0.0, 0.0, 17, 1234};
  CHECK(run_session(c).trace == base.trace);
}
