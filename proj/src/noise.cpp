#include "okd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace okd {

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6f6b64u};
  return Engine(seq);
}

void NoiseConfig::validate() const {
  if (!(phase_drift_sigma >= 0.0) || !std::isfinite(phase_drift_sigma)) {
    throw std::invalid_argument("noise_sigma must be a finite value >= 0");
  }
  if (!(detector_noise_sigma >= 0.0) || !std::isfinite(detector_noise_sigma)) {
    throw std::invalid_argument("detector_sigma must be a finite value >= 0");
  }
}

std::vector<double> drift_process(const NoiseConfig& cfg, std::size_t n_slots) {
  if (n_slots == 0) throw std::invalid_argument("drift_process: n_slots must be >= 1");
  cfg.validate();
  std::vector<double> offsets(n_slots, 0.0);
  if (cfg.phase_drift_sigma == 0.0) return offsets;

  Engine rng = make_engine(cfg.rng_seed, stream::kDrift);
  std::normal_distribution<double> step(0.0, cfg.phase_drift_sigma);
  const std::size_t period = std::max<std::size_t>(cfg.lock_interval, 1);
  double walk = 0.0;
  for (std::size_t k = 0; k < n_slots; ++k) {
    if (k % period == 0) walk = 0.0;
    walk += step(rng);
    offsets[k] = walk;
  }
  return offsets;
}

Detection perturb_detection(const Detection& d, const NoiseConfig& cfg, double epsilon,
                            Engine& rng) {
  if (cfg.detector_noise_sigma == 0.0) return d;
  std::normal_distribution<double> noise(0.0, cfg.detector_noise_sigma);
  const double i_a = std::max(0.0, d.intensity_a + noise(rng));
  const double i_b = std::max(0.0, d.intensity_b + noise(rng));

  // cos of the relative phase between the two fields, recovered from the
  // original interference term.
  double cos_rel = 0.0;
  const double cross = 2.0 * std::sqrt(d.intensity_a * d.intensity_b);
  if (cross > 0.0) {
    cos_rel = std::clamp((d.interference - d.intensity_a - d.intensity_b) / cross, -1.0, 1.0);
  }
  const double in = i_a + i_b + 2.0 * std::sqrt(i_a * i_b) * cos_rel;
  return detection_from_intensities(i_a, i_b, std::max(0.0, in), epsilon);
}

double coherence_length(double bit_rate) {
  if (!(bit_rate > 0.0)) throw std::invalid_argument("coherence_length: bit_rate must be > 0");
  return kSpeedOfLight / bit_rate;
}

}  // namespace okd
