#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "okd/detection.hpp"

namespace okd {

using Engine = std::mt19937_64;

/// Independent engine for a (seed, stream) pair. Different streams of the same
/// seed never share a sequence prefix.
Engine make_engine(std::uint64_t seed, std::uint64_t stream);

namespace stream {
inline constexpr std::uint64_t kBases = 1;
inline constexpr std::uint64_t kDrift = 2;
inline constexpr std::uint64_t kDetector = 3;
inline constexpr std::uint64_t kPrivacy = 4;
inline constexpr std::uint64_t kEve = 5;
}  // namespace stream

struct NoiseConfig {
  double phase_drift_sigma{0};     // rad per slot
  double detector_noise_sigma{0};  // relative intensity units
  std::size_t lock_interval{0};    // slots between phase-lock resets, 0 = every slot
  std::uint64_t rng_seed{0};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool noiseless() const { return phase_drift_sigma == 0.0 && detector_noise_sigma == 0.0; }
};

/// Relative path phase per slot: a Gaussian random walk that restarts from
/// zero at every lock.
std::vector<double> drift_process(const NoiseConfig& cfg, std::size_t n_slots);

/// Adds independent Gaussian noise to both intensities (clamped at zero) and
/// recomputes the derived quantities. The relative phase implied by the
/// original interference term is kept.
Detection perturb_detection(const Detection& d, const NoiseConfig& cfg, double epsilon,
                            Engine& rng);

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// Coherence length c / bit_rate, in meters.
double coherence_length(double bit_rate);

}  // namespace okd
