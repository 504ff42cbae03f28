#pragma once

// Broadband RF noise realised as a deterministic comb of sinusoidal tones with
// seeded random phases.

#include <cstdint>
#include <vector>

#include "spinfreeze/hamiltonians.hpp"

namespace spinfreeze {

/// SplitMix64. The sequence is fixed by its recurrence so tone phases are
/// reproducible across platforms and implementations:
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// uniform() maps the top 53 bits to [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

struct NoiseTone {
  double rabi = 0.0;       // MHz
  double frequency = 0.0;  // MHz
  double phase = 0.0;      // radians, [0, 2 pi)

  bool operator==(const NoiseTone&) const = default;
};

enum class NoiseProfile { single_tone, gaussian, uniform_band };

/// How the profile amplitude maps onto per-tone Rabi frequencies.
/// `sqrt_n` divides by sqrt(n_tones) so the total noise power does not depend
/// on the comb density; `per_tone` uses the profile value directly.
enum class NoiseNormalization { sqrt_n, per_tone };

const char* to_string(NoiseProfile p);
const char* to_string(NoiseNormalization n);

struct NoiseModel {
  NoiseProfile profile = NoiseProfile::single_tone;
  std::uint64_t seed = 0;
  NoiseNormalization normalization = NoiseNormalization::sqrt_n;
  // Gaussian: amplitude = A0, width = sigma, center = peak frequency.
  // Uniform band: amplitude = K, band = [f_lo, f_hi].
  // Single tone: amplitude = Rabi frequency, center = tone frequency.
  double amplitude = 0.0;
  double width = 0.0;
  double center = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::vector<NoiseTone> tones;
};

/// A(f) = a0 exp(-(f - center)^2 / (2 sigma^2)) sampled on n_tones equally
/// spaced frequencies spanning center +- 4 sigma.
NoiseModel gaussian_noise(double a0, double sigma, double center, std::size_t n_tones, std::uint64_t seed,
                          NoiseNormalization norm = NoiseNormalization::sqrt_n);

/// Flat amplitude k on n_tones equally spaced frequencies in [f_lo, f_hi].
NoiseModel uniform_band_noise(double k, double f_lo, double f_hi, std::size_t n_tones, std::uint64_t seed,
                              NoiseNormalization norm = NoiseNormalization::sqrt_n);

/// One tone; rabi and phase are used as given.
NoiseModel single_tone_noise(double rabi, double frequency, double phase = 0.0);

/// One drive per tone, in tone order.
std::vector<DriveSpec> noise_drive_terms(const NoiseModel& model, DriveTarget target);

}  // namespace spinfreeze
