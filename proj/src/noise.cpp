#include "spinfreeze/noise.hpp"

#include <cmath>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

const char* to_string(NoiseProfile p) {
  switch (p) {
    case NoiseProfile::single_tone:
      return "single_tone";
    case NoiseProfile::gaussian:
      return "gaussian";
    case NoiseProfile::uniform_band:
      return "uniform_band";
  }
  return "?";
}

const char* to_string(NoiseNormalization n) { return n == NoiseNormalization::sqrt_n ? "sqrt_n" : "per_tone"; }

namespace {

double norm_factor(NoiseNormalization norm, std::size_t n) {
  return norm == NoiseNormalization::sqrt_n ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
}

}  // namespace

NoiseModel gaussian_noise(double a0, double sigma, double center, std::size_t n_tones, std::uint64_t seed,
                          NoiseNormalization norm) {
  if (!(a0 > 0.0)) throw ConfigError("noise.amplitude", "Gaussian peak amplitude must be > 0");
  if (!(sigma > 0.0)) throw ConfigError("noise.sigma", "Gaussian width must be > 0");
  if (n_tones == 0) throw ConfigError("noise.n_tones", "must be >= 1");

  NoiseModel m;
  m.profile = NoiseProfile::gaussian;
  m.seed = seed;
  m.normalization = norm;
  m.amplitude = a0;
  m.width = sigma;
  m.center = center;
  m.f_lo = center - 4.0 * sigma;
  m.f_hi = center + 4.0 * sigma;

  SplitMix64 rng(seed);
  const double scale = norm_factor(norm, n_tones);
  const auto n = static_cast<long long>(n_tones);
  for (long long k = 0; k < n; ++k) {
    // Integer numerator keeps offsets exactly antisymmetric about the center.
    const double offset = n == 1 ? 0.0 : 4.0 * sigma * static_cast<double>(2 * k - (n - 1)) / static_cast<double>(n - 1);
    const double profile = a0 * std::exp(-offset * offset / (2.0 * sigma * sigma));
    m.tones.push_back({profile * scale, center + offset, kTwoPi * rng.uniform()});
  }
  return m;
}

NoiseModel uniform_band_noise(double k, double f_lo, double f_hi, std::size_t n_tones, std::uint64_t seed,
                              NoiseNormalization norm) {
  if (!(k >= 0.0)) throw ConfigError("noise.amplitude", "band amplitude must be >= 0");
  if (!(f_lo < f_hi)) throw ConfigError("noise.band", "f_lo must be below f_hi");
  if (n_tones == 0) throw ConfigError("noise.n_tones", "must be >= 1");

  NoiseModel m;
  m.profile = NoiseProfile::uniform_band;
  m.seed = seed;
  m.normalization = norm;
  m.amplitude = k;
  m.center = 0.5 * (f_lo + f_hi);
  m.f_lo = f_lo;
  m.f_hi = f_hi;

  SplitMix64 rng(seed);
  const double amp = k * norm_factor(norm, n_tones);
  for (std::size_t j = 0; j < n_tones; ++j) {
    const double f = n_tones == 1 ? m.center
                                  : f_lo + (f_hi - f_lo) * static_cast<double>(j) / static_cast<double>(n_tones - 1);
    m.tones.push_back({amp, f, kTwoPi * rng.uniform()});
  }
  return m;
}

NoiseModel single_tone_noise(double rabi, double frequency, double phase) {
  if (!(rabi >= 0.0)) throw ConfigError("noise.amplitude", "tone Rabi frequency must be >= 0");
  if (!(frequency > 0.0)) throw ConfigError("noise.center", "tone frequency must be > 0");
  NoiseModel m;
  m.profile = NoiseProfile::single_tone;
  m.normalization = NoiseNormalization::per_tone;
  m.amplitude = rabi;
  m.center = frequency;
  m.f_lo = m.f_hi = frequency;
  m.tones.push_back({rabi, frequency, phase});
  return m;
}

std::vector<DriveSpec> noise_drive_terms(const NoiseModel& model, DriveTarget target) {
  std::vector<DriveSpec> out;
  out.reserve(model.tones.size());
  for (const auto& t : model.tones) out.push_back({target, t.rabi, t.frequency, t.phase});
  return out;
}

}  // namespace spinfreeze
