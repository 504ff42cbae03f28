#include "spinfreeze/discord.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

namespace {

constexpr double kMinOutcomeProbability = 1e-12;

double entropy_2x2(cplx a, cplx b, cplx d, LogBase base) {
  const double mean = 0.5 * (a.real() + d.real());
  const double half_gap = std::sqrt(0.25 * (a.real() - d.real()) * (a.real() - d.real()) + std::norm(b));
  return entropy_of_spectrum({mean - half_gap, mean + half_gap}, base);
}

// Conditional information with the first qubit measured.
double conditional_information_first(const ComplexMatrix& rho, const MeasurementBasis& basis, double s_b,
                                     LogBase base) {
  double q = s_b;
  const std::array<std::vector<cplx>, 2> outcomes = {basis.u(), basis.v()};
  for (const auto& e : outcomes) {
    // rho_{B|k}(b, b') = sum_{a, a'} conj(e_a) e_a' rho(2a + b, 2a' + b')
    std::array<cplx, 4> blk{};
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t ap = 0; ap < 2; ++ap) {
        const cplx w = std::conj(e[a]) * e[ap];
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t bp = 0; bp < 2; ++bp) blk[b * 2 + bp] += w * rho(2 * a + b, 2 * ap + bp);
      }
    const double p = blk[0].real() + blk[3].real();
    if (p < kMinOutcomeProbability) continue;
    q -= p * entropy_2x2(blk[0] / p, blk[1] / p, blk[3] / p, base);
  }
  return q;
}

void require_two_qubit_state(const ComplexMatrix& rho) {
  if (rho.dim() != 4) throw DimensionError("discord: expected a 4x4 two-qubit density matrix");
  validate_density_matrix(rho);
}

// Nelder-Mead on f(theta, phi), minimising. Returns the best vertex.
std::array<double, 3> nelder_mead(const auto& f, std::array<double, 2> start, double step, double tol) {
  std::array<std::array<double, 3>, 3> s{};  // (x, y, f)
  s[0] = {start[0], start[1], f(start[0], start[1])};
  s[1] = {start[0] + step, start[1], f(start[0] + step, start[1])};
  s[2] = {start[0], start[1] + step, f(start[0], start[1] + step)};
  for (int iter = 0; iter < 2000; ++iter) {
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    const double size = std::max(std::hypot(s[1][0] - s[0][0], s[1][1] - s[0][1]),
                                 std::hypot(s[2][0] - s[0][0], s[2][1] - s[0][1]));
    if (size < tol) break;
    const double cx = 0.5 * (s[0][0] + s[1][0]);
    const double cy = 0.5 * (s[0][1] + s[1][1]);
    auto point = [&](double coef) {
      const double x = cx + coef * (s[2][0] - cx);
      const double y = cy + coef * (s[2][1] - cy);
      return std::array<double, 3>{x, y, f(x, y)};
    };
    const auto reflected = point(-1.0);
    if (reflected[2] < s[0][2]) {
      const auto expanded = point(-2.0);
      s[2] = expanded[2] < reflected[2] ? expanded : reflected;
    } else if (reflected[2] < s[1][2]) {
      s[2] = reflected;
    } else {
      const auto contracted = reflected[2] < s[2][2] ? point(-0.5) : point(0.5);
      if (contracted[2] < std::min(reflected[2], s[2][2])) {
        s[2] = contracted;
      } else {
        for (std::size_t k = 1; k < 3; ++k) {
          const double x = 0.5 * (s[0][0] + s[k][0]);
          const double y = 0.5 * (s[0][1] + s[k][1]);
          s[k] = {x, y, f(x, y)};
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  return s[0];
}

}  // namespace

std::vector<cplx> MeasurementBasis::u() const {
  return {std::cos(theta), std::polar(1.0, phi) * std::sin(theta)};
}

std::vector<cplx> MeasurementBasis::v() const {
  return {std::sin(theta), -std::polar(1.0, phi) * std::cos(theta)};
}

ComplexMatrix swap_qubits(const ComplexMatrix& rho) {
  if (rho.dim() != 4) throw DimensionError("swap_qubits: expected a 4x4 operator");
  static constexpr std::array<std::size_t, 4> perm = {0, 2, 1, 3};
  ComplexMatrix out(4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out(perm[r], perm[c]) = rho(r, c);
  return out;
}

double mutual_information(const ComplexMatrix& rho, LogBase base) {
  require_two_qubit_state(rho);
  return vn_entropy(partial_trace(rho, Subsystem::first), base) + vn_entropy(partial_trace(rho, Subsystem::second), base) -
         vn_entropy(rho, base);
}

double conditional_information(const ComplexMatrix& rho, const MeasurementBasis& basis, Subsystem measured,
                               LogBase base) {
  require_two_qubit_state(rho);
  const ComplexMatrix r = measured == Subsystem::first ? rho : swap_qubits(rho);
  const double s_b = vn_entropy(partial_trace(r, Subsystem::second), base);
  return conditional_information_first(r, basis, s_b, base);
}

DiscordResult quantum_discord(const ComplexMatrix& rho, const DiscordOptions& opts) {
  require_two_qubit_state(rho);
  if (opts.n_theta < 8 || opts.n_phi < 8) throw ConfigError("discord.grid", "n_theta and n_phi must be >= 8");

  const ComplexMatrix r = opts.measured == Subsystem::first ? rho : swap_qubits(rho);
  const double s_b = vn_entropy(partial_trace(r, Subsystem::second), opts.log_base);
  auto q = [&](double theta, double phi) {
    return conditional_information_first(r, MeasurementBasis{theta, phi}, s_b, opts.log_base);
  };

  DiscordResult out;
  out.mutual_info = mutual_information(rho, opts.log_base);
  out.n_theta = opts.n_theta;
  out.n_phi = opts.n_phi;

  const double dtheta = 0.5 * kPi / static_cast<double>(opts.n_theta - 1);
  const double dphi = kTwoPi / static_cast<double>(opts.n_phi);
  double best = -1.0;
  for (std::size_t i = 0; i < opts.n_theta; ++i) {
    const double theta = static_cast<double>(i) * dtheta;
    for (std::size_t j = 0; j < opts.n_phi; ++j) {
      const double phi = static_cast<double>(j) * dphi;
      const double val = q(theta, phi);
      if (val > best) {
        best = val;
        out.argmax_basis = {theta, phi};
      }
    }
  }

  if (opts.refine) {
    const auto polished = nelder_mead([&](double th, double ph) { return -q(th, ph); },
                                      {out.argmax_basis.theta, out.argmax_basis.phi}, 0.5 * std::min(dtheta, dphi),
                                      1e-8);
    if (-polished[2] > best) {
      best = -polished[2];
      out.argmax_basis = {polished[0], polished[1]};
    }
    out.refined = true;
  }

  out.classical_corr = best;
  double d = out.mutual_info - best;
  if (d < 0.0) {
    if (d < -1e-9) throw ContractViolation("quantum_discord: classical correlation exceeds mutual information");
    d = 0.0;
    out.classical_corr = out.mutual_info;
  }
  out.discord = d;
  return out;
}

DiscordTrace discord_trace(const TimeSeries& series, double stride_us, const DiscordOptions& opts,
                           unsigned threads) {
  if (series.states.size() != series.times.size())
    throw ConfigError("discord", "time series was recorded without density matrices");

  DiscordTrace out;
  std::vector<std::size_t> picks;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (stride_us > 0.0) {
      const double ratio = t / stride_us;
      if (std::abs(ratio - std::round(ratio)) > 1e-6) continue;
    }
    picks.push_back(k);
    out.times.push_back(t);
  }
  out.values.resize(picks.size());

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(picks.size())));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < picks.size(); i += workers) out.values[i] = quantum_discord(series.states[picks[i]], opts);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return out;
}

}  // namespace spinfreeze
