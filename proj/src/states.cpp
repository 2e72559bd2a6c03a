#include "qdefcs/states.hpp"

#include <cmath>

namespace qdefcs {

QCoherentState::QCoherentState(DeformationParameter dp, std::complex<double> z,
                               double tolerance, double guard)
    : dp_(dp), z_(z), t_(std::norm(z)) {
  require_inside_disc(dp_, t_, guard);

  if (t_ == 0.0) {
    // Vacuum short-circuit: no series machinery for |z| = 0.
    spec_ = TruncationSpec{0, tolerance, 0.0, 0.0, 0.0};
    log_magnitude_ = {0.0};
    phase_ = {0.0};
    probability_ = {1.0};
    log_bracket_ = {-std::numeric_limits<double>::infinity()};
    log_norm_ = 0.0;
    return;
  }

  spec_ = choose_truncation(dp_, t_, tolerance);
  const std::size_t n_top = spec_.n_max;
  const double theta = std::arg(z_);
  const double half_log_t = 0.5 * std::log(t_);

  log_bracket_.resize(n_top + 1);
  log_bracket_[0] = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n_top; ++k) {
    log_bracket_[k] = log_q_bracket(dp_, static_cast<std::uint64_t>(k));
  }

  log_magnitude_.resize(n_top + 1);
  phase_.resize(n_top + 1);
  double log_fact = 0.0;
  for (std::size_t n = 0; n <= n_top; ++n) {
    if (n >= 1) log_fact += log_bracket_[n];
    // |c_n| from t alone so the distribution is phase covariant by construction
    log_magnitude_[n] = static_cast<double>(n) * half_log_t - 0.5 * log_fact;
    phase_[n] = static_cast<double>(n) * theta;
  }

  std::vector<double> log_terms(n_top + 1);
  for (std::size_t n = 0; n <= n_top; ++n) log_terms[n] = 2.0 * log_magnitude_[n];
  log_norm_ = log_sum_exp(log_terms);

  probability_.resize(n_top + 1);
  for (std::size_t n = 0; n <= n_top; ++n) {
    probability_[n] = std::exp(log_terms[n] - log_norm_);
  }
}

std::complex<double> QCoherentState::amplitude(std::size_t n) const {
  const double mag = std::exp(log_magnitude_[n] - 0.5 * log_norm_);
  return std::polar(mag, phase_[n]);
}

QCoherentState build_state(const DeformationParameter& dp, std::complex<double> z,
                           double tolerance, double guard) {
  return QCoherentState(dp, z, tolerance, guard);
}

std::vector<std::pair<std::size_t, double>> photon_distribution(const QCoherentState& state) {
  std::vector<std::pair<std::size_t, double>> dist;
  dist.reserve(state.n_max() + 1);
  for (std::size_t n = 0; n <= state.n_max(); ++n) {
    dist.emplace_back(n, state.probability(n));
  }
  return dist;
}

double annihilator_residual(const QCoherentState& state) {
  const std::size_t n_top = state.n_max();
  const std::complex<double> z = state.z();
  long double acc = 0.0L;
  for (std::size_t n = 0; n + 1 <= n_top; ++n) {
    const double root_bracket = std::exp(0.5 * state.log_brackets()[n + 1]);
    const std::complex<double> d = state.amplitude(n + 1) * root_bracket - z * state.amplitude(n);
    acc += static_cast<long double>(std::norm(d));
  }
  // the cut component: -z c_{n_max} |n_max>
  acc += static_cast<long double>(std::norm(z) * state.probability(n_top));
  return std::sqrt(static_cast<double>(acc));
}

}  // namespace qdefcs
