#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "qdefcs/qcore.hpp"

namespace qdefcs {

// Normalized coherent state of the deformed oscillator at (q, z), truncated
// at n_max with a certified normalization tail bound. Amplitudes are kept as
// (log-magnitude, phase) pairs; near the disc boundary the normalization is
// far too large for a linear-domain representation.
class QCoherentState {
 public:
  QCoherentState(DeformationParameter dp, std::complex<double> z, double tolerance,
                 double guard = kDefaultDiscGuard);

  const DeformationParameter& deformation() const { return dp_; }
  std::complex<double> z() const { return z_; }
  double t() const { return t_; }
  std::size_t n_max() const { return spec_.n_max; }
  double tail_bound() const { return spec_.achieved_bound; }
  double tolerance() const { return spec_.tolerance; }
  const TruncationSpec& spec() const { return spec_; }
  double log_norm() const { return log_norm_; }

  double probability(std::size_t n) const { return probability_[n]; }
  const std::vector<double>& probabilities() const { return probability_; }

  // ln |c_n| of the unnormalized coefficient z^n/sqrt([n]_q!).
  double log_magnitude(std::size_t n) const { return log_magnitude_[n]; }
  double phase(std::size_t n) const { return phase_[n]; }

  // Normalized amplitude <n|z>, materialized in the linear domain.
  std::complex<double> amplitude(std::size_t n) const;

  // ln [k]_q for k = 0..n_max (index 0 holds -inf).
  const std::vector<double>& log_brackets() const { return log_bracket_; }

 private:
  DeformationParameter dp_;
  std::complex<double> z_;
  double t_;
  TruncationSpec spec_;
  std::vector<double> log_magnitude_;
  std::vector<double> phase_;
  std::vector<double> probability_;
  std::vector<double> log_bracket_;
  double log_norm_;
};

QCoherentState build_state(const DeformationParameter& dp, std::complex<double> z,
                           double tolerance, double guard = kDefaultDiscGuard);

// (n, p_n) pairs as stored; the probabilities sum to 1 within the tail bound.
std::vector<std::pair<std::size_t, double>> photon_distribution(const QCoherentState& state);

// || (a - z) |z> || on the truncated state, a |n> = sqrt([n]_q) |n-1>.
// Exact cancellation holds term by term, so the residual is dominated by the
// cut coefficient: O(|z| sqrt(p_{n_max})), i.e. proportional to sqrt(tolerance).
double annihilator_residual(const QCoherentState& state);

}  // namespace qdefcs
