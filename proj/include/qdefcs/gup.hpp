#pragma once

#include "qdefcs/qcore.hpp"

namespace qdefcs::gup {

// Constants of the deformed commutation relation [x, p] = i hbar (1 + alpha x^2
// + beta p^2) together with the oscillator data (m, omega). Units: alpha is
// 1/length^2, beta is 1/momentum^2; they are carried as documentation, not
// enforced dimensional analysis.
struct GupParameters {
  double alpha;
  double beta;
  double hbar = 1.0;
  double m = 1.0;
  double omega = 1.0;
};

// q = (1 - hbar sqrt(|alpha beta|)) / (1 + hbar sqrt(|alpha beta|)) for the
// both-negative branch; q ranges over (0, 1). Rejects mixed signs, the
// non-negative branch, and hbar sqrt(|alpha beta|) >= 1 (q would leave (0,1)).
// Evaluated in extended precision so that u = 1/3 maps to q = 0.5 exactly.
DeformationParameter q_from_alpha_beta(const GupParameters& p);

// Frequency of the equivalent deformed oscillator: (1+q) omega / 2.
double effective_frequency(const DeformationParameter& dp, double omega);

// Relative mismatch | |alpha| - m^2 omega^2 |beta| | / |alpha| of the
// Hamiltonian-equivalence condition; 0 means the condition holds.
double check_isotropy(const GupParameters& p);

// Nonzero minimal position/momentum uncertainties exist for alpha, beta > 0
// and do not for alpha, beta < 0. Mixed signs are rejected.
bool minimal_uncertainty_exists(double alpha, double beta);

}  // namespace qdefcs::gup
