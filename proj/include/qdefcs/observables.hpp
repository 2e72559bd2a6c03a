#pragma once

#include <complex>

#include "qdefcs/states.hpp"

namespace qdefcs {

// Which axis z is placed on for t-parameterized scans: z = sqrt(t) or i sqrt(t).
enum class Phase { RealZ, ImagZ };

// Every scalar observable at one (q, z) point, plus the certified absolute
// error bound (worst field) inherited from the state's truncation budget.
// mandel_q is NaN at the vacuum, where it is undefined.
struct ObservableReport {
  double mean_n = 0.0;
  double var_n = 0.0;
  double mandel_q = 0.0;
  double metric_omega = 1.0;
  double mean_x = 0.0;
  double var_x = 0.5;
  double ratio_r = 1.0;
  double snr_sigma = 0.0;
  double error_bound = 0.0;
  std::size_t n_max = 0;
};

// Closed-form t -> 0 slopes of the small-t expansions.
struct SlopeSet {
  double d_omega = 0.0;               // 2(1-q)/(1+q)
  double d_mandel = 0.0;              // (1-q)/(1+q)
  double d_ratio_imag = 0.0;          // 2[1 - sqrt(2/(1+q))], z imaginary
  double d_ratio_real_superunit = 0.0;  // -2[1 - sqrt(2/(1+q))], z real
};

// Moments of the undeformed ladder b |n> = sqrt(n) |n-1> taken on the
// q-deformed state; ingredients of the quadrature X = (b + b^+)/sqrt(2).
struct LadderMoments {
  std::complex<double> mean_b;   // <b>
  std::complex<double> mean_b2;  // <b^2>
  double mean_n = 0.0;           // <b^+ b>
  double bound_b = 0.0;          // certified |error| bounds
  double bound_b2 = 0.0;
  double bound_n = 0.0;
};

struct QuadratureMoments {
  double mean_x = 0.0;
  double var_x = 0.5;
};

double mean_n(const QCoherentState& state);
double mean_n2(const QCoherentState& state);
double variance_n(const QCoherentState& state);

// Q = (<N^2> - <N>^2 - <N>)/<N>; throws DegenerateStateError at z = 0.
double mandel(const QCoherentState& state);

// omega_q(t) = d<N>_q/dt via analytic series differentiation:
// (A'E - AE')/E^2 with E = sum t^n/[n]_q!, A = sum n t^n/[n]_q!,
// all four series truncated under the one spec.
double metric_factor(const DeformationParameter& dp, double t, double tolerance,
                     double guard = kDefaultDiscGuard);
double metric_factor_with_spec(const DeformationParameter& dp, double t,
                               const TruncationSpec& spec);

LadderMoments conventional_ladder_moments(const QCoherentState& state);

// mean_x = sqrt(2) Re<b>; var_x = 1/2 + <b^+b> + Re<b^2> - 2(Re<b>)^2.
QuadratureMoments quadrature(const QCoherentState& state);

// R_q(t) = 2 (Delta X)^2 at z = sqrt(t) (RealZ) or i sqrt(t) (ImagZ).
// Values below 1 certify squeezing.
double variance_ratio(const DeformationParameter& dp, double t, Phase phase,
                      double tolerance, double guard = kDefaultDiscGuard);

// sigma_q = <X>^2/(Delta X)^2.
double snr(const QCoherentState& state);

SlopeSet small_t_slopes(const DeformationParameter& dp);

// Coefficient of the 2(Re z)^2 part of (Delta X)^2 at fixed t, extracted as
// [var_x(sqrt t) - var_x(i sqrt t)]/(2t); tends to sqrt(2/(1+q)) - 1 as t -> 0.
double quadrature_coefficient_re2(const DeformationParameter& dp, double t,
                                  double tolerance, double guard = kDefaultDiscGuard);

// Both sides of the uncertainty product for x = c(a + a^+), p = i d(a^+ - a)
// built on the deformed ladder, c = 1/sqrt(2 s), d = sqrt(s/2) at mass scale
// s. Both equal c d (1 + (q-1)t) on an exact eigenstate.
struct IntelligentPair {
  double uncertainty_product;  // Dx Dp
  double half_commutator;      // (1/2)|<[x,p]>|
};
IntelligentPair intelligent_pair(const QCoherentState& state, double mass_scale = 1.0);

// |Dx Dp - (1/2)|<[x,p]>||; a pure truncation residual on the eigenstate.
double intelligent_check(const QCoherentState& state, double mass_scale = 1.0);

// Full report at one point. Internally builds the state at a tolerance
// tightened well below `tolerance` and retries tighter until the certified
// error_bound fits; throws NonConvergentError if it cannot.
ObservableReport report_at(const DeformationParameter& dp, std::complex<double> z,
                           double tolerance = kDefaultTolerance,
                           double guard = kDefaultDiscGuard);

}  // namespace qdefcs
