#pragma once

// Brute-force reference sums in extended precision. This module is a
// verification-only dependency: it evaluates everything by direct linear-
// domain term recurrences in long double and deliberately shares no code
// with the log-domain production path it cross-checks.

#include <cstddef>

namespace qdefcs::oracle {

long double bracket(double q, std::size_t n);

// sum_{n=0..n_terms} t^n/[n]_q!
long double q_exponential_sum(double q, long double t, std::size_t n_terms);

// sum_{n=from..from+count-1} t^n/[n]_q!
long double tail_sum(double q, long double t, std::size_t from, std::size_t count);

struct Moments {
  long double norm = 0.0L;     // sum term_n
  long double mean_n = 0.0L;   // sum n p_n
  long double mean_n2 = 0.0L;  // sum n^2 p_n
  long double pair1 = 0.0L;    // sum sqrt((n+1) term_n term_{n+1}) / norm
  long double pair2 = 0.0L;    // sum sqrt((n+1)(n+2) term_n term_{n+2}) / norm
};

Moments moments(double q, double z_re, double z_im, std::size_t n_terms);

struct Report {
  double mean_n;
  double var_n;
  double mandel;
  double metric_omega;  // via the Var N / t identity, an independent route
  double mean_x;
  double var_x;
  double ratio_r;
  double snr;
};

Report report(double q, double z_re, double z_im, std::size_t n_terms);

// Both sides of the saturated uncertainty product: c d (1 + (q-1) t).
long double intelligent_sides(double q, long double t, double c_times_d);

}  // namespace qdefcs::oracle
