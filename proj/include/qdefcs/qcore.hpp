#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qdefcs/errors.hpp"

namespace qdefcs {

// Deformation regime of the oscillator algebra.
enum class Regime { SubUnit, Classical, SuperUnit };

// Validated deformation parameter q > 0 with its regime tag.
// q = 1 is detected exactly and all q-arithmetic short-circuits to the
// classical formulas (n, n!, e^t) so no (1-q^n)/(1-q) indeterminacy arises.
struct DeformationParameter {
  double q;
  Regime regime;

  explicit DeformationParameter(double q_value);

  bool classical() const { return regime == Regime::Classical; }
};

const char* regime_name(Regime r);

// Sentinel accepted by q_bracket for [infinity]_q.
inline constexpr std::uint64_t kInfiniteN = std::numeric_limits<std::uint64_t>::max();

inline constexpr double kDefaultDiscGuard = 0.99;
inline constexpr std::size_t kDefaultTermCap = 10000;
inline constexpr double kDefaultTolerance = 1e-12;

// q^n: repeated squaring up to n = 64, exp(n ln q) beyond.
double pow_q(double q, std::uint64_t n);

// [n]_q = (1 - q^n)/(1 - q) for q != 1, n for q = 1.
// n = kInfiniteN gives 1/(1-q) for q < 1 and +infinity for q >= 1.
double q_bracket(const DeformationParameter& dp, std::uint64_t n);

// ln [n]_q, n >= 1. Stable for q near 1 and for large n in both regimes.
double log_q_bracket(const DeformationParameter& dp, std::uint64_t n);

// ln [n]_q! = sum_{k=1..n} ln [k]_q; 0 for n = 0.
double log_q_factorial(const DeformationParameter& dp, std::uint64_t n);

// Prefix table {ln [0]_q!, ..., ln [n]_q!} (size n+1).
std::vector<double> log_q_factorial_table(const DeformationParameter& dp, std::size_t n);

// Supremum of admissible t = |z|^2: 1/(1-q) for q < 1, +infinity otherwise.
double radius_of_convergence(const DeformationParameter& dp);

// Truncation point for the series sum t^n/[n]_q! with a certified
// geometric tail bound.
struct TruncationSpec {
  std::size_t n_max = 0;
  double tolerance = 0.0;
  double achieved_bound = 0.0;  // term_{n_max} * r/(1-r), < tolerance
  double tail_ratio = 0.0;      // r = t/[n_max+1]_q, < 1 at acceptance
  double log_last_term = 0.0;   // ln term_{n_max}, for weighted tail bounds
};

// Smallest N with term_N * r/(1-r) < tolerance, r = t/[N+1]_q < 1.
// Valid because [n]_q increases in n, so the term ratio t/[n+1]_q decreases.
// Throws NonConvergentError if no N <= cap qualifies.
TruncationSpec choose_truncation(const DeformationParameter& dp, double t,
                                 double tolerance, std::size_t cap = kDefaultTermCap);

// A series value carried with its log-domain representation (the linear
// value can overflow near the disc boundary) and a certified tail bound.
struct SeriesValue {
  double value = 0.0;
  double log_value = 0.0;
  double tail_bound = 0.0;
};

// e_q(t) = sum_{n>=0} t^n/[n]_q!, t in [0, guard * radius).
// Throws OutOfDiscError outside that range (message distinguishes
// "outside the disc" from "inside but beyond the guard"), and
// NonConvergentError from choose_truncation.
SeriesValue q_exponential(const DeformationParameter& dp, double t, double tolerance,
                          double guard = kDefaultDiscGuard);

// Raises OutOfDiscError unless t < guard * radius (no-op for q >= 1).
void require_inside_disc(const DeformationParameter& dp, double t, double guard);

// max-shifted log(sum(exp(x))); -inf entries are skipped.
double log_sum_exp(std::span<const double> log_terms);

}  // namespace qdefcs
