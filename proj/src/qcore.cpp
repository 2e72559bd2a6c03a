#include "qdefcs/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdefcs {

DeformationParameter::DeformationParameter(double q_value) : q(q_value) {
  if (!(q_value > 0.0) || !std::isfinite(q_value)) {
    std::ostringstream os;
    os << "deformation parameter must satisfy q > 0, got q = " << q_value;
    throw std::invalid_argument(os.str());
  }
  if (q_value < 1.0) {
    regime = Regime::SubUnit;
  } else if (q_value == 1.0) {
    regime = Regime::Classical;
  } else {
    regime = Regime::SuperUnit;
  }
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::SubUnit: return "sub-unit";
    case Regime::Classical: return "classical";
    case Regime::SuperUnit: return "super-unit";
  }
  return "?";
}

double pow_q(double q, std::uint64_t n) {
  if (n == 0) return 1.0;
  if (n > 64) return std::exp(static_cast<double>(n) * std::log(q));
  double base = q;
  double acc = 1.0;
  std::uint64_t e = n;
  while (e != 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

double q_bracket(const DeformationParameter& dp, std::uint64_t n) {
  if (n == kInfiniteN) {
    if (dp.regime == Regime::SubUnit) return 1.0 / (1.0 - dp.q);
    return std::numeric_limits<double>::infinity();
  }
  if (n == 0) return 0.0;
  if (dp.classical()) return static_cast<double>(n);
  if (n == 1) return 1.0;
  // (1 - q^n)/(1 - q); -expm1 keeps the numerator accurate near q = 1.
  const double x = static_cast<double>(n) * std::log(dp.q);
  return -std::expm1(x) / (1.0 - dp.q);
}

double log_q_bracket(const DeformationParameter& dp, std::uint64_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (dp.classical()) return std::log(static_cast<double>(n));
  const double x = static_cast<double>(n) * std::log(dp.q);  // ln q^n
  if (dp.regime == Regime::SubUnit) {
    // ln(1 - q^n) - ln(1 - q)
    return std::log(-std::expm1(x)) - std::log(1.0 - dp.q);
  }
  // q > 1: ln(q^n - 1) - ln(q - 1), organized to avoid overflow of q^n.
  if (x > 36.0) {
    return x + std::log1p(-std::exp(-x)) - std::log(dp.q - 1.0);
  }
  return std::log(std::expm1(x)) - std::log(dp.q - 1.0);
}

double log_q_factorial(const DeformationParameter& dp, std::uint64_t n) {
  if (dp.classical()) return std::lgamma(static_cast<double>(n) + 1.0);
  double acc = 0.0;
  for (std::uint64_t k = 2; k <= n; ++k) acc += log_q_bracket(dp, k);
  return acc;  // [1]_q = 1 contributes nothing
}

std::vector<double> log_q_factorial_table(const DeformationParameter& dp, std::size_t n) {
  std::vector<double> table(n + 1, 0.0);
  for (std::size_t k = 2; k <= n; ++k) {
    table[k] = table[k - 1] + log_q_bracket(dp, static_cast<std::uint64_t>(k));
  }
  return table;
}

double radius_of_convergence(const DeformationParameter& dp) {
  if (dp.regime == Regime::SubUnit) return 1.0 / (1.0 - dp.q);
  return std::numeric_limits<double>::infinity();
}

void require_inside_disc(const DeformationParameter& dp, double t, double guard) {
  if (t < 0.0 || !std::isfinite(t)) {
    std::ostringstream os;
    os << "t = |z|^2 must be finite and non-negative, got " << t;
    throw std::invalid_argument(os.str());
  }
  if (dp.regime != Regime::SubUnit) return;
  const double radius = radius_of_convergence(dp);
  if (t >= radius) {
    std::ostringstream os;
    os << "t = " << t << " is outside the convergence disc (radius " << radius
       << " at q = " << dp.q << ")";
    throw OutOfDiscError(os.str());
  }
  if (t >= guard * radius) {
    std::ostringstream os;
    os << "t = " << t << " is inside the convergence disc (radius " << radius
       << ") but beyond the guard fraction " << guard
       << "; truncation cost diverges near the boundary";
    throw OutOfDiscError(os.str());
  }
}

TruncationSpec choose_truncation(const DeformationParameter& dp, double t,
                                 double tolerance, std::size_t cap) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("truncation tolerance must be positive");
  }
  if (t < 0.0 || !std::isfinite(t)) {
    throw std::invalid_argument("t must be finite and non-negative");
  }
  if (t == 0.0) {
    return TruncationSpec{0, tolerance, 0.0, 0.0, 0.0};
  }
  const double log_t = std::log(t);
  double log_term = 0.0;  // ln term_0
  for (std::size_t n = 0; n <= cap; ++n) {
    const double log_br = log_q_bracket(dp, static_cast<std::uint64_t>(n) + 1);
    const double log_r = log_t - log_br;
    if (log_r < 0.0) {
      const double r = std::exp(log_r);
      // round the certified bound upward past the accumulated log-domain
      // rounding (~n ulps in log_term), so it stays a true upper bound;
      // clamp away the exp() underflow so a positive tail never reports 0
      const double fudge = 1.0 + 1e-15 * (static_cast<double>(n) + 100.0);
      const double bound =
          std::max(std::exp(log_term + log_r - std::log1p(-r)) * fudge,
                   std::numeric_limits<double>::denorm_min());
      if (bound < tolerance) {
        return TruncationSpec{n, tolerance, bound, r, log_term};
      }
    }
    log_term += log_t - log_br;
  }
  std::ostringstream os;
  os << "series tail bound not below " << tolerance << " within " << cap
     << " terms (q = " << dp.q << ", t = " << t << ")";
  throw NonConvergentError(os.str());
}

SeriesValue q_exponential(const DeformationParameter& dp, double t, double tolerance,
                          double guard) {
  require_inside_disc(dp, t, guard);
  const TruncationSpec spec = choose_truncation(dp, t, tolerance);
  if (t == 0.0) {
    return SeriesValue{1.0, 0.0, 0.0};
  }
  const std::vector<double> log_fact = log_q_factorial_table(dp, spec.n_max);
  std::vector<double> log_terms(spec.n_max + 1);
  const double log_t = std::log(t);
  for (std::size_t n = 0; n <= spec.n_max; ++n) {
    log_terms[n] = static_cast<double>(n) * log_t - log_fact[n];
  }
  const double log_value = log_sum_exp(log_terms);
  return SeriesValue{std::exp(log_value), log_value, spec.achieved_bound};
}

double log_sum_exp(std::span<const double> log_terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : log_terms) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : log_terms) {
    if (std::isfinite(x)) acc += std::exp(x - m);
  }
  return m + std::log(acc);
}

}  // namespace qdefcs
