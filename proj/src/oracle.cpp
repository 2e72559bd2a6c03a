#include "qdefcs/oracle.hpp"

#include <cmath>
#include <vector>

namespace qdefcs::oracle {

long double bracket(double q, std::size_t n) {
  const long double ql = q;
  if (ql == 1.0L) return static_cast<long double>(n);
  return (1.0L - std::pow(ql, static_cast<long double>(n))) / (1.0L - ql);
}

namespace {

std::vector<long double> term_table(double q, long double t, std::size_t n_terms) {
  std::vector<long double> terms(n_terms + 1);
  terms[0] = 1.0L;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    terms[n] = terms[n - 1] * t / bracket(q, n);
  }
  return terms;
}

}  // namespace

long double q_exponential_sum(double q, long double t, std::size_t n_terms) {
  long double acc = 0.0L;
  long double term = 1.0L;
  for (std::size_t n = 0; n <= n_terms; ++n) {
    acc += term;
    term = term * t / bracket(q, n + 1);
  }
  return acc;
}

long double tail_sum(double q, long double t, std::size_t from, std::size_t count) {
  long double term = 1.0L;
  for (std::size_t n = 1; n <= from; ++n) term = term * t / bracket(q, n);
  long double acc = 0.0L;
  for (std::size_t n = from; n < from + count; ++n) {
    acc += term;
    term = term * t / bracket(q, n + 1);
  }
  return acc;
}

Moments moments(double q, double z_re, double z_im, std::size_t n_terms) {
  const long double t = static_cast<long double>(z_re) * z_re +
                        static_cast<long double>(z_im) * z_im;
  const std::vector<long double> terms = term_table(q, t, n_terms + 2);

  Moments m;
  for (std::size_t n = 0; n <= n_terms; ++n) m.norm += terms[n];
  for (std::size_t n = 1; n <= n_terms; ++n) {
    m.mean_n += static_cast<long double>(n) * terms[n];
    m.mean_n2 += static_cast<long double>(n) * static_cast<long double>(n) * terms[n];
  }
  for (std::size_t n = 0; n + 1 <= n_terms; ++n) {
    m.pair1 += std::sqrt(static_cast<long double>(n + 1) * terms[n] * terms[n + 1]);
  }
  for (std::size_t n = 0; n + 2 <= n_terms; ++n) {
    m.pair2 += std::sqrt(static_cast<long double>(n + 1) *
                         static_cast<long double>(n + 2) * terms[n] * terms[n + 2]);
  }
  m.mean_n /= m.norm;
  m.mean_n2 /= m.norm;
  m.pair1 /= m.norm;
  m.pair2 /= m.norm;
  return m;
}

Report report(double q, double z_re, double z_im, std::size_t n_terms) {
  const Moments m = moments(q, z_re, z_im, n_terms);
  const long double t = static_cast<long double>(z_re) * z_re +
                        static_cast<long double>(z_im) * z_im;
  const long double var_n = m.mean_n2 - m.mean_n * m.mean_n;
  const long double theta = std::atan2(static_cast<long double>(z_im),
                                       static_cast<long double>(z_re));
  const long double re_b = m.pair1 * std::cos(theta);
  const long double mean_x = std::sqrt(2.0L) * re_b;
  const long double var_x =
      0.5L + m.mean_n + m.pair2 * std::cos(2.0L * theta) - 2.0L * re_b * re_b;

  Report r;
  r.mean_n = static_cast<double>(m.mean_n);
  r.var_n = static_cast<double>(var_n);
  r.mandel = t > 0.0L ? static_cast<double>((var_n - m.mean_n) / m.mean_n) : 0.0;
  r.metric_omega = t > 0.0L ? static_cast<double>(var_n / t) : 1.0;
  r.mean_x = static_cast<double>(mean_x);
  r.var_x = static_cast<double>(var_x);
  r.ratio_r = static_cast<double>(2.0L * var_x);
  r.snr = static_cast<double>(mean_x * mean_x / var_x);
  return r;
}

long double intelligent_sides(double q, long double t, double c_times_d) {
  return static_cast<long double>(c_times_d) *
         (1.0L + (static_cast<long double>(q) - 1.0L) * t);
}

}  // namespace qdefcs::oracle
