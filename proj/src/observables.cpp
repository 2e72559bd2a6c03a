#include "qdefcs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdefcs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Raw (unnormalized) weighted tails of sum w_n t^n/[n]_q!. All use the
// geometric majorant term_n <= term_N r^{n-N} for n >= N, valid because the
// term ratio t/[n+1]_q decreases in n.
struct TailBudget {
  double e = 0.0;   // sum_{n>N} term_n
  double n1 = 0.0;  // sum_{n>N} n term_n
  double n2 = 0.0;  // sum_{n>N} n^2 term_n
  double p1 = 0.0;  // sum_{n>=N}  sqrt(n+1) sqrt(term_n term_{n+1})
  double p2 = 0.0;  // sum_{n>=N-1} sqrt((n+1)(n+2)) sqrt(term_n term_{n+2})
};

TailBudget tail_budget(const QCoherentState& s) {
  TailBudget tb;
  if (s.t() == 0.0) return tb;
  const TruncationSpec& spec = s.spec();
  const double r = spec.tail_ratio;
  const double tau = spec.achieved_bound;
  const double gN = static_cast<double>(spec.n_max);
  const double inv1 = 1.0 / (1.0 - r);
  const double term_top = std::exp(spec.log_last_term);

  tb.e = tau;
  tb.n1 = tau * (gN + inv1);
  tb.n2 = tau * (gN * gN + 2.0 * gN * inv1 + (1.0 + r) * inv1 * inv1);

  // cross-term series: sqrt(term_n term_{n+s}) <= term_n r^{s/2} for n >= N
  tb.p1 = std::sqrt(r) * term_top * std::sqrt(gN + 1.0) * inv1 * inv1;

  // p2 truncates at N-2, so the n = N-1 and n = N pieces are added from the
  // exactly known terms before the geometric remainder takes over at N+1.
  const std::size_t n_top = spec.n_max;
  double p2 = r * tau * (gN + 2.0 + inv1);  // sum_{n>N} (n+2) term_n r
  p2 += r * (gN + 2.0) * term_top;          // n = N piece
  if (n_top >= 1) {
    const double term_prev = std::exp(2.0 * s.log_magnitude(n_top - 1));
    p2 += (gN + 1.0) * std::sqrt(term_prev * term_top * std::max(r, 0.0));
  }
  tb.p2 = p2;
  return tb;
}

struct StateMoments {
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double pair1 = 0.0;  // <b> = pair1 e^{i arg z}
  double pair2 = 0.0;  // <b^2> = pair2 e^{2i arg z}
  double b_mean_n = 0.0;
  double b_mean_n2 = 0.0;
  double b_pair1 = 0.0;
  double b_pair2 = 0.0;
};

StateMoments state_moments(const QCoherentState& s) {
  StateMoments m;
  const std::size_t n_top = s.n_max();
  long double acc1 = 0.0L, acc2 = 0.0L;
  for (std::size_t n = 1; n <= n_top; ++n) {
    const long double p = s.probability(n);
    acc1 += static_cast<long double>(n) * p;
    acc2 += static_cast<long double>(n) * static_cast<long double>(n) * p;
  }
  m.mean_n = static_cast<double>(acc1);
  m.mean_n2 = static_cast<double>(acc2);

  const double log_norm = s.log_norm();
  long double accp1 = 0.0L, accp2 = 0.0L;
  for (std::size_t n = 0; n + 1 <= n_top; ++n) {
    accp1 += std::exp(s.log_magnitude(n) + s.log_magnitude(n + 1) - log_norm) *
             std::sqrt(static_cast<double>(n + 1));
  }
  for (std::size_t n = 0; n + 2 <= n_top; ++n) {
    accp2 += std::exp(s.log_magnitude(n) + s.log_magnitude(n + 2) - log_norm) *
             std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
  }
  m.pair1 = static_cast<double>(accp1);
  m.pair2 = static_cast<double>(accp2);

  if (s.t() > 0.0) {
    const TailBudget tb = tail_budget(s);
    const double inv_norm = std::exp(-s.log_norm());
    // |S/E_exact - S_N/E_N| <= (tail_S + value * tail_E)/E_N
    m.b_mean_n = (tb.n1 + m.mean_n * tb.e) * inv_norm;
    m.b_mean_n2 = (tb.n2 + m.mean_n2 * tb.e) * inv_norm;
    m.b_pair1 = (tb.p1 + m.pair1 * tb.e) * inv_norm;
    m.b_pair2 = (tb.p2 + m.pair2 * tb.e) * inv_norm;
  }
  return m;
}

double omega_bound(const QCoherentState& s, double x_val, double mean, double ep_val) {
  // omega = X - Y with X = A'/E and Y = (A/E)(E'/E)
  if (s.t() == 0.0) return 0.0;
  const TailBudget tb = tail_budget(s);
  const double inv_norm = std::exp(-s.log_norm());
  const double t = s.t();
  const double tail_ap = tb.n2 / t;
  const double tail_ep = tb.n1 / t;
  const double b_x = (tail_ap + x_val * tb.e) * inv_norm;
  const double b_u = (tb.n1 + mean * tb.e) * inv_norm;
  const double b_v = (tail_ep + ep_val * tb.e) * inv_norm;
  const double b_y = mean * b_v + ep_val * b_u + b_u * b_v;
  return b_x + b_y;
}

}  // namespace

double mean_n(const QCoherentState& state) { return state_moments(state).mean_n; }

double mean_n2(const QCoherentState& state) { return state_moments(state).mean_n2; }

double variance_n(const QCoherentState& state) {
  const StateMoments m = state_moments(state);
  return std::max(0.0, m.mean_n2 - m.mean_n * m.mean_n);
}

double mandel(const QCoherentState& state) {
  if (state.t() == 0.0) {
    throw DegenerateStateError("Mandel parameter is undefined at z = 0 (0/0)");
  }
  const StateMoments m = state_moments(state);
  if (!(m.mean_n > 0.0)) {
    throw DegenerateStateError(
        "Mandel parameter is undefined: |z|^2 is below the truncation resolution");
  }
  const double var = m.mean_n2 - m.mean_n * m.mean_n;
  return (var - m.mean_n) / m.mean_n;
}

double metric_factor_with_spec(const DeformationParameter& dp, double t,
                               const TruncationSpec& spec) {
  // n_max = 0 happens for t below the tolerance itself; omega = 1 + O(t) there
  if (t == 0.0 || spec.n_max == 0) return 1.0;
  const std::size_t n_top = spec.n_max;
  const std::vector<double> log_fact = log_q_factorial_table(dp, n_top);
  const double log_t = std::log(t);

  std::vector<double> le(n_top + 1), la, lep, lap;
  la.reserve(n_top);
  lep.reserve(n_top);
  lap.reserve(n_top);
  for (std::size_t n = 0; n <= n_top; ++n) {
    le[n] = static_cast<double>(n) * log_t - log_fact[n];
  }
  for (std::size_t n = 1; n <= n_top; ++n) {
    const double ln_n = std::log(static_cast<double>(n));
    la.push_back(ln_n + le[n]);
    lep.push_back(ln_n + le[n] - log_t);
    lap.push_back(2.0 * ln_n + le[n] - log_t);
  }
  const double log_e = log_sum_exp(le);
  const double log_a = log_sum_exp(la);
  const double log_ep = log_sum_exp(lep);
  const double log_ap = log_sum_exp(lap);
  return std::exp(log_ap - log_e) - std::exp(log_a + log_ep - 2.0 * log_e);
}

double metric_factor(const DeformationParameter& dp, double t, double tolerance,
                     double guard) {
  require_inside_disc(dp, t, guard);
  const TruncationSpec spec = choose_truncation(dp, t, tolerance);
  return metric_factor_with_spec(dp, t, spec);
}

LadderMoments conventional_ladder_moments(const QCoherentState& state) {
  const StateMoments m = state_moments(state);
  const double theta = std::arg(state.z());
  LadderMoments lm;
  lm.mean_b = std::polar(m.pair1, theta);
  lm.mean_b2 = std::polar(m.pair2, 2.0 * theta);
  lm.mean_n = m.mean_n;
  lm.bound_b = m.b_pair1;
  lm.bound_b2 = m.b_pair2;
  lm.bound_n = m.b_mean_n;
  return lm;
}

namespace {

QuadratureMoments quadrature_from(const StateMoments& m, double theta) {
  const double re_b = m.pair1 * std::cos(theta);
  QuadratureMoments q;
  q.mean_x = std::sqrt(2.0) * re_b;
  q.var_x = 0.5 + m.mean_n + m.pair2 * std::cos(2.0 * theta) - 2.0 * re_b * re_b;
  return q;
}

}  // namespace

QuadratureMoments quadrature(const QCoherentState& state) {
  return quadrature_from(state_moments(state), std::arg(state.z()));
}

double variance_ratio(const DeformationParameter& dp, double t, Phase phase,
                      double tolerance, double guard) {
  if (t < 0.0) throw std::invalid_argument("t must be non-negative");
  const std::complex<double> z = phase == Phase::RealZ
                                     ? std::complex<double>(std::sqrt(t), 0.0)
                                     : std::complex<double>(0.0, std::sqrt(t));
  const QCoherentState state = build_state(dp, z, tolerance, guard);
  return 2.0 * quadrature(state).var_x;
}

double snr(const QCoherentState& state) {
  const QuadratureMoments q = quadrature(state);
  if (!(q.var_x > 0.0)) {
    throw Error("quadrature variance is not positive; series evaluation failed");
  }
  return q.mean_x * q.mean_x / q.var_x;
}

SlopeSet small_t_slopes(const DeformationParameter& dp) {
  SlopeSet s;
  if (dp.classical()) return s;
  const double q = dp.q;
  s.d_omega = 2.0 * (1.0 - q) / (1.0 + q);
  s.d_mandel = (1.0 - q) / (1.0 + q);
  const double c = 2.0 * (1.0 - std::sqrt(2.0 / (1.0 + q)));
  s.d_ratio_imag = c;
  s.d_ratio_real_superunit = -c;
  return s;
}

double quadrature_coefficient_re2(const DeformationParameter& dp, double t,
                                  double tolerance, double guard) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("coefficient extraction needs t > 0");
  }
  const double root = std::sqrt(t);
  const QCoherentState real_state = build_state(dp, {root, 0.0}, tolerance, guard);
  const QCoherentState imag_state = build_state(dp, {0.0, root}, tolerance, guard);
  return (quadrature(real_state).var_x - quadrature(imag_state).var_x) / (2.0 * t);
}

IntelligentPair intelligent_pair(const QCoherentState& state, double mass_scale) {
  if (!(mass_scale > 0.0)) throw std::invalid_argument("mass_scale must be positive");
  const DeformationParameter& dp = state.deformation();
  const std::size_t n_top = state.n_max();
  const double log_norm = state.log_norm();
  const double theta = std::arg(state.z());

  long double a1 = 0.0L, a2 = 0.0L, nd = 0.0L, nu = 0.0L;
  for (std::size_t n = 0; n + 1 <= n_top; ++n) {
    a1 += std::exp(state.log_magnitude(n) + state.log_magnitude(n + 1) - log_norm +
                   0.5 * state.log_brackets()[n + 1]);
  }
  for (std::size_t n = 0; n + 2 <= n_top; ++n) {
    a2 += std::exp(state.log_magnitude(n) + state.log_magnitude(n + 2) - log_norm +
                   0.5 * (state.log_brackets()[n + 1] + state.log_brackets()[n + 2]));
  }
  for (std::size_t n = 1; n <= n_top; ++n) {
    nd += std::exp(state.log_brackets()[n] + 2.0 * state.log_magnitude(n) - log_norm);
  }
  for (std::size_t n = 0; n <= n_top; ++n) {
    const double log_br_next = log_q_bracket(dp, static_cast<std::uint64_t>(n) + 1);
    nu += std::exp(log_br_next + 2.0 * state.log_magnitude(n) - log_norm);
  }

  const double c = 1.0 / std::sqrt(2.0 * mass_scale);
  const double d = std::sqrt(mass_scale / 2.0);
  const double cos_t = std::cos(theta), sin_t = std::sin(theta), cos_2t = std::cos(2.0 * theta);
  const double mean_x = 2.0 * c * static_cast<double>(a1) * cos_t;
  const double mean_p = 2.0 * d * static_cast<double>(a1) * sin_t;
  const double x2 = c * c * (2.0 * static_cast<double>(a2) * cos_2t +
                             static_cast<double>(nu) + static_cast<double>(nd));
  const double p2 = d * d * (static_cast<double>(nu) + static_cast<double>(nd) -
                             2.0 * static_cast<double>(a2) * cos_2t);
  const double var_x = std::max(0.0, x2 - mean_x * mean_x);
  const double var_p = std::max(0.0, p2 - mean_p * mean_p);
  IntelligentPair pair;
  pair.uncertainty_product = std::sqrt(var_x * var_p);
  pair.half_commutator = c * d * std::abs(static_cast<double>(nu) - static_cast<double>(nd));
  return pair;
}

double intelligent_check(const QCoherentState& state, double mass_scale) {
  const IntelligentPair pair = intelligent_pair(state, mass_scale);
  return std::abs(pair.uncertainty_product - pair.half_commutator);
}

ObservableReport report_at(const DeformationParameter& dp, std::complex<double> z,
                           double tolerance, double guard) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double internal = tolerance * 1e-4;
  for (int attempt = 0; attempt < 3; ++attempt, internal *= 1e-4) {
    const QCoherentState state = build_state(dp, z, internal, guard);
    const StateMoments m = state_moments(state);
    const double theta = std::arg(state.z());
    const double t = state.t();

    ObservableReport rep;
    rep.n_max = state.n_max();
    rep.mean_n = m.mean_n;
    rep.var_n = std::max(0.0, m.mean_n2 - m.mean_n * m.mean_n);

    const QuadratureMoments quad = quadrature_from(m, theta);
    rep.mean_x = quad.mean_x;
    rep.var_x = quad.var_x;
    rep.ratio_r = 2.0 * quad.var_x;
    rep.snr_sigma = quad.mean_x * quad.mean_x / quad.var_x;

    double b_mandel = 0.0;
    if (t == 0.0) {
      rep.mandel_q = kNaN;
      rep.metric_omega = 1.0;
      rep.error_bound = 0.0;
      return rep;
    }
    rep.metric_omega = metric_factor_with_spec(dp, t, state.spec());

    // certified error propagation
    const double b_var = m.b_mean_n2 + (2.0 * m.mean_n + m.b_mean_n) * m.b_mean_n;
    if (m.mean_n > 0.0) {
      rep.mandel_q = (rep.var_n - m.mean_n) / m.mean_n;
      const double mean_floor = std::max(m.mean_n - m.b_mean_n, 1e-300);
      b_mandel = (b_var + m.b_mean_n) / mean_floor +
                 std::abs(rep.mandel_q) * m.b_mean_n / mean_floor;
    } else {
      rep.mandel_q = kNaN;  // |z|^2 below the truncation resolution
    }
    const double b_re_b = m.b_pair1 * std::abs(std::cos(theta));
    const double re_b = m.pair1 * std::cos(theta);
    const double b_mean_x = std::sqrt(2.0) * b_re_b;
    const double b_var_x =
        m.b_mean_n + m.b_pair2 + 2.0 * (2.0 * std::abs(re_b) + b_re_b) * b_re_b;
    const double var_floor = std::max(quad.var_x - b_var_x, 1e-300);
    const double b_snr = (2.0 * std::abs(quad.mean_x) + b_mean_x) * b_mean_x / var_floor +
                         quad.mean_x * quad.mean_x * b_var_x / (quad.var_x * var_floor);
    const double ep_val = m.mean_n / t;  // E'/E = <N>/t
    const double x_val = rep.metric_omega + m.mean_n * ep_val;
    const double b_omega = omega_bound(state, x_val, m.mean_n, ep_val);

    rep.error_bound = std::max({m.b_mean_n, b_var, b_mandel, b_omega, b_mean_x,
                                b_var_x, 2.0 * b_var_x, b_snr});
    if (rep.error_bound <= tolerance) return rep;
  }
  std::ostringstream os;
  os << "cannot certify observables at q = " << dp.q << ", |z|^2 = " << std::norm(z)
     << " to tolerance " << tolerance;
  throw NonConvergentError(os.str());
}

}  // namespace qdefcs
