#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qdefcs/observables.hpp"
#include "qdefcs/oracle.hpp"
#include "qdefcs/verify.hpp"

using namespace qdefcs;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

}  // namespace

TEST_CASE("vacuum observables") {
  const QCoherentState vac = build_state(DeformationParameter(0.96), 0.0, 1e-12);
  CHECK(mean_n(vac) == 0.0);
  const QuadratureMoments quad = quadrature(vac);
  CHECK(quad.mean_x == 0.0);
  CHECK(quad.var_x == 0.5);
  CHECK(snr(vac) == 0.0);
  CHECK_THROWS_AS(static_cast<void>(mandel(vac)), DegenerateStateError);
  const auto lm = conventional_ladder_moments(vac);
  CHECK(std::abs(lm.mean_b) == 0.0);
  CHECK(std::abs(lm.mean_b2) == 0.0);
  CHECK(lm.mean_n == 0.0);
}

TEST_CASE("metric factor is exactly 1 at t = 0 and ~1 classically") {
  CHECK(metric_factor(DeformationParameter(0.5), 0.0, 1e-12) == 1.0);
  CHECK(metric_factor(DeformationParameter(2.0), 0.0, 1e-12) == 1.0);
  for (double t : {0.3, 1.0, 3.0}) {
    CHECK(std::abs(metric_factor(DeformationParameter(0.999999), t, 1e-12) - 1.0) < 1e-4);
  }
}

TEST_CASE("classical limit of the full report") {
  const DeformationParameter dp(0.999999);
  const ObservableReport rep = report_at(dp, 1.0);
  CHECK(std::abs(rep.mean_n - 1.0) < 1e-4);        // Poisson mean = t
  CHECK(std::abs(rep.mandel_q) < 1e-4);            // Poissonian
  CHECK(std::abs(rep.mean_x - std::sqrt(2.0)) < 1e-4);
  CHECK(std::abs(rep.var_x - 0.5) < 1e-4);
  CHECK(std::abs(rep.ratio_r - 1.0) < 1e-4);
  CHECK(std::abs(rep.snr_sigma - 4.0) < 1e-3);     // 4 N_s at real z
  const auto lm =
      conventional_ladder_moments(build_state(dp, {0.7, 0.4}, 1e-12));
  CHECK(std::abs(lm.mean_b - std::complex<double>(0.7, 0.4)) < 1e-4);
  CHECK(std::abs(lm.mean_b2 - std::complex<double>(0.7, 0.4) *
                                  std::complex<double>(0.7, 0.4)) < 1e-4);
}

TEST_CASE("pinned moments against the extended-precision oracle") {
  // mean photon number at q = 0.96, t = 0.5
  const QCoherentState s1 =
      build_state(DeformationParameter(0.96), std::sqrt(0.5), 1e-14);
  CHECK(mean_n(s1) == doctest::Approx(0.50517252637414216).epsilon(1e-12));

  // Mandel parameter at q = 0.94, t = 2: positive (super-Poissonian)
  const QCoherentState s2 =
      build_state(DeformationParameter(0.94), std::sqrt(2.0), 1e-14);
  CHECK(mandel(s2) == doctest::Approx(0.069030442809062636).epsilon(1e-11));
  CHECK(mandel(s2) > 0.0);

  // <b> at q = 0.96, z = 0.3: leading order z(1 + (sqrt(2/(1+q)) - 1)t)
  const auto lm =
      conventional_ladder_moments(build_state(DeformationParameter(0.96), 0.3, 1e-14));
  CHECK(lm.mean_b.real() == doctest::Approx(0.30027466351197710).epsilon(1e-12));
  CHECK(lm.mean_b.imag() == 0.0);
  const double leading = 0.3 * (1.0 + (std::sqrt(2.0 / 1.96) - 1.0) * 0.09);
  CHECK(std::abs(lm.mean_b.real() - leading) < 1e-6);

  // full report at q = 0.96, z = 0.4 + 0.3i
  const ObservableReport rep = report_at(DeformationParameter(0.96), {0.4, 0.3});
  CHECK(rep.mean_n == doctest::Approx(0.25128425286356801).epsilon(1e-12));
  CHECK(rep.mean_x == doctest::Approx(0.56712917328705646).epsilon(1e-12));
  CHECK(rep.var_x == doctest::Approx(0.50072140843503246).epsilon(1e-12));
  CHECK(rep.snr_sigma == doctest::Approx(0.64234421331915478).epsilon(1e-11));
  CHECK(rep.snr_sigma < 4.0 * rep.mean_n);  // sigma < 4<N>
}

TEST_CASE("closed-form slopes") {
  const SlopeSet s98 = small_t_slopes(DeformationParameter(0.98));
  CHECK(s98.d_mandel == doctest::Approx(0.010101010101010102).epsilon(1e-15));
  const SlopeSet s96 = small_t_slopes(DeformationParameter(0.96));
  CHECK(s96.d_ratio_imag == doctest::Approx(-0.020305089104421390).epsilon(1e-12));
  const SlopeSet s94 = small_t_slopes(DeformationParameter(0.94));
  CHECK(s94.d_omega == doctest::Approx(0.061855670103092786).epsilon(1e-12));
  const SlopeSet s125 = small_t_slopes(DeformationParameter(1.25));
  CHECK(s125.d_ratio_real_superunit ==
        doctest::Approx(-0.11438191683587318).epsilon(1e-12));
  const SlopeSet classical = small_t_slopes(DeformationParameter(1.0));
  CHECK(classical.d_omega == 0.0);
  CHECK(classical.d_mandel == 0.0);
  CHECK(classical.d_ratio_imag == 0.0);
  CHECK(classical.d_ratio_real_superunit == 0.0);
}

TEST_CASE("Richardson-extrapolated slopes meet the closed forms") {
  const DeformationParameter dp(0.94);
  const double s_omega = verify::richardson_slope(
      [&](double t) { return metric_factor(dp, t, 1e-13); }, 1.0);
  CHECK(std::abs(s_omega - 0.061855670103092786) < 0.01 * 0.0618);

  const DeformationParameter dp98(0.98);
  const double s_mandel = verify::richardson_slope(
      [&](double t) { return mandel(build_state(dp98, std::sqrt(t), 1e-13)); }, 0.0);
  CHECK(std::abs(s_mandel - 0.010101010101010102) < 0.01 * 0.0101);
}

TEST_CASE("variance ratio basics") {
  CHECK(variance_ratio(DeformationParameter(0.94), 0.0, Phase::RealZ, 1e-12) == 1.0);
  CHECK(variance_ratio(DeformationParameter(0.94), 0.0, Phase::ImagZ, 1e-12) == 1.0);
  // squeezing below the vacuum level in both quoted branches
  CHECK(variance_ratio(DeformationParameter(0.94), 0.5, Phase::ImagZ, 1e-12) < 1.0);
  CHECK(variance_ratio(DeformationParameter(1.25), 0.5, Phase::RealZ, 1e-12) < 1.0);
}

TEST_CASE("snr vanishes for purely imaginary z") {
  const QCoherentState s = build_state(DeformationParameter(0.96), {0.0, 0.8}, 1e-12);
  CHECK(snr(s) <= 1e-10);
}

TEST_CASE("coefficient of 2(Re z)^2 in the quadrature variance") {
  // t -> 0 limit is sqrt(2/(1+q)) - 1
  const double c_small = quadrature_coefficient_re2(DeformationParameter(0.96), 1e-4, 1e-14);
  CHECK(std::abs(c_small - (std::sqrt(2.0 / 1.96) - 1.0)) < 1e-4);
  CHECK(c_small > 0.0);  // positive => max squeezing at imaginary z

  CHECK(std::abs(quadrature_coefficient_re2(DeformationParameter(1.0), 0.7, 1e-14)) < 1e-6);

  const double c_half = quadrature_coefficient_re2(DeformationParameter(0.5), 0.5, 1e-14);
  CHECK(c_half == doctest::Approx(0.18556310550817443).epsilon(1e-11));
  CHECK(c_half > 0.0);

  // positivity across the quantified window
  for (double q : {0.5, 0.7, 0.9, 0.98}) {
    for (int i = 1; i <= 10; ++i) {
      CHECK(quadrature_coefficient_re2(DeformationParameter(q), i / 10.0, 1e-12) > 0.0);
    }
  }
}

TEST_CASE("intelligent equality saturates on the eigenstate") {
  const QCoherentState vac = build_state(DeformationParameter(0.5), 0.0, 1e-12);
  const IntelligentPair vp = intelligent_pair(vac);
  CHECK(vp.uncertainty_product == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(vp.half_commutator == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(intelligent_check(vac) == doctest::Approx(0.0).epsilon(1e-14));

  for (double q : {0.5, 0.96, 1.0, 1.25, 2.0}) {
    const DeformationParameter dp(q);
    const QCoherentState s = build_state(dp, {0.6, -0.4}, 1e-12);
    CHECK(intelligent_check(s) <= 1e-8);
    const double closed =
        static_cast<double>(oracle::intelligent_sides(q, s.t(), 0.5));
    const IntelligentPair pair = intelligent_pair(s);
    CHECK(std::abs(pair.uncertainty_product - closed) <= 1e-8);
    CHECK(std::abs(pair.half_commutator - closed) <= 1e-8);
  }

  // scale invariance of the residual
  const QCoherentState s = build_state(DeformationParameter(0.8), {0.3, 0.5}, 1e-12);
  CHECK(intelligent_check(s, 3.7) <= 1e-8);
  CHECK_THROWS_AS(static_cast<void>(intelligent_check(s, -1.0)), std::invalid_argument);
}

TEST_CASE("metric factor equals Var N / t (independent algebraic route)") {
  for (double q : {0.5, 0.94, 1.3}) {
    const DeformationParameter dp(q);
    for (double t : {0.2, 0.8, 1.5}) {
      if (dp.regime == Regime::SubUnit && t >= 0.9 * radius_of_convergence(dp)) continue;
      const QCoherentState s = build_state(dp, std::sqrt(t), 1e-14);
      CHECK(metric_factor(dp, t, 1e-14) ==
            doctest::Approx(variance_n(s) / t).epsilon(1e-10));
    }
  }
}

TEST_CASE("report matches the oracle within its certified bound") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const double q = rep % 2 == 0 ? uniform(rng, 0.35, 0.98) : uniform(rng, 1.02, 2.2);
    const DeformationParameter dp(q);
    const double t_hi =
        dp.regime == Regime::SubUnit ? 0.5 * radius_of_convergence(dp) : 3.0;
    const double t = uniform(rng, 0.05, t_hi);
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const std::complex<double> z = std::polar(std::sqrt(t), theta);

    const ObservableReport pipeline = report_at(dp, z, 1e-12);
    CHECK(pipeline.error_bound <= 1e-12);
    const oracle::Report reference =
        oracle::report(q, z.real(), z.imag(), pipeline.n_max + 400);
    const double slack = pipeline.error_bound + 1e-12;
    CHECK(std::abs(pipeline.mean_n - reference.mean_n) <= slack);
    CHECK(std::abs(pipeline.var_n - reference.var_n) <= slack);
    CHECK(std::abs(pipeline.mandel_q - reference.mandel) <= slack);
    CHECK(std::abs(pipeline.metric_omega - reference.metric_omega) <= slack);
    CHECK(std::abs(pipeline.mean_x - reference.mean_x) <= slack);
    CHECK(std::abs(pipeline.var_x - reference.var_x) <= slack);
    CHECK(std::abs(pipeline.snr_sigma - reference.snr) <= slack);
  }
}

TEST_CASE("Mandel parameter stays positive deep into the disc") {
  for (double q : {0.94, 0.96, 0.98}) {
    const DeformationParameter dp(q);
    const double top = 0.9 * radius_of_convergence(dp);
    for (int i = 1; i <= 20; ++i) {
      const double t = top * i / 21.0;
      CHECK(mandel(build_state(dp, std::sqrt(t), 1e-12, 0.95)) > 0.0);
    }
  }
}

TEST_CASE("snr grows along both cartesian axes inside the monotone window") {
  // directional growth holds until sigma turns over near the disc boundary
  // (measured turnover t ~ 0.8 radius); asserted on t <= 0.7 radius.
  for (double q : {0.5, 0.94}) {
    const DeformationParameter dp(q);
    const double side = std::sqrt(0.7 * radius_of_convergence(dp) / 2.0);
    const int n = 8;
    for (int jy = 0; jy < n; ++jy) {
      const double y = side * jy / (n - 1);
      double prev = -1.0;
      for (int ix = 0; ix < n; ++ix) {
        const double x = side * ix / (n - 1);
        const double sigma = snr(build_state(dp, {x, y}, 1e-12));
        if (ix > 0) CHECK(sigma > prev);
        prev = sigma;
      }
    }
    for (int ix = 1; ix < n; ++ix) {
      const double x = side * ix / (n - 1);
      double prev = -1.0;
      for (int jy = 0; jy < n; ++jy) {
        const double y = side * jy / (n - 1);
        const double sigma = snr(build_state(dp, {x, y}, 1e-12));
        if (jy > 0) CHECK(sigma > prev);
        prev = sigma;
      }
    }
  }
}

TEST_CASE("report at the vacuum leaves the Mandel parameter undefined") {
  const ObservableReport rep = report_at(DeformationParameter(0.9), 0.0);
  CHECK(std::isnan(rep.mandel_q));
  CHECK(rep.metric_omega == 1.0);
  CHECK(rep.var_x == 0.5);
  CHECK(rep.error_bound == 0.0);
}

TEST_CASE("ladder moment error bounds cover the truth") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 12; ++rep) {
    const double q = rep % 2 == 0 ? uniform(rng, 0.4, 0.97) : uniform(rng, 1.05, 2.0);
    const DeformationParameter dp(q);
    const double t_hi =
        dp.regime == Regime::SubUnit ? 0.5 * radius_of_convergence(dp) : 3.0;
    const double t = uniform(rng, 0.05, t_hi);
    const QCoherentState s = build_state(dp, std::sqrt(t), 1e-10);
    const auto lm = conventional_ladder_moments(s);
    const oracle::Moments om = oracle::moments(q, std::sqrt(t), 0.0, s.n_max() + 400);
    CHECK(std::abs(lm.mean_b.real() - static_cast<double>(om.pair1)) <=
          lm.bound_b + 1e-13);
    CHECK(std::abs(lm.mean_b2.real() - static_cast<double>(om.pair2)) <=
          lm.bound_b2 + 1e-13);
    CHECK(std::abs(lm.mean_n - static_cast<double>(om.mean_n)) <= lm.bound_n + 1e-13);
  }
}
