#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qdefcs/oracle.hpp"
#include "qdefcs/qcore.hpp"

using namespace qdefcs;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

// geometric-tail acceptance bound at truncation index n, long double route
long double bound_at(double q, double t, std::size_t n) {
  long double term = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) term *= t / oracle::bracket(q, k);
  const long double r = t / oracle::bracket(q, n + 1);
  if (!(r < 1.0L)) return std::numeric_limits<long double>::infinity();
  return term * r / (1.0L - r);
}

}  // namespace

TEST_CASE("deformation parameter validation and regimes") {
  CHECK(DeformationParameter(0.5).regime == Regime::SubUnit);
  CHECK(DeformationParameter(1.0).regime == Regime::Classical);
  CHECK(DeformationParameter(1.5).regime == Regime::SuperUnit);
  CHECK_THROWS_AS(DeformationParameter(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeformationParameter(-0.3), std::invalid_argument);
  CHECK_THROWS_AS(DeformationParameter(std::nan("")), std::invalid_argument);
}

TEST_CASE("q_bracket values") {
  const DeformationParameter half(0.5);
  CHECK(q_bracket(half, 3) == doctest::Approx(1.75).epsilon(1e-15));  // 1 + q + q^2
  CHECK(q_bracket(half, 1) == 1.0);
  CHECK(q_bracket(half, 0) == 0.0);
  CHECK(q_bracket(DeformationParameter(1.0), 7) == 7.0);

  // [infinity]_q = 1/(1-q) is the squared disc radius
  CHECK(q_bracket(DeformationParameter(0.96), kInfiniteN) ==
        doctest::Approx(25.0).epsilon(1e-12));
  CHECK(std::isinf(q_bracket(DeformationParameter(1.0), kInfiniteN)));
  CHECK(std::isinf(q_bracket(DeformationParameter(2.0), kInfiniteN)));
}

TEST_CASE("q_bracket monotone in n and bounded by the q<1 limit") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    const DeformationParameter dp(uniform(rng, 0.05, 3.0));
    const double limit =
        dp.regime == Regime::SubUnit ? 1.0 / (1.0 - dp.q) : 0.0;
    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 200; ++n) {
      const double v = q_bracket(dp, n);
      CHECK(v >= prev);
      if (dp.regime == Regime::SubUnit) {
        CHECK(v <= limit);
        // the increment [n+1]-[n] = q^n: strictness holds while it is
        // representable against the saturation value
        if (pow_q(dp.q, n - 1) > 16 * limit * 0x1.0p-52) CHECK(v > prev);
      } else {
        CHECK(v > prev);
      }
      prev = v;
    }
  }
}

TEST_CASE("q_bracket classical-limit consistency") {
  for (double q : {1.0 - 1e-6, 1.0 + 1e-6}) {
    const DeformationParameter dp(q);
    for (std::uint64_t n = 1; n <= 100; ++n) {
      CHECK(std::abs(q_bracket(dp, n) - static_cast<double>(n)) <=
            1e-4 * static_cast<double>(n));
    }
  }
}

TEST_CASE("log_q_factorial") {
  const DeformationParameter half(0.5);
  CHECK(log_q_factorial(half, 0) == 0.0);
  // [3]_0.5! = 1 * 1.5 * 1.75 = 2.625
  CHECK(log_q_factorial(half, 3) ==
        doctest::Approx(0.96508089604358707).epsilon(1e-14));
  // [3]_2! = 1 * 3 * 7 = 21
  CHECK(log_q_factorial(DeformationParameter(2.0), 3) ==
        doctest::Approx(3.0445224377234230).epsilon(1e-14));
  CHECK(log_q_factorial(DeformationParameter(1.0), 5) ==
        doctest::Approx(std::log(120.0)).epsilon(1e-14));

  const auto table = log_q_factorial_table(half, 6);
  REQUIRE(table.size() == 7);
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(table[n] == doctest::Approx(log_q_factorial(half, n)).epsilon(1e-14));
  }
}

TEST_CASE("radius of convergence") {
  CHECK(radius_of_convergence(DeformationParameter(0.94)) ==
        doctest::Approx(16.666666666666668).epsilon(1e-14));
  CHECK(std::isinf(radius_of_convergence(DeformationParameter(1.0))));
  CHECK(std::isinf(radius_of_convergence(DeformationParameter(1.5))));
}

TEST_CASE("choose_truncation at t = 0") {
  const TruncationSpec spec = choose_truncation(DeformationParameter(0.7), 0.0, 1e-12);
  CHECK(spec.n_max == 0);
  CHECK(spec.achieved_bound == 0.0);
}

TEST_CASE("choose_truncation picks the smallest admissible N") {
  const DeformationParameter dp(0.96);
  const double tol = 1e-12;
  const TruncationSpec spec = choose_truncation(dp, 1.0, tol);
  CHECK(spec.achieved_bound < tol);
  CHECK(spec.tail_ratio < 1.0);
  CHECK(bound_at(0.96, 1.0, spec.n_max) < static_cast<long double>(tol));
  REQUIRE(spec.n_max > 0);
  CHECK(bound_at(0.96, 1.0, spec.n_max - 1) >= static_cast<long double>(tol));

  // direct extended-precision tail against the certified bound
  const long double tail = oracle::tail_sum(0.96, 1.0L, spec.n_max + 1, 200);
  CHECK(tail < static_cast<long double>(spec.achieved_bound));
}

TEST_CASE("choose_truncation refuses near-boundary cost blowup") {
  // t = 1.999 within the disc (radius 2) but r -> 0.9995: no N below the cap
  CHECK_THROWS_AS(choose_truncation(DeformationParameter(0.5), 1.999, 1e-12),
                  NonConvergentError);
}

TEST_CASE("truncation soundness across regimes") {
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 60; ++rep) {
    const double q = rep % 2 == 0 ? uniform(rng, 0.2, 0.99) : uniform(rng, 1.01, 2.5);
    const DeformationParameter dp(q);
    const double t_hi = dp.regime == Regime::SubUnit
                            ? 0.9 * radius_of_convergence(dp)
                            : 6.0;
    const double t = uniform(rng, 1e-3, t_hi);
    const double tol = std::pow(10.0, uniform(rng, -14.0, -6.0));
    TruncationSpec spec;
    try {
      spec = choose_truncation(dp, t, tol);
    } catch (const NonConvergentError&) {
      continue;  // admissible near the cap; soundness is about accepted specs
    }
    CHECK(spec.achieved_bound <= tol);
    const long double tail = oracle::tail_sum(q, t, spec.n_max + 1, 200);
    CHECK(tail <= static_cast<long double>(spec.achieved_bound));
  }
}

TEST_CASE("q_exponential basics") {
  CHECK(q_exponential(DeformationParameter(0.7), 0.0, 1e-12).value == 1.0);

  // q -> 1 recovers the classical exponential
  const SeriesValue near_e = q_exponential(DeformationParameter(0.999999), 1.0, 1e-12);
  CHECK(std::abs(near_e.value - std::exp(1.0)) < 1e-5);

  // 200-term extended-precision sum, frozen
  const SeriesValue v = q_exponential(DeformationParameter(0.5), 1.0, 1e-15);
  CHECK(v.value == doctest::Approx(3.4627466194550636).epsilon(1e-13));
  CHECK(v.tail_bound < 1e-15);
  CHECK(std::exp(v.log_value) == doctest::Approx(v.value).epsilon(1e-14));
}

TEST_CASE("q_exponential at q = 1 is the classical exponential") {
  const DeformationParameter one(1.0);
  const SeriesValue v = q_exponential(one, 2.0, 1e-14);
  CHECK(v.value == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(v.tail_bound < 1e-14);
}

TEST_CASE("q_exponential disc guard messages") {
  const DeformationParameter dp(0.5);  // radius 2
  CHECK_THROWS_WITH_AS(static_cast<void>(q_exponential(dp, 2.5, 1e-12)),
                       doctest::Contains("outside the convergence disc"), OutOfDiscError);
  CHECK_THROWS_WITH_AS(static_cast<void>(q_exponential(dp, 1.995, 1e-12)),
                       doctest::Contains("beyond the guard"), OutOfDiscError);
  CHECK_NOTHROW(static_cast<void>(q_exponential(dp, 1.9, 1e-10, 0.99)));
}

TEST_CASE("q_exponential refinement stability") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 40; ++rep) {
    const double q = rep % 2 == 0 ? uniform(rng, 0.2, 0.99) : uniform(rng, 1.01, 2.5);
    const DeformationParameter dp(q);
    const double t_hi =
        dp.regime == Regime::SubUnit ? 0.5 * radius_of_convergence(dp) : 4.0;
    const double t = uniform(rng, 1e-3, t_hi);
    const double tol = std::pow(10.0, uniform(rng, -12.0, -6.0));
    const SeriesValue coarse = q_exponential(dp, t, tol);
    const SeriesValue fine = q_exponential(dp, t, tol / 2.0);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.tail_bound);
  }
}

TEST_CASE("pow_q agrees with std::pow on both code paths") {
  for (double q : {0.3, 0.96, 1.7}) {
    CHECK(pow_q(q, 5) == doctest::Approx(std::pow(q, 5.0)).epsilon(1e-14));
    CHECK(pow_q(q, 64) == doctest::Approx(std::pow(q, 64.0)).epsilon(1e-13));
    CHECK(pow_q(q, 301) == doctest::Approx(std::pow(q, 301.0)).epsilon(1e-12));
  }
  CHECK(pow_q(0.9, 0) == 1.0);
}

TEST_CASE("log_sum_exp") {
  const double terms[] = {0.0, 0.0};
  CHECK(log_sum_exp(terms) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double shifted[] = {700.0, 700.0 + std::log(2.0)};
  CHECK(log_sum_exp(shifted) == doctest::Approx(700.0 + std::log(3.0)).epsilon(1e-14));
  const double with_ninf[] = {-std::numeric_limits<double>::infinity(), 1.0};
  CHECK(log_sum_exp(with_ninf) == doctest::Approx(1.0).epsilon(1e-15));
}
