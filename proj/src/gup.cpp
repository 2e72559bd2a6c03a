#include "qdefcs/gup.hpp"

#include <cmath>
#include <sstream>

namespace qdefcs::gup {

namespace {

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    std::ostringstream os;
    os << name << " must be finite and positive, got " << v;
    throw InvalidGupParamsError(os.str());
  }
}

}  // namespace

DeformationParameter q_from_alpha_beta(const GupParameters& p) {
  require_finite_positive(p.hbar, "hbar");
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || p.alpha * p.beta <= 0.0) {
    std::ostringstream os;
    os << "alpha and beta must share a sign (mixed signs or zero: alpha = " << p.alpha
       << ", beta = " << p.beta << ")";
    throw InvalidGupParamsError(os.str());
  }
  if (p.alpha > 0.0) {
    throw InvalidGupParamsError(
        "the q-mapping is implemented for the alpha < 0, beta < 0 branch only");
  }
  const long double u = static_cast<long double>(p.hbar) *
                        std::sqrt(std::fabs(static_cast<long double>(p.alpha)) *
                                  std::fabs(static_cast<long double>(p.beta)));
  if (!(u < 1.0L)) {
    std::ostringstream os;
    os << "hbar sqrt(|alpha beta|) = " << static_cast<double>(u)
       << " >= 1 leaves q outside (0, 1)";
    throw InvalidGupParamsError(os.str());
  }
  const long double q = (1.0L - u) / (1.0L + u);
  return DeformationParameter(static_cast<double>(q));
}

double effective_frequency(const DeformationParameter& dp, double omega) {
  require_finite_positive(omega, "omega");
  return (1.0 + dp.q) * omega / 2.0;
}

double check_isotropy(const GupParameters& p) {
  require_finite_positive(p.m, "m");
  require_finite_positive(p.omega, "omega");
  const double a = std::fabs(p.alpha);
  if (!(a > 0.0)) throw InvalidGupParamsError("alpha must be nonzero");
  const double b = std::fabs(p.beta);
  return std::fabs(a - p.m * p.m * p.omega * p.omega * b) / a;
}

bool minimal_uncertainty_exists(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha * beta <= 0.0) {
    std::ostringstream os;
    os << "alpha and beta must share a sign (mixed signs or zero: alpha = " << alpha
       << ", beta = " << beta << ")";
    throw InvalidGupParamsError(os.str());
  }
  return alpha > 0.0;
}

}  // namespace qdefcs::gup
