#include "netglm/glm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "netglm/error.hpp"

namespace netglm {

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  double e = std::exp(eta);
  return e / (1.0 + e);
}

double log1p_exp(double eta) {
  if (eta > 0) return eta + std::log1p(std::exp(-eta));
  return std::log1p(std::exp(eta));
}

double conditional_mean(Family f, double eta) {
  switch (f) {
    case Family::binomial: return logistic(eta);
    case Family::poisson: {
      double mu = std::exp(eta);
      if (!std::isfinite(mu)) throw NumericalError("poisson mean overflows at eta = " + std::to_string(eta));
      return mu;
    }
    case Family::normal: return eta;
  }
  return 0.0;
}

void check_support(Family f, double value) {
  switch (f) {
    case Family::binomial:
      if (value != 0.0 && value != 1.0) throw ValidationError("binomial value " + std::to_string(value) + " not in {0,1}");
      break;
    case Family::poisson:
      if (value < 0.0 || value != std::floor(value) || !std::isfinite(value))
        throw ValidationError("poisson value " + std::to_string(value) + " is not a non-negative integer");
      break;
    case Family::normal:
      if (!std::isfinite(value)) throw ValidationError("normal value is not finite");
      break;
  }
}

double component_loglik(Family f, double value, double eta, double scale) {
  switch (f) {
    case Family::binomial:
      // y eta - log(1 + e^eta), arranged so each branch stays finite.
      return value == 1.0 ? -log1p_exp(-eta) : -log1p_exp(eta);
    case Family::poisson: return value * eta - std::exp(eta) - std::lgamma(value + 1.0);
    case Family::normal: {
      double r = value - eta;
      return -0.5 * std::log(2.0 * std::numbers::pi * scale) - r * r / (2.0 * scale);
    }
  }
  return 0.0;
}

double score_factor(Family f, double value, double eta, double scale) {
  switch (f) {
    case Family::binomial: return value == 1.0 ? logistic(-eta) : -logistic(eta);
    case Family::poisson: return value - std::exp(eta);
    case Family::normal: return (value - eta) / scale;
  }
  return 0.0;
}

double curvature(Family f, double eta, double scale) {
  switch (f) {
    case Family::binomial: return logistic(eta) * logistic(-eta);
    case Family::poisson: return std::exp(eta);
    case Family::normal: return 1.0 / scale;
  }
  return 0.0;
}

}  // namespace netglm
