#pragma once

#include "netglm/family.hpp"

namespace netglm {

// Overflow-safe 1 / (1 + exp(-eta)).
double logistic(double eta);
// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta);

// Mean of the conditional law with linear predictor eta. Poisson overflow
// throws NumericalError.
double conditional_mean(Family f, double eta);

// log f(value | eta). Normal: log N(value; eta, scale) with scale the variance.
double component_loglik(Family f, double value, double eta, double scale = 1.0);

// d/d eta and -d^2/d eta^2 of component_loglik.
double score_factor(Family f, double value, double eta, double scale = 1.0);
double curvature(Family f, double eta, double scale = 1.0);

// Throws ValidationError when value is outside the family's support.
void check_support(Family f, double value);

}  // namespace netglm
