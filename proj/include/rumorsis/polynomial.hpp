#pragma once

#include <span>
#include <vector>

namespace rumorsis::poly {

/// Evaluates sum coeffs[i] * t^(n-1-i) (highest degree first) by Horner's rule.
double evaluate(std::span<const double> coeffs, double t);

/// Number of sign changes in the coefficient sequence, zeros skipped.
/// By Descartes' rule this bounds the number of positive real roots.
int sign_changes(std::span<const double> coeffs);

/// Real roots of c3 t^3 + c2 t^2 + c1 t + c0, ascending, repeated roots listed once.
/// Degrades to the quadratic / linear formula when leading coefficients vanish.
std::vector<double> real_roots_cubic(double c3, double c2, double c1, double c0);

} // namespace rumorsis::poly
