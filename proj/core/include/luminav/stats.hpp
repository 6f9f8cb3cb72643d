#pragma once

namespace luminav {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF. Accurate to full double precision via a
/// rational initial guess refined with one Halley step against erfc.
/// Returns -inf / +inf at p = 0 / 1; throws std::domain_error outside [0, 1].
double normal_quantile(double p);

/// Two-sided z value for a given confidence level, e.g. 0.95 -> 1.95996...
double confidence_z(double confidence);

}  // namespace luminav
