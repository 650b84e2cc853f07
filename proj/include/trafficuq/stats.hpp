#pragma once

#include <cstdint>
#include <vector>

namespace tuq::stats {

double mean(const std::vector<double>& xs);

/// Population standard deviation (divides by n, not n-1).
double population_std(const std::vector<double>& xs);

/// Standard normal CDF via erf.
double normal_cdf(double x);

/// Inverse standard normal CDF (Acklam's rational approximation refined by
/// one Halley step; absolute error well below 1e-12 on (0,1)).
double normal_inv_cdf(double p);

/// Linear-interpolation empirical quantile (type-7 convention):
/// h = (n-1)q, result = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)]).
/// Input need not be sorted; q must lie in [0,1].
double quantile_linear(std::vector<double> xs, double q);

}  // namespace tuq::stats
