#pragma once

namespace upo {

/// Standard normal CDF, evaluated through erfc so the tails keep full relative accuracy.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

}  // namespace upo
