#pragma once

namespace albo {

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF, computed through erfc for accuracy in both tails.
double normal_cdf(double z);

}  // namespace albo
