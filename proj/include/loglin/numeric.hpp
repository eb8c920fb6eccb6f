#ifndef LOGLIN_NUMERIC_HPP
#define LOGLIN_NUMERIC_HPP

#include <span>

namespace loglin {

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

double log_sum_exp(std::span<const double> xs);

}  // namespace loglin

#endif  // LOGLIN_NUMERIC_HPP
