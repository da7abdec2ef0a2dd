#ifndef TRSP_STATS_HPP
#define TRSP_STATS_HPP

#include <span>
#include <stdexcept>
#include <string>

namespace trsp {

class DegenerateSample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  // One-sided: probability of a statistic at least t when the means are
  // equal, i.e. evidence that mean(xs) > mean(ys).
  double p = 0.5;
};

// Throws DegenerateSample when a sample has fewer than two values or both
// variances are zero.
WelchResult welch_t_test(std::span<const double> xs, std::span<const double> ys);

// "over 99%" for p < 0.01, "over 95%" for p < 0.05, otherwise "not significant".
std::string significance_phrase(double p);

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
// Sample variance with n - 1 in the denominator.
double sample_variance(std::span<const double> xs);

}  // namespace trsp

#endif  // TRSP_STATS_HPP
