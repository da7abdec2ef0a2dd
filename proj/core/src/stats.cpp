#include "trsp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <vector>

namespace trsp {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw DegenerateSample("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw DegenerateSample("median of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw DegenerateSample("variance needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

WelchResult welch_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw DegenerateSample("Welch test needs at least two values per sample");
  }
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  const double a = sample_variance(xs) / nx;
  const double b = sample_variance(ys) / ny;
  if (a + b == 0.0) throw DegenerateSample("both samples have zero variance");

  WelchResult r;
  r.t = (mean(xs) - mean(ys)) / std::sqrt(a + b);
  r.dof = (a + b) * (a + b) / (a * a / (nx - 1.0) + b * b / (ny - 1.0));
  boost::math::students_t dist(r.dof);
  r.p = boost::math::cdf(boost::math::complement(dist, r.t));
  return r;
}

std::string significance_phrase(double p) {
  if (p < 0.01) return "over 99%";
  if (p < 0.05) return "over 95%";
  return "not significant";
}

}  // namespace trsp
