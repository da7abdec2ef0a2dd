#ifndef TRSP_TESTS_WELCH_ORACLE_HPP
#define TRSP_TESTS_WELCH_ORACLE_HPP

#include <cmath>
#include <vector>

namespace trsp::testing {

// Textbook Welch test computed independently of the library: two-pass
// moments, Welch-Satterthwaite degrees of freedom, and the upper tail of the
// t density integrated by adaptive Simpson quadrature.
struct OracleWelch {
  double t = 0.0;
  double dof = 0.0;
  double p = 0.0;
};

inline double t_density(double x, double nu) {
  const double log_c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                       0.5 * std::log(nu * M_PI);
  return std::exp(log_c - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
}

template <class F>
double simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) {
  const double m = (a + b) / 2.0;
  const double lm = (a + m) / 2.0;
  const double rm = (m + b) / 2.0;
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// P(T >= t) for t >= 0 via x = t + s / (1 - s), s in [0, 1).
inline double upper_tail(double t, double nu) {
  auto f = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double x = t + s / (1.0 - s);
    return t_density(x, nu) / ((1.0 - s) * (1.0 - s));
  };
  const double a = 0.0, b = 1.0 - 1e-15;
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2.0);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, 1e-17, 60);
}

inline OracleWelch oracle_welch(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto moments = [](const std::vector<double>& v, double& m, double& var) {
    long double s = 0;
    for (double x : v) s += x;
    m = static_cast<double>(s / v.size());
    long double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    var = static_cast<double>(ss / (v.size() - 1));
  };
  double mx, vx, my, vy;
  moments(xs, mx, vx);
  moments(ys, my, vy);
  const double a = vx / xs.size();
  const double b = vy / ys.size();
  OracleWelch r;
  r.t = (mx - my) / std::sqrt(a + b);
  r.dof = (a + b) * (a + b) / (a * a / (xs.size() - 1.0) + b * b / (ys.size() - 1.0));
  r.p = r.t >= 0 ? upper_tail(r.t, r.dof) : 1.0 - upper_tail(-r.t, r.dof);
  return r;
}

}  // namespace trsp::testing

#endif  // TRSP_TESTS_WELCH_ORACLE_HPP
