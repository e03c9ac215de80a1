#include "rrtlab/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace rrtlab {

double chi_square_pvalue(double stat, int df) {
  if (df < 1) throw std::invalid_argument("chi_square_pvalue: df must be >= 1");
  if (stat <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

double chi_square_stat_uniform(const std::vector<long>& counts) {
  if (counts.empty()) throw std::invalid_argument("chi_square_stat_uniform: no bins");
  long total = 0;
  for (long c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  if (expected <= 0) throw std::invalid_argument("chi_square_stat_uniform: empty sample");
  double stat = 0;
  for (long c : counts) {
    const double d = c - expected;
    stat += d * d / expected;
  }
  return stat;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty");
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("sample_stddev: need >= 2 values");
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("pearson_correlation: size mismatch");
  if (a.size() < 2) return 0.0;  // undefined; callers treat tiny inputs as uncorrelated
  const double ma = mean(a), mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) return 0.0;  // a constant series carries no signal
  return sab / std::sqrt(saa * sbb);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need >= 2 paired points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least_squares: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  f.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return f;
}

double harmonic_number(long n) {
  double h = 0;
  for (long i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

}  // namespace rrtlab
