#pragma once

#include <vector>

namespace rrtlab {

// survival probability of the chi-square distribution: P(X >= stat) with df
// degrees of freedom
double chi_square_pvalue(double stat, int df);

// chi-square statistic for observed counts against equal expected bins
double chi_square_stat_uniform(const std::vector<long>& counts);

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);  // n-1 denominator

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// ordinary least squares y = slope*x + intercept; for constant y the line is
// exact, so r_squared is reported as 1
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

double harmonic_number(long n);

}  // namespace rrtlab
