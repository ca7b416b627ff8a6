#pragma once

#include <functional>
#include <vector>

namespace levythin {

double mean(const std::vector<double>& v);

/// Unbiased sample variance.
double variance(const std::vector<double>& v);

/// Standard error of the mean.
double standard_error(const std::vector<double>& v);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov limiting tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Paired t-test of H1: mean(a - b) < 0.
TestResult paired_t_test_less(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace levythin
