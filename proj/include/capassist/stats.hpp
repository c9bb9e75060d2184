// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <span>

// Student-t machinery for the study analytics. Accurate to about 1e-9
// absolute in the CDF for df >= 1.
namespace capassist::stats {

// I_x(a, b) for a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
// P(|T| >= |t|)
double student_t_two_tailed(double t, double df);
// Inverse CDF for 0 < p < 1.
double student_t_quantile(double p, double df);

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator); requires xs.size() >= 2.
double sample_sd(std::span<const double> xs);

struct TTestResult {
    double t = 0;
    int df = 0;
    double p_two_tailed = 1;
};

// Paired two-tailed t-test on d = a - b. Throws Error(invalid_argument) on a
// length mismatch or fewer than two pairs, Error(degenerate_sample) when the
// differences have zero variance.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct Interval {
    double lo = 0;
    double hi = 0;
};

// mean +/- t_{(1+level)/2, n-1} * sd / sqrt(n). Throws Error(invalid_argument)
// unless n >= 2, sd >= 0 and 0 < level < 1.
Interval t_confidence_interval(double mean, double sd, int n, double level);

} // namespace capassist::stats
