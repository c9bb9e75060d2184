// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/errors.hpp>
#include <capassist/stats.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace capassist::stats {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if(std::fabs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for(int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if(std::fabs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if(std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if(std::fabs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if(std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if(std::fabs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if(!(a > 0) || !(b > 0) || !(x >= 0) || !(x <= 1)) {
        throw Error(ErrorCode::invalid_argument, "incomplete beta needs a, b > 0 and x in [0, 1]");
    }
    if(x == 0 || x == 1) {
        return x;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if(x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if(!(df > 0)) {
        throw Error(ErrorCode::invalid_argument, "degrees of freedom must be positive");
    }
    if(std::isinf(t)) {
        return 0.0;
    }
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_tailed(t, df);
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if(!(p > 0) || !(p < 1)) {
        throw Error(ErrorCode::invalid_argument, "quantile probability must be in (0, 1)");
    }
    if(p == 0.5) {
        return 0.0;
    }
    // Solve on the upper tail by bisection, then mirror.
    const double q = p > 0.5 ? p : 1.0 - p;
    double lo = 0.0;
    double hi = 1.0;
    while(student_t_cdf(hi, df) < q) {
        lo = hi;
        hi *= 2.0;
        if(hi > 1e300) {
            break;
        }
    }
    for(int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if(student_t_cdf(mid, df) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double x = 0.5 * (lo + hi);
    return p > 0.5 ? x : -x;
}

double mean(std::span<const double> xs) {
    if(xs.empty()) {
        throw Error(ErrorCode::invalid_argument, "mean of an empty sample");
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if(xs.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "standard deviation needs at least two values");
    }
    const double m = mean(xs);
    double ss = 0;
    for(double x : xs) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if(a.size() != b.size()) {
        throw Error(ErrorCode::invalid_argument, "paired samples differ in length",
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    if(a.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "paired t-test needs at least two pairs");
    }
    std::vector<double> d(a.size());
    for(std::size_t i = 0; i < a.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    const double md = mean(d);
    double ss = 0;
    for(double x : d) {
        ss += (x - md) * (x - md);
    }
    // Differences equal up to rounding count as constant.
    const double scale = std::max(1.0, std::fabs(md));
    if(ss <= 1e-24 * scale * scale * static_cast<double>(d.size())) {
        throw Error(ErrorCode::degenerate_sample, "degenerate sample", "differences have zero variance");
    }
    const double n = static_cast<double>(d.size());
    const double sd = std::sqrt(ss / (n - 1.0));
    TTestResult r;
    r.t = md / (sd / std::sqrt(n));
    r.df = static_cast<int>(d.size()) - 1;
    r.p_two_tailed = student_t_two_tailed(r.t, r.df);
    return r;
}

Interval t_confidence_interval(double mean, double sd, int n, double level) {
    if(n < 2) {
        throw Error(ErrorCode::invalid_argument, "confidence interval needs n >= 2");
    }
    if(!(sd >= 0)) {
        throw Error(ErrorCode::invalid_argument, "standard deviation must be >= 0");
    }
    if(!(level > 0) || !(level < 1)) {
        throw Error(ErrorCode::invalid_argument, "confidence level must be in (0, 1)");
    }
    const double half = student_t_quantile((1.0 + level) / 2.0, n - 1) * sd / std::sqrt(static_cast<double>(n));
    return Interval{mean - half, mean + half};
}

} // namespace capassist::stats
