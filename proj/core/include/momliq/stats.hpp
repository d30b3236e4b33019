#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace momliq {

inline constexpr int kDaysPerYear = 365;
inline constexpr double kSignificanceLevel = 0.05;

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1) standard deviation
};

/// Throws TooFewSamplesError when fewer than two observations. A series of
/// identical values has a standard deviation of exactly zero.
MeanStd mean_std(std::span<const double> series);

/// Annualized information ratio of portfolio over benchmark:
/// mean(d) / std(d) * sqrt(periods_per_year) with d = portfolio - benchmark.
/// Throws AxisMismatchError, TooFewSamplesError, ZeroTrackingError.
double information_ratio(std::span<const double> portfolio, std::span<const double> benchmark,
                         int periods_per_year = kDaysPerYear);

struct TTestResult {
    double t_stat = 0.0;
    double p_value = 1.0;
};

/// One-sample two-tailed t-test of a zero mean, n - 1 degrees of freedom.
/// Throws TooFewSamplesError and ZeroVarianceError.
TTestResult ttest_zero(std::span<const double> series);

/// Running product of (1 + r), so the first element is 1 + r[0].
std::vector<double> equity_curve(std::span<const double> series);

/// I_x(a, b), evaluated by continued fraction to 1e-10 relative accuracy.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` > 0 degrees of freedom.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_tailed_p(double t, double df);

struct PerfStats {
    std::size_t n = 0;
    double mean_daily = 0.0;
    double std_daily = 0.0;
    std::optional<double> ir_annualized;  // empty on zero tracking error
    std::optional<double> t_stat;         // empty on zero variance
    std::optional<double> p_value;

    bool significant(double alpha = kSignificanceLevel) const { return p_value && *p_value < alpha; }
};

/// Summary of a daily return series measured against a benchmark series.
PerfStats perf_stats(std::span<const double> series, std::span<const double> benchmark,
                     int periods_per_year = kDaysPerYear);

}  // namespace momliq
