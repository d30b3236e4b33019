#include "momliq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momliq/errors.hpp"

namespace momliq {

namespace {

constexpr double kBetaTolerance = 1e-15;
constexpr int kBetaMaxIterations = 10'000;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kBetaTolerance) return h;
    }
    return h;
}

// I_x(a, b) with y = 1 - x supplied separately so callers can avoid
// cancellation when x is close to 1.
double incomplete_beta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

void require_samples(std::size_t n) {
    if (n < 2) throw TooFewSamplesError("need at least 2 observations, got " + std::to_string(n));
}

}  // namespace

MeanStd mean_std(std::span<const double> series) {
    require_samples(series.size());
    const auto n = static_cast<double>(series.size());
    double sum = 0.0;
    for (double x : series) sum += x;
    MeanStd out;
    out.mean = sum / n;
    const bool constant = std::all_of(series.begin(), series.end(), [&](double x) { return x == series.front(); });
    if (constant) {
        out.mean = series.front();
        return out;
    }
    double ss = 0.0;
    for (double x : series) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
    return out;
}

double information_ratio(std::span<const double> portfolio, std::span<const double> benchmark,
                         int periods_per_year) {
    if (portfolio.size() != benchmark.size()) {
        throw AxisMismatchError("portfolio and benchmark series differ in length");
    }
    if (periods_per_year < 1) throw ValidationError("periods_per_year must be >= 1");
    std::vector<double> active(portfolio.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = portfolio[i] - benchmark[i];
    const MeanStd ms = mean_std(active);
    if (ms.std == 0.0) throw ZeroTrackingError("active return has zero variance");
    const double daily = ms.mean / ms.std;
    return daily * std::sqrt(static_cast<double>(periods_per_year));
}

TTestResult ttest_zero(std::span<const double> series) {
    const MeanStd ms = mean_std(series);
    if (ms.std == 0.0) throw ZeroVarianceError("t-test on a series with zero variance");
    const auto n = static_cast<double>(series.size());
    TTestResult out;
    out.t_stat = ms.mean / (ms.std / std::sqrt(n));
    out.p_value = student_t_two_tailed_p(out.t_stat, n - 1.0);
    return out;
}

std::vector<double> equity_curve(std::span<const double> series) {
    std::vector<double> out;
    out.reserve(series.size());
    double equity = 1.0;
    for (double r : series) {
        equity *= 1.0 + r;
        out.push_back(equity);
    }
    return out;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta needs x in [0, 1]");
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_two_tailed_p(double t, double df) {
    if (!(df > 0.0)) throw ValidationError("Student-t needs df > 0");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    const double x = df / (df + t2);
    const double y = t2 / (df + t2);
    return std::clamp(incomplete_beta(0.5 * df, 0.5, x, y), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_tailed_p(t, df);
    return t >= 0.0 ? 1.0 - tail : tail;
}

PerfStats perf_stats(std::span<const double> series, std::span<const double> benchmark, int periods_per_year) {
    const MeanStd ms = mean_std(series);
    PerfStats out;
    out.n = series.size();
    out.mean_daily = ms.mean;
    out.std_daily = ms.std;
    try {
        out.ir_annualized = information_ratio(series, benchmark, periods_per_year);
    } catch (const ZeroTrackingError&) {
    }
    if (ms.std > 0.0) {
        const TTestResult t = ttest_zero(series);
        out.t_stat = t.t_stat;
        out.p_value = t.p_value;
    }
    return out;
}

}  // namespace momliq
