#include "motioneval/stats.hpp"

#include "motioneval/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace motioneval {

namespace {

// Polynomial c[0] + c[1]*x + ... + c[count-1]*x^(count-1), accumulated from
// the highest term down so the evaluation order matches the published
// algorithm this module ports.
double poly(const double* c, int count, double x) {
    double value = c[0];
    if (count == 1) {
        return value;
    }
    double p = x * c[count - 1];
    for (int j = count - 2; j >= 1; --j) {
        p = (p + c[j]) * x;
    }
    return value + p;
}

// Standard normal quantile, AS 111 rational approximation.
double normal_quantile(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.42) {
        const double r = q * q;
        return q * (((-25.44106049637 * r + 41.39119773534) * r - 18.61500062529) * r + 2.50662823884) /
               ((((3.13082909833 * r - 21.06224101826) * r + 23.08336743743) * r - 8.47351093090) * r + 1.0);
    }
    double r = q > 0.0 ? 1.0 - p : p;
    if (r <= 0.0) {
        return q < 0.0 ? -99.9999 : 99.9999;
    }
    r = std::sqrt(-std::log(r));
    const double z = (((2.32121276858 * r + 4.85014127135) * r - 2.29796479134) * r - 2.78718931138) /
                     ((1.63706781897 * r + 3.54388924762) * r + 1.0);
    return q < 0.0 ? -z : z;
}

// Normal tail area, AS 66 rational approximation (about nine digits).
double normal_tail(double x, bool upper) {
    bool up = upper;
    double z = x;
    if (z < 0.0) {
        up = !up;
        z = -z;
    }
    double tail = 0.0;
    if (z <= 7.0 || (up && z <= 18.66)) {
        const double y = 0.5 * z * z;
        if (z > 1.28) {
            tail = 0.398942280385 * std::exp(-y) /
                   (z - 3.8052e-8 + 1.00000615302 /
                    (z + 3.98064794e-4 + 1.98615381364 /
                     (z - 0.151679116635 + 5.29330324926 /
                      (z + 4.8385912808 - 15.1508972451 /
                       (z + 0.742380924027 + 30.789933034 /
                        (z + 3.99019417011))))));
        } else {
            tail = 0.5 - z * (0.398942280444 - 0.399903438504 * y /
                   (y + 5.75885480458 - 29.8213557808 /
                    (y + 2.62433121679 + 48.6959930692 /
                     (y + 5.92885724438))));
        }
    }
    return up ? tail : 1.0 - tail;
}

double mirror_sign(int delta) {
    return delta >= 0 ? 1.0 : -1.0;
}

MetricAggregate aggregate_metric(const std::string& name,
                                 std::span<const PairedObservation> pairs) {
    MetricAggregate agg;
    agg.metric = name;
    agg.pairs = pairs.size();

    std::vector<double> simulated;
    std::vector<double> benchmark;
    std::vector<double> diffs;
    simulated.reserve(pairs.size());
    benchmark.reserve(pairs.size());
    diffs.reserve(pairs.size());
    double sum_sim = 0.0;
    double sum_ben = 0.0;
    for (const PairedObservation& obs : pairs) {
        simulated.push_back(obs.simulated);
        benchmark.push_back(obs.benchmark);
        diffs.push_back(obs.simulated - obs.benchmark);
        sum_sim += obs.simulated;
        sum_ben += obs.benchmark;
    }
    const double count = static_cast<double>(pairs.size());
    agg.mean_simulated = sum_sim / count;
    agg.mean_benchmark = sum_ben / count;

    if (pairs.size() < 3) {
        agg.degenerate = true;
        agg.note = "needs at least 3 pairs, got " + std::to_string(pairs.size());
        return agg;
    }
    try {
        agg.ttest = paired_t_test(simulated, benchmark);
    } catch (const DegeneracyError& err) {
        agg.degenerate = true;
        agg.note = err.what();
    }
    try {
        agg.normality = shapiro_wilk(diffs);
    } catch (const DegeneracyError& err) {
        agg.degenerate = true;
        if (agg.note.empty()) {
            agg.note = err.what();
        }
    } catch (const ValidationError& err) {
        // Sample size outside the supported range; the t-test still stands.
        if (agg.note.empty()) {
            agg.note = err.what();
        }
    }
    return agg;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("incomplete beta requires positive shape parameters");
    }
    if (!(x >= 0.0) || !(x <= 1.0)) {
        throw ValidationError("incomplete beta argument must lie in [0, 1]");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x == 1.0) {
        return 1.0;
    }
    // The continued fraction converges fastest for x below the mean; reflect
    // through I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
    if (x > (a + 1.0) / (a + b + 2.0)) {
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    }

    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x)) / a;

    // Lentz's algorithm over the even/odd term pairs.
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    constexpr int max_terms = 300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_terms; ++m) {
        const double m2 = 2.0 * m;
        double term = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + term * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        d = 1.0 / d;
        c = 1.0 + term / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        h *= d * c;

        term = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + term * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        d = 1.0 / d;
        c = 1.0 + term / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) {
            return front * h;
        }
    }
    throw DegeneracyError("incomplete beta continued fraction did not converge");
}

double student_t_two_tailed_p(double t, double df) {
    if (!(df > 0.0)) {
        throw ValidationError("degrees of freedom must be positive");
    }
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("paired samples differ in length: " + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()));
    }
    const std::size_t n = a.size();
    if (n < 3) {
        throw ValidationError("paired t-test needs at least 3 pairs, got " + std::to_string(n));
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += a[i] - b[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double centered = a[i] - b[i] - mean;
        ss += centered * centered;
    }
    if (ss == 0.0) {
        throw DegeneracyError("paired t-test is undefined for zero-variance differences");
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult result;
    result.df = static_cast<double>(n - 1);
    result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    result.p = student_t_two_tailed_p(result.t, result.df);
    return result;
}

// Royston's W and its p approximation. Coefficients come from the normal
// quantiles of the plotting positions (i - 3/8)/(n + 1/4); W is the squared
// correlation between the sorted, range-scaled sample and the symmetric
// coefficient vector, and the p value passes a regime-dependent transform of
// 1 - W through the normal tail.
ShapiroResult shapiro_wilk(std::span<const double> sample) {
    const int n = static_cast<int>(sample.size());
    if (n < 3 || n > 5000) {
        throw ValidationError("shapiro-wilk needs between 3 and 5000 values, got " +
                              std::to_string(sample.size()));
    }
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x[n - 1] - x[0];
    if (range < 1e-19) {
        throw DegeneracyError("shapiro-wilk is undefined for a constant sample");
    }

    static constexpr double kC1[6] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double kC2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr double kC3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double kC4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double kC5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double kC6[3] = {-0.4803, -0.082676, 0.0030302};
    static constexpr double kG[2] = {-2.273, 0.459};

    const double an = static_cast<double>(n);
    const int half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an25 = an + 0.25;
        double summ2 = 0.0;
        for (int i = 0; i < half; ++i) {
            a[i] = normal_quantile((i + 1 - 0.375) / an25);
            summ2 += a[i] * a[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(kC1, 6, rsn) - a[0] / ssumm2;
        int plain_from = 0;
        double fac = 0.0;
        if (n > 5) {
            plain_from = 2;
            const double a2 = -a[1] / ssumm2 + poly(kC2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[0] = a1;
            a[1] = a2;
        } else {
            plain_from = 1;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
            a[0] = a1;
        }
        for (int i = plain_from; i < half; ++i) {
            a[i] = -a[i] / fac;
        }
    }

    double xx = x[0] / range;
    double sx = xx;
    double sa = -a[0];
    int j = n - 2;
    for (int i = 1; i < n; ++i) {
        const double xi = x[i] / range;
        sx += xi;
        if (i != j) {
            sa += mirror_sign(i - j) * a[std::min(i, j)];
        }
        xx = xi;
        j -= 1;
    }
    sa /= an;
    sx /= an;
    double ssa = 0.0;
    double ssx = 0.0;
    double sax = 0.0;
    j = n - 1;
    for (int i = 0; i < n; ++i) {
        const double asa = i != j ? mirror_sign(i - j) * a[std::min(i, j)] - sa : -sa;
        const double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
        j -= 1;
    }

    // 1 - W computed directly to keep precision for W near one.
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

    ShapiroResult result;
    result.w = 1.0 - w1;
    const double kPi = 3.141592653589793238462643383279502884;
    if (n == 3) {
        result.p = std::max((6.0 / kPi) * (std::asin(std::sqrt(result.w)) - kPi / 3.0), 0.0);
        return result;
    }
    double y = std::log(w1);
    double m = 0.0;
    double s = 1.0;
    if (n <= 11) {
        const double gamma = poly(kG, 2, an);
        if (y >= gamma) {
            result.p = 1e-19;
            return result;
        }
        y = -std::log(gamma - y);
        m = poly(kC3, 4, an);
        s = std::exp(poly(kC4, 4, an));
    } else {
        const double lg = std::log(an);
        m = poly(kC5, 4, lg);
        s = std::exp(poly(kC6, 3, lg));
    }
    result.p = normal_tail((y - m) / s, true);
    return result;
}

AggregateReport aggregate_observations(std::span<const PairedObservation> mpjpe_pairs,
                                       std::span<const PairedObservation> pa_pairs,
                                       std::span<const PairedObservation> dtw_pairs) {
    if (mpjpe_pairs.empty() && pa_pairs.empty() && dtw_pairs.empty()) {
        throw ValidationError("no paired observations to aggregate");
    }
    AggregateReport report;
    if (!mpjpe_pairs.empty()) {
        report.metrics.push_back(aggregate_metric("MPJPE", mpjpe_pairs));
    }
    if (!pa_pairs.empty()) {
        report.metrics.push_back(aggregate_metric("PA-MPJPE", pa_pairs));
    }
    if (!dtw_pairs.empty()) {
        report.metrics.push_back(aggregate_metric("DTW", dtw_pairs));
    }
    return report;
}

} // namespace motioneval
