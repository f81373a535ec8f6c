#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace motioneval {

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

// Paired two-tailed Student t-test on equal-length samples:
// t = mean(d) / (sd(d) / sqrt(n)) with the n-1 sample deviation, df = n-1.
// Requires n >= 3; throws DegeneracyError when sd(d) is exactly zero.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Two-tailed p for Student's t with the given degrees of freedom, evaluated
// through the regularized incomplete beta function.
double student_t_two_tailed_p(double t, double df);

// Continued-fraction evaluation of I_x(a, b), converged to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

struct ShapiroResult {
    double w = 0.0;
    double p = 1.0;
};

// Shapiro-Wilk normality test (Royston's algorithm), valid for
// 3 <= n <= 5000. Throws DegeneracyError for constant samples.
ShapiroResult shapiro_wilk(std::span<const double> x);

// One (task, joint) pair of metric values entering an aggregate.
struct PairedObservation {
    std::string task;
    int joint = 0;
    double simulated = 0.0;
    double benchmark = 0.0;
};

struct MetricAggregate {
    std::string metric;
    std::size_t pairs = 0;
    double mean_simulated = 0.0;
    double mean_benchmark = 0.0;
    std::optional<TTestResult> ttest;
    std::optional<ShapiroResult> normality;
    // Set when the paired test could not run (too few pairs or zero-variance
    // differences); note carries the reason.
    bool degenerate = false;
    std::string note;
};

struct AggregateReport {
    std::vector<MetricAggregate> metrics;
};

// Pools per-joint metric values across tasks into (task, joint) pairs and
// runs the paired test per metric. Metrics that cannot be tested come back
// flagged degenerate instead of failing the whole aggregate.
AggregateReport aggregate_observations(std::span<const PairedObservation> mpjpe_pairs,
                                       std::span<const PairedObservation> pa_pairs,
                                       std::span<const PairedObservation> dtw_pairs);

} // namespace motioneval
