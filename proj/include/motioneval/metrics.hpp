#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motioneval/align.hpp"
#include "motioneval/geometry.hpp"
#include "motioneval/motion.hpp"

namespace motioneval {

// Singular value decomposition h = u * diag(sigma) * v^T with sigma sorted
// descending and nonnegative. Computed by one-sided Jacobi sweeps
// (convergence threshold 1e-14, at most 60 sweeps).
struct Svd3 {
    Mat3 u;
    Vec3 sigma;
    Mat3 v;
};
Svd3 svd3(const Mat3& h);

struct ProcrustesResult {
    Mat3 rotation;
    // Mean distance between the centered reference points and the aligned
    // centered counterpart points.
    double residual = 0.0;
    double scale = 1.0;
    bool reflection_used = false;
};

// Least-squares orthogonal alignment of two centered copies of the given
// point sets: the result's rotation maps centered b onto centered a. With
// allow_reflection the optimum may be an improper rotation; otherwise
// det(rotation) is forced to +1 by flipping the direction paired with the
// smallest singular value. with_scale additionally fits a uniform scale
// applied after the rotation. Throws DegeneracyError when either point set
// collapses to a single point.
ProcrustesResult procrustes_rotation(std::span<const Vec3> a, std::span<const Vec3> b,
                                     bool allow_reflection = false,
                                     bool with_scale = false);

// Mean per-joint position error: average Euclidean distance over all
// (frame, joint) cells. Requires equal shape.
double mpjpe(const MotionSequence& a, const MotionSequence& b);

enum class PaMode { per_frame, global };

struct PaConfig {
    PaMode mode = PaMode::per_frame;
    bool allow_reflection = false;
    bool with_scale = false;
};

// Procrustes-aligned MPJPE: rigid (optionally scaled) alignment is removed
// per frame (default) or once across the whole sequence, then distances are
// averaged over all cells.
double pa_mpjpe(const MotionSequence& a, const MotionSequence& b, const PaConfig& pa = {});

// Unnormalized dynamic-time-warping cost between two joint trajectories:
// monotone boundary-anchored paths with steps (-1,0), (0,-1), (-1,-1), each
// step adding the destination cell's Euclidean cost.
double dtw_joint(std::span<const Vec3> a, std::span<const Vec3> b);

// Mean of dtw_joint over all joints.
double dtw_mean(const MotionSequence& a, const MotionSequence& b);

struct PerJointMetrics {
    std::vector<double> mpjpe;
    std::vector<double> pa_mpjpe;
    std::vector<double> dtw;
};

// Per-joint versions of the three metrics. The per-frame alignment used by
// the PA column is computed from whole frames and shared by every joint of
// that frame.
PerJointMetrics per_joint_metrics(const MotionSequence& a, const MotionSequence& b,
                                  const PaConfig& pa = {});

// Which metrics a comparison computes.
struct MetricSelection {
    bool mpjpe = true;
    bool pa_mpjpe = true;
    bool dtw = true;
};

struct CompareConfig {
    MetricSelection metrics;
    PaConfig pa;
};

// Metrics of one generated sequence against the recorded one.
struct ComparisonBlock {
    std::optional<double> mpjpe;
    std::optional<double> pa_mpjpe;
    std::optional<double> dtw_mean;
    std::vector<double> joint_mpjpe;
    std::vector<double> joint_pa_mpjpe;
    std::vector<double> joint_dtw;
};

struct MetricReport {
    std::string task_id;
    ComparisonBlock simulated_vs_real;
    ComparisonBlock benchmark_vs_real;
    AlignPlan alignment;
    CompareConfig config;
};

// Runs the selected metrics for benchmark-vs-real and simulated-vs-real.
// The triplet must already be aligned; pass the AlignPlan that produced it
// so the report records the original lengths.
MetricReport compare_sources(const EvalTriplet& triplet,
                             const CompareConfig& config = {},
                             const std::optional<AlignPlan>& plan = std::nullopt);

} // namespace motioneval
