#include "motioneval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "motioneval/error.hpp"

namespace motioneval {

namespace {

constexpr double kJacobiThreshold = 1e-14;
constexpr int kJacobiMaxSweeps = 60;

} // namespace

Svd3 svd3(const Mat3& h) {
    // One-sided Jacobi: orthogonalize the columns of a working copy with
    // right-hand Givens rotations, accumulating them into v. The column
    // norms become the singular values.
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            a[i][j] = h.m[i][j];

    constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        bool rotated = false;
        for (auto [p, q] : pairs) {
            double alpha = 0.0, beta = 0.0, gamma = 0.0;
            for (int i = 0; i < 3; ++i) {
                alpha += a[i][p] * a[i][p];
                beta += a[i][q] * a[i][q];
                gamma += a[i][p] * a[i][q];
            }
            if (std::abs(gamma) <= kJacobiThreshold * std::sqrt(alpha * beta))
                continue;
            rotated = true;
            const double zeta = (beta - alpha) / (2.0 * gamma);
            const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = c * t;
            for (int i = 0; i < 3; ++i) {
                const double ap = a[i][p], aq = a[i][q];
                a[i][p] = c * ap - s * aq;
                a[i][q] = s * ap + c * aq;
                const double vp = v[i][p], vq = v[i][q];
                v[i][p] = c * vp - s * vq;
                v[i][q] = s * vp + c * vq;
            }
        }
        if (!rotated)
            break;
    }

    double sigma[3];
    for (int j = 0; j < 3; ++j)
        sigma[j] = std::sqrt(a[0][j] * a[0][j] + a[1][j] * a[1][j] + a[2][j] * a[2][j]);

    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int x, int y) { return sigma[x] > sigma[y]; });

    Svd3 out;
    out.sigma = {sigma[order[0]], sigma[order[1]], sigma[order[2]]};
    double sig[3] = {out.sigma.x, out.sigma.y, out.sigma.z};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            out.v.m[i][j] = v[i][order[j]];
            out.u.m[i][j] = sig[j] > 0.0 ? a[i][order[j]] / sig[j] : 0.0;
        }

    // Columns with an exactly zero singular value carry no direction; fill
    // them with unit vectors orthogonal to the rest.
    auto column = [&](int j) {
        return Vec3{out.u.m[0][j], out.u.m[1][j], out.u.m[2][j]};
    };
    auto set_column = [&](int j, const Vec3& c) {
        out.u.m[0][j] = c.x;
        out.u.m[1][j] = c.y;
        out.u.m[2][j] = c.z;
    };
    if (sig[0] == 0.0) {
        out.u = Mat3::identity();
        return out;
    }
    if (sig[1] == 0.0) {
        const Vec3 u0 = column(0);
        int axis = std::abs(u0.x) <= std::abs(u0.y)
                       ? (std::abs(u0.x) <= std::abs(u0.z) ? 0 : 2)
                       : (std::abs(u0.y) <= std::abs(u0.z) ? 1 : 2);
        Vec3 e{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
        Vec3 u1 = e - u0 * u0.dot(e);
        u1 = u1 / u1.norm();
        set_column(1, u1);
        set_column(2, u0.cross(u1));
    } else if (sig[2] == 0.0) {
        set_column(2, column(0).cross(column(1)));
    }
    return out;
}

ProcrustesResult procrustes_rotation(std::span<const Vec3> a, std::span<const Vec3> b,
                                     bool allow_reflection, bool with_scale) {
    if (a.size() != b.size())
        throw ValidationError("point sets differ in size: " + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()));
    if (a.size() < 3)
        throw ValidationError("rigid alignment needs at least 3 points, got " +
                              std::to_string(a.size()));

    const auto n = a.size();
    Vec3 mean_a{}, mean_b{};
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a = mean_a / static_cast<double>(n);
    mean_b = mean_b / static_cast<double>(n);

    // Cross-covariance of the centered sets: m = sum over points of
    // (a - mean_a)(b - mean_b)^T. Its SVD gives the rotation taking
    // centered b onto centered a.
    Mat3 m;
    double norm_a = 0.0, norm_b = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.m[i][j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ca = a[i] - mean_a;
        const Vec3 cb = b[i] - mean_b;
        norm_a += ca.squared_norm();
        norm_b += cb.squared_norm();
        const double ra[3] = {ca.x, ca.y, ca.z};
        const double rb[3] = {cb.x, cb.y, cb.z};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m.m[r][c] += ra[r] * rb[c];
    }
    if (norm_a == 0.0 || norm_b == 0.0)
        throw DegeneracyError("rigid alignment undefined: a point set collapses to "
                              "a single point");

    Svd3 svd = svd3(m);
    Mat3 rotation = svd.u * svd.v.transposed();
    bool reflection_used = false;
    double flipped = 1.0;
    if (rotation.det() < 0.0) {
        if (allow_reflection) {
            reflection_used = true;
        } else {
            // Flip the direction paired with the smallest singular value to
            // land on the best proper rotation.
            for (int i = 0; i < 3; ++i)
                svd.u.m[i][2] = -svd.u.m[i][2];
            rotation = svd.u * svd.v.transposed();
            flipped = -1.0;
        }
    }

    ProcrustesResult out;
    out.rotation = rotation;
    out.reflection_used = reflection_used;
    if (with_scale)
        out.scale = (svd.sigma.x + svd.sigma.y + svd.sigma.z * flipped) / norm_b;

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ca = a[i] - mean_a;
        const Vec3 cb = b[i] - mean_b;
        residual += distance(ca, rotation.apply(cb) * out.scale);
    }
    out.residual = residual / static_cast<double>(n);
    return out;
}

double mpjpe(const MotionSequence& a, const MotionSequence& b) {
    if (a.frames() != b.frames() || a.joints() != b.joints())
        throw ValidationError("mpjpe shape mismatch: " + std::to_string(a.frames()) +
                              "x" + std::to_string(a.joints()) + " vs " +
                              std::to_string(b.frames()) + "x" +
                              std::to_string(b.joints()));
    double sum = 0.0;
    const auto& pa = a.points();
    const auto& pb = b.points();
    for (std::size_t i = 0; i < pa.size(); ++i)
        sum += distance(pa[i], pb[i]);
    return sum / static_cast<double>(pa.size());
}

namespace {

struct PaErrors {
    double overall = 0.0;
    std::vector<double> per_joint;
};

// Per-cell Procrustes-aligned distances, reduced to the overall mean and
// per-joint means in one pass. Frame alignments are shared across the
// joints of that frame.
PaErrors pa_errors(const MotionSequence& a, const MotionSequence& b,
                   const PaConfig& pa) {
    if (a.frames() != b.frames() || a.joints() != b.joints())
        throw ValidationError("pa-mpjpe shape mismatch: " + std::to_string(a.frames()) +
                              "x" + std::to_string(a.joints()) + " vs " +
                              std::to_string(b.frames()) + "x" +
                              std::to_string(b.joints()));
    if (a.joints() < 3)
        throw ValidationError("pa-mpjpe needs at least 3 joints, got " +
                              std::to_string(a.joints()));

    const std::size_t frames = a.frames();
    const auto joints = static_cast<std::size_t>(a.joints());
    PaErrors out;
    out.per_joint.assign(joints, 0.0);

    if (pa.mode == PaMode::global) {
        ProcrustesResult fit = procrustes_rotation(a.points(), b.points(),
                                                   pa.allow_reflection, pa.with_scale);
        Vec3 mean_a{}, mean_b{};
        for (const Vec3& p : a.points())
            mean_a += p;
        for (const Vec3& p : b.points())
            mean_b += p;
        mean_a = mean_a / static_cast<double>(a.points().size());
        mean_b = mean_b / static_cast<double>(b.points().size());
        for (std::size_t t = 0; t < frames; ++t) {
            for (std::size_t j = 0; j < joints; ++j) {
                const Vec3 ca = a.points()[t * joints + j] - mean_a;
                const Vec3 cb = b.points()[t * joints + j] - mean_b;
                const double err = distance(ca, fit.rotation.apply(cb) * fit.scale);
                out.per_joint[j] += err;
                out.overall += err;
            }
        }
    } else {
        for (std::size_t t = 0; t < frames; ++t) {
            auto fa = a.frame(t);
            auto fb = b.frame(t);
            ProcrustesResult fit;
            try {
                fit = procrustes_rotation(fa, fb, pa.allow_reflection, pa.with_scale);
            } catch (const DegeneracyError& e) {
                throw DegeneracyError("frame " + std::to_string(t + 1) + ": " + e.what());
            }
            Vec3 mean_a{}, mean_b{};
            for (const Vec3& p : fa)
                mean_a += p;
            for (const Vec3& p : fb)
                mean_b += p;
            mean_a = mean_a / static_cast<double>(joints);
            mean_b = mean_b / static_cast<double>(joints);
            for (std::size_t j = 0; j < joints; ++j) {
                const Vec3 ca = fa[j] - mean_a;
                const Vec3 cb = fb[j] - mean_b;
                const double err = distance(ca, fit.rotation.apply(cb) * fit.scale);
                out.per_joint[j] += err;
                out.overall += err;
            }
        }
    }

    out.overall /= static_cast<double>(frames * joints);
    for (double& v : out.per_joint)
        v /= static_cast<double>(frames);
    return out;
}

} // namespace

double pa_mpjpe(const MotionSequence& a, const MotionSequence& b, const PaConfig& pa) {
    return pa_errors(a, b, pa).overall;
}

double dtw_joint(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty())
        throw ValidationError("dtw needs nonempty paths, got " +
                              std::to_string(a.size()) + " and " +
                              std::to_string(b.size()));
    const std::size_t rows = a.size();
    const std::size_t cols = b.size();
    std::vector<double> prev(cols), curr(cols);

    prev[0] = distance(a[0], b[0]);
    for (std::size_t j = 1; j < cols; ++j)
        prev[j] = prev[j - 1] + distance(a[0], b[j]);
    for (std::size_t i = 1; i < rows; ++i) {
        curr[0] = prev[0] + distance(a[i], b[0]);
        for (std::size_t j = 1; j < cols; ++j) {
            const double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
            curr[j] = best + distance(a[i], b[j]);
        }
        std::swap(prev, curr);
    }
    return prev[cols - 1];
}

double dtw_mean(const MotionSequence& a, const MotionSequence& b) {
    if (a.joints() != b.joints())
        throw ValidationError("dtw joint count mismatch: " + std::to_string(a.joints()) +
                              " vs " + std::to_string(b.joints()));
    double sum = 0.0;
    for (int j = 1; j <= a.joints(); ++j)
        sum += dtw_joint(joint_trajectory(a, j), joint_trajectory(b, j));
    return sum / static_cast<double>(a.joints());
}

PerJointMetrics per_joint_metrics(const MotionSequence& a, const MotionSequence& b,
                                  const PaConfig& pa) {
    if (a.frames() != b.frames() || a.joints() != b.joints())
        throw ValidationError("per-joint metrics shape mismatch: " +
                              std::to_string(a.frames()) + "x" +
                              std::to_string(a.joints()) + " vs " +
                              std::to_string(b.frames()) + "x" +
                              std::to_string(b.joints()));
    const std::size_t frames = a.frames();
    const auto joints = static_cast<std::size_t>(a.joints());

    PerJointMetrics out;
    out.mpjpe.assign(joints, 0.0);
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t j = 0; j < joints; ++j)
            out.mpjpe[j] += distance(a.points()[t * joints + j],
                                     b.points()[t * joints + j]);
    for (double& v : out.mpjpe)
        v /= static_cast<double>(frames);

    out.pa_mpjpe = pa_errors(a, b, pa).per_joint;

    out.dtw.reserve(joints);
    for (int j = 1; j <= a.joints(); ++j)
        out.dtw.push_back(dtw_joint(joint_trajectory(a, j), joint_trajectory(b, j)));
    return out;
}

namespace {

ComparisonBlock compare_pair(const MotionSequence& reference,
                             const MotionSequence& candidate,
                             const CompareConfig& config) {
    ComparisonBlock block;
    const auto joints = static_cast<std::size_t>(reference.joints());
    const std::size_t frames = reference.frames();

    if (config.metrics.mpjpe) {
        block.joint_mpjpe.assign(joints, 0.0);
        for (std::size_t t = 0; t < frames; ++t)
            for (std::size_t j = 0; j < joints; ++j)
                block.joint_mpjpe[j] += distance(reference.points()[t * joints + j],
                                                 candidate.points()[t * joints + j]);
        for (double& v : block.joint_mpjpe)
            v /= static_cast<double>(frames);
        block.mpjpe = mpjpe(reference, candidate);
    }
    if (config.metrics.pa_mpjpe) {
        PaErrors errors = pa_errors(reference, candidate, config.pa);
        block.pa_mpjpe = errors.overall;
        block.joint_pa_mpjpe = std::move(errors.per_joint);
    }
    if (config.metrics.dtw) {
        block.joint_dtw.reserve(joints);
        double sum = 0.0;
        for (int j = 1; j <= reference.joints(); ++j) {
            double value = dtw_joint(joint_trajectory(reference, j),
                                     joint_trajectory(candidate, j));
            block.joint_dtw.push_back(value);
            sum += value;
        }
        block.dtw_mean = sum / static_cast<double>(joints);
    }
    return block;
}

} // namespace

MetricReport compare_sources(const EvalTriplet& triplet, const CompareConfig& config,
                             const std::optional<AlignPlan>& plan) {
    if (!is_aligned(triplet))
        throw ValidationError("triplet is not aligned: frame counts " +
                              std::to_string(triplet.real.frames()) + ", " +
                              std::to_string(triplet.benchmark.frames()) + ", " +
                              std::to_string(triplet.simulated.frames()));
    if (!config.metrics.mpjpe && !config.metrics.pa_mpjpe && !config.metrics.dtw)
        throw ValidationError("no metrics selected");

    MetricReport report;
    report.task_id = triplet.task_id;
    report.config = config;
    if (plan) {
        report.alignment = *plan;
    } else {
        report.alignment.target_frames = triplet.real.frames();
        report.alignment.real_frames = triplet.real.frames();
        report.alignment.benchmark_frames = triplet.benchmark.frames();
        report.alignment.simulated_frames = triplet.simulated.frames();
    }
    report.benchmark_vs_real = compare_pair(triplet.real, triplet.benchmark, config);
    report.simulated_vs_real = compare_pair(triplet.real, triplet.simulated, config);
    return report;
}

} // namespace motioneval
