#include "motioneval/synth.hpp"

#include "motioneval/error.hpp"
#include "motioneval/skeleton.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace motioneval {

std::uint64_t SplitMix64::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Mat3 rotation_about_axis(const Vec3& axis, double angle) {
    const double length = axis.norm();
    if (length == 0.0) {
        throw ValidationError("rotation axis must be nonzero");
    }
    const Vec3 u = axis / length;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double ic = 1.0 - c;

    Mat3 r;
    r.m[0][0] = c + u.x * u.x * ic;
    r.m[0][1] = u.x * u.y * ic - u.z * s;
    r.m[0][2] = u.x * u.z * ic + u.y * s;
    r.m[1][0] = u.y * u.x * ic + u.z * s;
    r.m[1][1] = c + u.y * u.y * ic;
    r.m[1][2] = u.y * u.z * ic - u.x * s;
    r.m[2][0] = u.z * u.x * ic - u.y * s;
    r.m[2][1] = u.z * u.y * ic + u.x * s;
    r.m[2][2] = c + u.z * u.z * ic;
    return r;
}

SynthKind synth_kind_from_string(const std::string& name) {
    if (name == "constant") return SynthKind::constant;
    if (name == "linear_ramp") return SynthKind::linear_ramp;
    if (name == "walk_cycle") return SynthKind::walk_cycle;
    if (name == "noise") return SynthKind::noise;
    throw ParseError("unknown synthesis kind '" + name + "'");
}

std::string to_string(SynthKind kind) {
    switch (kind) {
    case SynthKind::constant: return "constant";
    case SynthKind::linear_ramp: return "linear_ramp";
    case SynthKind::walk_cycle: return "walk_cycle";
    case SynthKind::noise: return "noise";
    }
    throw ValidationError("unhandled synthesis kind");
}

namespace {

constexpr int kWalkPeriodFrames = 30;
constexpr double kPi = 3.141592653589793238462643383279502884;

// Upright rest pose, y up, right side toward -x, one unit from ground to
// pelvis. Indexed 0-based (joint 1 is entry 0).
const Vec3 kStandingPose[22] = {
    {0.0, 1.0, 0.0},    // Root/Pelvis
    {-0.1, 0.95, 0.0},  // Right Hip
    {0.1, 0.95, 0.0},   // Left Hip
    {0.0, 1.15, 0.0},   // Spine/Lumbar
    {-0.1, 0.55, 0.0},  // Right Knee
    {0.1, 0.55, 0.0},   // Left Knee
    {0.0, 1.3, 0.0},    // Spine/Thorax
    {-0.1, 0.1, 0.0},   // Right Ankle
    {0.1, 0.1, 0.0},    // Left Ankle
    {0.0, 1.4, 0.0},    // Spine/Upper
    {-0.1, 0.05, 0.12}, // Right Foot
    {0.1, 0.05, 0.12},  // Left Foot
    {0.0, 1.5, 0.0},    // Neck Base
    {-0.2, 1.45, 0.0},  // Right Shoulder
    {0.2, 1.45, 0.0},   // Left Shoulder
    {0.0, 1.7, 0.0},    // Head Top
    {-0.25, 1.2, 0.0},  // Right Elbow
    {0.25, 1.2, 0.0},   // Left Elbow
    {-0.25, 0.95, 0.0}, // Right Wrist
    {0.25, 0.95, 0.0},  // Left Wrist
    {-0.25, 0.85, 0.0}, // Right Hand
    {0.25, 0.85, 0.0},  // Left Hand
};

struct LimbSwing {
    int joint = 0;    // 1-based
    double reach = 0.0;
    double phase = 0.0;
};

// Legs swing against each other, arms counter the same-side leg. Everything
// else stays put so the torso is a fixed reference.
const LimbSwing kWalkSwings[12] = {
    {5, 0.15, 0.0},   {8, 0.25, 0.0},   {11, 0.25, 0.0},  // right leg
    {6, 0.15, kPi},   {9, 0.25, kPi},   {12, 0.25, kPi},  // left leg
    {17, 0.10, kPi},  {19, 0.20, kPi},  {21, 0.22, kPi},  // right arm
    {18, 0.10, 0.0},  {20, 0.20, 0.0},  {22, 0.22, 0.0},  // left arm
};

void enumerate_paths(std::span<const Vec3> a, std::span<const Vec3> b,
                     std::size_t i, std::size_t j, double cost, double& best) {
    cost += distance(a[i], b[j]);
    if (i + 1 == a.size() && j + 1 == b.size()) {
        best = std::min(best, cost);
        return;
    }
    if (i + 1 < a.size()) {
        enumerate_paths(a, b, i + 1, j, cost, best);
    }
    if (j + 1 < b.size()) {
        enumerate_paths(a, b, i, j + 1, cost, best);
    }
    if (i + 1 < a.size() && j + 1 < b.size()) {
        enumerate_paths(a, b, i + 1, j + 1, cost, best);
    }
}

} // namespace

MotionSequence synthesize(const SynthSpec& spec, Source source) {
    if (spec.frames < 1) {
        throw ValidationError("synthesis needs at least one frame, got " +
                              std::to_string(spec.frames));
    }
    if (!(spec.fps > 0.0)) {
        throw ValidationError("synthesis fps must be positive");
    }
    if (!std::isfinite(spec.amplitude)) {
        throw ValidationError("synthesis amplitude must be finite");
    }

    auto skeleton = humanml3d_22();
    const int joints = skeleton->joint_count();
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(spec.frames) * joints);

    SplitMix64 rng(spec.seed);
    for (int t = 0; t < spec.frames; ++t) {
        switch (spec.kind) {
        case SynthKind::constant:
            points.insert(points.end(), std::begin(kStandingPose), std::end(kStandingPose));
            break;
        case SynthKind::linear_ramp: {
            const double shift =
                spec.frames > 1 ? spec.amplitude * t / (spec.frames - 1) : 0.0;
            for (const Vec3& p : kStandingPose) {
                points.push_back({p.x + shift, p.y, p.z});
            }
            break;
        }
        case SynthKind::walk_cycle: {
            const double angle = 2.0 * kPi * t / kWalkPeriodFrames;
            const std::size_t base = points.size();
            points.insert(points.end(), std::begin(kStandingPose), std::end(kStandingPose));
            for (const LimbSwing& swing : kWalkSwings) {
                points[base + swing.joint - 1].z +=
                    spec.amplitude * swing.reach * std::sin(angle + swing.phase);
            }
            break;
        }
        case SynthKind::noise:
            for (int joint = 0; joint < joints; ++joint) {
                const double x = spec.amplitude * (2.0 * rng.next_double() - 1.0);
                const double y = spec.amplitude * (2.0 * rng.next_double() - 1.0);
                const double z = spec.amplitude * (2.0 * rng.next_double() - 1.0);
                points.push_back({x, y, z});
            }
            break;
        }
    }
    return MotionSequence(skeleton, std::move(points), spec.fps, source, StateFlags{});
}

MotionSequence apply_rigid(const MotionSequence& seq, const Mat3& rotation,
                           const Vec3& translation) {
    const Mat3 gram = rotation.transposed() * rotation;
    double worst = std::abs(rotation.det() - 1.0);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double want = r == c ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(gram.m[r][c] - want));
        }
    }
    if (worst > 1e-9) {
        throw ValidationError("rigid transform needs a proper orthogonal rotation");
    }

    std::vector<Vec3> points;
    points.reserve(seq.points().size());
    for (const Vec3& p : seq.points()) {
        points.push_back(rotation.apply(p) + translation);
    }
    return seq.derive(std::move(points), seq.state());
}

MotionSequence apply_time_warp(const MotionSequence& seq, std::span<const int> frame_map) {
    if (frame_map.empty()) {
        throw ValidationError("time warp map must not be empty");
    }
    const int total = static_cast<int>(seq.frames());
    int previous = 0;
    for (std::size_t i = 0; i < frame_map.size(); ++i) {
        const int frame = frame_map[i];
        if (frame < 0 || frame >= total) {
            throw ValidationError("time warp map entry " + std::to_string(i) +
                                  " points at frame " + std::to_string(frame) +
                                  ", outside 0.." + std::to_string(total - 1));
        }
        if (i > 0 && frame < previous) {
            throw ValidationError("time warp map must be nondecreasing");
        }
        previous = frame;
    }

    std::vector<Vec3> points;
    points.reserve(frame_map.size() * seq.joints());
    for (const int frame : frame_map) {
        const auto source = seq.frame(frame);
        points.insert(points.end(), source.begin(), source.end());
    }
    return seq.derive(std::move(points), seq.state());
}

double brute_force_dtw(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty()) {
        throw ValidationError("time warping needs non-empty trajectories");
    }
    if (a.size() > 10 || b.size() > 10) {
        throw ValidationError("brute-force time warping is capped at 10 frames per side");
    }
    double best = std::numeric_limits<double>::infinity();
    enumerate_paths(a, b, 0, 0, 0.0, best);
    return best;
}

} // namespace motioneval
