#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motioneval/geometry.hpp"
#include "motioneval/skeleton.hpp"

namespace motioneval {

// Where a sequence came from. real = recorded subject, benchmark = motion
// generated from a human-authored prompt, simulated = motion generated from
// a machine-refined prompt.
enum class Source { real, benchmark, simulated };

std::string_view to_string(Source source);
Source source_from_string(std::string_view name);

// Pipeline progress markers. Stages only ever set flags, never clear them,
// so a flag observed on a sequence stays true downstream.
struct StateFlags {
    bool centered = false;
    bool scaled = false;
    bool y_flipped = false;
    bool filtered = false;
    bool resampled = false;

    bool operator==(const StateFlags&) const = default;
};

std::string to_string(const StateFlags& state);
StateFlags state_from_string(std::string_view text);

// One pose-estimator point. Coordinates are unitless; visibility is the
// estimator's confidence in [0, 1].
struct Landmark {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double visibility = 0.0;
};

// A fixed-rate series of 33-landmark frames as read from a pose export.
class LandmarkSequence {
public:
    static constexpr int kLandmarks = 33;

    LandmarkSequence(std::vector<Landmark> points, double fps);

    std::size_t frames() const { return points_.size() / kLandmarks; }
    double fps() const { return fps_; }
    // landmark is 1-based.
    const Landmark& at(std::size_t frame, int landmark) const;
    std::span<const Landmark> frame(std::size_t t) const;

private:
    std::vector<Landmark> points_;
    double fps_;
};

// A fixed-rate joint-position series on a known skeleton. Treated as
// immutable: every pipeline stage returns a new sequence.
class MotionSequence {
public:
    MotionSequence(std::shared_ptr<const SkeletonSpec> skeleton,
                   std::vector<Vec3> points, double fps, Source source,
                   StateFlags state = {});

    const SkeletonSpec& skeleton() const { return *skeleton_; }
    const std::shared_ptr<const SkeletonSpec>& skeleton_ptr() const { return skeleton_; }
    std::size_t frames() const { return points_.size() / skeleton_->joint_count(); }
    int joints() const { return skeleton_->joint_count(); }
    double fps() const { return fps_; }
    Source source() const { return source_; }
    const StateFlags& state() const { return state_; }
    const std::vector<Vec3>& points() const { return points_; }

    // joint is 1-based.
    const Vec3& at(std::size_t frame, int joint) const;
    std::span<const Vec3> frame(std::size_t t) const;

    // Same skeleton/fps/source, new coordinates and flags. Frame count may
    // change but the joint count must not.
    MotionSequence derive(std::vector<Vec3> points, StateFlags state) const;

private:
    std::shared_ptr<const SkeletonSpec> skeleton_;
    std::vector<Vec3> points_;
    double fps_;
    Source source_;
    StateFlags state_;
};

// Path of one joint across all frames. joint is 1-based.
std::vector<Vec3> joint_trajectory(const MotionSequence& seq, int joint);

// The unit of evaluation: one recorded reference plus the two generated
// candidates, all on the same skeleton.
struct EvalTriplet {
    MotionSequence real;
    MotionSequence benchmark;
    MotionSequence simulated;
    std::string task_id;
};

// Throws ValidationError when the three sequences disagree on skeleton.
EvalTriplet make_triplet(MotionSequence real, MotionSequence benchmark,
                         MotionSequence simulated, std::string task_id);

bool is_aligned(const EvalTriplet& triplet);

} // namespace motioneval
