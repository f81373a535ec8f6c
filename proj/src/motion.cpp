#include "motioneval/motion.hpp"

#include <utility>

#include "motioneval/error.hpp"

namespace motioneval {

std::string_view to_string(Source source) {
    switch (source) {
    case Source::real: return "real";
    case Source::benchmark: return "benchmark";
    case Source::simulated: return "simulated";
    }
    throw ValidationError("unhandled source value");
}

Source source_from_string(std::string_view name) {
    if (name == "real")
        return Source::real;
    if (name == "benchmark")
        return Source::benchmark;
    if (name == "simulated")
        return Source::simulated;
    throw ParseError("unknown source '" + std::string(name) + "'");
}

std::string to_string(const StateFlags& state) {
    std::string out;
    auto append = [&](bool set, std::string_view name) {
        if (!set)
            return;
        if (!out.empty())
            out += ',';
        out += name;
    };
    append(state.centered, "centered");
    append(state.scaled, "scaled");
    append(state.y_flipped, "y_flipped");
    append(state.filtered, "filtered");
    append(state.resampled, "resampled");
    if (out.empty())
        out = "none";
    return out;
}

StateFlags state_from_string(std::string_view text) {
    StateFlags state;
    if (text == "none" || text.empty())
        return state;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find(',', start);
        std::string_view flag = text.substr(
            start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (flag == "centered")
            state.centered = true;
        else if (flag == "scaled")
            state.scaled = true;
        else if (flag == "y_flipped")
            state.y_flipped = true;
        else if (flag == "filtered")
            state.filtered = true;
        else if (flag == "resampled")
            state.resampled = true;
        else
            throw ParseError("unknown state flag '" + std::string(flag) + "'");
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return state;
}

LandmarkSequence::LandmarkSequence(std::vector<Landmark> points, double fps)
    : points_(std::move(points)), fps_(fps) {
    if (points_.empty())
        throw ValidationError("landmark sequence has no frames");
    if (points_.size() % kLandmarks != 0)
        throw ValidationError("landmark count " + std::to_string(points_.size()) +
                              " is not a multiple of " + std::to_string(kLandmarks));
    if (!(fps_ > 0.0))
        throw ValidationError("fps must be positive, got " + std::to_string(fps_));
}

const Landmark& LandmarkSequence::at(std::size_t frame, int landmark) const {
    if (frame >= frames())
        throw ValidationError("frame " + std::to_string(frame) + " out of range, have " +
                              std::to_string(frames()));
    if (landmark < 1 || landmark > kLandmarks)
        throw ValidationError("landmark index " + std::to_string(landmark) +
                              " out of range 1.." + std::to_string(kLandmarks));
    return points_[frame * kLandmarks + static_cast<std::size_t>(landmark - 1)];
}

std::span<const Landmark> LandmarkSequence::frame(std::size_t t) const {
    if (t >= frames())
        throw ValidationError("frame " + std::to_string(t) + " out of range, have " +
                              std::to_string(frames()));
    return {points_.data() + t * kLandmarks, static_cast<std::size_t>(kLandmarks)};
}

MotionSequence::MotionSequence(std::shared_ptr<const SkeletonSpec> skeleton,
                               std::vector<Vec3> points, double fps, Source source,
                               StateFlags state)
    : skeleton_(std::move(skeleton)), points_(std::move(points)), fps_(fps),
      source_(source), state_(state) {
    if (!skeleton_)
        throw ValidationError("motion sequence has no skeleton");
    validate_skeleton(*skeleton_);
    const auto joints = static_cast<std::size_t>(skeleton_->joint_count());
    if (points_.empty())
        throw ValidationError("motion sequence has no frames");
    if (points_.size() % joints != 0)
        throw ValidationError("point count " + std::to_string(points_.size()) +
                              " is not a multiple of " + std::to_string(joints) +
                              " joints");
    if (!(fps_ > 0.0))
        throw ValidationError("fps must be positive, got " + std::to_string(fps_));
}

const Vec3& MotionSequence::at(std::size_t frame, int joint) const {
    if (frame >= frames())
        throw ValidationError("frame " + std::to_string(frame) + " out of range, have " +
                              std::to_string(frames()));
    if (joint < 1 || joint > joints())
        throw ValidationError("joint index " + std::to_string(joint) +
                              " out of range 1.." + std::to_string(joints()));
    return points_[frame * static_cast<std::size_t>(joints()) +
                   static_cast<std::size_t>(joint - 1)];
}

std::span<const Vec3> MotionSequence::frame(std::size_t t) const {
    if (t >= frames())
        throw ValidationError("frame " + std::to_string(t) + " out of range, have " +
                              std::to_string(frames()));
    return {points_.data() + t * static_cast<std::size_t>(joints()),
            static_cast<std::size_t>(joints())};
}

MotionSequence MotionSequence::derive(std::vector<Vec3> points, StateFlags state) const {
    return MotionSequence(skeleton_, std::move(points), fps_, source_, state);
}

std::vector<Vec3> joint_trajectory(const MotionSequence& seq, int joint) {
    std::vector<Vec3> out;
    out.reserve(seq.frames());
    for (std::size_t t = 0; t < seq.frames(); ++t)
        out.push_back(seq.at(t, joint));
    return out;
}

EvalTriplet make_triplet(MotionSequence real, MotionSequence benchmark,
                         MotionSequence simulated, std::string task_id) {
    const auto& id = real.skeleton().id;
    if (benchmark.skeleton().id != id || simulated.skeleton().id != id)
        throw ValidationError("triplet mixes skeletons: " + id + ", " +
                              benchmark.skeleton().id + ", " + simulated.skeleton().id);
    return EvalTriplet{std::move(real), std::move(benchmark), std::move(simulated),
                       std::move(task_id)};
}

bool is_aligned(const EvalTriplet& triplet) {
    return triplet.real.frames() == triplet.benchmark.frames() &&
           triplet.real.frames() == triplet.simulated.frames();
}

} // namespace motioneval
