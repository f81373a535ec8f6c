#include "motioneval/align.hpp"

#include <cmath>
#include <utility>

#include "motioneval/error.hpp"

namespace motioneval {

std::vector<double> resample_channel(std::span<const double> x,
                                     std::size_t target_frames) {
    const std::size_t t_count = x.size();
    if (t_count < 2 || target_frames < 2)
        throw ValidationError("resampling needs at least 2 frames on both sides, got " +
                              std::to_string(t_count) + " -> " +
                              std::to_string(target_frames));
    if (target_frames == t_count)
        return std::vector<double>(x.begin(), x.end());

    std::vector<double> out(target_frames);
    const double scale =
        static_cast<double>(t_count - 1) / static_cast<double>(target_frames - 1);
    out[0] = x[0];
    out[target_frames - 1] = x[t_count - 1];
    for (std::size_t i = 1; i + 1 < target_frames; ++i) {
        const double pos = static_cast<double>(i) * scale;
        auto lo = static_cast<std::size_t>(pos);
        if (lo >= t_count - 1)
            lo = t_count - 2;
        const double frac = pos - static_cast<double>(lo);
        out[i] = x[lo] * (1.0 - frac) + x[lo + 1] * frac;
    }
    return out;
}

MotionSequence resample_linear(const MotionSequence& seq, std::size_t target_frames) {
    const std::size_t t_count = seq.frames();
    if (t_count < 2 || target_frames < 2)
        throw ValidationError("resampling needs at least 2 frames on both sides, got " +
                              std::to_string(t_count) + " -> " +
                              std::to_string(target_frames));
    if (target_frames == t_count) {
        StateFlags state = seq.state();
        state.resampled = true;
        return seq.derive(std::vector<Vec3>(seq.points()), state);
    }

    const auto joints = static_cast<std::size_t>(seq.joints());
    std::vector<Vec3> points(target_frames * joints);
    std::vector<double> channel(t_count);
    for (std::size_t j = 0; j < joints; ++j) {
        for (int axis = 0; axis < 3; ++axis) {
            for (std::size_t t = 0; t < t_count; ++t) {
                const Vec3& p = seq.points()[t * joints + j];
                channel[t] = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
            }
            std::vector<double> resampled = resample_channel(channel, target_frames);
            for (std::size_t t = 0; t < target_frames; ++t) {
                Vec3& p = points[t * joints + j];
                (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = resampled[t];
            }
        }
    }
    StateFlags state = seq.state();
    state.resampled = true;
    return seq.derive(std::move(points), state);
}

std::pair<EvalTriplet, AlignPlan>
align_triplet(const EvalTriplet& triplet, std::optional<std::size_t> frames_override) {
    AlignPlan plan;
    plan.real_frames = triplet.real.frames();
    plan.benchmark_frames = triplet.benchmark.frames();
    plan.simulated_frames = triplet.simulated.frames();
    plan.target_frames = frames_override.value_or(
        std::min({plan.real_frames, plan.benchmark_frames, plan.simulated_frames}));
    if (plan.target_frames < 2)
        throw ValidationError("alignment target of " +
                              std::to_string(plan.target_frames) +
                              " frames is too short, need at least 2");
    if (std::min({plan.real_frames, plan.benchmark_frames, plan.simulated_frames}) < 2)
        throw ValidationError("cannot align a triplet with any member shorter than "
                              "2 frames");

    auto to_target = [&](const MotionSequence& seq) {
        return seq.frames() == plan.target_frames
                   ? seq
                   : resample_linear(seq, plan.target_frames);
    };
    EvalTriplet aligned = make_triplet(to_target(triplet.real),
                                       to_target(triplet.benchmark),
                                       to_target(triplet.simulated), triplet.task_id);
    return {std::move(aligned), plan};
}

} // namespace motioneval
