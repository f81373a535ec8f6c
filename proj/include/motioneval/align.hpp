#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "motioneval/motion.hpp"

namespace motioneval {

// What temporal alignment did to a triplet.
struct AlignPlan {
    std::size_t target_frames = 0;
    std::size_t real_frames = 0;
    std::size_t benchmark_frames = 0;
    std::size_t simulated_frames = 0;
};

// Per-channel linear interpolation over normalized time i/(T-1). Endpoints
// are taken verbatim, and a target equal to the input length returns the
// input unchanged. Both the input length and the target must be >= 2.
MotionSequence resample_linear(const MotionSequence& seq, std::size_t target_frames);
std::vector<double> resample_channel(std::span<const double> x, std::size_t target_frames);

// Resamples all three sequences to a shared length: the minimum of the
// three frame counts, or frames_override when given (an override may also
// upsample).
std::pair<EvalTriplet, AlignPlan>
align_triplet(const EvalTriplet& triplet,
              std::optional<std::size_t> frames_override = std::nullopt);

} // namespace motioneval
