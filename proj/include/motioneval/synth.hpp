#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "motioneval/geometry.hpp"
#include "motioneval/motion.hpp"

namespace motioneval {

// Deterministic 64-bit generator (SplitMix64). Mirrored by the Python
// script that froze the reference data, so seeds mean the same thing in
// both places.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    // Uniform double in [0, 1) from the top 53 bits.
    double next_double();

private:
    std::uint64_t state_;
};

enum class SynthKind { constant, linear_ramp, walk_cycle, noise };

struct SynthSpec {
    SynthKind kind = SynthKind::walk_cycle;
    int frames = 90;
    double fps = 30.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

SynthKind synth_kind_from_string(const std::string& name);
std::string to_string(SynthKind kind);

// Generates a 22-joint sequence with a closed-form shape, for exercising the
// pipeline without recorded data. constant holds a standing pose, linear_ramp
// translates it along x, walk_cycle swings limbs with a 30-frame period, and
// noise draws every coordinate from the seeded generator.
MotionSequence synthesize(const SynthSpec& spec, Source source = Source::simulated);

// Applies p -> rotation * p + translation to every point. The rotation must
// be proper and orthogonal within 1e-9.
MotionSequence apply_rigid(const MotionSequence& seq, const Mat3& rotation,
                           const Vec3& translation);

// Re-times a sequence by frame_map, where frame_map[i] is the source frame
// (0-based) emitted at output frame i. The map must be nondecreasing and in
// range.
MotionSequence apply_time_warp(const MotionSequence& seq, std::span<const int> frame_map);

// Reference DTW cost by exhaustive path enumeration. Only intended for tiny
// inputs; throws ValidationError when either side exceeds 10 frames.
double brute_force_dtw(std::span<const Vec3> a, std::span<const Vec3> b);

} // namespace motioneval
