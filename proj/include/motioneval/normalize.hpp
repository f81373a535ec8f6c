#pragma once

#include <span>
#include <utility>
#include <vector>

#include "motioneval/motion.hpp"

namespace motioneval {

enum class FlipY { automatic, always, never };
enum class ScaleMode { per_frame, median };

struct NormalizeConfig {
    int center_joint = 16;
    std::pair<int, int> scale_pair = {16, 11};
    FlipY flip_y = FlipY::automatic;
    int median_kernel = 11;
    double lowpass_cutoff = 0.05;
    int lowpass_order = 4;
    double scale_epsilon = 1e-6;
    ScaleMode scale_mode = ScaleMode::per_frame;
};

// Throws ValidationError on out-of-range values (even kernel, cutoff
// outside (0,1), order < 1, non-positive epsilon).
void validate_config(const NormalizeConfig& config, int joint_count);

// Subtracts the center joint from every joint, frame by frame. The center
// joint lands exactly at the origin.
MotionSequence root_center(const MotionSequence& seq, int center_joint);

// Divides each frame by the distance between the two scale joints. Frames
// where that distance falls below epsilon inherit the nearest valid scale
// (scanning forward; leading frames borrow the first valid one). median
// mode applies the median of the valid per-frame scales to all frames.
// Throws DegeneracyError when no frame has a valid scale.
MotionSequence scale_normalize(const MotionSequence& seq,
                               std::pair<int, int> scale_pair,
                               double epsilon = 1e-6,
                               ScaleMode mode = ScaleMode::per_frame);

// Negates the y coordinate of every point (image-origin to world-origin
// convention). Involutive, but the y_flipped flag stays set once set.
MotionSequence flip_y(const MotionSequence& seq);

// Per-channel sliding median with replicate padding. kernel must be odd;
// a kernel larger than the series degrades to the whole-series median.
MotionSequence median_filter(const MotionSequence& seq, int kernel);
std::vector<double> median_filter_channel(std::span<const double> x, int kernel);

// Zero-phase low-pass: Butterworth design via the bilinear transform with
// frequency pre-warping, run forward and backward over an odd extension of
// 3*(order+1) samples per side (shorter series use T-1), then trimmed.
// Each causal pass starts from its steady state scaled by the first input
// sample, and the pass pair is evaluated in both orientations and averaged
// so filtering commutes exactly with time reversal. cutoff is a fraction
// of the Nyquist frequency.
MotionSequence lowpass_zero_phase(const MotionSequence& seq, double cutoff, int order);
std::vector<double> lowpass_zero_phase_channel(std::span<const double> x,
                                               double cutoff, int order);

// Digital coefficients for the low-pass design above. b and a have
// order + 1 entries each; a[0] == 1.
struct FilterCoeffs {
    std::vector<double> b;
    std::vector<double> a;
};
FilterCoeffs butterworth_lowpass(int order, double cutoff);

// Steady-state filter state for a unit-step input; scaled by the first
// sample it removes the startup transient of a causal pass.
std::vector<double> unit_step_state(const FilterCoeffs& coeffs);

// The full normalization chain: root_center, scale_normalize, conditional
// flip_y (always, or automatic on real/landmark-sourced input), median
// filter, zero-phase low-pass.
MotionSequence normalize_pipeline(const MotionSequence& seq,
                                  const NormalizeConfig& config = {});

} // namespace motioneval
