#include "motioneval/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "motioneval/error.hpp"

namespace motioneval {

void validate_config(const NormalizeConfig& config, int joint_count) {
    auto check_joint = [&](int joint, const char* what) {
        if (joint < 1 || joint > joint_count)
            throw ValidationError(std::string(what) + " joint " + std::to_string(joint) +
                                  " out of range 1.." + std::to_string(joint_count));
    };
    check_joint(config.center_joint, "center");
    check_joint(config.scale_pair.first, "scale");
    check_joint(config.scale_pair.second, "scale");
    if (config.scale_pair.first == config.scale_pair.second)
        throw ValidationError("scale pair uses joint " +
                              std::to_string(config.scale_pair.first) + " twice");
    if (config.median_kernel < 1 || config.median_kernel % 2 == 0)
        throw ValidationError("median kernel must be odd and >= 1, got " +
                              std::to_string(config.median_kernel));
    if (!(config.lowpass_cutoff > 0.0 && config.lowpass_cutoff < 1.0))
        throw ValidationError("lowpass cutoff must lie in (0,1), got " +
                              std::to_string(config.lowpass_cutoff));
    if (config.lowpass_order < 1)
        throw ValidationError("lowpass order must be >= 1, got " +
                              std::to_string(config.lowpass_order));
    if (!(config.scale_epsilon > 0.0))
        throw ValidationError("scale epsilon must be positive, got " +
                              std::to_string(config.scale_epsilon));
}

MotionSequence root_center(const MotionSequence& seq, int center_joint) {
    if (center_joint < 1 || center_joint > seq.joints())
        throw ValidationError("center joint " + std::to_string(center_joint) +
                              " out of range 1.." + std::to_string(seq.joints()));
    std::vector<Vec3> points;
    points.reserve(seq.points().size());
    for (std::size_t t = 0; t < seq.frames(); ++t) {
        const Vec3 center = seq.at(t, center_joint);
        for (const Vec3& p : seq.frame(t))
            points.push_back(p - center);
    }
    StateFlags state = seq.state();
    state.centered = true;
    return seq.derive(std::move(points), state);
}

MotionSequence scale_normalize(const MotionSequence& seq, std::pair<int, int> scale_pair,
                               double epsilon, ScaleMode mode) {
    auto check_joint = [&](int joint) {
        if (joint < 1 || joint > seq.joints())
            throw ValidationError("scale joint " + std::to_string(joint) +
                                  " out of range 1.." + std::to_string(seq.joints()));
    };
    check_joint(scale_pair.first);
    check_joint(scale_pair.second);
    if (!(epsilon > 0.0))
        throw ValidationError("scale epsilon must be positive, got " +
                              std::to_string(epsilon));

    const std::size_t frames = seq.frames();
    std::vector<double> raw(frames);
    std::vector<double> valid;
    for (std::size_t t = 0; t < frames; ++t) {
        raw[t] = distance(seq.at(t, scale_pair.first), seq.at(t, scale_pair.second));
        if (raw[t] >= epsilon)
            valid.push_back(raw[t]);
    }
    if (valid.empty())
        throw DegeneracyError("no frame has a scale-pair distance >= " +
                              std::to_string(epsilon) + "; pose is degenerate");

    std::vector<double> scale(frames);
    if (mode == ScaleMode::median) {
        std::vector<double> sorted = valid;
        std::sort(sorted.begin(), sorted.end());
        double median = sorted.size() % 2 == 1
                            ? sorted[sorted.size() / 2]
                            : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                     sorted[sorted.size() / 2]);
        std::fill(scale.begin(), scale.end(), median);
    } else {
        // Invalid frames reuse the last valid scale; a run of leading
        // invalid frames borrows the first valid one.
        double current = valid.front();
        for (std::size_t t = 0; t < frames; ++t) {
            if (raw[t] >= epsilon)
                current = raw[t];
            scale[t] = current;
        }
    }

    std::vector<Vec3> points;
    points.reserve(seq.points().size());
    for (std::size_t t = 0; t < frames; ++t)
        for (const Vec3& p : seq.frame(t))
            points.push_back(p / scale[t]);
    StateFlags state = seq.state();
    state.scaled = true;
    return seq.derive(std::move(points), state);
}

MotionSequence flip_y(const MotionSequence& seq) {
    std::vector<Vec3> points;
    points.reserve(seq.points().size());
    for (const Vec3& p : seq.points())
        points.push_back({p.x, 0.0 - p.y, p.z});
    StateFlags state = seq.state();
    state.y_flipped = true;
    return seq.derive(std::move(points), state);
}

std::vector<double> median_filter_channel(std::span<const double> x, int kernel) {
    if (kernel < 1 || kernel % 2 == 0)
        throw ValidationError("median kernel must be odd and >= 1, got " +
                              std::to_string(kernel));
    const auto t_count = x.size();
    std::vector<double> out(t_count);
    if (t_count == 0)
        return out;
    if (static_cast<std::size_t>(kernel) > t_count) {
        std::vector<double> sorted(x.begin(), x.end());
        std::sort(sorted.begin(), sorted.end());
        double median = sorted.size() % 2 == 1
                            ? sorted[sorted.size() / 2]
                            : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                     sorted[sorted.size() / 2]);
        std::fill(out.begin(), out.end(), median);
        return out;
    }
    const int half = kernel / 2;
    std::vector<double> window(static_cast<std::size_t>(kernel));
    for (std::size_t t = 0; t < t_count; ++t) {
        for (int k = -half; k <= half; ++k) {
            auto idx = std::clamp<long long>(static_cast<long long>(t) + k, 0,
                                             static_cast<long long>(t_count) - 1);
            window[static_cast<std::size_t>(k + half)] = x[static_cast<std::size_t>(idx)];
        }
        std::sort(window.begin(), window.end());
        out[t] = window[static_cast<std::size_t>(half)];
    }
    return out;
}

namespace {

// Channel-wise application of a scalar filter over the (joint, axis) grid.
template <typename Fn>
std::vector<Vec3> apply_channels(const MotionSequence& seq, Fn&& filter) {
    const std::size_t frames = seq.frames();
    const auto joints = static_cast<std::size_t>(seq.joints());
    std::vector<Vec3> points(seq.points());
    std::vector<double> channel(frames);
    for (std::size_t j = 0; j < joints; ++j) {
        for (int axis = 0; axis < 3; ++axis) {
            for (std::size_t t = 0; t < frames; ++t) {
                const Vec3& p = points[t * joints + j];
                channel[t] = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
            }
            std::vector<double> filtered = filter(channel);
            for (std::size_t t = 0; t < frames; ++t) {
                Vec3& p = points[t * joints + j];
                (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = filtered[t];
            }
        }
    }
    return points;
}

} // namespace

MotionSequence median_filter(const MotionSequence& seq, int kernel) {
    std::vector<Vec3> points = apply_channels(seq, [&](const std::vector<double>& channel) {
        return median_filter_channel(channel, kernel);
    });
    StateFlags state = seq.state();
    state.filtered = true;
    return seq.derive(std::move(points), state);
}

FilterCoeffs butterworth_lowpass(int order, double cutoff) {
    if (order < 1)
        throw ValidationError("lowpass order must be >= 1, got " + std::to_string(order));
    if (!(cutoff > 0.0 && cutoff < 1.0))
        throw ValidationError("lowpass cutoff must lie in (0,1), got " +
                              std::to_string(cutoff));

    using cd = std::complex<double>;
    const double pi = std::numbers::pi;
    // Analog prototype poles on the unit circle, scaled to the pre-warped
    // cutoff, then mapped through the bilinear transform at fs = 2.
    const double warped = 4.0 * std::tan(pi * cutoff / 2.0);
    const double fs2 = 4.0;

    std::vector<cd> analog(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        double m = static_cast<double>(-order + 1 + 2 * k);
        analog[static_cast<std::size_t>(k)] =
            -std::exp(cd(0.0, pi * m / (2.0 * order))) * warped;
    }
    double gain = std::pow(warped, order);

    std::vector<cd> poles(static_cast<std::size_t>(order));
    cd denom(1.0, 0.0);
    for (int k = 0; k < order; ++k) {
        poles[static_cast<std::size_t>(k)] =
            (fs2 + analog[static_cast<std::size_t>(k)]) /
            (fs2 - analog[static_cast<std::size_t>(k)]);
        denom *= fs2 - analog[static_cast<std::size_t>(k)];
    }
    gain *= (cd(1.0, 0.0) / denom).real();

    // Expand the pole/zero sets into polynomial coefficients. All digital
    // zeros sit at -1.
    auto poly = [](const std::vector<cd>& roots) {
        std::vector<cd> coeffs{cd(1.0, 0.0)};
        for (const cd& root : roots) {
            std::vector<cd> next(coeffs.size() + 1, cd(0.0, 0.0));
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i] += coeffs[i];
                next[i + 1] -= coeffs[i] * root;
            }
            coeffs = std::move(next);
        }
        return coeffs;
    };

    std::vector<cd> zeros(static_cast<std::size_t>(order), cd(-1.0, 0.0));
    std::vector<cd> num = poly(zeros);
    std::vector<cd> den = poly(poles);

    FilterCoeffs out;
    out.b.resize(num.size());
    out.a.resize(den.size());
    for (std::size_t i = 0; i < num.size(); ++i)
        out.b[i] = gain * num[i].real();
    for (std::size_t i = 0; i < den.size(); ++i)
        out.a[i] = den[i].real();
    return out;
}

std::vector<double> unit_step_state(const FilterCoeffs& coeffs) {
    const std::size_t n = coeffs.a.size();
    if (n < 2 || coeffs.b.size() != n)
        throw ValidationError("filter coefficients must have order >= 1");
    const std::size_t m = n - 1;

    // Solve (I - C^T) zi = b[1:] - a[1:] * b[0], where C is the companion
    // matrix of a (first row -a[1:], ones on the subdiagonal). Gaussian
    // elimination with partial pivoting.
    std::vector<std::vector<double>> companion(m, std::vector<double>(m, 0.0));
    for (std::size_t j = 0; j < m; ++j)
        companion[0][j] = -coeffs.a[j + 1];
    for (std::size_t i = 1; i < m; ++i)
        companion[i][i - 1] = 1.0;
    std::vector<std::vector<double>> sys(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            sys[i][j] = (i == j ? 1.0 : 0.0) - companion[j][i];

    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i)
        rhs[i] = coeffs.b[i + 1] - coeffs.a[i + 1] * coeffs.b[0];

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < m; ++row)
            if (std::abs(sys[row][col]) > std::abs(sys[pivot][col]))
                pivot = row;
        if (sys[pivot][col] == 0.0)
            throw DegeneracyError("singular filter state system");
        std::swap(sys[col], sys[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < m; ++row) {
            double factor = sys[row][col] / sys[col][col];
            if (factor == 0.0)
                continue;
            for (std::size_t j = col; j < m; ++j)
                sys[row][j] -= factor * sys[col][j];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<double> zi(m);
    for (std::size_t i = m; i-- > 0;) {
        double sum = rhs[i];
        for (std::size_t j = i + 1; j < m; ++j)
            sum -= sys[i][j] * zi[j];
        zi[i] = sum / sys[i][i];
    }
    return zi;
}

namespace {

// Direct form II transposed with explicit initial state.
std::vector<double> lfilter(const FilterCoeffs& coeffs, std::span<const double> x,
                            std::vector<double> z) {
    const std::size_t m = z.size();
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double yi = coeffs.b[0] * x[i] + z[0];
        for (std::size_t k = 0; k + 1 < m; ++k)
            z[k] = z[k + 1] + x[i] * coeffs.b[k + 1] - yi * coeffs.a[k + 1];
        z[m - 1] = x[i] * coeffs.b[m] - yi * coeffs.a[m];
        y[i] = yi;
    }
    return y;
}

std::vector<double> reversed_copy(std::span<const double> x) {
    return std::vector<double>(x.rbegin(), x.rend());
}

std::vector<double> zero_phase_channel(std::span<const double> x,
                                       const FilterCoeffs& coeffs,
                                       const std::vector<double>& zi) {
    const std::size_t t_count = x.size();
    if (t_count < 2)
        throw ValidationError("series too short for zero-phase filtering, need "
                              "at least 2 frames, got " + std::to_string(t_count));

    const std::size_t padlen =
        std::min(3 * coeffs.a.size(), t_count - 1);
    std::vector<double> ext;
    ext.reserve(t_count + 2 * padlen);
    for (std::size_t i = 0; i < padlen; ++i)
        ext.push_back(2.0 * x[0] - x[padlen - i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < padlen; ++i)
        ext.push_back(2.0 * x[t_count - 1] - x[t_count - 2 - i]);

    auto causal = [&](std::span<const double> u) {
        std::vector<double> state(zi.size());
        for (std::size_t k = 0; k < zi.size(); ++k)
            state[k] = zi[k] * u[0];
        return lfilter(coeffs, u, std::move(state));
    };
    auto fwd_bwd = [&](std::span<const double> u) {
        std::vector<double> forward = causal(u);
        std::vector<double> backward = causal(reversed_copy(forward));
        std::reverse(backward.begin(), backward.end());
        return backward;
    };

    std::vector<double> straight = fwd_bwd(ext);
    std::vector<double> flipped = fwd_bwd(reversed_copy(ext));
    std::reverse(flipped.begin(), flipped.end());

    std::vector<double> out(t_count);
    for (std::size_t i = 0; i < t_count; ++i)
        out[i] = 0.5 * (straight[padlen + i] + flipped[padlen + i]);
    return out;
}

} // namespace

std::vector<double> lowpass_zero_phase_channel(std::span<const double> x, double cutoff,
                                               int order) {
    FilterCoeffs coeffs = butterworth_lowpass(order, cutoff);
    std::vector<double> zi = unit_step_state(coeffs);
    return zero_phase_channel(x, coeffs, zi);
}

MotionSequence lowpass_zero_phase(const MotionSequence& seq, double cutoff, int order) {
    if (seq.frames() < 2)
        throw ValidationError("series too short for zero-phase filtering, need "
                              "at least 2 frames, got " + std::to_string(seq.frames()));
    FilterCoeffs coeffs = butterworth_lowpass(order, cutoff);
    std::vector<double> zi = unit_step_state(coeffs);
    std::vector<Vec3> points = apply_channels(seq, [&](const std::vector<double>& channel) {
        return zero_phase_channel(channel, coeffs, zi);
    });
    StateFlags state = seq.state();
    state.filtered = true;
    return seq.derive(std::move(points), state);
}

MotionSequence normalize_pipeline(const MotionSequence& seq,
                                  const NormalizeConfig& config) {
    validate_config(config, seq.joints());
    MotionSequence out = root_center(seq, config.center_joint);
    out = scale_normalize(out, config.scale_pair, config.scale_epsilon,
                          config.scale_mode);
    const bool flip = config.flip_y == FlipY::always ||
                      (config.flip_y == FlipY::automatic &&
                       out.source() == Source::real);
    if (flip)
        out = flip_y(out);
    out = median_filter(out, config.median_kernel);
    out = lowpass_zero_phase(out, config.lowpass_cutoff, config.lowpass_order);
    return out;
}

} // namespace motioneval
