#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "motioneval/error.hpp"
#include "motioneval/metrics.hpp"
#include "motioneval/synth.hpp"

#include "test_util.hpp"

using namespace motioneval;

namespace {

double max_abs_entry(const Mat3& m) {
    double worst = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            worst = std::max(worst, std::abs(m.m[r][c]));
    return worst;
}

Mat3 minus_identity(const Mat3& m) {
    Mat3 out = m;
    for (int i = 0; i < 3; ++i)
        out.m[i][i] -= 1.0;
    return out;
}

std::vector<Vec3> random_points(SplitMix64& rng, std::size_t count) {
    std::vector<Vec3> out(count);
    for (Vec3& p : out)
        p = {2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0,
             2.0 * rng.next_double() - 1.0};
    return out;
}

MotionSequence walk(int frames, std::uint64_t seed, double amplitude) {
    SynthSpec spec;
    spec.frames = frames;
    spec.seed = seed;
    spec.amplitude = amplitude;
    return synthesize(spec);
}

} // namespace

TEST_CASE("svd3 reconstructs random matrices") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Mat3 h;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                h.m[r][c] = 2.0 * rng.next_double() - 1.0;
        const Svd3 svd = svd3(h);

        CHECK(svd.sigma.x >= svd.sigma.y);
        CHECK(svd.sigma.y >= svd.sigma.z);
        CHECK(svd.sigma.z >= 0.0);
        CHECK(max_abs_entry(minus_identity(svd.u.transposed() * svd.u)) <= 1e-10);
        CHECK(max_abs_entry(minus_identity(svd.v.transposed() * svd.v)) <= 1e-10);

        Mat3 sigma;
        sigma.m[0][0] = svd.sigma.x;
        sigma.m[1][1] = svd.sigma.y;
        sigma.m[2][2] = svd.sigma.z;
        const Mat3 rebuilt = svd.u * sigma * svd.v.transposed();
        double worst = 0.0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(rebuilt.m[r][c] - h.m[r][c]));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("svd3 handles rank-deficient input") {
    Mat3 h;
    h.m[0][0] = 2.0;
    h.m[1][1] = 0.0;
    h.m[2][2] = 0.0;
    h.m[0][1] = 4.0;
    const Svd3 svd = svd3(h);
    CHECK(std::abs(svd.sigma.y) <= 1e-12);
    CHECK(std::abs(svd.sigma.z) <= 1e-12);
    CHECK(max_abs_entry(minus_identity(svd.u.transposed() * svd.u)) <= 1e-10);
    CHECK(max_abs_entry(minus_identity(svd.v.transposed() * svd.v)) <= 1e-10);

    Mat3 sigma;
    sigma.m[0][0] = svd.sigma.x;
    sigma.m[1][1] = 0.0;
    sigma.m[2][2] = 0.0;
    const Mat3 rebuilt = svd.u * sigma * svd.v.transposed();
    double worst = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            worst = std::max(worst, std::abs(rebuilt.m[r][c] - h.m[r][c]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("procrustes recovers a known rotation") {
    SplitMix64 rng(47);
    const std::vector<Vec3> a = random_points(rng, 22);
    const Mat3 rot = rotation_about_axis({0.3, 1.0, -0.2}, 1.1);
    std::vector<Vec3> b(a.size());
    const Vec3 shift{0.7, -0.4, 1.3};
    for (std::size_t i = 0; i < a.size(); ++i)
        b[i] = rot.apply(a[i]) + shift;

    // The fitted rotation maps centered b back onto centered a, so it is the
    // inverse of the applied one.
    const ProcrustesResult fit = procrustes_rotation(a, b);
    CHECK(fit.residual <= 1e-12);
    CHECK(std::abs(fit.rotation.det() - 1.0) <= 1e-12);
    CHECK(fit.scale == 1.0);
    CHECK_FALSE(fit.reflection_used);
    CHECK(max_abs_entry(minus_identity(fit.rotation * rot)) <= 1e-9);
    CHECK(max_abs_entry(minus_identity(fit.rotation.transposed() * fit.rotation)) <=
          1e-10);
}

TEST_CASE("procrustes on mirrored points") {
    SplitMix64 rng(52);
    const std::vector<Vec3> a = random_points(rng, 16);
    std::vector<Vec3> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        b[i] = {-a[i].x, a[i].y, a[i].z};

    const ProcrustesResult proper = procrustes_rotation(a, b);
    CHECK(std::abs(proper.rotation.det() - 1.0) <= 1e-10);
    CHECK(proper.residual > 0.05);
    CHECK_FALSE(proper.reflection_used);

    const ProcrustesResult improper = procrustes_rotation(a, b, true);
    CHECK(improper.reflection_used);
    CHECK(std::abs(improper.rotation.det() + 1.0) <= 1e-10);
    CHECK(improper.residual <= 1e-12);
    CHECK(improper.residual < proper.residual);
}

TEST_CASE("procrustes with scale fitting") {
    SplitMix64 rng(61);
    const std::vector<Vec3> a = random_points(rng, 12);
    const Mat3 rot = rotation_about_axis({1.0, 0.2, 0.1}, 0.8);
    std::vector<Vec3> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        b[i] = rot.apply(a[i]) * 2.5;

    const ProcrustesResult no_scale = procrustes_rotation(a, b);
    CHECK(no_scale.residual > 0.1);
    const ProcrustesResult with_scale = procrustes_rotation(a, b, false, true);
    CHECK(with_scale.scale == doctest::Approx(1.0 / 2.5).epsilon(1e-9));
    CHECK(with_scale.residual <= 1e-12);
}

TEST_CASE("procrustes degenerate and undersized inputs") {
    const std::vector<Vec3> collapsed(5, Vec3{1.0, 2.0, 3.0});
    const std::vector<Vec3> spread = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    CHECK_THROWS_AS(procrustes_rotation(collapsed, collapsed), DegeneracyError);
    CHECK_THROWS_AS(procrustes_rotation(spread, collapsed), DegeneracyError);
    const std::vector<Vec3> two = {{0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(procrustes_rotation(two, two), ValidationError);
    const std::vector<Vec3> mismatch = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_AS(procrustes_rotation(mismatch, spread), ValidationError);
}

TEST_CASE("mpjpe is the mean cell distance") {
    const MotionSequence a = walk(10, 0, 1.0);
    std::vector<Vec3> moved = a.points();
    for (Vec3& p : moved)
        p = p + Vec3{0.3, 0.0, 0.4};
    const MotionSequence b = a.derive(std::move(moved), a.state());
    CHECK(mpjpe(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mpjpe(a, a) == 0.0);
}

TEST_CASE("mpjpe requires equal shapes") {
    const MotionSequence a = walk(10, 0, 1.0);
    const MotionSequence b = walk(12, 0, 1.0);
    CHECK_THROWS_AS(mpjpe(a, b), ValidationError);
}

TEST_CASE("pa_mpjpe removes rigid motion and never exceeds mpjpe") {
    const MotionSequence a = walk(20, 5, 1.0);

    SUBCASE("pure rigid motion vanishes") {
        const Mat3 rot = rotation_about_axis({0.1, 1.0, 0.3}, 0.9);
        const MotionSequence b = apply_rigid(a, rot, {1.0, -0.5, 2.0});
        CHECK(mpjpe(a, b) > 0.1);
        CHECK(pa_mpjpe(a, b) <= 1e-9);
    }
    SUBCASE("bounded by mpjpe on noisy pairs") {
        SplitMix64 rng(77);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Vec3> noisy = a.points();
            for (Vec3& p : noisy)
                p = p + Vec3{0.2 * (2.0 * rng.next_double() - 1.0),
                             0.2 * (2.0 * rng.next_double() - 1.0),
                             0.2 * (2.0 * rng.next_double() - 1.0)};
            const MotionSequence b = a.derive(std::move(noisy), a.state());
            CHECK(pa_mpjpe(a, b) <= mpjpe(a, b) + 1e-9);
        }
    }
    SUBCASE("global mode uses one alignment for the whole sequence") {
        // A rotation limited to the second half cannot be removed by a
        // single global fit, but the per-frame mode absorbs it.
        std::vector<Vec3> twisted = a.points();
        const Mat3 rot = rotation_about_axis({0.0, 1.0, 0.0}, 0.7);
        const auto joints = static_cast<std::size_t>(a.joints());
        for (std::size_t t = 10; t < 20; ++t)
            for (std::size_t j = 0; j < joints; ++j)
                twisted[t * joints + j] = rot.apply(twisted[t * joints + j]);
        const MotionSequence b = a.derive(std::move(twisted), a.state());
        PaConfig global;
        global.mode = PaMode::global;
        CHECK(pa_mpjpe(a, b) <= 1e-9);
        CHECK(pa_mpjpe(a, b, global) > 0.01);
    }
}

TEST_CASE("dtw_joint agrees with hand-computed paths") {
    SUBCASE("identical trajectories cost zero") {
        const std::vector<Vec3> a = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        CHECK(dtw_joint(a, a) == 0.0);
    }
    SUBCASE("single-frame against multi-frame sums every cell") {
        const std::vector<Vec3> a = {{0, 0, 0}};
        const std::vector<Vec3> b = {{1, 0, 0}, {2, 0, 0}, {4, 0, 0}};
        CHECK(dtw_joint(a, b) == doctest::Approx(7.0).epsilon(1e-12));
    }
    SUBCASE("time-shifted step pattern warps for free") {
        // b repeats a's first sample once, everything else matches; only the
        // duplicated start contributes nothing because the cost of staying
        // in the first cell is zero.
        const std::vector<Vec3> a = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        const std::vector<Vec3> b = {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        CHECK(dtw_joint(a, b) == 0.0);
    }
    SUBCASE("empty trajectories are invalid") {
        const std::vector<Vec3> a = {{0, 0, 0}};
        CHECK_THROWS_AS(dtw_joint(a, {}), ValidationError);
        CHECK_THROWS_AS(dtw_joint({}, a), ValidationError);
    }
}

TEST_CASE("dtw_joint equals exhaustive path enumeration on seeded pairs") {
    SplitMix64 rng(4040);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t la = 1 + static_cast<std::size_t>(rng.next_u64() % 8);
        const std::size_t lb = 1 + static_cast<std::size_t>(rng.next_u64() % 8);
        const std::vector<Vec3> a = random_points(rng, la);
        const std::vector<Vec3> b = random_points(rng, lb);
        CHECK(dtw_joint(a, b) == brute_force_dtw(a, b));
    }
}

TEST_CASE("dtw_mean averages the per-joint costs") {
    const MotionSequence a = walk(12, 1, 1.0);
    const MotionSequence b = walk(12, 1, 1.3);
    const PerJointMetrics per_joint = per_joint_metrics(a, b);
    REQUIRE(per_joint.dtw.size() == 22);
    double sum = 0.0;
    for (double v : per_joint.dtw)
        sum += v;
    CHECK(dtw_mean(a, b) == doctest::Approx(sum / 22.0).epsilon(1e-12));
}

TEST_CASE("per_joint_metrics matches the whole-sequence metrics") {
    const MotionSequence a = walk(15, 2, 1.0);
    const MotionSequence b = walk(15, 9, 0.8);
    const PerJointMetrics per_joint = per_joint_metrics(a, b);
    REQUIRE(per_joint.mpjpe.size() == 22);
    REQUIRE(per_joint.pa_mpjpe.size() == 22);

    double mean_mpjpe = 0.0;
    double mean_pa = 0.0;
    for (int j = 0; j < 22; ++j) {
        mean_mpjpe += per_joint.mpjpe[static_cast<std::size_t>(j)];
        mean_pa += per_joint.pa_mpjpe[static_cast<std::size_t>(j)];
    }
    CHECK(mpjpe(a, b) == doctest::Approx(mean_mpjpe / 22.0).epsilon(1e-12));
    CHECK(pa_mpjpe(a, b) == doctest::Approx(mean_pa / 22.0).epsilon(1e-12));
}

TEST_CASE("compare_sources fills the selected metrics") {
    EvalTriplet triplet = make_triplet(walk(18, 1, 1.0), walk(18, 2, 0.9),
                                       walk(18, 3, 1.1), "demo");
    const MetricReport report = compare_sources(triplet);
    CHECK(report.task_id == "demo");
    CHECK(report.simulated_vs_real.mpjpe.has_value());
    CHECK(report.simulated_vs_real.pa_mpjpe.has_value());
    CHECK(report.simulated_vs_real.dtw_mean.has_value());
    CHECK(report.benchmark_vs_real.mpjpe.has_value());
    CHECK(report.simulated_vs_real.joint_mpjpe.size() == 22);
    CHECK(report.benchmark_vs_real.joint_dtw.size() == 22);
    CHECK(report.alignment.target_frames == 18);

    CompareConfig config;
    config.metrics.pa_mpjpe = false;
    config.metrics.dtw = false;
    const MetricReport partial = compare_sources(triplet, config);
    CHECK(partial.simulated_vs_real.mpjpe.has_value());
    CHECK_FALSE(partial.simulated_vs_real.pa_mpjpe.has_value());
    CHECK_FALSE(partial.simulated_vs_real.dtw_mean.has_value());
    CHECK(partial.simulated_vs_real.joint_pa_mpjpe.empty());
}

TEST_CASE("compare_sources insists on aligned triplets") {
    EvalTriplet triplet = make_triplet(walk(18, 1, 1.0), walk(12, 2, 0.9),
                                       walk(18, 3, 1.1), "demo");
    CHECK_THROWS_AS(compare_sources(triplet), ValidationError);
}
