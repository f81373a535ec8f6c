#include <doctest.h>

#include <string>
#include <vector>

#include "motioneval/error.hpp"
#include "motioneval/io.hpp"
#include "motioneval/synth.hpp"

using namespace motioneval;

namespace {

LandmarkSequence tiny_landmarks(std::size_t frames) {
    std::vector<Landmark> points;
    points.reserve(frames * LandmarkSequence::kLandmarks);
    for (std::size_t t = 0; t < frames; ++t)
        for (int lm = 1; lm <= LandmarkSequence::kLandmarks; ++lm)
            points.push_back({0.01 * static_cast<double>(t) + lm,
                              0.5 - 0.001 * lm,
                              -0.25 * static_cast<double>(t),
                              0.9});
    return LandmarkSequence(std::move(points), 25.0);
}

std::string landmark_csv_frame(int frame) {
    std::string out;
    for (int lm = 1; lm <= LandmarkSequence::kLandmarks; ++lm)
        out += std::to_string(frame) + "," + std::to_string(lm) + ",0.1,0.2,0.3,1\n";
    return out;
}

} // namespace

TEST_CASE("landmark export JSON round trip") {
    const LandmarkSequence original = tiny_landmarks(3);
    const std::string text = write_landmark_export(original);
    const LandmarkSequence parsed = parse_landmark_export(text);
    REQUIRE(parsed.frames() == original.frames());
    CHECK(parsed.fps() == original.fps());
    for (std::size_t t = 0; t < original.frames(); ++t) {
        for (int lm = 1; lm <= LandmarkSequence::kLandmarks; ++lm) {
            CHECK(parsed.at(t, lm).x == original.at(t, lm).x);
            CHECK(parsed.at(t, lm).y == original.at(t, lm).y);
            CHECK(parsed.at(t, lm).z == original.at(t, lm).z);
            CHECK(parsed.at(t, lm).visibility == original.at(t, lm).visibility);
        }
    }
    // Deterministic writer: same sequence, same bytes.
    CHECK(write_landmark_export(parsed) == text);
}

TEST_CASE("landmark export JSON rejections") {
    CHECK_THROWS_AS(parse_landmark_export("{\"format\": \"other\"}"), ParseError);
    CHECK_THROWS_AS(parse_landmark_export("{\"format\": \"mpl\", \"version\": 2,"
                                          "\"frames\": []}"),
                    ParseError);
    CHECK_THROWS_AS(parse_landmark_export("{\"format\": \"mpl\", \"version\": 1,"
                                          "\"frames\": []}"),
                    ParseError);
    CHECK_THROWS_AS(parse_landmark_export("{\"format\": \"mpl\", \"version\": 1,"
                                          "\"frames\": [[{\"x\":0}]]}"),
                    ParseError);
    CHECK_THROWS_AS(parse_landmark_export("{not json"), ParseError);
}

TEST_CASE("landmark export CSV variant") {
    SUBCASE("complete frame with fps comment") {
        const LandmarkSequence seq =
            parse_landmark_export("# fps 24\n" + landmark_csv_frame(1));
        CHECK(seq.frames() == 1);
        CHECK(seq.fps() == 24.0);
        CHECK(seq.at(0, 33).z == 0.3);
        CHECK(seq.at(0, 1).visibility == 1.0);
    }
    SUBCASE("default fps") {
        CHECK(parse_landmark_export(landmark_csv_frame(1)).fps() == 30.0);
    }
    SUBCASE("missing landmark") {
        std::string text = landmark_csv_frame(1);
        text = text.substr(text.find('\n') + 1);
        CHECK_THROWS_AS(parse_landmark_export(text), ParseError);
    }
    SUBCASE("repeated landmark") {
        CHECK_THROWS_AS(parse_landmark_export(landmark_csv_frame(1) + "1,7,0,0,0,1\n"),
                        ParseError);
    }
    SUBCASE("landmark index out of range") {
        CHECK_THROWS_AS(parse_landmark_export("1,34,0,0,0,1\n"), ParseError);
    }
    SUBCASE("non-finite coordinate") {
        CHECK_THROWS_AS(parse_landmark_export("1,1,nan,0,0,1\n"), ParseError);
    }
}

TEST_CASE("motion file round trip") {
    SynthSpec spec;
    spec.frames = 5;
    spec.seed = 7;
    const MotionSequence original = synthesize(spec, Source::benchmark);
    const std::string text = write_motion(original);

    const SkeletonRegistry registry;
    const MotionSequence parsed = parse_motion(text, registry);
    CHECK(parsed.skeleton().id == "humanml3d_22");
    CHECK(parsed.frames() == original.frames());
    CHECK(parsed.fps() == original.fps());
    CHECK(parsed.source() == Source::benchmark);
    CHECK(parsed.state() == original.state());
    REQUIRE(parsed.points().size() == original.points().size());
    for (std::size_t i = 0; i < parsed.points().size(); ++i) {
        CHECK(parsed.points()[i].x == original.points()[i].x);
        CHECK(parsed.points()[i].y == original.points()[i].y);
        CHECK(parsed.points()[i].z == original.points()[i].z);
    }
    CHECK(write_motion(parsed) == text);
}

TEST_CASE("motion file accepts comments anywhere") {
    SynthSpec spec;
    spec.frames = 2;
    const std::string text = write_motion(synthesize(spec));
    const std::string annotated = "# stage: none\n" + text + "# trailing\n";
    const SkeletonRegistry registry;
    CHECK(parse_motion(annotated, registry).frames() == 2);
}

TEST_CASE("motion file header rejections") {
    SynthSpec spec;
    spec.frames = 2;
    std::string text = write_motion(synthesize(spec));
    const SkeletonRegistry registry;

    SUBCASE("unsupported version") {
        text.replace(text.find("gmo 1"), 5, "gmo 9");
        CHECK_THROWS_AS(parse_motion(text, registry), ParseError);
    }
    SUBCASE("unknown skeleton") {
        text.replace(text.find("humanml3d_22"), 12, "not_a_rig_id");
        CHECK_THROWS_AS(parse_motion(text, registry), ParseError);
    }
    SUBCASE("joint count contradicts skeleton") {
        text.replace(text.find("joints 22"), 9, "joints 21");
        CHECK_THROWS_AS(parse_motion(text, registry), ParseError);
    }
    SUBCASE("frame count contradicts body") {
        text.replace(text.find("frames 2"), 8, "frames 3");
        CHECK_THROWS_AS(parse_motion(text, registry), ParseError);
    }
}

TEST_CASE("motion CSV variant") {
    std::string text = "# fps 12\n";
    for (int frame = 1; frame <= 2; ++frame)
        for (int joint = 1; joint <= 22; ++joint)
            text += std::to_string(frame) + "," + std::to_string(joint) + ",1,2,3\n";

    const SkeletonRegistry registry;
    MotionReadOptions options;
    options.csv_source = Source::real;
    const MotionSequence seq = parse_motion(text, registry, options);
    CHECK(seq.skeleton().id == "humanml3d_22");
    CHECK(seq.frames() == 2);
    CHECK(seq.fps() == 12.0);
    CHECK(seq.source() == Source::real);
    CHECK(seq.at(1, 22).z == 3.0);

    SUBCASE("missing joint") {
        CHECK_THROWS_AS(parse_motion(text + "3,1,0,0,0\n", registry, options),
                        ParseError);
    }
    SUBCASE("joint count no registry entry matches") {
        CHECK_THROWS_AS(parse_motion("1,1,0,0,0\n", registry, options), ParseError);
    }
}

TEST_CASE("metric table round trip") {
    std::vector<JointMetricRow> rows = {
        {"walk", 1, "MPJPE", "simulated", 0.29},
        {"walk", 1, "MPJPE", "benchmark", 0.3},
        {"walk", 16, "DTW", "simulated", 0.0},
        {"jump", 2, "PA-MPJPE", "benchmark", 61.39},
    };
    const std::string text = write_metric_table(rows);
    CHECK(text.starts_with("task,joint,metric,source,value\n"));
    CHECK(text.find("walk,1,MPJPE,simulated,0.290000\n") != std::string::npos);

    const std::vector<JointMetricRow> parsed = parse_metric_table(text);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].task == rows[i].task);
        CHECK(parsed[i].joint == rows[i].joint);
        CHECK(parsed[i].metric == rows[i].metric);
        CHECK(parsed[i].source == rows[i].source);
        CHECK(parsed[i].value == doctest::Approx(rows[i].value).epsilon(1e-9));
    }
}

TEST_CASE("metric table rejections") {
    CHECK_THROWS_AS(parse_metric_table("joint,metric\n"), ParseError);
    CHECK_THROWS_AS(parse_metric_table(""), ParseError);
    CHECK_THROWS_AS(parse_metric_table("task,joint,metric,source,value\n"
                                       "walk,1,SPEED,simulated,1.0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_metric_table("task,joint,metric,source,value\n"
                                       "walk,1,MPJPE,recorded,1.0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_metric_table("task,joint,metric,source,value\n"
                                       "walk,1,MPJPE,simulated\n"),
                    ParseError);
}

TEST_CASE("number formatting") {
    CHECK(format_f6(0.29) == "0.290000");
    CHECK(format_f6(61.385) == "61.385000");
    CHECK(format_g9(0.05) == "0.05");
    CHECK(format_g9(30.0) == "30");
    CHECK(format_g9(-3.5897338871121756) == "-3.58973389");
}

TEST_CASE("read_file reports missing paths") {
    CHECK_THROWS_AS(read_file("/nonexistent/motioneval-test-file"), ParseError);
}
