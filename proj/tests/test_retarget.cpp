#include <doctest.h>

#include <string>
#include <vector>

#include "motioneval/error.hpp"
#include "motioneval/retarget.hpp"
#include "motioneval/skeleton.hpp"

using namespace motioneval;

namespace {

// One landmark frame where landmark i sits at (i, 10*i, -i), so every
// derived joint position is a readable linear combination of indices.
LandmarkSequence indexed_landmarks() {
    std::vector<Landmark> points;
    for (int lm = 1; lm <= LandmarkSequence::kLandmarks; ++lm) {
        const double d = lm;
        points.push_back({d, 10.0 * d, -d, 1.0});
    }
    return LandmarkSequence(std::move(points), 30.0);
}

} // namespace

TEST_CASE("default rules cover all 22 joints") {
    const RetargetRuleSet rules = default_retarget_rules();
    CHECK(rules.target->id == "humanml3d_22");
    CHECK(rules.landmarks->id == "mediapipe_33");
    CHECK(rules.rules.size() == 22);
}

TEST_CASE("retarget resolves direct, mean and lerp rules") {
    const LandmarkSequence landmarks = indexed_landmarks();
    const MotionSequence out = retarget(landmarks, default_retarget_rules());
    REQUIRE(out.frames() == 1);
    CHECK(out.joints() == 22);
    CHECK(out.source() == Source::real);
    CHECK(out.fps() == 30.0);

    // Joint 16 copies NOSE (landmark 1).
    CHECK(out.at(0, 16).x == 1.0);
    CHECK(out.at(0, 16).y == 10.0);
    // Joint 1 is the hip midpoint: landmarks 24 and 25.
    CHECK(out.at(0, 1).x == doctest::Approx(24.5).epsilon(1e-15));
    CHECK(out.at(0, 1).y == doctest::Approx(245.0).epsilon(1e-15));
    // Joint 7 is the shoulder midpoint: landmarks 12 and 13.
    CHECK(out.at(0, 7).x == doctest::Approx(12.5).epsilon(1e-15));
    // Joint 4 blends hip toward shoulder midpoint by one third.
    CHECK(out.at(0, 4).x == doctest::Approx(24.5 + (12.5 - 24.5) / 3.0).epsilon(1e-15));
    // Joint 13 blends shoulder midpoint toward the nose by one third.
    CHECK(out.at(0, 13).x == doctest::Approx(12.5 + (1.0 - 12.5) / 3.0).epsilon(1e-15));
    // Joints 11 and 12 copy the heels: landmarks 31 and 30.
    CHECK(out.at(0, 11).x == 31.0);
    CHECK(out.at(0, 12).x == 30.0);
    // Joints 21 and 22 copy the index fingertips: landmarks 21 and 20.
    CHECK(out.at(0, 21).x == 21.0);
    CHECK(out.at(0, 22).x == 20.0);
}

TEST_CASE("custom blend weights shift the synthesized spine joints") {
    const LandmarkSequence landmarks = indexed_landmarks();
    const MotionSequence out = retarget(landmarks, default_retarget_rules(0.5, 0.25));
    CHECK(out.at(0, 4).x == doctest::Approx(24.5 + (12.5 - 24.5) * 0.5).epsilon(1e-15));
    CHECK(out.at(0, 13).x == doctest::Approx(12.5 + (1.0 - 12.5) * 0.25).epsilon(1e-15));
}

TEST_CASE("rule table round trip") {
    const RetargetRuleSet original = default_retarget_rules();
    const std::string text = write_retarget_rules(original);
    const RetargetRuleSet parsed = parse_retarget_rules(text);
    CHECK(parsed.target->id == original.target->id);
    CHECK(parsed.landmarks->id == original.landmarks->id);
    REQUIRE(parsed.rules.size() == original.rules.size());
    for (std::size_t i = 0; i < original.rules.size(); ++i) {
        CHECK(parsed.rules[i].op == original.rules[i].op);
        CHECK(parsed.rules[i].t == original.rules[i].t);
    }
    // A retarget through the reparsed rules gives identical output.
    const LandmarkSequence landmarks = indexed_landmarks();
    const MotionSequence a = retarget(landmarks, original);
    const MotionSequence b = retarget(landmarks, parsed);
    for (std::size_t i = 0; i < a.points().size(); ++i) {
        CHECK(a.points()[i].x == b.points()[i].x);
        CHECK(a.points()[i].y == b.points()[i].y);
        CHECK(a.points()[i].z == b.points()[i].z);
    }
}

TEST_CASE("rule table parse failures") {
    SUBCASE("unknown point name") {
        CHECK_THROWS_AS(parse_retarget_rules("id,tiny\nlandmarks,mediapipe_33\n"
                                             "1,a,head scale_a,direct ELBOW\n"
                                             "2,b,scale_b,direct NOSE\n"),
                        ParseError);
    }
    SUBCASE("missing landmarks line") {
        CHECK_THROWS_AS(parse_retarget_rules("id,tiny\n"), ParseError);
    }
    SUBCASE("bad rule shape") {
        CHECK_THROWS_AS(parse_retarget_rules("id,tiny\nlandmarks,mediapipe_33\n"
                                             "1,a,head scale_a,mean NOSE\n"
                                             "2,b,scale_b,direct NOSE\n"),
                        ParseError);
    }
    SUBCASE("lerp fraction out of range") {
        CHECK_THROWS_AS(
            parse_retarget_rules("id,tiny\nlandmarks,mediapipe_33\n"
                                 "1,a,head scale_a,lerp NOSE LEFT_EAR 1.5\n"
                                 "2,b,scale_b,direct NOSE\n"),
            ValidationError);
    }
}

TEST_CASE("two-joint rule table works end to end") {
    const RetargetRuleSet rules = parse_retarget_rules(
        "id,head_only\n"
        "landmarks,mediapipe_33\n"
        "1,nose,head scale_a,direct NOSE\n"
        "2,mid,scale_b,mean LEFT_EAR RIGHT_EAR\n");
    const MotionSequence out = retarget(indexed_landmarks(), rules, Source::benchmark);
    CHECK(out.joints() == 2);
    CHECK(out.source() == Source::benchmark);
    CHECK(out.at(0, 1).x == 1.0);
    CHECK(out.at(0, 2).x == doctest::Approx(8.5).epsilon(1e-15));
}
