#include "motioneval/retarget.hpp"

#include <utility>

#include "motioneval/error.hpp"
#include "motioneval/io.hpp"
#include "parse_util.hpp"

namespace motioneval {

namespace {

using detail::split;
using detail::trim;

constexpr std::string_view kMidHipName = "MID_HIP";
constexpr std::string_view kMidShoulderName = "MID_SHOULDER";

} // namespace

PointRef PointRef::from_name(std::string_view name, const SkeletonSpec& landmarks) {
    PointRef ref;
    if (name == kMidHipName) {
        ref.kind = Kind::derived;
        ref.derived = DerivedPoint::mid_hip;
        return ref;
    }
    if (name == kMidShoulderName) {
        ref.kind = Kind::derived;
        ref.derived = DerivedPoint::mid_shoulder;
        return ref;
    }
    int landmark = landmarks.joint_by_name(name);
    if (landmark == 0)
        throw ParseError("retarget rules: unknown point '" + std::string(name) + "'");
    ref.kind = Kind::landmark;
    ref.landmark = landmark;
    return ref;
}

std::string PointRef::name(const SkeletonSpec& landmarks) const {
    if (kind == Kind::derived)
        return std::string(derived == DerivedPoint::mid_hip ? kMidHipName
                                                            : kMidShoulderName);
    return landmarks.joint_name(landmark);
}

namespace {

void validate_rules(const RetargetRuleSet& rules) {
    if (!rules.target || !rules.landmarks)
        throw ValidationError("retarget rules: missing skeleton");
    validate_skeleton(*rules.target);
    validate_skeleton(*rules.landmarks);
    if (static_cast<int>(rules.rules.size()) != rules.target->joint_count())
        throw ValidationError("retarget rules: " + std::to_string(rules.rules.size()) +
                              " rules for " + std::to_string(rules.target->joint_count()) +
                              " target joints");
    const int n = rules.landmarks->joint_count();
    auto check_ref = [&](const PointRef& ref, std::size_t rule_index) {
        if (ref.kind == PointRef::Kind::landmark &&
            (ref.landmark < 1 || ref.landmark > n))
            throw ValidationError("retarget rules: rule " + std::to_string(rule_index + 1) +
                                  " references landmark " + std::to_string(ref.landmark) +
                                  " out of range 1.." + std::to_string(n));
    };
    for (std::size_t i = 0; i < rules.rules.size(); ++i) {
        const RetargetRule& rule = rules.rules[i];
        check_ref(rule.a, i);
        if (rule.op != RetargetRule::Op::direct)
            check_ref(rule.b, i);
        if (rule.op == RetargetRule::Op::lerp && !(rule.t >= 0.0 && rule.t <= 1.0))
            throw ValidationError("retarget rules: rule " + std::to_string(i + 1) +
                                  " lerp fraction " + std::to_string(rule.t) +
                                  " outside [0,1]");
    }
}

bool uses_derived(const RetargetRuleSet& rules, DerivedPoint which) {
    for (const RetargetRule& rule : rules.rules) {
        if (rule.a.kind == PointRef::Kind::derived && rule.a.derived == which)
            return true;
        if (rule.op != RetargetRule::Op::direct &&
            rule.b.kind == PointRef::Kind::derived && rule.b.derived == which)
            return true;
    }
    return false;
}

} // namespace

RetargetRuleSet default_retarget_rules(double lumbar_t, double neck_t) {
    RetargetRuleSet set;
    set.target = humanml3d_22();
    set.landmarks = mediapipe_33();
    const SkeletonSpec& lm = *set.landmarks;

    auto point = [&](std::string_view name) { return PointRef::from_name(name, lm); };
    auto direct = [&](std::string_view name) {
        RetargetRule rule;
        rule.op = RetargetRule::Op::direct;
        rule.a = point(name);
        return rule;
    };
    auto mean = [&](std::string_view a, std::string_view b) {
        RetargetRule rule;
        rule.op = RetargetRule::Op::mean;
        rule.a = point(a);
        rule.b = point(b);
        return rule;
    };
    auto lerp = [&](std::string_view a, std::string_view b, double t) {
        RetargetRule rule;
        rule.op = RetargetRule::Op::lerp;
        rule.a = point(a);
        rule.b = point(b);
        rule.t = t;
        return rule;
    };

    set.rules = {
        mean("LEFT_HIP", "RIGHT_HIP"),                   // 1  Root/Pelvis
        direct("RIGHT_HIP"),                             // 2  Right Hip
        direct("LEFT_HIP"),                              // 3  Left Hip
        lerp("MID_HIP", "MID_SHOULDER", lumbar_t),       // 4  Spine/Lumbar
        direct("RIGHT_KNEE"),                            // 5  Right Knee
        direct("LEFT_KNEE"),                             // 6  Left Knee
        direct("MID_SHOULDER"),                          // 7  Spine/Thorax
        direct("RIGHT_ANKLE"),                           // 8  Right Ankle
        direct("LEFT_ANKLE"),                            // 9  Left Ankle
        mean("MID_SHOULDER", "NOSE"),                    // 10 Spine/Upper
        direct("RIGHT_HEEL"),                            // 11 Right Foot
        direct("LEFT_HEEL"),                             // 12 Left Foot
        lerp("MID_SHOULDER", "NOSE", neck_t),            // 13 Neck Base
        direct("RIGHT_SHOULDER"),                        // 14 Right Shoulder
        direct("LEFT_SHOULDER"),                         // 15 Left Shoulder
        direct("NOSE"),                                  // 16 Head Top
        direct("RIGHT_ELBOW"),                           // 17 Right Elbow
        direct("LEFT_ELBOW"),                            // 18 Left Elbow
        direct("RIGHT_WRIST"),                           // 19 Right Wrist
        direct("LEFT_WRIST"),                            // 20 Left Wrist
        direct("RIGHT_INDEX"),                           // 21 Right Hand
        direct("LEFT_INDEX"),                            // 22 Left Hand
    };
    validate_rules(set);
    return set;
}

RetargetRuleSet parse_retarget_rules(std::string_view text) {
    RetargetRuleSet set;
    SkeletonRegistry registry;
    std::string skeleton_text;
    std::vector<std::string> rule_texts;
    bool have_id = false;
    bool have_landmarks = false;

    for (std::string_view raw : split(text, '\n')) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = split(line, ',');
        if (!have_id) {
            if (fields.size() != 2 || trim(fields[0]) != "id")
                throw ParseError("retarget rules: expected 'id,<skeleton-id>', got '" +
                                 std::string(line) + "'");
            skeleton_text += std::string(line) + "\n";
            have_id = true;
            continue;
        }
        if (!have_landmarks) {
            if (fields.size() != 2 || trim(fields[0]) != "landmarks")
                throw ParseError("retarget rules: expected 'landmarks,<skeleton-id>', "
                                 "got '" + std::string(line) + "'");
            set.landmarks = registry.require(trim(fields[1]));
            have_landmarks = true;
            continue;
        }
        if (fields.size() != 4)
            throw ParseError("retarget rules: expected 'index,name,tags,rule', got '" +
                             std::string(line) + "'");
        skeleton_text += std::string(trim(fields[0])) + "," + std::string(trim(fields[1])) +
                         "," + std::string(trim(fields[2])) + "\n";
        rule_texts.emplace_back(trim(fields[3]));
    }
    if (!have_id || !have_landmarks)
        throw ParseError("retarget rules: missing 'id' or 'landmarks' line");

    set.target = std::make_shared<SkeletonSpec>(parse_skeleton_spec(skeleton_text));
    for (std::size_t i = 0; i < rule_texts.size(); ++i) {
        auto words = split(rule_texts[i], ' ');
        std::vector<std::string_view> tokens;
        for (auto word : words) {
            word = trim(word);
            if (!word.empty())
                tokens.push_back(word);
        }
        if (tokens.empty())
            throw ParseError("retarget rules: joint " + std::to_string(i + 1) +
                             " has no rule");
        RetargetRule rule;
        if (tokens[0] == "direct" && tokens.size() == 2) {
            rule.op = RetargetRule::Op::direct;
            rule.a = PointRef::from_name(tokens[1], *set.landmarks);
        } else if (tokens[0] == "mean" && tokens.size() == 3) {
            rule.op = RetargetRule::Op::mean;
            rule.a = PointRef::from_name(tokens[1], *set.landmarks);
            rule.b = PointRef::from_name(tokens[2], *set.landmarks);
        } else if (tokens[0] == "lerp" && tokens.size() == 4) {
            rule.op = RetargetRule::Op::lerp;
            rule.a = PointRef::from_name(tokens[1], *set.landmarks);
            rule.b = PointRef::from_name(tokens[2], *set.landmarks);
            rule.t = detail::parse_finite(tokens[3], "lerp fraction");
        } else {
            throw ParseError("retarget rules: joint " + std::to_string(i + 1) +
                             ": bad rule '" + rule_texts[i] + "'");
        }
        set.rules.push_back(rule);
    }
    validate_rules(set);
    return set;
}

std::string write_retarget_rules(const RetargetRuleSet& rules) {
    validate_rules(rules);
    std::string skeleton_text = write_skeleton_spec(*rules.target);
    auto lines = split(skeleton_text, '\n');

    std::string out;
    out += std::string(lines[0]) + "\n";
    out += "landmarks," + rules.landmarks->id + "\n";
    for (std::size_t i = 0; i < rules.rules.size(); ++i) {
        std::string_view line = lines[i + 1];
        // Skeleton rows may omit the tags field; the rule column is always
        // the fourth, so pad to three fields first.
        if (split(line, ',').size() == 2)
            out += std::string(line) + ",";
        else
            out += std::string(line);
        const RetargetRule& rule = rules.rules[i];
        out += ',';
        switch (rule.op) {
        case RetargetRule::Op::direct:
            out += "direct " + rule.a.name(*rules.landmarks);
            break;
        case RetargetRule::Op::mean:
            out += "mean " + rule.a.name(*rules.landmarks) + " " +
                   rule.b.name(*rules.landmarks);
            break;
        case RetargetRule::Op::lerp:
            out += "lerp " + rule.a.name(*rules.landmarks) + " " +
                   rule.b.name(*rules.landmarks) + " " + format_exact(rule.t);
            break;
        }
        out += '\n';
    }
    return out;
}

MotionSequence retarget(const LandmarkSequence& seq, const RetargetRuleSet& rules,
                        Source source) {
    validate_rules(rules);
    if (rules.landmarks->joint_count() != LandmarkSequence::kLandmarks)
        throw ValidationError("retarget rules: landmark skeleton '" +
                              rules.landmarks->id + "' has " +
                              std::to_string(rules.landmarks->joint_count()) +
                              " joints, input has 33");

    const SkeletonSpec& lm = *rules.landmarks;
    int left_hip = 0, right_hip = 0, left_shoulder = 0, right_shoulder = 0;
    if (uses_derived(rules, DerivedPoint::mid_hip)) {
        left_hip = lm.joint_by_name("LEFT_HIP");
        right_hip = lm.joint_by_name("RIGHT_HIP");
        if (!left_hip || !right_hip)
            throw ValidationError("retarget rules: MID_HIP needs LEFT_HIP and "
                                  "RIGHT_HIP landmarks");
    }
    if (uses_derived(rules, DerivedPoint::mid_shoulder)) {
        left_shoulder = lm.joint_by_name("LEFT_SHOULDER");
        right_shoulder = lm.joint_by_name("RIGHT_SHOULDER");
        if (!left_shoulder || !right_shoulder)
            throw ValidationError("retarget rules: MID_SHOULDER needs LEFT_SHOULDER "
                                  "and RIGHT_SHOULDER landmarks");
    }

    std::vector<Vec3> points;
    points.reserve(seq.frames() * rules.rules.size());
    for (std::size_t t = 0; t < seq.frames(); ++t) {
        auto frame = seq.frame(t);
        auto landmark = [&](int index) -> Vec3 {
            const Landmark& p = frame[static_cast<std::size_t>(index - 1)];
            return {p.x, p.y, p.z};
        };
        Vec3 mid_hip, mid_shoulder;
        if (left_hip)
            mid_hip = (landmark(left_hip) + landmark(right_hip)) * 0.5;
        if (left_shoulder)
            mid_shoulder = (landmark(left_shoulder) + landmark(right_shoulder)) * 0.5;
        auto resolve = [&](const PointRef& ref) -> Vec3 {
            if (ref.kind == PointRef::Kind::landmark)
                return landmark(ref.landmark);
            return ref.derived == DerivedPoint::mid_hip ? mid_hip : mid_shoulder;
        };
        for (const RetargetRule& rule : rules.rules) {
            switch (rule.op) {
            case RetargetRule::Op::direct:
                points.push_back(resolve(rule.a));
                break;
            case RetargetRule::Op::mean:
                points.push_back((resolve(rule.a) + resolve(rule.b)) * 0.5);
                break;
            case RetargetRule::Op::lerp:
                points.push_back(resolve(rule.a) * (1.0 - rule.t) +
                                 resolve(rule.b) * rule.t);
                break;
            }
        }
    }
    return MotionSequence(rules.target, std::move(points), seq.fps(), source, {});
}

} // namespace motioneval
