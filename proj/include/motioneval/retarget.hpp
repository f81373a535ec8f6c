#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "motioneval/motion.hpp"

namespace motioneval {

// Points a retarget rule may reference: a landmark by 1-based index, or one
// of the synthesized midpoints that several rules share.
enum class DerivedPoint { mid_hip, mid_shoulder };

struct PointRef {
    enum class Kind { landmark, derived } kind = Kind::landmark;
    int landmark = 0;
    DerivedPoint derived = DerivedPoint::mid_hip;

    static PointRef from_name(std::string_view name, const SkeletonSpec& landmarks);
    std::string name(const SkeletonSpec& landmarks) const;
};

// How one target joint is produced. direct places point a as-is, mean is the
// unweighted midpoint of a and b, lerp blends a toward b by weight t.
struct RetargetRule {
    enum class Op { direct, mean, lerp } op = Op::direct;
    PointRef a;
    PointRef b;
    double t = 0.0;
};

struct RetargetRuleSet {
    std::shared_ptr<const SkeletonSpec> target;
    std::shared_ptr<const SkeletonSpec> landmarks;
    std::vector<RetargetRule> rules;   // rules[i] fills target joint i+1
};

// The built-in landmark-to-joint mapping onto the 22-joint skeleton.
// lumbar_t places joint 4 between mid-hip and mid-shoulder; neck_t places
// joint 13 between mid-shoulder and the nose. Both default to 1/3.
RetargetRuleSet default_retarget_rules(double lumbar_t = 1.0 / 3.0,
                                       double neck_t = 1.0 / 3.0);

// Rule table: the skeleton grammar plus a rule column per joint, e.g.
//   16,Head Top,head scale_a,direct NOSE
//   4,Spine/Lumbar,,lerp MID_HIP MID_SHOULDER 0.3333333333333333
RetargetRuleSet parse_retarget_rules(std::string_view text);
std::string write_retarget_rules(const RetargetRuleSet& rules);

// Maps each landmark frame through the rule set. Visibility values do not
// participate; positions are used as-is. The output carries the given
// source tag, the input fps, and no state flags.
MotionSequence retarget(const LandmarkSequence& seq, const RetargetRuleSet& rules,
                        Source source = Source::real);

} // namespace motioneval
