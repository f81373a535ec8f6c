#include "motioneval/skeleton.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "motioneval/error.hpp"
#include "parse_util.hpp"

namespace motioneval {

namespace {

using detail::split;
using detail::trim;

int parse_index(std::string_view token, std::string_view what) {
    return detail::parse_int(token, std::string("skeleton table ") + std::string(what));
}

} // namespace

const std::string& SkeletonSpec::joint_name(int joint) const {
    if (joint < 1 || joint > joint_count())
        throw ValidationError("joint index " + std::to_string(joint) +
                              " out of range 1.." + std::to_string(joint_count()));
    return joint_names[static_cast<std::size_t>(joint - 1)];
}

int SkeletonSpec::joint_by_name(std::string_view name) const {
    for (std::size_t i = 0; i < joint_names.size(); ++i)
        if (joint_names[i] == name)
            return static_cast<int>(i + 1);
    return 0;
}

void validate_skeleton(const SkeletonSpec& spec) {
    if (spec.id.empty())
        throw ValidationError("skeleton has no id");
    if (spec.joint_names.empty())
        throw ValidationError("skeleton '" + spec.id + "' has no joints");

    const int n = spec.joint_count();
    std::set<std::string_view> seen;
    for (const auto& name : spec.joint_names) {
        if (name.empty())
            throw ValidationError("skeleton '" + spec.id + "' has an unnamed joint");
        if (!seen.insert(name).second)
            throw ValidationError("skeleton '" + spec.id + "' repeats joint name '" +
                                  name + "'");
    }

    auto check_joint = [&](int joint, std::string_view role) {
        if (joint < 1 || joint > n)
            throw ValidationError("skeleton '" + spec.id + "': " + std::string(role) +
                                  " joint " + std::to_string(joint) +
                                  " out of range 1.." + std::to_string(n));
    };
    check_joint(spec.head_joint, "head");
    check_joint(spec.scale_pair.first, "scale_a");
    check_joint(spec.scale_pair.second, "scale_b");
    if (spec.scale_pair.first == spec.scale_pair.second)
        throw ValidationError("skeleton '" + spec.id + "': scale pair uses joint " +
                              std::to_string(spec.scale_pair.first) + " twice");

    std::set<int> mirrored;
    for (auto [left, right] : spec.mirror_pairs) {
        check_joint(left, "mirror");
        check_joint(right, "mirror");
        if (left == right)
            throw ValidationError("skeleton '" + spec.id + "': joint " +
                                  std::to_string(left) + " mirrors itself");
        if (!mirrored.insert(left).second || !mirrored.insert(right).second)
            throw ValidationError("skeleton '" + spec.id +
                                  "': joint appears in two mirror pairs");
    }
}

std::shared_ptr<const SkeletonSpec> humanml3d_22() {
    static const auto spec = [] {
        auto s = std::make_shared<SkeletonSpec>();
        s->id = "humanml3d_22";
        s->joint_names = {
            "Root/Pelvis",    // 1
            "Right Hip",      // 2
            "Left Hip",       // 3
            "Spine/Lumbar",   // 4
            "Right Knee",     // 5
            "Left Knee",      // 6
            "Spine/Thorax",   // 7
            "Right Ankle",    // 8
            "Left Ankle",     // 9
            "Spine/Upper",    // 10
            "Right Foot",     // 11
            "Left Foot",      // 12
            "Neck Base",      // 13
            "Right Shoulder", // 14
            "Left Shoulder",  // 15
            "Head Top",       // 16
            "Right Elbow",    // 17
            "Left Elbow",     // 18
            "Right Wrist",    // 19
            "Left Wrist",     // 20
            "Right Hand",     // 21
            "Left Hand",      // 22
        };
        s->head_joint = 16;
        s->scale_pair = {16, 11};
        s->mirror_pairs = {{3, 2},   {6, 5},   {9, 8},   {12, 11},
                           {15, 14}, {18, 17}, {20, 19}, {22, 21}};
        validate_skeleton(*s);
        return std::shared_ptr<const SkeletonSpec>(std::move(s));
    }();
    return spec;
}

std::shared_ptr<const SkeletonSpec> mediapipe_33() {
    static const auto spec = [] {
        auto s = std::make_shared<SkeletonSpec>();
        s->id = "mediapipe_33";
        s->joint_names = {
            "NOSE",             // 1
            "LEFT_EYE_INNER",   // 2
            "LEFT_EYE",         // 3
            "LEFT_EYE_OUTER",   // 4
            "RIGHT_EYE_INNER",  // 5
            "RIGHT_EYE",        // 6
            "RIGHT_EYE_OUTER",  // 7
            "LEFT_EAR",         // 8
            "RIGHT_EAR",        // 9
            "MOUTH_LEFT",       // 10
            "MOUTH_RIGHT",      // 11
            "LEFT_SHOULDER",    // 12
            "RIGHT_SHOULDER",   // 13
            "LEFT_ELBOW",       // 14
            "RIGHT_ELBOW",      // 15
            "LEFT_WRIST",       // 16
            "RIGHT_WRIST",      // 17
            "LEFT_PINKY",       // 18
            "RIGHT_PINKY",      // 19
            "LEFT_INDEX",       // 20
            "RIGHT_INDEX",      // 21
            "LEFT_THUMB",       // 22
            "RIGHT_THUMB",      // 23
            "LEFT_HIP",         // 24
            "RIGHT_HIP",        // 25
            "LEFT_KNEE",        // 26
            "RIGHT_KNEE",       // 27
            "LEFT_ANKLE",       // 28
            "RIGHT_ANKLE",      // 29
            "LEFT_HEEL",        // 30
            "RIGHT_HEEL",       // 31
            "LEFT_FOOT_INDEX",  // 32
            "RIGHT_FOOT_INDEX", // 33
        };
        s->head_joint = 1;
        s->scale_pair = {1, 31};
        s->mirror_pairs = {{2, 5},   {3, 6},   {4, 7},   {8, 9},   {10, 11}, {12, 13},
                           {14, 15}, {16, 17}, {18, 19}, {20, 21}, {22, 23}, {24, 25},
                           {26, 27}, {28, 29}, {30, 31}, {32, 33}};
        validate_skeleton(*s);
        return std::shared_ptr<const SkeletonSpec>(std::move(s));
    }();
    return spec;
}

SkeletonRegistry::SkeletonRegistry() {
    entries_.push_back(humanml3d_22());
    entries_.push_back(mediapipe_33());
}

void SkeletonRegistry::add(std::shared_ptr<const SkeletonSpec> spec) {
    validate_skeleton(*spec);
    for (auto& entry : entries_) {
        if (entry->id == spec->id) {
            entry = std::move(spec);
            return;
        }
    }
    entries_.push_back(std::move(spec));
}

std::shared_ptr<const SkeletonSpec> SkeletonRegistry::find(std::string_view id) const {
    for (const auto& entry : entries_)
        if (entry->id == id)
            return entry;
    return nullptr;
}

std::shared_ptr<const SkeletonSpec> SkeletonRegistry::require(std::string_view id) const {
    auto spec = find(id);
    if (!spec)
        throw ParseError("unknown skeleton '" + std::string(id) + "'");
    return spec;
}

std::shared_ptr<const SkeletonSpec>
SkeletonRegistry::find_by_joint_count(int joints) const {
    for (const auto& entry : entries_)
        if (entry->joint_count() == joints)
            return entry;
    return nullptr;
}

SkeletonSpec parse_skeleton_spec(std::string_view text) {
    SkeletonSpec spec;
    // joint index -> (name, tags), gathered before we know the final count
    std::vector<std::pair<int, std::vector<std::string_view>>> rows;
    std::vector<std::string> names;
    bool have_id = false;

    for (std::string_view line : split(text, '\n')) {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = split(line, ',');
        if (!have_id) {
            if (fields.size() != 2 || trim(fields[0]) != "id")
                throw ParseError("skeleton table: expected 'id,<skeleton-id>', got '" +
                                 std::string(line) + "'");
            spec.id = std::string(trim(fields[1]));
            have_id = true;
            continue;
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("skeleton table: expected 'index,name[,tags]', got '" +
                             std::string(line) + "'");
        int index = parse_index(fields[0], "joint index");
        std::string name(trim(fields[1]));
        std::vector<std::string_view> tags;
        if (fields.size() == 3) {
            for (auto tag : split(fields[2], ' ')) {
                tag = trim(tag);
                if (!tag.empty())
                    tags.push_back(tag);
            }
        }
        if (index != static_cast<int>(rows.size()) + 1)
            throw ParseError("skeleton table: joint lines must count 1,2,...; got index " +
                             std::to_string(index) + " at position " +
                             std::to_string(rows.size() + 1));
        rows.emplace_back(index, std::move(tags));
        names.push_back(std::move(name));
    }
    if (!have_id)
        throw ParseError("skeleton table: missing 'id,...' line");

    spec.joint_names = std::move(names);
    std::vector<std::pair<int, int>> claims;
    for (const auto& [index, tags] : rows) {
        for (std::string_view tag : tags) {
            if (tag == "head") {
                spec.head_joint = index;
            } else if (tag == "scale_a") {
                spec.scale_pair.first = index;
            } else if (tag == "scale_b") {
                spec.scale_pair.second = index;
            } else if (tag.starts_with("mirror=")) {
                claims.emplace_back(index, parse_index(tag.substr(7), "mirror index"));
            } else {
                throw ParseError("skeleton table: unknown tag '" + std::string(tag) +
                                 "' on joint " + std::to_string(index));
            }
        }
    }
    for (auto [joint, other] : claims) {
        if (std::find(claims.begin(), claims.end(), std::make_pair(other, joint)) ==
            claims.end())
            throw ParseError("skeleton table: joint " + std::to_string(joint) +
                             " says mirror=" + std::to_string(other) +
                             " but joint " + std::to_string(other) +
                             " does not point back");
        // Record each pair once, from its lower-indexed side.
        if (joint < other)
            spec.mirror_pairs.emplace_back(joint, other);
    }
    validate_skeleton(spec);
    return spec;
}

std::string write_skeleton_spec(const SkeletonSpec& spec) {
    std::ostringstream out;
    out << "id," << spec.id << "\n";
    // joint -> mirror partner, to re-emit the pair on both rows
    std::vector<int> partner(static_cast<std::size_t>(spec.joint_count()) + 1, 0);
    for (auto [left, right] : spec.mirror_pairs) {
        partner[static_cast<std::size_t>(left)] = right;
        partner[static_cast<std::size_t>(right)] = left;
    }
    for (int joint = 1; joint <= spec.joint_count(); ++joint) {
        out << joint << ',' << spec.joint_name(joint);
        std::vector<std::string> tags;
        if (joint == spec.head_joint)
            tags.push_back("head");
        if (joint == spec.scale_pair.first)
            tags.push_back("scale_a");
        if (joint == spec.scale_pair.second)
            tags.push_back("scale_b");
        if (partner[static_cast<std::size_t>(joint)] != 0)
            tags.push_back("mirror=" + std::to_string(partner[static_cast<std::size_t>(joint)]));
        if (!tags.empty()) {
            out << ',';
            for (std::size_t i = 0; i < tags.size(); ++i) {
                if (i)
                    out << ' ';
                out << tags[i];
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace motioneval
