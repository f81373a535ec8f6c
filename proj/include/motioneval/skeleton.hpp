#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace motioneval {

// Static description of a joint layout. Joint indices are 1-based in every
// public interface; position 0 of joint_names belongs to joint 1.
struct SkeletonSpec {
    std::string id;
    std::vector<std::string> joint_names;
    int head_joint = 0;
    std::pair<int, int> scale_pair = {0, 0};
    // (left, right) joint pairs that swap under a lateral mirror.
    std::vector<std::pair<int, int>> mirror_pairs;

    int joint_count() const { return static_cast<int>(joint_names.size()); }
    const std::string& joint_name(int joint) const;
    // Returns 0 when no joint carries the given name.
    int joint_by_name(std::string_view name) const;
};

// Throws ValidationError when the skeleton is inconsistent (empty, duplicate
// names, role indices out of range, bad mirror pairs).
void validate_skeleton(const SkeletonSpec& spec);

// The 22-joint evaluation skeleton used by canonical motion files.
std::shared_ptr<const SkeletonSpec> humanml3d_22();
// The 33-point pose-estimator landmark layout (NOSE, LEFT_HIP, ...).
std::shared_ptr<const SkeletonSpec> mediapipe_33();

// Lookup table of known skeletons, seeded with the two built-ins.
class SkeletonRegistry {
public:
    SkeletonRegistry();
    void add(std::shared_ptr<const SkeletonSpec> spec);
    std::shared_ptr<const SkeletonSpec> find(std::string_view id) const;
    // find() that throws ParseError naming the id when missing.
    std::shared_ptr<const SkeletonSpec> require(std::string_view id) const;
    // First entry with the given joint count, or null. Used to identify
    // motion inputs that state no skeleton id.
    std::shared_ptr<const SkeletonSpec> find_by_joint_count(int joints) const;

private:
    std::vector<std::shared_ptr<const SkeletonSpec>> entries_;
};

// Plain-text skeleton table: an "id,<skeleton-id>" line followed by one
// "index,name[,tags]" line per joint. Tags: head, scale_a, scale_b,
// mirror=<other-index>. Lines starting with '#' are comments.
SkeletonSpec parse_skeleton_spec(std::string_view text);
std::string write_skeleton_spec(const SkeletonSpec& spec);

} // namespace motioneval
