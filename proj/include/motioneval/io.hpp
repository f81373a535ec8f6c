#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motioneval/motion.hpp"
#include "motioneval/skeleton.hpp"

namespace motioneval {

// Landmark exports (.mpl) come in two syntaxes, auto-detected: a JSON
// document ({"format":"mpl",...}) and a flat CSV (frame,landmark,x,y,z,
// visibility with 1-based indices). See docs/formats.md for the grammar.
LandmarkSequence parse_landmark_export(std::string_view text);

// Canonical JSON form of a landmark sequence. Deterministic bytes: fixed key
// order, one frame per line, shortest round-trip numbers.
std::string write_landmark_export(const LandmarkSequence& seq);

// Fallback metadata for motion inputs that carry none of their own (the CSV
// variant). Canonical .gmo files ignore these.
struct MotionReadOptions {
    double csv_fps = 30.0;
    Source csv_source = Source::benchmark;
};

// Canonical motion text (.gmo) or the flat CSV variant (frame,joint,x,y,z),
// auto-detected. CSV joint counts are matched against the registry by size.
MotionSequence parse_motion(std::string_view text,
                            const SkeletonRegistry& registry = SkeletonRegistry{},
                            const MotionReadOptions& options = {});

// Canonical motion text. Deterministic: fixed header order, shortest
// round-trip coordinates, '\n' newlines. write(parse(write(s))) == write(s).
std::string write_motion(const MotionSequence& seq);

// One cell of the joint-level metric table.
struct JointMetricRow {
    std::string task;
    int joint = 0;
    std::string metric;   // MPJPE | PA-MPJPE | DTW
    std::string source;   // simulated | benchmark
    double value = 0.0;
};

// CSV with header task,joint,metric,source,value; values at 6 decimals.
std::string write_metric_table(std::span<const JointMetricRow> rows);
std::vector<JointMetricRow> parse_metric_table(std::string_view text);

// Shared formatting helpers so every writer emits identical bytes for the
// same value. format_exact uses the shortest decimal form that parses back
// to the same double, for files that must round-trip coordinates losslessly.
std::string format_g9(double value);
std::string format_f6(double value);
std::string format_exact(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

} // namespace motioneval
