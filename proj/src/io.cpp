#include "motioneval/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "motioneval/error.hpp"
#include "parse_util.hpp"

namespace motioneval {

namespace {

using detail::parse_finite;
using detail::parse_int;
using detail::split;
using detail::trim;

bool looks_like_json(std::string_view text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
            continue;
        return c == '{' || c == '[';
    }
    return false;
}

double json_finite(const nlohmann::json& value, std::size_t frame, const char* field) {
    if (!value.is_number())
        throw ParseError("landmark export: frame " + std::to_string(frame + 1) +
                         ": field '" + field + "' is not a number");
    double d = value.get<double>();
    if (!std::isfinite(d))
        throw ParseError("landmark export: frame " + std::to_string(frame + 1) +
                         ": non-finite '" + field + "'");
    return d;
}

LandmarkSequence parse_landmark_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("landmark export: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "mpl")
        throw ParseError("landmark export: missing \"format\": \"mpl\"");
    if (doc.value("version", 0) != 1)
        throw ParseError("landmark export: unsupported version " +
                         doc.value("version", nlohmann::json()).dump());
    double fps = 30.0;
    if (doc.contains("fps")) {
        if (!doc["fps"].is_number())
            throw ParseError("landmark export: fps is not a number");
        fps = doc["fps"].get<double>();
    }
    if (!doc.contains("frames") || !doc["frames"].is_array())
        throw ParseError("landmark export: missing \"frames\" array");

    std::vector<Landmark> points;
    const auto& frames = doc["frames"];
    points.reserve(frames.size() * LandmarkSequence::kLandmarks);
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& frame = frames[t];
        if (!frame.is_array() || frame.size() != LandmarkSequence::kLandmarks)
            throw ParseError("landmark export: frame " + std::to_string(t + 1) + " has " +
                             std::to_string(frame.is_array() ? frame.size() : 0) +
                             " landmarks, expected 33");
        for (const auto& record : frame) {
            if (!record.is_object() || !record.contains("x") || !record.contains("y") ||
                !record.contains("z") || !record.contains("visibility"))
                throw ParseError("landmark export: frame " + std::to_string(t + 1) +
                                 ": landmark record missing x/y/z/visibility");
            points.push_back({json_finite(record["x"], t, "x"),
                              json_finite(record["y"], t, "y"),
                              json_finite(record["z"], t, "z"),
                              json_finite(record["visibility"], t, "visibility")});
        }
    }
    if (points.empty())
        throw ParseError("landmark export: no frames");
    return LandmarkSequence(std::move(points), fps);
}

LandmarkSequence parse_landmark_csv(std::string_view text) {
    double fps = 30.0;
    struct Row {
        int frame;
        int landmark;
        Landmark value;
    };
    std::vector<Row> rows;
    int max_frame = 0;
    for (std::string_view raw : split(text, '\n')) {
        std::string_view line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            auto fields = split(trim(line.substr(1)), ' ');
            if (fields.size() == 2 && trim(fields[0]) == "fps")
                fps = parse_finite(fields[1], "fps");
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 6)
            throw ParseError("landmark export: expected 6 fields "
                             "(frame,landmark,x,y,z,visibility), got '" +
                             std::string(line) + "'");
        Row row;
        row.frame = parse_int(fields[0], "frame index");
        row.landmark = parse_int(fields[1], "landmark index");
        std::string where = "frame " + std::to_string(row.frame);
        row.value = {parse_finite(fields[2], where + " x"),
                     parse_finite(fields[3], where + " y"),
                     parse_finite(fields[4], where + " z"),
                     parse_finite(fields[5], where + " visibility")};
        if (row.frame < 1)
            throw ParseError("landmark export: frame index " + std::to_string(row.frame) +
                             " out of range, indices are 1-based");
        if (row.landmark < 1 || row.landmark > LandmarkSequence::kLandmarks)
            throw ParseError("landmark export: frame " + std::to_string(row.frame) +
                             ": landmark index " + std::to_string(row.landmark) +
                             " out of range 1..33");
        max_frame = std::max(max_frame, row.frame);
        rows.push_back(row);
    }
    if (rows.empty())
        throw ParseError("landmark export: no frames");

    const auto total = static_cast<std::size_t>(max_frame) * LandmarkSequence::kLandmarks;
    std::vector<Landmark> points(total);
    std::vector<char> seen(total, 0);
    for (const Row& row : rows) {
        std::size_t slot = static_cast<std::size_t>(row.frame - 1) *
                               LandmarkSequence::kLandmarks +
                           static_cast<std::size_t>(row.landmark - 1);
        if (seen[slot])
            throw ParseError("landmark export: frame " + std::to_string(row.frame) +
                             " repeats landmark " + std::to_string(row.landmark));
        seen[slot] = 1;
        points[slot] = row.value;
    }
    for (int frame = 1; frame <= max_frame; ++frame)
        for (int lm = 1; lm <= LandmarkSequence::kLandmarks; ++lm)
            if (!seen[static_cast<std::size_t>(frame - 1) * LandmarkSequence::kLandmarks +
                      static_cast<std::size_t>(lm - 1)])
                throw ParseError("landmark export: frame " + std::to_string(frame) +
                                 " is missing landmark " + std::to_string(lm));
    return LandmarkSequence(std::move(points), fps);
}

} // namespace

LandmarkSequence parse_landmark_export(std::string_view text) {
    if (looks_like_json(text))
        return parse_landmark_json(text);
    return parse_landmark_csv(text);
}

std::string write_landmark_export(const LandmarkSequence& seq) {
    std::string out;
    out += "{\n";
    out += "\"format\": \"mpl\",\n";
    out += "\"version\": 1,\n";
    out += "\"fps\": " + format_exact(seq.fps()) + ",\n";
    out += "\"frames\": [\n";
    for (std::size_t t = 0; t < seq.frames(); ++t) {
        out += '[';
        auto frame = seq.frame(t);
        for (std::size_t i = 0; i < frame.size(); ++i) {
            if (i)
                out += ',';
            const Landmark& lm = frame[i];
            out += "{\"x\":" + format_exact(lm.x) + ",\"y\":" + format_exact(lm.y) +
                   ",\"z\":" + format_exact(lm.z) +
                   ",\"visibility\":" + format_exact(lm.visibility) + "}";
        }
        out += ']';
        if (t + 1 < seq.frames())
            out += ',';
        out += '\n';
    }
    out += "]\n";
    out += "}\n";
    return out;
}

namespace {

MotionSequence parse_motion_gmo(std::string_view text, const SkeletonRegistry& registry) {
    auto lines = split(text, '\n');
    std::size_t cursor = 0;
    auto next_line = [&]() -> std::string_view {
        while (cursor < lines.size()) {
            std::string_view line = trim(lines[cursor]);
            ++cursor;
            if (!line.empty() && line.front() != '#')
                return line;
        }
        throw ParseError("motion file: unexpected end of header");
    };
    auto header_value = [&](std::string_view key) -> std::string_view {
        std::string_view line = next_line();
        auto sep = line.find(' ');
        if (sep == std::string_view::npos || trim(line.substr(0, sep)) != key)
            throw ParseError("motion file: expected '" + std::string(key) +
                             " ...', got '" + std::string(line) + "'");
        return trim(line.substr(sep + 1));
    };

    std::string_view version = header_value("gmo");
    if (version != "1")
        throw ParseError("motion file: unsupported version '" + std::string(version) +
                         "'");
    auto skeleton = registry.require(header_value("skeleton"));
    int joints = parse_int(header_value("joints"), "joint count");
    if (joints != skeleton->joint_count())
        throw ParseError("motion file: header says " + std::to_string(joints) +
                         " joints but skeleton '" + skeleton->id + "' has " +
                         std::to_string(skeleton->joint_count()));
    int frames = parse_int(header_value("frames"), "frame count");
    if (frames < 1)
        throw ParseError("motion file: frame count must be positive, got " +
                         std::to_string(frames));
    double fps = parse_finite(header_value("fps"), "fps");
    Source source = source_from_string(header_value("source"));
    StateFlags state = state_from_string(header_value("state"));
    if (next_line() != "data")
        throw ParseError("motion file: expected 'data' line after header");

    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(frames) * static_cast<std::size_t>(joints));
    int row = 0;
    while (cursor < lines.size()) {
        std::string_view line = trim(lines[cursor]);
        ++cursor;
        if (line.empty() || line.front() == '#')
            continue;
        ++row;
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(joints) * 3);
        std::size_t start = 0;
        while (start < line.size()) {
            std::size_t end = line.find(' ', start);
            if (end == std::string_view::npos)
                end = line.size();
            if (end > start)
                values.push_back(parse_finite(line.substr(start, end - start),
                                              "coordinate in frame " +
                                                  std::to_string(row)));
            start = end + 1;
        }
        if (values.size() != static_cast<std::size_t>(joints) * 3)
            throw ParseError("motion file: frame " + std::to_string(row) + " has " +
                             std::to_string(values.size()) + " numbers, expected " +
                             std::to_string(joints * 3));
        for (std::size_t j = 0; j < values.size(); j += 3)
            points.push_back({values[j], values[j + 1], values[j + 2]});
    }
    if (row != frames)
        throw ParseError("motion file: header says " + std::to_string(frames) +
                         " frames but body has " + std::to_string(row));
    return MotionSequence(skeleton, std::move(points), fps, source, state);
}

MotionSequence parse_motion_csv(std::string_view text, const SkeletonRegistry& registry,
                                const MotionReadOptions& options) {
    double fps = options.csv_fps;
    struct Row {
        int frame;
        int joint;
        Vec3 value;
    };
    std::vector<Row> rows;
    int max_frame = 0;
    int max_joint = 0;
    for (std::string_view raw : split(text, '\n')) {
        std::string_view line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            auto fields = split(trim(line.substr(1)), ' ');
            if (fields.size() == 2 && trim(fields[0]) == "fps")
                fps = parse_finite(fields[1], "fps");
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 5)
            throw ParseError("motion file: expected 5 fields (frame,joint,x,y,z), got '" +
                             std::string(line) + "'");
        Row row;
        row.frame = parse_int(fields[0], "frame index");
        row.joint = parse_int(fields[1], "joint index");
        std::string where = "frame " + std::to_string(row.frame);
        row.value = {parse_finite(fields[2], where + " x"),
                     parse_finite(fields[3], where + " y"),
                     parse_finite(fields[4], where + " z")};
        if (row.frame < 1 || row.joint < 1)
            throw ParseError("motion file: indices are 1-based, got frame " +
                             std::to_string(row.frame) + ", joint " +
                             std::to_string(row.joint));
        max_frame = std::max(max_frame, row.frame);
        max_joint = std::max(max_joint, row.joint);
        rows.push_back(row);
    }
    if (rows.empty())
        throw ParseError("motion file: no frames");

    // The CSV variant carries no skeleton id; pick the registry entry whose
    // joint count matches the widest joint index seen.
    auto skeleton = registry.find_by_joint_count(max_joint);
    if (!skeleton)
        throw ParseError("motion file: no known skeleton has " +
                         std::to_string(max_joint) + " joints");

    const auto joints = static_cast<std::size_t>(skeleton->joint_count());
    const auto total = static_cast<std::size_t>(max_frame) * joints;
    std::vector<Vec3> points(total);
    std::vector<char> seen(total, 0);
    for (const Row& row : rows) {
        std::size_t slot =
            static_cast<std::size_t>(row.frame - 1) * joints + static_cast<std::size_t>(row.joint - 1);
        if (seen[slot])
            throw ParseError("motion file: frame " + std::to_string(row.frame) +
                             " repeats joint " + std::to_string(row.joint));
        seen[slot] = 1;
        points[slot] = row.value;
    }
    for (int frame = 1; frame <= max_frame; ++frame)
        for (std::size_t j = 1; j <= joints; ++j)
            if (!seen[static_cast<std::size_t>(frame - 1) * joints + (j - 1)])
                throw ParseError("motion file: frame " + std::to_string(frame) +
                                 " is missing joint " + std::to_string(j));
    return MotionSequence(skeleton, std::move(points), fps, options.csv_source, {});
}

} // namespace

MotionSequence parse_motion(std::string_view text, const SkeletonRegistry& registry,
                            const MotionReadOptions& options) {
    // Canonical files start with their magic line; anything else is the CSV
    // variant.
    for (std::string_view raw : split(text, '\n')) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        if (line.starts_with("gmo"))
            return parse_motion_gmo(text, registry);
        break;
    }
    return parse_motion_csv(text, registry, options);
}

std::string write_motion(const MotionSequence& seq) {
    std::string out;
    out += "gmo 1\n";
    out += "skeleton " + seq.skeleton().id + "\n";
    out += "joints " + std::to_string(seq.joints()) + "\n";
    out += "frames " + std::to_string(seq.frames()) + "\n";
    out += "fps " + format_exact(seq.fps()) + "\n";
    out += "source " + std::string(to_string(seq.source())) + "\n";
    out += "state " + to_string(seq.state()) + "\n";
    out += "data\n";
    for (std::size_t t = 0; t < seq.frames(); ++t) {
        auto frame = seq.frame(t);
        for (std::size_t j = 0; j < frame.size(); ++j) {
            if (j)
                out += ' ';
            out += format_exact(frame[j].x) + ' ' + format_exact(frame[j].y) + ' ' +
                   format_exact(frame[j].z);
        }
        out += '\n';
    }
    return out;
}

std::string write_metric_table(std::span<const JointMetricRow> rows) {
    std::string out = "task,joint,metric,source,value\n";
    for (const auto& row : rows) {
        out += row.task + ',' + std::to_string(row.joint) + ',' + row.metric + ',' +
               row.source + ',' + format_f6(row.value) + '\n';
    }
    return out;
}

std::vector<JointMetricRow> parse_metric_table(std::string_view text) {
    std::vector<JointMetricRow> rows;
    bool have_header = false;
    for (std::string_view raw : split(text, '\n')) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        if (!have_header) {
            if (line != "task,joint,metric,source,value")
                throw ParseError("metric table: bad header '" + std::string(line) + "'");
            have_header = true;
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 5)
            throw ParseError("metric table: expected 5 fields, got '" +
                             std::string(line) + "'");
        JointMetricRow row;
        row.task = std::string(trim(fields[0]));
        row.joint = parse_int(fields[1], "joint index");
        row.metric = std::string(trim(fields[2]));
        row.source = std::string(trim(fields[3]));
        row.value = parse_finite(fields[4], "metric value");
        if (row.metric != "MPJPE" && row.metric != "PA-MPJPE" && row.metric != "DTW")
            throw ParseError("metric table: unknown metric '" + row.metric + "'");
        if (row.source != "simulated" && row.source != "benchmark")
            throw ParseError("metric table: unknown source '" + row.source + "'");
        rows.push_back(std::move(row));
    }
    if (!have_header)
        throw ParseError("metric table: missing header");
    return rows;
}

std::string format_g9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string format_f6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::string format_exact(double value) {
    if (value == 0.0)
        value = 0.0; // JSON parsers may drop the sign of -0, so write it unsigned
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw ValidationError("write failed for '" + path + "'");
}

} // namespace motioneval
