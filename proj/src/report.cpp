#include "motioneval/report.hpp"

#include "motioneval/error.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace motioneval {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> selected_metric_names(const MetricSelection& metrics) {
    std::vector<std::string> names;
    if (metrics.mpjpe) names.push_back("MPJPE");
    if (metrics.pa_mpjpe) names.push_back("PA-MPJPE");
    if (metrics.dtw) names.push_back("DTW");
    return names;
}

std::string to_string(PaMode mode) {
    return mode == PaMode::per_frame ? "per_frame" : "global";
}

PaMode pa_mode_from_string(const std::string& name) {
    if (name == "per_frame") return PaMode::per_frame;
    if (name == "global") return PaMode::global;
    throw ParseError("unknown alignment mode '" + name + "'");
}

ordered_json block_to_json(const ComparisonBlock& block) {
    ordered_json out = ordered_json::object();
    if (block.mpjpe) {
        out["mpjpe"] = *block.mpjpe;
        out["joint_mpjpe"] = block.joint_mpjpe;
    }
    if (block.pa_mpjpe) {
        out["pa_mpjpe"] = *block.pa_mpjpe;
        out["joint_pa_mpjpe"] = block.joint_pa_mpjpe;
    }
    if (block.dtw_mean) {
        out["dtw_mean"] = *block.dtw_mean;
        out["joint_dtw"] = block.joint_dtw;
    }
    return out;
}

ComparisonBlock block_from_json(const ordered_json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError("report block '" + where + "' must be an object");
    }
    ComparisonBlock block;
    auto read_metric = [&](const char* overall, const char* per_joint,
                           std::optional<double>& value, std::vector<double>& joints) {
        if (!obj.contains(overall)) {
            return;
        }
        if (!obj[overall].is_number()) {
            throw ParseError("report field '" + where + "." + overall + "' must be a number");
        }
        value = obj[overall].get<double>();
        if (!obj.contains(per_joint) || !obj[per_joint].is_array()) {
            throw ParseError("report block '" + where + "' is missing the '" +
                             per_joint + "' array");
        }
        for (const auto& item : obj[per_joint]) {
            if (!item.is_number()) {
                throw ParseError("report field '" + where + "." + per_joint +
                                 "' must hold numbers");
            }
            joints.push_back(item.get<double>());
        }
    };
    read_metric("mpjpe", "joint_mpjpe", block.mpjpe, block.joint_mpjpe);
    read_metric("pa_mpjpe", "joint_pa_mpjpe", block.pa_mpjpe, block.joint_pa_mpjpe);
    read_metric("dtw_mean", "joint_dtw", block.dtw_mean, block.joint_dtw);
    return block;
}

void append_rows(std::vector<JointMetricRow>& rows, const MetricReport& report,
                 const std::string& metric, const std::string& source,
                 const std::vector<double>& values) {
    for (std::size_t j = 0; j < values.size(); ++j) {
        rows.push_back({report.task_id, static_cast<int>(j + 1), metric, source, values[j]});
    }
}

// Field quoting for the aggregate summary (notes may carry punctuation).
std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

ordered_json aggregate_to_json(const MetricAggregate& agg) {
    ordered_json out = ordered_json::object();
    out["metric"] = agg.metric;
    out["pairs"] = agg.pairs;
    out["mean_simulated"] = agg.mean_simulated;
    out["mean_benchmark"] = agg.mean_benchmark;
    if (agg.ttest) {
        out["t"] = agg.ttest->t;
        out["p"] = agg.ttest->p;
        out["df"] = agg.ttest->df;
    }
    if (agg.normality) {
        out["shapiro_w"] = agg.normality->w;
        out["shapiro_p"] = agg.normality->p;
    }
    out["degenerate"] = agg.degenerate;
    if (!agg.note.empty()) {
        out["note"] = agg.note;
    }
    return out;
}

} // namespace

std::vector<JointMetricRow> metric_rows(const MetricReport& report) {
    std::vector<JointMetricRow> rows;
    append_rows(rows, report, "MPJPE", "simulated", report.simulated_vs_real.joint_mpjpe);
    append_rows(rows, report, "MPJPE", "benchmark", report.benchmark_vs_real.joint_mpjpe);
    append_rows(rows, report, "PA-MPJPE", "simulated", report.simulated_vs_real.joint_pa_mpjpe);
    append_rows(rows, report, "PA-MPJPE", "benchmark", report.benchmark_vs_real.joint_pa_mpjpe);
    append_rows(rows, report, "DTW", "simulated", report.simulated_vs_real.joint_dtw);
    append_rows(rows, report, "DTW", "benchmark", report.benchmark_vs_real.joint_dtw);
    return rows;
}

std::string write_report_json(const MetricReport& report) {
    ordered_json out = ordered_json::object();
    out["format"] = "metric-report";
    out["version"] = 1;
    out["task"] = report.task_id;
    out["alignment"] = {
        {"target_frames", report.alignment.target_frames},
        {"real_frames", report.alignment.real_frames},
        {"benchmark_frames", report.alignment.benchmark_frames},
        {"simulated_frames", report.alignment.simulated_frames},
    };
    out["config"] = {
        {"metrics", selected_metric_names(report.config.metrics)},
        {"pa_mode", to_string(report.config.pa.mode)},
        {"pa_allow_reflection", report.config.pa.allow_reflection},
        {"pa_with_scale", report.config.pa.with_scale},
    };
    out["simulated_vs_real"] = block_to_json(report.simulated_vs_real);
    out["benchmark_vs_real"] = block_to_json(report.benchmark_vs_real);
    return out.dump(2) + "\n";
}

MetricReport parse_report_json(const std::string& text) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("report is not valid JSON: ") + err.what());
    }
    if (!obj.is_object() || obj.value("format", "") != "metric-report") {
        throw ParseError("not a metric report (expected format \"metric-report\")");
    }
    if (obj.value("version", 0) != 1) {
        throw ParseError("unsupported metric report version");
    }
    if (!obj.contains("task") || !obj["task"].is_string()) {
        throw ParseError("metric report is missing the task id");
    }

    MetricReport report;
    report.task_id = obj["task"].get<std::string>();
    if (obj.contains("alignment")) {
        const auto& align = obj["alignment"];
        auto read_count = [&](const char* key) -> std::size_t {
            if (!align.contains(key) || !align[key].is_number_unsigned()) {
                throw ParseError(std::string("alignment field '") + key +
                                 "' must be a nonnegative integer");
            }
            return align[key].get<std::size_t>();
        };
        report.alignment.target_frames = read_count("target_frames");
        report.alignment.real_frames = read_count("real_frames");
        report.alignment.benchmark_frames = read_count("benchmark_frames");
        report.alignment.simulated_frames = read_count("simulated_frames");
    }
    if (obj.contains("config")) {
        const auto& config = obj["config"];
        if (config.contains("metrics")) {
            MetricSelection selection;
            selection.mpjpe = false;
            selection.pa_mpjpe = false;
            selection.dtw = false;
            for (const auto& name : config["metrics"]) {
                const std::string metric = name.get<std::string>();
                if (metric == "MPJPE") {
                    selection.mpjpe = true;
                } else if (metric == "PA-MPJPE") {
                    selection.pa_mpjpe = true;
                } else if (metric == "DTW") {
                    selection.dtw = true;
                } else {
                    throw ParseError("unknown metric '" + metric + "' in report config");
                }
            }
            report.config.metrics = selection;
        }
        if (config.contains("pa_mode")) {
            report.config.pa.mode = pa_mode_from_string(config["pa_mode"].get<std::string>());
        }
        report.config.pa.allow_reflection = config.value("pa_allow_reflection", false);
        report.config.pa.with_scale = config.value("pa_with_scale", false);
    }
    if (obj.contains("simulated_vs_real")) {
        report.simulated_vs_real = block_from_json(obj["simulated_vs_real"], "simulated_vs_real");
    }
    if (obj.contains("benchmark_vs_real")) {
        report.benchmark_vs_real = block_from_json(obj["benchmark_vs_real"], "benchmark_vs_real");
    }
    return report;
}

std::string write_aggregate_json(const AggregateReport& report) {
    ordered_json out = ordered_json::object();
    out["format"] = "aggregate-report";
    out["version"] = 1;
    out["metrics"] = ordered_json::array();
    for (const MetricAggregate& agg : report.metrics) {
        out["metrics"].push_back(aggregate_to_json(agg));
    }
    return out.dump(2) + "\n";
}

AggregateReport aggregate_rows(std::span<const JointMetricRow> rows) {
    struct Sides {
        std::optional<double> simulated;
        std::optional<double> benchmark;
    };
    std::map<std::string, std::map<std::pair<std::string, int>, Sides>> by_metric;
    for (const JointMetricRow& row : rows) {
        Sides& sides = by_metric[row.metric][{row.task, row.joint}];
        std::optional<double>& slot =
            row.source == "simulated" ? sides.simulated : sides.benchmark;
        if (slot) {
            throw ValidationError("duplicate " + row.metric + " row for task '" + row.task +
                                  "' joint " + std::to_string(row.joint) + " source " +
                                  row.source);
        }
        slot = row.value;
    }

    std::vector<PairedObservation> mpjpe;
    std::vector<PairedObservation> pa;
    std::vector<PairedObservation> dtw;
    for (const auto& [metric, cells] : by_metric) {
        std::vector<PairedObservation>* out = nullptr;
        if (metric == "MPJPE") {
            out = &mpjpe;
        } else if (metric == "PA-MPJPE") {
            out = &pa;
        } else if (metric == "DTW") {
            out = &dtw;
        } else {
            throw ValidationError("unknown metric '" + metric + "' in table rows");
        }
        for (const auto& [key, sides] : cells) {
            if (!sides.simulated || !sides.benchmark) {
                const char* missing = sides.simulated ? "benchmark" : "simulated";
                throw ValidationError("task '" + key.first + "' joint " +
                                      std::to_string(key.second) + " has no " + missing +
                                      " value for " + metric);
            }
            out->push_back({key.first, key.second, *sides.simulated, *sides.benchmark});
        }
    }
    return aggregate_observations(mpjpe, pa, dtw);
}

std::string write_aggregate_csv(const AggregateReport& report) {
    std::string out =
        "metric,pairs,mean_simulated,mean_benchmark,t,p,df,shapiro_w,shapiro_p,degenerate,note\n";
    for (const MetricAggregate& agg : report.metrics) {
        out += agg.metric;
        out += ',' + std::to_string(agg.pairs);
        out += ',' + format_g9(agg.mean_simulated);
        out += ',' + format_g9(agg.mean_benchmark);
        if (agg.ttest) {
            out += ',' + format_g9(agg.ttest->t);
            out += ',' + format_g9(agg.ttest->p);
            out += ',' + format_g9(agg.ttest->df);
        } else {
            out += ",,,";
        }
        if (agg.normality) {
            out += ',' + format_g9(agg.normality->w);
            out += ',' + format_g9(agg.normality->p);
        } else {
            out += ",,";
        }
        out += agg.degenerate ? ",true" : ",false";
        out += ',' + csv_escape(agg.note);
        out += '\n';
    }
    return out;
}

} // namespace motioneval
