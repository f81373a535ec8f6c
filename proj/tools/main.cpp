#include <cstdio>
#include <filesystem>
#include <system_error>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "motioneval/align.hpp"
#include "motioneval/error.hpp"
#include "motioneval/io.hpp"
#include "motioneval/metrics.hpp"
#include "motioneval/normalize.hpp"
#include "motioneval/report.hpp"
#include "motioneval/retarget.hpp"
#include "motioneval/stats.hpp"
#include "motioneval/synth.hpp"

namespace {

using namespace motioneval;

void note(bool quiet, const std::string& line) {
    if (!quiet) {
        std::fprintf(stderr, "%s\n", line.c_str());
    }
}

void require_distinct_paths(const std::vector<std::string>& inputs,
                            const std::vector<std::string>& outputs) {
    for (const std::string& out : outputs) {
        if (out.empty()) {
            continue;
        }
        for (const std::string& in : inputs) {
            if (in == out) {
                throw ValidationError("output path '" + out + "' is also an input path");
            }
        }
    }
}

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

FlipY flip_from_string(const std::string& name) {
    if (name == "automatic") return FlipY::automatic;
    if (name == "always") return FlipY::always;
    if (name == "never") return FlipY::never;
    throw ParseError("unknown flip mode '" + name + "'");
}

ScaleMode scale_mode_from_string(const std::string& name) {
    if (name == "per_frame") return ScaleMode::per_frame;
    if (name == "median") return ScaleMode::median;
    throw ParseError("unknown scale mode '" + name + "'");
}

struct IngestArgs {
    std::string input;
    std::string output;
};

void run_ingest(const IngestArgs& args, bool quiet) {
    require_distinct_paths({args.input}, {args.output});
    const LandmarkSequence seq = parse_landmark_export(read_file(args.input));
    write_file(args.output, write_landmark_export(seq));
    note(quiet, "ingest: " + std::to_string(seq.frames()) + " frames at " +
                    format_g9(seq.fps()) + " fps -> " + args.output);
}

struct RetargetArgs {
    std::string input;
    std::string output;
    std::string rules_path;
    double lumbar = 1.0 / 3.0;
    double neck = 1.0 / 3.0;
    bool lambdas_given = false;
    std::string source = "real";
};

void run_retarget(const RetargetArgs& args, bool quiet) {
    require_distinct_paths({args.input, args.rules_path}, {args.output});
    if (!args.rules_path.empty() && args.lambdas_given) {
        throw ValidationError("--lumbar/--neck only apply to the built-in rules, "
                              "not to --rules files");
    }
    const LandmarkSequence landmarks = parse_landmark_export(read_file(args.input));
    const RetargetRuleSet rules = args.rules_path.empty()
                                      ? default_retarget_rules(args.lumbar, args.neck)
                                      : parse_retarget_rules(read_file(args.rules_path));
    const MotionSequence out = retarget(landmarks, rules, source_from_string(args.source));

    const std::string echo = "retarget: rules " +
                             (args.rules_path.empty() ? std::string("builtin (lumbar ") +
                                                            format_g9(args.lumbar) + ", neck " +
                                                            format_g9(args.neck) + ")"
                                                      : args.rules_path) +
                             ", source " + args.source;
    write_file(args.output, "# " + echo + "\n" + write_motion(out));
    note(quiet, echo + " -> " + args.output);
}

struct NormalizeArgs {
    std::string input;
    std::string output;
    NormalizeConfig config;
    std::string flip = "automatic";
    std::string scale_mode = "per_frame";
    double csv_fps = 30.0;
    std::string csv_source = "benchmark";
};

std::string normalize_echo(const NormalizeConfig& config) {
    return "normalize: center joint " + std::to_string(config.center_joint) +
           ", scale pair (" + std::to_string(config.scale_pair.first) + "," +
           std::to_string(config.scale_pair.second) + "), flip y " +
           (config.flip_y == FlipY::automatic
                ? "automatic"
                : config.flip_y == FlipY::always ? "always" : "never") +
           ", scale mode " +
           (config.scale_mode == ScaleMode::per_frame ? "per_frame" : "median") +
           ", median kernel " + std::to_string(config.median_kernel) +
           ", lowpass cutoff " + format_g9(config.lowpass_cutoff) + ", order " +
           std::to_string(config.lowpass_order);
}

void run_normalize(const NormalizeArgs& args, bool quiet) {
    require_distinct_paths({args.input}, {args.output});
    NormalizeConfig config = args.config;
    config.flip_y = flip_from_string(args.flip);
    config.scale_mode = scale_mode_from_string(args.scale_mode);

    const SkeletonRegistry registry;
    MotionReadOptions options;
    options.csv_fps = args.csv_fps;
    options.csv_source = source_from_string(args.csv_source);
    const MotionSequence seq = parse_motion(read_file(args.input), registry, options);
    const MotionSequence out = normalize_pipeline(seq, config);

    const std::string echo = normalize_echo(config);
    write_file(args.output, "# " + echo + "\n" + write_motion(out));
    note(quiet, echo + " -> " + args.output);
}

struct ResampleArgs {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string out_dir;
    std::optional<std::size_t> frames;
    double csv_fps = 30.0;
    std::string csv_source = "benchmark";
};

void run_resample(const ResampleArgs& args, bool quiet) {
    std::vector<std::string> outputs = args.outputs;
    if (!args.out_dir.empty()) {
        if (!outputs.empty()) {
            throw ValidationError("give either -o paths or --out-dir, not both");
        }
        for (const std::string& input : args.inputs) {
            outputs.push_back((std::filesystem::path(args.out_dir) /
                               std::filesystem::path(input).filename())
                                  .string());
        }
    }
    if (outputs.size() != args.inputs.size()) {
        throw ValidationError("resample needs one output per input: " +
                              std::to_string(args.inputs.size()) + " inputs, " +
                              std::to_string(outputs.size()) + " outputs");
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        for (std::size_t j = i + 1; j < outputs.size(); ++j) {
            if (outputs[i] == outputs[j]) {
                throw ValidationError("duplicate output path '" + outputs[i] + "'");
            }
        }
    }
    require_distinct_paths(args.inputs, outputs);

    const SkeletonRegistry registry;
    MotionReadOptions options;
    options.csv_fps = args.csv_fps;
    options.csv_source = source_from_string(args.csv_source);
    std::vector<MotionSequence> sequences;
    sequences.reserve(args.inputs.size());
    for (const std::string& input : args.inputs) {
        sequences.push_back(parse_motion(read_file(input), registry, options));
    }

    std::size_t target = sequences.front().frames();
    for (const MotionSequence& seq : sequences) {
        target = std::min(target, seq.frames());
    }
    if (args.frames) {
        target = *args.frames;
    }

    if (!args.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(args.out_dir, ec);
    }
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const MotionSequence out = resample_linear(sequences[i], target);
        const std::string echo = "resample: " + std::to_string(sequences[i].frames()) +
                                 " -> " + std::to_string(target) + " frames";
        write_file(outputs[i], "# " + echo + "\n" + write_motion(out));
        note(quiet, echo + " -> " + outputs[i]);
    }
}

struct CompareArgs {
    std::string real;
    std::string benchmark;
    std::string simulated;
    std::string report_path;
    std::string table_path;
    bool auto_align = false;
    std::optional<std::size_t> frames;
    std::vector<std::string> metrics{"mpjpe", "pa_mpjpe", "dtw"};
    std::string pa_mode = "per_frame";
    bool allow_reflection = false;
    bool pa_scale = false;
    std::string task_id;
    double csv_fps = 30.0;
    std::string csv_source = "benchmark";
};

void run_compare(const CompareArgs& args, bool quiet) {
    require_distinct_paths({args.real, args.benchmark, args.simulated},
                           {args.report_path, args.table_path});
    if (args.frames && !args.auto_align) {
        throw ValidationError("--frames needs --auto-align");
    }

    const SkeletonRegistry registry;
    MotionReadOptions options;
    options.csv_fps = args.csv_fps;
    options.csv_source = source_from_string(args.csv_source);
    MotionSequence real = parse_motion(read_file(args.real), registry, options);
    MotionSequence benchmark = parse_motion(read_file(args.benchmark), registry, options);
    MotionSequence simulated = parse_motion(read_file(args.simulated), registry, options);

    const std::string task = args.task_id.empty() ? file_stem(args.real) : args.task_id;
    EvalTriplet triplet =
        make_triplet(std::move(real), std::move(benchmark), std::move(simulated), task);

    std::optional<AlignPlan> plan;
    if (args.auto_align) {
        auto [aligned, used_plan] = align_triplet(triplet, args.frames);
        triplet = std::move(aligned);
        plan = used_plan;
    }

    CompareConfig config;
    config.metrics.mpjpe = false;
    config.metrics.pa_mpjpe = false;
    config.metrics.dtw = false;
    for (const std::string& metric : args.metrics) {
        if (metric == "mpjpe") config.metrics.mpjpe = true;
        if (metric == "pa_mpjpe") config.metrics.pa_mpjpe = true;
        if (metric == "dtw") config.metrics.dtw = true;
    }
    if (args.pa_mode == "global") {
        config.pa.mode = PaMode::global;
    }
    config.pa.allow_reflection = args.allow_reflection;
    config.pa.with_scale = args.pa_scale;

    const MetricReport report = compare_sources(triplet, config, plan);
    const std::string json = write_report_json(report);
    if (!args.report_path.empty()) {
        write_file(args.report_path, json);
    }
    if (!args.table_path.empty()) {
        write_file(args.table_path, write_metric_table(metric_rows(report)));
    }
    if (args.report_path.empty() && args.table_path.empty()) {
        std::fputs(json.c_str(), stdout);
    }
    note(quiet, "compare: task '" + task + "', " + std::to_string(triplet.real.frames()) +
                    " aligned frames, pa " + args.pa_mode);
}

struct AggregateArgs {
    std::vector<std::string> inputs;
    std::string report_path;
    std::string table_path;
};

void run_aggregate(const AggregateArgs& args, bool quiet) {
    require_distinct_paths(args.inputs, {args.report_path, args.table_path});
    std::vector<JointMetricRow> rows;
    for (const std::string& input : args.inputs) {
        const std::string text = read_file(input);
        const std::size_t first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            const MetricReport report = parse_report_json(text);
            const std::vector<JointMetricRow> from_report = metric_rows(report);
            rows.insert(rows.end(), from_report.begin(), from_report.end());
        } else {
            const std::vector<JointMetricRow> from_table = parse_metric_table(text);
            rows.insert(rows.end(), from_table.begin(), from_table.end());
        }
    }

    const AggregateReport report = aggregate_rows(rows);
    for (const MetricAggregate& agg : report.metrics) {
        if (agg.degenerate) {
            note(quiet, "aggregate: warning: " + agg.metric + ": " + agg.note);
        }
    }
    if (!args.report_path.empty()) {
        write_file(args.report_path, write_aggregate_json(report));
    }
    if (!args.table_path.empty()) {
        write_file(args.table_path, write_aggregate_csv(report));
    }
    if (args.report_path.empty() && args.table_path.empty()) {
        std::fputs(write_aggregate_csv(report).c_str(), stdout);
    }
}

struct SynthArgs {
    std::string kind = "walk_cycle";
    int frames = 90;
    double fps = 30.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    std::string source = "simulated";
    std::string output;
};

void run_synth(const SynthArgs& args, bool quiet) {
    SynthSpec spec;
    spec.kind = synth_kind_from_string(args.kind);
    spec.frames = args.frames;
    spec.fps = args.fps;
    spec.amplitude = args.amplitude;
    spec.seed = args.seed;
    const MotionSequence seq = synthesize(spec, source_from_string(args.source));

    const std::string echo = "synth: kind " + args.kind + ", frames " +
                             std::to_string(args.frames) + ", fps " + format_g9(args.fps) +
                             ", amplitude " + format_g9(args.amplitude) + ", seed " +
                             std::to_string(args.seed) + ", source " + args.source;
    write_file(args.output, "# " + echo + "\n" + write_motion(seq));
    note(quiet, echo + " -> " + args.output);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"skeletal motion evaluation toolkit"};
    app.set_config("--config", "", "read long-option defaults from an INI file");
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output on stderr");
    app.require_subcommand(1);

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "validate a landmark export and rewrite it in canonical form");
    ingest->add_option("input", ingest_args.input, "landmark export (.mpl JSON or CSV)")
        ->required();
    ingest->add_option("-o,--output", ingest_args.output, "canonical landmark file")
        ->required();

    RetargetArgs retarget_args;
    CLI::App* retarget_cmd =
        app.add_subcommand("retarget", "map a 33-landmark export onto the 22-joint skeleton");
    retarget_cmd->add_option("input", retarget_args.input, "landmark export")->required();
    retarget_cmd->add_option("-o,--output", retarget_args.output, "motion file (.gmo)")
        ->required();
    retarget_cmd->add_option("--rules", retarget_args.rules_path, "rule table file");
    CLI::Option* lumbar_opt = retarget_cmd->add_option(
        "--lumbar", retarget_args.lumbar, "lumbar blend weight for the built-in rules");
    CLI::Option* neck_opt = retarget_cmd->add_option(
        "--neck", retarget_args.neck, "neck blend weight for the built-in rules");
    retarget_cmd
        ->add_option("--source", retarget_args.source, "source tag for the output")
        ->check(CLI::IsMember({"real", "benchmark", "simulated"}))
        ->capture_default_str();

    NormalizeArgs normalize_args;
    CLI::App* normalize_cmd =
        app.add_subcommand("normalize", "center, scale, flip and filter a motion file");
    normalize_cmd->add_option("input", normalize_args.input, "motion file")->required();
    normalize_cmd->add_option("-o,--output", normalize_args.output, "motion file (.gmo)")
        ->required();
    normalize_cmd
        ->add_option("--center-joint", normalize_args.config.center_joint,
                     "joint subtracted from every frame")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--scale-a", normalize_args.config.scale_pair.first,
                     "first joint of the scale pair")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--scale-b", normalize_args.config.scale_pair.second,
                     "second joint of the scale pair")
        ->capture_default_str();
    normalize_cmd->add_option("--flip-y", normalize_args.flip, "y-flip policy")
        ->check(CLI::IsMember({"automatic", "always", "never"}))
        ->capture_default_str();
    normalize_cmd
        ->add_option("--median-kernel", normalize_args.config.median_kernel,
                     "odd sliding-median window")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--cutoff", normalize_args.config.lowpass_cutoff,
                     "low-pass cutoff as a fraction of Nyquist")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--order", normalize_args.config.lowpass_order, "low-pass filter order")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--scale-epsilon", normalize_args.config.scale_epsilon,
                     "minimum valid scale distance")
        ->capture_default_str();
    normalize_cmd->add_option("--scale-mode", normalize_args.scale_mode, "scale policy")
        ->check(CLI::IsMember({"per_frame", "median"}))
        ->capture_default_str();
    normalize_cmd
        ->add_option("--csv-fps", normalize_args.csv_fps, "fps for CSV inputs without one")
        ->capture_default_str();
    normalize_cmd
        ->add_option("--csv-source", normalize_args.csv_source,
                     "source tag for CSV inputs without one")
        ->check(CLI::IsMember({"real", "benchmark", "simulated"}))
        ->capture_default_str();

    ResampleArgs resample_args;
    CLI::App* resample_cmd = app.add_subcommand(
        "resample", "bring motion files to a common frame count (shortest input wins)");
    resample_cmd->add_option("inputs", resample_args.inputs, "motion files")
        ->required()
        ->expected(-1);
    resample_cmd->add_option("-o,--output", resample_args.outputs,
                             "one output path per input");
    resample_cmd->add_option("--out-dir", resample_args.out_dir,
                             "write outputs under this directory, keeping file names");
    resample_cmd->add_option("--frames", resample_args.frames,
                             "resample to this frame count instead of the minimum");
    resample_cmd
        ->add_option("--csv-fps", resample_args.csv_fps, "fps for CSV inputs without one")
        ->capture_default_str();
    resample_cmd
        ->add_option("--csv-source", resample_args.csv_source,
                     "source tag for CSV inputs without one")
        ->check(CLI::IsMember({"real", "benchmark", "simulated"}))
        ->capture_default_str();

    CompareArgs compare_args;
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "score benchmark and simulated motions against the recorded one");
    compare_cmd->add_option("real", compare_args.real, "recorded motion file")->required();
    compare_cmd->add_option("benchmark", compare_args.benchmark, "human-prompt motion file")
        ->required();
    compare_cmd
        ->add_option("simulated", compare_args.simulated, "machine-prompt motion file")
        ->required();
    compare_cmd->add_option("--report", compare_args.report_path, "structured report (JSON)");
    compare_cmd->add_option("--table", compare_args.table_path, "joint metric table (CSV)");
    compare_cmd->add_flag("--auto-align", compare_args.auto_align,
                          "resample the triplet to a shared length first");
    compare_cmd->add_option("--frames", compare_args.frames,
                            "alignment target frame count (with --auto-align)");
    compare_cmd
        ->add_option("--metrics", compare_args.metrics, "metrics to compute")
        ->delimiter(',')
        ->check(CLI::IsMember({"mpjpe", "pa_mpjpe", "dtw"}))
        ->capture_default_str();
    compare_cmd->add_option("--pa-mode", compare_args.pa_mode, "rigid alignment granularity")
        ->check(CLI::IsMember({"per_frame", "global"}))
        ->capture_default_str();
    compare_cmd->add_flag("--allow-reflection", compare_args.allow_reflection,
                          "let the rigid alignment pick an improper rotation");
    compare_cmd->add_flag("--pa-scale", compare_args.pa_scale,
                          "fit a uniform scale during rigid alignment");
    compare_cmd->add_option("--task-id", compare_args.task_id,
                            "task label (default: the real file's stem)");
    compare_cmd
        ->add_option("--csv-fps", compare_args.csv_fps, "fps for CSV inputs without one")
        ->capture_default_str();
    compare_cmd
        ->add_option("--csv-source", compare_args.csv_source,
                     "source tag for CSV inputs without one")
        ->check(CLI::IsMember({"real", "benchmark", "simulated"}))
        ->capture_default_str();

    AggregateArgs aggregate_args;
    CLI::App* aggregate_cmd = app.add_subcommand(
        "aggregate", "pool joint metric tables or reports and run the paired tests");
    aggregate_cmd
        ->add_option("inputs", aggregate_args.inputs, "metric tables (.csv) or reports (.json)")
        ->required()
        ->expected(-1);
    aggregate_cmd->add_option("--report", aggregate_args.report_path,
                              "aggregate report (JSON)");
    aggregate_cmd->add_option("--table", aggregate_args.table_path,
                              "aggregate summary (CSV)");

    SynthArgs synth_args;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "generate a deterministic synthetic motion file");
    synth_cmd->add_option("--kind", synth_args.kind, "shape of the synthetic motion")
        ->check(CLI::IsMember({"constant", "linear_ramp", "walk_cycle", "noise"}))
        ->capture_default_str();
    synth_cmd->add_option("--frames", synth_args.frames, "frame count")
        ->capture_default_str();
    synth_cmd->add_option("--fps", synth_args.fps, "frame rate")->capture_default_str();
    synth_cmd->add_option("--amplitude", synth_args.amplitude, "motion amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_args.seed, "generator seed")
        ->capture_default_str();
    synth_cmd->add_option("--source", synth_args.source, "source tag for the output")
        ->check(CLI::IsMember({"real", "benchmark", "simulated"}))
        ->capture_default_str();
    synth_cmd->add_option("-o,--output", synth_args.output, "motion file (.gmo)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        std::fprintf(stderr, "motioneval: parse: %s\n", e.what());
        return 1;
    }
    retarget_args.lambdas_given = lumbar_opt->count() > 0 || neck_opt->count() > 0;

    auto guarded = [&](auto&& fn) -> int {
        try {
            fn();
            return 0;
        } catch (const ParseError& e) {
            std::fprintf(stderr, "motioneval: parse: %s\n", e.what());
            return 1;
        } catch (const ValidationError& e) {
            std::fprintf(stderr, "motioneval: validation: %s\n", e.what());
            return 2;
        } catch (const DegeneracyError& e) {
            std::fprintf(stderr, "motioneval: degeneracy: %s\n", e.what());
            return 3;
        }
    };

    if (app.got_subcommand(ingest)) {
        return guarded([&] { run_ingest(ingest_args, quiet); });
    }
    if (app.got_subcommand(retarget_cmd)) {
        return guarded([&] { run_retarget(retarget_args, quiet); });
    }
    if (app.got_subcommand(normalize_cmd)) {
        return guarded([&] { run_normalize(normalize_args, quiet); });
    }
    if (app.got_subcommand(resample_cmd)) {
        return guarded([&] { run_resample(resample_args, quiet); });
    }
    if (app.got_subcommand(compare_cmd)) {
        return guarded([&] { run_compare(compare_args, quiet); });
    }
    if (app.got_subcommand(aggregate_cmd)) {
        return guarded([&] { run_aggregate(aggregate_args, quiet); });
    }
    if (app.got_subcommand(synth_cmd)) {
        return guarded([&] { run_synth(synth_args, quiet); });
    }
    return 0;
}
