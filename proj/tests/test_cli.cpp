#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "motioneval/error.hpp"
#include "motioneval/io.hpp"
#include "motioneval/motion.hpp"
#include "motioneval/report.hpp"

using namespace motioneval;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const std::filesystem::path& work_dir() {
    static const std::filesystem::path dir = [] {
        const std::filesystem::path d =
            std::filesystem::temp_directory_path() / "motioneval-cli-tests";
        std::filesystem::remove_all(d);
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_in_work_dir(const std::string& name) {
    return (work_dir() / name).string();
}

std::string slurp(const std::string& path) {
    return std::filesystem::exists(path) ? read_file(path) : std::string{};
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const std::string out_path = path_in_work_dir("stdout." + std::to_string(counter));
    const std::string err_path = path_in_work_dir("stderr." + std::to_string(counter));
    ++counter;
    const std::string command = std::string(MOTIONEVAL_CLI_PATH) + " " + args + " >" +
                                out_path + " 2>" + err_path;
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

// One frame of 33 landmarks, landmark i at (i, 10i, -i).
std::string indexed_landmark_file(const std::string& name) {
    std::vector<Landmark> points;
    for (int i = 1; i <= LandmarkSequence::kLandmarks; ++i) {
        const double v = static_cast<double>(i);
        points.push_back({v, 10.0 * v, -v, 1.0});
    }
    const std::string path = path_in_work_dir(name);
    write_file(path, write_landmark_export(LandmarkSequence(std::move(points), 30.0)));
    return path;
}

} // namespace

TEST_CASE("synth writes the same bytes for the same arguments") {
    const std::string first = path_in_work_dir("synth-a.gmo");
    const std::string second = path_in_work_dir("synth-b.gmo");
    CHECK(run("synth --kind noise --frames 8 --seed 11 -o " + first).exit_code == 0);
    CHECK(run("synth --kind noise --frames 8 --seed 11 -o " + second).exit_code == 0);
    CHECK(read_file(first) == read_file(second));

    const MotionSequence seq = parse_motion(read_file(first));
    CHECK(seq.frames() == 8);
    CHECK(seq.joints() == 22);
    CHECK(seq.source() == Source::simulated);
}

TEST_CASE("synth notes its parameters unless quieted") {
    const std::string out = path_in_work_dir("synth-note.gmo");
    const RunResult loud = run("synth --frames 12 -o " + out);
    CHECK(loud.exit_code == 0);
    CHECK(loud.err.find("synth: kind walk_cycle, frames 12") != std::string::npos);

    const RunResult quieted = run("--quiet synth --frames 12 -o " + out);
    CHECK(quieted.exit_code == 0);
    CHECK(quieted.err.empty());
}

TEST_CASE("ingest rewrites a canonical landmark export unchanged") {
    const std::string input = indexed_landmark_file("ingest-in.mpl");
    const std::string output = path_in_work_dir("ingest-out.mpl");
    const RunResult result = run("ingest " + input + " -o " + output);
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("ingest: 1 frames at 30 fps") != std::string::npos);
    CHECK(read_file(output) == read_file(input));
}

TEST_CASE("retarget maps landmarks onto the 22-joint skeleton") {
    const std::string input = indexed_landmark_file("retarget-in.mpl");
    const std::string output = path_in_work_dir("retarget-out.gmo");
    const RunResult result = run("retarget " + input + " -o " + output + " --source real");
    CHECK(result.exit_code == 0);

    const MotionSequence seq = parse_motion(read_file(output));
    CHECK(seq.skeleton().id == "humanml3d_22");
    CHECK(seq.joints() == 22);
    CHECK(seq.frames() == 1);
    CHECK(seq.source() == Source::real);
    CHECK(seq.at(0, 16).x == 1.0);
    CHECK(seq.at(0, 16).y == 10.0);
    CHECK(seq.at(0, 16).z == -1.0);
}

TEST_CASE("normalize echoes its configuration into the file and stderr") {
    const std::string raw = path_in_work_dir("normalize-in.gmo");
    REQUIRE(run("synth --kind walk_cycle --frames 40 -o " + raw).exit_code == 0);

    const std::string out = path_in_work_dir("normalize-out.gmo");
    const RunResult result = run("normalize " + raw + " -o " + out);
    CHECK(result.exit_code == 0);
    const std::string echo = "normalize: center joint 16, scale pair (16,11), flip y "
                             "automatic, scale mode per_frame, median kernel 11, "
                             "lowpass cutoff 0.05, order 4";
    CHECK(result.err.find(echo) != std::string::npos);

    const std::string text = read_file(out);
    CHECK(text.find("# " + echo) == 0);
    const MotionSequence seq = parse_motion(text);
    CHECK(seq.state().centered);
    CHECK(seq.state().scaled);
    CHECK(seq.state().filtered);
    CHECK_FALSE(seq.state().y_flipped);
    CHECK_FALSE(seq.state().resampled);
}

TEST_CASE("resample brings files to a shared or explicit frame count") {
    const std::string long_in = path_in_work_dir("resample-50.gmo");
    const std::string short_in = path_in_work_dir("resample-30.gmo");
    REQUIRE(run("synth --frames 50 -o " + long_in).exit_code == 0);
    REQUIRE(run("synth --frames 30 -o " + short_in).exit_code == 0);

    const std::string out_a = path_in_work_dir("resample-a.gmo");
    const std::string out_b = path_in_work_dir("resample-b.gmo");
    const RunResult shared =
        run("resample " + long_in + " " + short_in + " -o " + out_a + " -o " + out_b);
    CHECK(shared.exit_code == 0);
    CHECK(parse_motion(read_file(out_a)).frames() == 30);
    CHECK(parse_motion(read_file(out_b)).frames() == 30);

    const std::filesystem::path dir = work_dir() / "resampled";
    const RunResult explicit_frames = run("resample " + long_in + " " + short_in +
                                          " --out-dir " + dir.string() + " --frames 42");
    CHECK(explicit_frames.exit_code == 0);
    CHECK(parse_motion(read_file((dir / "resample-50.gmo").string())).frames() == 42);
    CHECK(parse_motion(read_file((dir / "resample-30.gmo").string())).frames() == 42);

    const RunResult mismatched =
        run("resample " + long_in + " " + short_in + " -o " + out_a);
    CHECK(mismatched.exit_code == 2);
}

TEST_CASE("compare aligns, scores and reports a triplet") {
    const std::string real = path_in_work_dir("real.gmo");
    const std::string benchmark = path_in_work_dir("bench.gmo");
    const std::string simulated = path_in_work_dir("sim.gmo");
    REQUIRE(run("synth --frames 50 --source real -o " + real).exit_code == 0);
    REQUIRE(run("synth --frames 40 --amplitude 1.3 --source benchmark -o " + benchmark)
                .exit_code == 0);
    REQUIRE(run("synth --frames 45 --amplitude 0.8 --source simulated -o " + simulated)
                .exit_code == 0);

    const std::string report_path = path_in_work_dir("compare-report.json");
    const RunResult result = run("compare " + real + " " + benchmark + " " + simulated +
                                 " --auto-align --report " + report_path);
    CHECK(result.exit_code == 0);

    const MetricReport report = parse_report_json(read_file(report_path));
    CHECK(report.task_id == "real");
    CHECK(report.alignment.target_frames == 40);
    CHECK(report.alignment.real_frames == 50);
    CHECK(report.alignment.simulated_frames == 45);
    REQUIRE(report.simulated_vs_real.mpjpe.has_value());
    CHECK(report.simulated_vs_real.joint_mpjpe.size() == 22);
    REQUIRE(report.benchmark_vs_real.dtw_mean.has_value());
    CHECK(report.benchmark_vs_real.joint_dtw.size() == 22);

    const RunResult to_stdout = run("compare " + real + " " + benchmark + " " + simulated +
                                    " --auto-align --metrics mpjpe --task-id walk-a");
    CHECK(to_stdout.exit_code == 0);
    const MetricReport piped = parse_report_json(to_stdout.out);
    CHECK(piped.task_id == "walk-a");
    REQUIRE(piped.simulated_vs_real.mpjpe.has_value());
    CHECK_FALSE(piped.simulated_vs_real.dtw_mean.has_value());
    CHECK_FALSE(piped.simulated_vs_real.pa_mpjpe.has_value());

    const RunResult unaligned = run("compare " + real + " " + benchmark + " " + simulated);
    CHECK(unaligned.exit_code == 2);
    CHECK(unaligned.err.find("motioneval: validation:") != std::string::npos);

    const RunResult frames_only = run("compare " + real + " " + benchmark + " " +
                                      simulated + " --frames 30");
    CHECK(frames_only.exit_code == 2);
}

TEST_CASE("aggregate pools the bundled reference table") {
    const std::string fixture =
        std::string(MOTIONEVAL_REPO_ROOT) + "/data/reference_jointwise_metrics.csv";
    const RunResult result = run("aggregate " + fixture);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("metric,pairs,mean_simulated,mean_benchmark,") == 0);
    CHECK(result.out.find("MPJPE,22,") != std::string::npos);
    CHECK(result.out.find("PA-MPJPE,22,") != std::string::npos);
    CHECK(result.out.find("DTW,22,") != std::string::npos);
}

TEST_CASE("aggregate accepts compare reports and writes both outputs") {
    const std::string real = path_in_work_dir("agg-real.gmo");
    const std::string benchmark = path_in_work_dir("agg-bench.gmo");
    const std::string simulated = path_in_work_dir("agg-sim.gmo");
    REQUIRE(run("synth --frames 36 --source real -o " + real).exit_code == 0);
    REQUIRE(run("synth --frames 36 --amplitude 1.4 --source benchmark -o " + benchmark)
                .exit_code == 0);
    REQUIRE(run("synth --frames 36 --amplitude 0.7 --source simulated -o " + simulated)
                .exit_code == 0);
    const std::string report_path = path_in_work_dir("agg-report.json");
    REQUIRE(run("compare " + real + " " + benchmark + " " + simulated + " --report " +
                report_path)
                .exit_code == 0);

    const std::string agg_json = path_in_work_dir("aggregate.json");
    const std::string agg_csv = path_in_work_dir("aggregate.csv");
    const RunResult result = run("aggregate " + report_path + " --report " + agg_json +
                                 " --table " + agg_csv);
    CHECK(result.exit_code == 0);
    CHECK(read_file(agg_json).find("\"format\": \"aggregate-report\"") != std::string::npos);
    CHECK(read_file(agg_csv).find("MPJPE,22,") != std::string::npos);
}

TEST_CASE("aggregate warns about metrics it cannot test") {
    const std::vector<JointMetricRow> rows = {
        {"walk", 1, "MPJPE", "simulated", 0.3}, {"walk", 1, "MPJPE", "benchmark", 0.4},
        {"walk", 2, "MPJPE", "simulated", 0.5}, {"walk", 2, "MPJPE", "benchmark", 0.1},
    };
    const std::string table = path_in_work_dir("two-pairs.csv");
    write_file(table, write_metric_table(rows));

    const RunResult result = run("aggregate " + table);
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("aggregate: warning: MPJPE: needs at least 3 pairs, got 2") !=
          std::string::npos);
    CHECK(result.out.find("MPJPE,2,") != std::string::npos);
}

TEST_CASE("errors map to distinct exit codes") {
    const RunResult unknown_flag = run("synth --bogus -o " + path_in_work_dir("x.gmo"));
    CHECK(unknown_flag.exit_code == 1);
    CHECK(unknown_flag.err.find("motioneval: parse:") != std::string::npos);

    const RunResult missing_file =
        run("ingest " + path_in_work_dir("missing.mpl") + " -o " + path_in_work_dir("y.mpl"));
    CHECK(missing_file.exit_code == 1);
    CHECK(missing_file.err.find("cannot read") != std::string::npos);

    const std::string motion = path_in_work_dir("overwrite.gmo");
    REQUIRE(run("synth --frames 20 -o " + motion).exit_code == 0);
    const RunResult same_path = run("normalize " + motion + " -o " + motion);
    CHECK(same_path.exit_code == 2);
    CHECK(same_path.err.find("motioneval: validation:") != std::string::npos);

    const std::string flat = path_in_work_dir("flat.gmo");
    REQUIRE(run("synth --kind noise --amplitude 0 --frames 20 -o " + flat).exit_code == 0);
    const RunResult degenerate =
        run("normalize " + flat + " -o " + path_in_work_dir("flat-norm.gmo"));
    CHECK(degenerate.exit_code == 3);
    CHECK(degenerate.err.find("motioneval: degeneracy:") != std::string::npos);
}
