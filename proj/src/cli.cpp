#include "nilm/cli.hpp"

#include "nilm/baseline_detectors.hpp"
#include "nilm/evaluation.hpp"
#include "nilm/io.hpp"
#include "nilm/pipeline.hpp"
#include "nilm/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#ifndef NILM_VERSION
#define NILM_VERSION "dev"
#endif

namespace nilm::cli {

namespace fs = std::filesystem;

namespace {

struct ConfigOptions {
    std::string config_file;
    std::map<std::string, std::string> overrides;
    std::map<std::string, CLI::Option*> flags;

    void attach(CLI::App& app) {
        app.add_option("--config", config_file, "key = value file with HybridConfig fields")
            ->check(CLI::ExistingFile);
        for (const auto& key : config_keys()) {
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            flags[key] = app.add_option(flag, overrides[key], "override " + key)
                             ->check([key](const std::string& value) {
                                 HybridConfig probe;
                                 try {
                                     apply_config_value(probe, key, value);
                                 } catch (const Error& e) {
                                     return std::string(e.what());
                                 }
                                 return std::string();
                             });
        }
    }

    HybridConfig resolve() const {
        HybridConfig c = config_file.empty() ? HybridConfig{} : load_config(config_file);
        for (const auto& [key, opt] : flags)
            if (opt->count() > 0) apply_config_value(c, key, overrides.at(key));
        c.validate();
        return c;
    }
};

void write_file(const fs::path& path, const auto& writer) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    writer(f);
}

void emit_stages(const fs::path& dir, const SampleSeries& series, const PipelineResult& r) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "raw.csv", [&](std::ostream& o) { write_trace(o, series); });
    write_file(dir / "derivative.csv",
               [&](std::ostream& o) { write_values(o, series, r.derivative_trace.values, "derivative"); });
    write_file(dir / "settle_derivative.csv",
               [&](std::ostream& o) { write_values(o, series, r.settle_derivative, "settle_derivative"); });
    write_file(dir / "smoothed_derivative.csv",
               [&](std::ostream& o) { write_values(o, series, r.smoothed_derivative, "smoothed_derivative"); });
    write_file(dir / "extrema.csv", [&](std::ostream& o) { write_extrema(o, series, r.extrema); });
    write_file(dir / "guard_extrema.csv", [&](std::ostream& o) { write_extrema(o, series, r.guard_extrema); });
    write_file(dir / "base_events.csv", [&](std::ostream& o) { write_events(o, r.base_events); });
    write_file(dir / "merged_events.csv", [&](std::ostream& o) { write_events(o, r.merged_events); });
    write_file(dir / "removed_events.csv", [&](std::ostream& o) { write_events(o, r.removed_events); });
    write_file(dir / "final_events.csv", [&](std::ostream& o) { write_events(o, r.events); });
}

void print_stage_counts(std::ostream& out, const StageCounts& c) {
    out << "stage_base=" << c.base << '\n'
        << "stage_after_derivative=" << c.after_derivative << '\n'
        << "stage_after_filtering=" << c.after_filtering << '\n';
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
    return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid appliance event detection for aggregate power traces", "nilm-events"};
    app.set_version_flag("--version", NILM_VERSION);
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "run the hybrid detector and print final events as CSV");
    std::string detect_trace;
    std::string emit_dir;
    ConfigOptions detect_cfg;
    detect->add_option("trace", detect_trace, "trace CSV (timestamp_s,power_w)")->required();
    detect->add_option("--emit-stages", emit_dir, "directory for per-stage plot data");
    detect_cfg.attach(*detect);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "run the hybrid detector and score it against truth");
    std::string eval_trace, eval_truth;
    double eval_tol = -1.0;
    ConfigOptions eval_cfg;
    evaluate_cmd->add_option("trace", eval_trace, "trace CSV")->required();
    evaluate_cmd->add_option("truth", eval_truth, "truth CSV (timestamp_s,label)")->required();
    auto* eval_tol_opt = evaluate_cmd->add_option("--tolerance", eval_tol, "matching tolerance in seconds");
    eval_cfg.attach(*evaluate_cmd);

    // compare
    auto* compare = app.add_subcommand("compare", "score the hybrid detector and LLD-Max side by side");
    std::string cmp_trace, cmp_truth, cusum_out;
    double cmp_tol = -1.0;
    double lld_window_s = -1.0, lld_threshold = -1.0, lld_precision_s = 0.5;
    ConfigOptions cmp_cfg;
    compare->add_option("trace", cmp_trace, "trace CSV")->required();
    compare->add_option("truth", cmp_truth, "truth CSV")->required();
    auto* cmp_tol_opt = compare->add_option("--tolerance", cmp_tol, "matching tolerance in seconds");
    auto* lld_window_opt =
        compare->add_option("--lld-window-s", lld_window_s, "LLD mean window (default: mean_window_s)");
    auto* lld_threshold_opt = compare->add_option("--lld-threshold-watts", lld_threshold,
                                                  "LLD P_th (default: power_threshold_watts)");
    compare->add_option("--lld-precision-s", lld_precision_s, "LLD maxima precision window")
        ->capture_default_str();
    compare->add_option("--cusum-out", cusum_out, "write linear and squared CUSUM traces here");
    cmp_cfg.attach(*compare);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic trace and truth log from a JSON spec");
    std::string spec_file, synth_out, synth_truth;
    synth->add_option("spec", spec_file, "scenario JSON")->required();
    synth->add_option("--out", synth_out, "trace CSV to write")->required();
    synth->add_option("--truth", synth_truth, "truth CSV to write")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*detect) {
            const HybridConfig cfg = detect_cfg.resolve();
            const SampleSeries series = load_trace(detect_trace);
            const PipelineResult r = detect_hybrid(series, cfg);
            write_events(out, r.events);
            if (!emit_dir.empty()) emit_stages(emit_dir, series, r);
        } else if (*evaluate_cmd) {
            const HybridConfig cfg = eval_cfg.resolve();
            const SampleSeries series = load_trace(eval_trace);
            const GroundTruthLog truth = load_ground_truth(eval_truth);
            const double tol = eval_tol_opt->count() ? eval_tol : cfg.eval_match_tolerance_s;
            const PipelineResult r = detect_hybrid(series, cfg);
            write_report(out, evaluate(r.events, truth, tol));
            print_stage_counts(out, r.stage_counts);
        } else if (*compare) {
            const HybridConfig cfg = cmp_cfg.resolve();
            const SampleSeries series = load_trace(cmp_trace);
            const GroundTruthLog truth = load_ground_truth(cmp_truth);
            const double tol = cmp_tol_opt->count() ? cmp_tol : cfg.eval_match_tolerance_s;
            const double rate = series.sampling_rate_hz();

            LldConfig lld;
            lld.pre_window_samples =
                seconds_to_samples(lld_window_opt->count() ? lld_window_s : cfg.mean_window_s, rate);
            lld.p_th_watts = lld_threshold_opt->count() ? lld_threshold : cfg.power_threshold_watts;
            lld.maxima_precision_samples = seconds_to_samples(lld_precision_s, rate);

            const PipelineResult hybrid = detect_hybrid(series, cfg);
            const auto lld_events = lld_max(series, lld);
            const EvaluationReport rh = evaluate(hybrid.events, truth, tol);
            const EvaluationReport rl = evaluate(lld_events, truth, tol);

            out << "detector  events  tp  fp  fn  tpr  fpr  fnr\n";
            auto row = [&](const char* name, std::size_t n, const EvaluationReport& r) {
                out << name << "  " << n << "  " << r.tp << "  " << r.fp << "  " << r.fn << "  " << pct(r.tpr)
                    << "  " << pct(r.fpr) << "  " << pct(r.fnr) << '\n';
            };
            row("hybrid", hybrid.events.size(), rh);
            row("lld_max", lld_events.size(), rl);
            print_stage_counts(out, hybrid.stage_counts);

            if (!cusum_out.empty()) {
                const std::size_t n = seconds_to_samples(cfg.mean_window_s, rate);
                const CusumTrace lin = cusum(series, n, CusumVariant::Linear);
                const CusumTrace sq = cusum(series, n, CusumVariant::Squared);
                write_file(cusum_out, [&](std::ostream& o) {
                    o << "timestamp_s,cusum_linear,cusum_squared\n";
                    char buf[96];
                    for (std::size_t j = 0; j < series.size(); ++j) {
                        std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g\n", series.time_of(j), lin.values[j],
                                      sq.values[j]);
                        o << buf;
                    }
                });
            }
        } else if (*synth) {
            const Scenario s = generate_scenario(load_scenario(spec_file));
            save_trace(synth_out, s.series);
            save_ground_truth(synth_truth, s.truth);
            out << "samples=" << s.series.size() << '\n' << "truth_events=" << s.truth.size() << '\n';
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace nilm::cli
