// bugnet - collaboration-network bug report analytics.
//
// Subcommands: stats, hypotheses, train, evaluate, synth, dump-network,
// dump-features. Exit codes: 0 success, 2 usage or I/O error, 1 computation
// error. Diagnostics go to stderr, results to stdout or --out.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bugnet/error.hpp"
#include "bugnet/evaluate.hpp"
#include "bugnet/events.hpp"
#include "bugnet/metrics.hpp"
#include "bugnet/network.hpp"
#include "bugnet/rng.hpp"
#include "bugnet/stats.hpp"
#include "bugnet/synth.hpp"
#include "bugnet/time.hpp"

namespace {

using namespace bugnet;
using nlohmann::json;

struct CommonOpts {
    std::string events_path;
    std::string vocab_path;
    std::string out_path;
    bool lenient = false;
    bool as_json = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_events = true) {
    auto* events = cmd->add_option("--events", opts.events_path, "event stream (JSON Lines)");
    if (needs_events) events->required();
    cmd->add_option("--vocab", opts.vocab_path, "status vocabulary config file");
    cmd->add_option("--out", opts.out_path, "write results here instead of stdout");
    cmd->add_flag("--lenient", opts.lenient, "skip malformed lines instead of failing");
    cmd->add_option("--threads", opts.threads, "worker threads for per-bug sweeps")
        ->check(CLI::PositiveNumber);
}

struct LoadedCorpus {
    std::vector<ChangeEvent> events;
    Corpus corpus;
    WindowIndex index;
};

LoadedCorpus load(const CommonOpts& opts) {
    LoadedCorpus data;
    const TrackerVocabulary vocab =
        opts.vocab_path.empty() ? TrackerVocabulary{} : TrackerVocabulary::load(opts.vocab_path);
    ParseResult parsed = parse_event_file(opts.events_path, {.strict = !opts.lenient});
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    if (parsed.skipped > 0) {
        std::cerr << "warning: skipped " << parsed.skipped << " malformed line(s)\n";
    }
    data.events = std::move(parsed.events);
    std::vector<std::string> warnings;
    data.corpus = assemble_bug_records(data.events, vocab, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    data.index = WindowIndex(data.events);
    return data;
}

/// Writes `text` to --out or stdout.
void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + opts.out_path);
    out << text;
}

int run_stats(const CommonOpts& opts) {
    const LoadedCorpus data = load(opts);
    const CorpusStats stats = corpus_stats(data.corpus);
    std::ostringstream out;
    if (opts.as_json) {
        json j;
        j["total_bugs"] = stats.total_bugs;
        j["total_events"] = stats.total_events;
        j["changes_per_report"] = stats.changes_per_report;
        j["resolved"] = stats.resolved_count;
        json cats;
        for (const auto& [cat, count] : stats.category_counts) {
            cats[category_name(cat)] = {{"count", count},
                                        {"fraction_of_resolved", stats.category_fractions.at(cat)}};
        }
        j["categories"] = std::move(cats);
        out << j.dump(2) << "\n";
    } else {
        char buf[96];
        out << "Total bug reports    " << stats.total_bugs << "\n";
        out << "Change events        " << stats.total_events << "\n";
        std::snprintf(buf, sizeof(buf), "Changes / report     %.2f\n", stats.changes_per_report);
        out << buf;
        std::snprintf(buf, sizeof(buf), "Resolved bugs        %zu (%.2f)\n", stats.resolved_count,
                      stats.total_bugs > 0 ? static_cast<double>(stats.resolved_count) /
                                                 static_cast<double>(stats.total_bugs)
                                           : 0.0);
        out << buf;
        for (Category c : {Category::Fix, Category::Dup, Category::Inv, Category::Wof,
                           Category::Inc}) {
            std::snprintf(buf, sizeof(buf), "%-4s                 %zu (%.2f)\n", category_name(c),
                          stats.category_counts.at(c), stats.category_fractions.at(c));
            out << buf;
        }
    }
    emit(opts, out.str());
    return 0;
}

int run_hypotheses(const CommonOpts& opts, double alpha, int window_days, bool exclude_absent) {
    const LoadedCorpus data = load(opts);
    SampleOptions sample_opts;
    sample_opts.window_days = window_days;
    sample_opts.include_absent_as_zero = !exclude_absent;
    sample_opts.threads = opts.threads;
    const auto rows = hypothesis_suite(data.corpus, data.index, alpha, sample_opts);
    std::ostringstream out;
    if (opts.as_json) {
        render_hypotheses_csv(out, rows);
    } else {
        render_hypotheses_text(out, rows);
    }
    emit(opts, out.str());
    return 0;
}

PipelineConfig make_config(const CommonOpts& opts, int window_days, std::uint64_t seed,
                           double fraction, const std::string& target, const SvmParams& svm) {
    PipelineConfig config;
    config.window_days = window_days;
    config.seed = seed;
    config.train_fraction = fraction;
    config.threads = opts.threads;
    config.svm = svm;
    if (target == "valid") config.target_mode = TargetMode::Valid;
    else if (target == "faulty") config.target_mode = TargetMode::Faulty;
    else config.target_mode = TargetMode::Auto;
    return config;
}

int run_train(const CommonOpts& opts, const PipelineConfig& config,
              const std::string& model_path) {
    const LoadedCorpus data = load(opts);
    const Dataset dataset = extract_features(data.corpus, data.index, config);
    const Label target = select_target_class(dataset, config.target_mode);
    auto [train, eval] = split_train_eval(dataset, config.train_fraction, config.seed);
    const ThresholdModel threshold = tune_threshold(train, config.percentile_grid);
    const SvmModel svm = train_svm(train, target, config.svm, Rng::derive(config.seed, 1));

    std::ofstream out(model_path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + model_path);
    out << save_model_json(svm, threshold, config.window_days, config.train_fraction);
    std::cerr << "trained on " << train.rows.size() << " rows (" << svm.support_count()
              << " support vectors, target " << label_name(target) << ") -> " << model_path
              << "\n";
    return 0;
}

int run_evaluate(const CommonOpts& opts, std::uint64_t seed, const std::string& model_path) {
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + model_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const ModelFile model = load_model_json(buffer.str());

    const LoadedCorpus data = load(opts);
    PipelineConfig config;
    config.window_days = model.window_days;
    config.train_fraction = model.train_fraction;
    config.seed = seed;
    config.threads = opts.threads;
    config.svm = model.svm.params;
    const Dataset dataset = extract_features(data.corpus, data.index, config);
    const EvaluationReport report =
        evaluate_with_models(dataset, model.svm, model.threshold, config);
    emit(opts, opts.as_json ? report_to_json(report) : report_to_text(report));
    return 0;
}

int run_synth(const CommonOpts& opts, const SynthConfig& cfg) {
    const std::vector<ChangeEvent> events = generate_community(cfg);
    std::ostringstream out;
    serialize_events(out, events);
    emit(opts, out.str());
    return 0;
}

int run_dump_network(const CommonOpts& opts, const std::string& start, const std::string& end) {
    const auto start_ts = parse_instant(start);
    const auto end_ts = parse_instant(end);
    if (!start_ts || !end_ts || *start_ts >= *end_ts) {
        throw Error(Errc::InvalidConfig, "--start/--end must be ISO instants with start < end");
    }
    const LoadedCorpus data = load(opts);
    const TimeInterval window{*start_ts, *end_ts};
    const CollaborationNetwork net = build_window_network(data.index.slice(window), window);
    std::ostringstream out;
    dump_network(out, net);
    emit(opts, out.str());
    return 0;
}

int run_dump_features(const CommonOpts& opts, int window_days) {
    const LoadedCorpus data = load(opts);
    PipelineConfig config;
    config.window_days = window_days;
    config.threads = opts.threads;
    std::ostringstream out;
    dump_features_csv(out, data.corpus, data.index, config);
    emit(opts, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaboration-network analytics over bug tracker event histories"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    CommonOpts stats_opts;
    auto* cmd_stats = app.add_subcommand("stats", "corpus statistics");
    add_common(cmd_stats, stats_opts);
    cmd_stats->add_flag("--json", stats_opts.as_json, "machine-readable output");

    CommonOpts hyp_opts;
    double alpha = 0.05;
    int hyp_window_days = 30;
    bool exclude_absent = false;
    auto* cmd_hyp = app.add_subcommand("hypotheses", "rank-sum hypothesis suite");
    add_common(cmd_hyp, hyp_opts);
    cmd_hyp->add_flag("--csv,--json", hyp_opts.as_json, "CSV output");
    cmd_hyp->add_option("--alpha", alpha, "significance threshold")->check(CLI::PositiveNumber);
    cmd_hyp->add_option("--window-days", hyp_window_days, "window length in days")
        ->check(CLI::PositiveNumber);
    cmd_hyp->add_flag("--exclude-absent", exclude_absent,
                      "drop reporters absent from the window instead of scoring 0");

    CommonOpts train_opts;
    int train_window_days = 30;
    std::uint64_t train_seed = 1;
    double fraction = 0.05;
    std::string target = "auto";
    std::string model_path;
    SvmParams svm;
    std::string kernel_name = "rbf";
    auto* cmd_train = app.add_subcommand("train", "tune and train the classifiers");
    add_common(cmd_train, train_opts);
    cmd_train->add_option("--model", model_path, "model output path")->required();
    cmd_train->add_option("--window-days", train_window_days)->check(CLI::PositiveNumber);
    cmd_train->add_option("--seed", train_seed, "split/training seed");
    cmd_train->add_option("--train-fraction", fraction)->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd_train->add_option("--target", target, "target class: auto|valid|faulty")
        ->check(CLI::IsMember({"auto", "valid", "faulty"}));
    cmd_train->add_option("--svm-c", svm.c, "soft-margin penalty C");
    cmd_train->add_option("--svm-gamma", svm.gamma, "RBF gamma");
    cmd_train->add_option("--svm-kernel", kernel_name)->check(CLI::IsMember({"rbf", "linear"}));
    cmd_train->add_option("--svm-tol", svm.tol, "SMO KKT tolerance");
    cmd_train->add_option("--svm-max-passes", svm.max_passes)->check(CLI::PositiveNumber);

    CommonOpts eval_opts;
    std::uint64_t eval_seed = 1;
    std::string eval_model_path;
    auto* cmd_eval = app.add_subcommand("evaluate", "evaluate a trained model");
    add_common(cmd_eval, eval_opts);
    cmd_eval->add_option("--model", eval_model_path, "model file from train")->required();
    cmd_eval->add_option("--seed", eval_seed, "split seed (must match training)");
    cmd_eval->add_flag("--json", eval_opts.as_json, "machine-readable report");

    CommonOpts synth_opts;
    SynthConfig synth_cfg;
    auto* cmd_synth = app.add_subcommand("synth", "generate a planted-signal event stream");
    add_common(cmd_synth, synth_opts, /*needs_events=*/false);
    cmd_synth->add_option("--users", synth_cfg.n_users)->check(CLI::PositiveNumber);
    cmd_synth->add_option("--bugs", synth_cfg.n_bugs)->check(CLI::PositiveNumber);
    cmd_synth->add_option("--months", synth_cfg.months)->check(CLI::PositiveNumber);
    cmd_synth->add_option("--core-fraction", synth_cfg.core_fraction);
    cmd_synth->add_option("--p-core-valid", synth_cfg.p_core_valid);
    cmd_synth->add_option("--p-peripheral-valid", synth_cfg.p_peripheral_valid);
    cmd_synth->add_option("--interactions", synth_cfg.interactions_per_month);
    cmd_synth->add_option("--mix-dup", synth_cfg.mix_dup);
    cmd_synth->add_option("--mix-inv", synth_cfg.mix_inv);
    cmd_synth->add_option("--mix-inc", synth_cfg.mix_inc);
    cmd_synth->add_option("--seed", synth_cfg.seed);

    CommonOpts dumpnet_opts;
    std::string start_iso, end_iso;
    auto* cmd_dumpnet = app.add_subcommand("dump-network", "edge list of one window");
    add_common(cmd_dumpnet, dumpnet_opts);
    cmd_dumpnet->add_option("--start", start_iso, "window start (ISO, inclusive)")->required();
    cmd_dumpnet->add_option("--end", end_iso, "window end (ISO, exclusive)")->required();

    CommonOpts dumpfeat_opts;
    int feat_window_days = 30;
    auto* cmd_dumpfeat = app.add_subcommand("dump-features", "per-bug feature CSV");
    add_common(cmd_dumpfeat, dumpfeat_opts);
    cmd_dumpfeat->add_option("--window-days", feat_window_days)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_stats->parsed()) return run_stats(stats_opts);
        if (cmd_hyp->parsed()) {
            return run_hypotheses(hyp_opts, alpha, hyp_window_days, exclude_absent);
        }
        if (cmd_train->parsed()) {
            svm.kernel = kernel_name == "linear" ? SvmKernel::Linear : SvmKernel::Rbf;
            return run_train(train_opts,
                             make_config(train_opts, train_window_days, train_seed, fraction,
                                         target, svm),
                             model_path);
        }
        if (cmd_eval->parsed()) return run_evaluate(eval_opts, eval_seed, eval_model_path);
        if (cmd_synth->parsed()) return run_synth(synth_opts, synth_cfg);
        if (cmd_dumpnet->parsed()) return run_dump_network(dumpnet_opts, start_iso, end_iso);
        if (cmd_dumpfeat->parsed()) return run_dump_features(dumpfeat_opts, feat_window_days);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case Errc::Io:
            case Errc::MalformedLine:
            case Errc::InvalidConfig:
                return 2;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
