#include "bugnet/evaluate.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "bugnet/error.hpp"
#include "bugnet/metrics.hpp"
#include "bugnet/parallel.hpp"
#include "bugnet/rng.hpp"

namespace bugnet {

using nlohmann::json;

Confusion confusion(std::span<const Label> predictions, std::span<const Label> labels,
                    Label target) {
    if (predictions.size() != labels.size() || predictions.empty()) {
        throw Error(Errc::LengthMismatch, "predictions and labels must have equal length >= 1");
    }
    Confusion c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool predicted = predictions[i] == target;
        const bool actual = labels[i] == target;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

Prf precision_recall_f(const Confusion& c) {
    Prf out;
    if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / (c.tp + c.fp);
    if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / (c.tp + c.fn);
    if (out.precision + out.recall > 0) {
        out.f_score = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

namespace {

/// Rows for every resolved bug (labeled or not), ordered by bug id.
Dataset features_for_resolved(const Corpus& corpus, const WindowIndex& index,
                              const PipelineConfig& config) {
    std::vector<const BugRecord*> bugs;
    for (const auto& [bug_id, record] : corpus) {
        if (record.resolved) bugs.push_back(&record);
    }
    Dataset data;
    data.community = config.community;
    data.rows.resize(bugs.size());
    parallel_for(bugs.size(), config.threads, [&](std::size_t i) {
        const BugRecord& record = *bugs[i];
        const TimeInterval window = preceding_window(record.created_at, config.window_days);
        const CollaborationNetwork net = build_window_network(index.slice(window), window);
        const LccMetricsTable table =
            compute_lcc_metrics(net, /*evcent_only=*/false, config.tolerance, config.max_iter);
        data.rows[i] = {record.bug_id, feature_vector(net, table, record.reporter_id),
                        record.label};
    });
    return data;
}

ClassifierEval evaluate_predictions(const std::vector<Label>& preds,
                                    const std::vector<Label>& labels, Label target) {
    ClassifierEval out;
    out.counts = confusion(preds, labels, target);
    out.scores = precision_recall_f(out.counts);
    return out;
}

}  // namespace

Dataset extract_features(const Corpus& corpus, const WindowIndex& index,
                         const PipelineConfig& config) {
    Dataset all = features_for_resolved(corpus, index, config);
    Dataset labeled;
    labeled.community = all.community;
    for (auto& row : all.rows) {
        if (row.label != Label::Unlabeled) labeled.rows.push_back(std::move(row));
    }
    return labeled;
}

EvaluationReport evaluate_with_models(const Dataset& data, const SvmModel& svm,
                                      const ThresholdModel& threshold,
                                      const PipelineConfig& config) {
    auto [train, eval] = split_train_eval(data, config.train_fraction, config.seed);
    const Label target = svm.target;

    std::vector<Label> labels;
    labels.reserve(eval.rows.size());
    for (const auto& row : eval.rows) labels.push_back(row.label);

    std::vector<Label> baseline(eval.rows.size(), target);
    std::vector<Label> lcc_preds, ev_preds, svm_preds;
    lcc_preds.reserve(eval.rows.size());
    ev_preds.reserve(eval.rows.size());
    svm_preds.reserve(eval.rows.size());
    for (const auto& row : eval.rows) {
        lcc_preds.push_back(lcc_classify(row.metrics));
        ev_preds.push_back(evcent_classify(row.metrics, threshold));
        svm_preds.push_back(svm_classify(row.metrics, svm).first);
    }

    EvaluationReport report;
    report.community = data.community;
    report.target = target;
    report.config = config;
    report.train_rows = train.rows.size();
    report.eval_rows = eval.rows.size();
    report.svm_converged = svm.converged;
    std::size_t target_count = 0;
    for (Label l : labels) {
        if (l == target) ++target_count;
    }
    report.base_rate = labels.empty() ? 0.0
                                      : static_cast<double>(target_count) /
                                            static_cast<double>(labels.size());
    report.baseline = evaluate_predictions(baseline, labels, target);
    report.lcc = evaluate_predictions(lcc_preds, labels, target);
    report.evcent = evaluate_predictions(ev_preds, labels, target);
    report.svm = evaluate_predictions(svm_preds, labels, target);
    return report;
}

EvaluationReport evaluate_pipeline(const Corpus& corpus, const WindowIndex& index,
                                   const PipelineConfig& config) {
    const Dataset data = extract_features(corpus, index, config);
    const Label target = select_target_class(data, config.target_mode);
    auto [train, eval] = split_train_eval(data, config.train_fraction, config.seed);
    const ThresholdModel threshold = tune_threshold(train, config.percentile_grid);
    const SvmModel svm = train_svm(train, target, config.svm, Rng::derive(config.seed, 1));
    return evaluate_with_models(data, svm, threshold, config);
}

namespace {

json eval_to_json(const ClassifierEval& e) {
    return {{"tp", e.counts.tp},
            {"fp", e.counts.fp},
            {"tn", e.counts.tn},
            {"fn", e.counts.fn},
            {"precision", e.scores.precision},
            {"recall", e.scores.recall},
            {"f_score", e.scores.f_score}};
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
    json j;
    j["community"] = report.community;
    j["target"] = label_name(report.target);
    j["base_rate"] = report.base_rate;
    j["train_rows"] = report.train_rows;
    j["eval_rows"] = report.eval_rows;
    j["svm_converged"] = report.svm_converged;
    j["classifiers"] = {{"baseline", eval_to_json(report.baseline)},
                        {"lcc", eval_to_json(report.lcc)},
                        {"evcent", eval_to_json(report.evcent)},
                        {"svm", eval_to_json(report.svm)}};
    j["config"] = {{"window_days", report.config.window_days},
                   {"seed", report.config.seed},
                   {"train_fraction", report.config.train_fraction},
                   {"svm_c", report.config.svm.c},
                   {"svm_gamma", report.config.svm.gamma},
                   {"svm_kernel", report.config.svm.kernel == SvmKernel::Rbf ? "rbf" : "linear"},
                   {"svm_tol", report.config.svm.tol},
                   {"svm_max_passes", report.config.svm.max_passes}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const EvaluationReport& report) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "Community: %s   target class: %s   (train %zu, eval %zu)\n",
                  report.community.c_str(), label_name(report.target), report.train_rows,
                  report.eval_rows);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %8s\n", "", "precision", "recall", "F");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %9.1f%% %9.1f%% %8s\n", label_name(report.target),
                  report.base_rate * 100.0, 100.0, "-");
    out += buf;
    const auto line = [&](const char* name, const ClassifierEval& e) {
        std::snprintf(buf, sizeof(buf), "%-10s %9.1f%% %9.1f%% %8.2f\n", name,
                      e.scores.precision * 100.0, e.scores.recall * 100.0, e.scores.f_score);
        out += buf;
    };
    line("LCC", report.lcc);
    line("evcent", report.evcent);
    line("SVM", report.svm);
    if (!report.svm_converged) out += "note: SVM training did not converge\n";
    return out;
}

void dump_features_csv(std::ostream& out, const Corpus& corpus, const WindowIndex& index,
                       const PipelineConfig& config) {
    const Dataset data = features_for_resolved(corpus, index, config);
    out << "bug_id,reporter_id,in_lcc,evcent,betweenness,closeness,clustering,coreness,"
           "deg_in,deg_out,deg_total,label\n";
    char buf[64];
    auto real = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (const auto& row : data.rows) {
        const auto& record = corpus.at(row.bug_id);
        const NodeMetrics& m = row.metrics;
        out << row.bug_id << ',' << record.reporter_id << ',' << (m.in_lcc ? 1 : 0) << ','
            << real(m.eigenvector) << ',' << real(m.betweenness) << ',' << real(m.closeness)
            << ',' << real(m.clustering) << ',' << m.coreness << ',' << m.degree_in << ','
            << m.degree_out << ',' << m.degree_total << ',' << label_name(row.label) << '\n';
    }
}

}  // namespace bugnet
