#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bugnet/classify.hpp"
#include "bugnet/events.hpp"
#include "bugnet/network.hpp"

namespace bugnet {

struct Confusion {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

/// Counts relative to `target`. Throws Error(LengthMismatch) on unequal or
/// empty inputs.
Confusion confusion(std::span<const Label> predictions, std::span<const Label> labels,
                    Label target);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// Zero-denominator cases yield 0 by convention.
Prf precision_recall_f(const Confusion& c);

struct PipelineConfig {
    std::string community = "community";
    int window_days = 30;
    std::uint64_t seed = 1;
    double train_fraction = 0.05;
    TargetMode target_mode = TargetMode::Auto;
    SvmParams svm;
    std::vector<double> percentile_grid = kDefaultPercentileGrid;
    int threads = 1;
    double tolerance = 1e-10;
    int max_iter = 10000;
};

struct ClassifierEval {
    Confusion counts;
    Prf scores;
};

struct EvaluationReport {
    std::string community;
    Label target = Label::Valid;
    double base_rate = 0.0;  // fraction of eval rows with the target label
    ClassifierEval baseline;  // always predicts the target class
    ClassifierEval lcc;
    ClassifierEval evcent;
    ClassifierEval svm;
    bool svm_converged = false;
    std::size_t train_rows = 0;
    std::size_t eval_rows = 0;
    PipelineConfig config;
};

/// Preceding-window nine-feature vectors for every resolved, labeled bug.
/// Rows are ordered by bug id and independent of the thread count.
Dataset extract_features(const Corpus& corpus, const WindowIndex& index,
                         const PipelineConfig& config);

/// End to end: features, split, tune/train, evaluate all three classifiers
/// (plus the all-target baseline) on the held-out rows.
EvaluationReport evaluate_pipeline(const Corpus& corpus, const WindowIndex& index,
                                   const PipelineConfig& config);

/// Applies already-trained models to the eval half of the stored split.
EvaluationReport evaluate_with_models(const Dataset& data, const SvmModel& svm,
                                      const ThresholdModel& threshold,
                                      const PipelineConfig& config);

std::string report_to_json(const EvaluationReport& report);
std::string report_to_text(const EvaluationReport& report);

/// CSV feature dump: one row per resolved bug, reals with 12 significant
/// digits.
void dump_features_csv(std::ostream& out, const Corpus& corpus, const WindowIndex& index,
                       const PipelineConfig& config);

}  // namespace bugnet
