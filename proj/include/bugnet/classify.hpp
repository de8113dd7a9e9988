#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bugnet/events.hpp"
#include "bugnet/metrics.hpp"

namespace bugnet {

inline constexpr int kFeatureCount = 9;
using FeatureArray = std::array<double, kFeatureCount>;

/// Canonical feature order: in_lcc (0/1), eigenvector, betweenness,
/// closeness, clustering, coreness, degree_in, degree_out, degree_total.
FeatureArray to_feature_array(const NodeMetrics& m);

extern const std::array<const char*, kFeatureCount> kFeatureNames;

struct DataRow {
    std::string bug_id;
    NodeMetrics metrics;
    Label label = Label::Unlabeled;
};

struct Dataset {
    std::vector<DataRow> rows;
    std::string community;
};

/// ceil(fraction * n) rows drawn uniformly without replacement form the
/// training set; both halves keep the original row order. Deterministic for
/// a fixed seed. Throws Error(EmptyDataset) on empty input.
std::pair<Dataset, Dataset> split_train_eval(const Dataset& data, double fraction,
                                             std::uint64_t seed);

/// Valid iff the reporter sits in the preceding window's LCC.
Label lcc_classify(const NodeMetrics& m);

struct ThresholdModel {
    double percentile = 50.0;
    double threshold = 0.0;  // q-th percentile of training LCC members' scores
};

inline const std::vector<double> kDefaultPercentileGrid = {50, 55, 60, 65, 70,
                                                           75, 80, 85, 90, 95};

/// Linear-interpolation percentile of a sample (same convention as R type 7).
double percentile(std::vector<double> values, double q);

/// Picks the grid percentile whose threshold maximizes the F-score of
/// evcent_classify on the training rows (for predicting Valid); ties go to
/// the smaller percentile. Throws Error(NoLccMembers) when no training row
/// is in the LCC.
ThresholdModel tune_threshold(const Dataset& train,
                              std::span<const double> grid = kDefaultPercentileGrid);

/// Valid iff in the LCC and eigenvector score >= threshold.
Label evcent_classify(const NodeMetrics& m, const ThresholdModel& model);

struct StandardizationStats {
    FeatureArray mean{};
    FeatureArray stddev{};  // population std; 0 marks a constant feature

    /// (x - mean) / std per feature; constant features map to 0.
    FeatureArray apply(const FeatureArray& x) const;
};

StandardizationStats compute_standardization(std::span<const DataRow> rows);

enum class SvmKernel { Rbf, Linear };

struct SvmParams {
    SvmKernel kernel = SvmKernel::Rbf;
    double c = 1.0;
    double gamma = 1.0 / kFeatureCount;
    double tol = 1e-3;
    int max_passes = 1000;
};

/// Soft-margin SVM trained by sequential minimal optimization over the
/// standardized nine-feature vectors. Support vectors are stored in
/// feature-major (structure-of-arrays) layout so kernel rows vectorize.
struct SvmModel {
    SvmParams params;
    StandardizationStats stats;
    Label target = Label::Valid;
    std::uint64_t seed = 0;
    bool converged = false;
    double bias = 0.0;
    std::vector<double> coeff;  // alpha_i * y_i per support vector
    std::array<std::vector<double>, kFeatureCount> support;  // standardized, feature-major

    std::size_t support_count() const { return coeff.size(); }
};

/// Throws Error(SingleClassTraining) when only one label is present. A run
/// that exhausts max_passes returns the best-effort model with
/// converged=false rather than throwing.
SvmModel train_svm(const Dataset& train, Label target, const SvmParams& params,
                   std::uint64_t seed);

/// Decision value and label: target class iff the margin is strictly
/// positive.
std::pair<Label, double> svm_classify(const NodeMetrics& m, const SvmModel& model);

enum class TargetMode { Valid, Faulty, Auto };

/// Auto picks the minority class by label frequency; ties go to Valid.
Label select_target_class(const Dataset& data, TargetMode mode);

std::string save_model_json(const SvmModel& svm, const ThresholdModel& threshold, int window_days,
                            double train_fraction);

struct ModelFile {
    SvmModel svm;
    ThresholdModel threshold;
    int window_days = 30;
    double train_fraction = 0.05;
};

ModelFile load_model_json(const std::string& text);

}  // namespace bugnet
