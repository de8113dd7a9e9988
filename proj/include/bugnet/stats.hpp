#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bugnet/events.hpp"
#include "bugnet/network.hpp"

namespace bugnet {

/// Distribution of reporter eigenvector centralities for one resolution
/// category, in the window preceding (phase 1) or following (phase 2) each
/// report.
struct Sample {
    std::vector<double> values;
    Category category = Category::Fix;
    int phase = 1;
};

enum class Alternative { Greater, Less, TwoSided };
enum class TestMethod { Exact, NormalApprox };

const char* alternative_symbol(Alternative a);  // ">", "<", "!="

struct TestResult {
    Alternative alternative = Alternative::TwoSided;
    double p_value = 1.0;
    double u_statistic = 0.0;  // U of the first sample, midranks on ties
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool significant = false;  // p_value < alpha
    double alpha = 0.05;
    TestMethod method = TestMethod::NormalApprox;
};

/// Wilcoxon-Mann-Whitney rank-sum test. Alternative Greater tests that A is
/// stochastically larger than B. The p-value is exact (count-distribution
/// recurrence over all rank assignments) for tie-free samples with both
/// sizes <= 20, and otherwise uses the normal approximation with
/// tie-corrected variance and continuity correction 0.5. When the variance
/// degenerates (all values identical) p is 1 by convention.
/// Throws Error(EmptySample) when either sample is empty.
TestResult wmw_test(std::span<const double> a, std::span<const double> b, Alternative alternative,
                    double alpha = 0.05);

struct SampleOptions {
    int window_days = 30;
    /// When false, reporters absent from the window network or outside its
    /// LCC are dropped instead of contributing 0.
    bool include_absent_as_zero = true;
    int threads = 1;
    double tolerance = 1e-10;
    int max_iter = 10000;
};

/// Eigenvector centralities of the reporters of all resolved bugs in
/// `category`, measured in the preceding (phase 1) or following (phase 2)
/// window of each report.
Sample reporter_centrality_sample(const Corpus& corpus, const WindowIndex& index,
                                  Category category, int phase, const SampleOptions& opts = {});

struct HypothesisRow {
    std::string hypothesis;   // "H1", "H2", "H3"
    std::string comparison;   // e.g. "FIX1~DUP1"
    std::string alternative;  // ">", "<", "!=" or "-" for insufficient data
    double p_value = 1.0;
    bool accepted = false;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool insufficient = false;  // one side has no samples
};

/// Runs the full comparison suite: FIX1~FIX2 (H1), DUP1~DUP2 and INV1~INV2
/// (H2), FIX1 against WOF1/DUP1/INV1/INC1 (H3). Each row evaluates both
/// one-sided alternatives and the two-sided one; the row reports the
/// minimal-p accepted alternative at `alpha`, or the two-sided p with
/// accepted=false when the null is retained.
std::vector<HypothesisRow> hypothesis_suite(const Corpus& corpus, const WindowIndex& index,
                                            double alpha = 0.05, const SampleOptions& opts = {});

void render_hypotheses_csv(std::ostream& out, const std::vector<HypothesisRow>& rows);
void render_hypotheses_text(std::ostream& out, const std::vector<HypothesisRow>& rows);

}  // namespace bugnet
