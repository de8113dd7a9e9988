#include "bugnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bugnet/error.hpp"
#include "bugnet/metrics.hpp"
#include "bugnet/parallel.hpp"

namespace bugnet {

const char* alternative_symbol(Alternative a) {
    switch (a) {
        case Alternative::Greater: return ">";
        case Alternative::Less: return "<";
        case Alternative::TwoSided: return "!=";
    }
    return "?";
}

namespace {

struct RankInfo {
    double u_a = 0.0;        // U statistic of sample A, midranks on ties
    bool has_ties = false;
    double tie_term = 0.0;   // sum of t^3 - t over tie groups
};

RankInfo rank_statistics(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, int>> pooled;  // (value, 0 for A / 1 for B)
    pooled.reserve(n);
    for (double x : a) pooled.emplace_back(x, 0);
    for (double x : b) pooled.emplace_back(x, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });

    RankInfo info;
    double rank_sum_a = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const std::size_t t = j - i;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second == 0) rank_sum_a += midrank;
        }
        if (t > 1) {
            info.has_ties = true;
            info.tie_term += static_cast<double>(t) * t * t - static_cast<double>(t);
        }
        i = j;
    }
    const double na = static_cast<double>(a.size());
    info.u_a = rank_sum_a - na * (na + 1.0) / 2.0;
    return info;
}

/// Null distribution of U for sample sizes (n, m) without ties: counts[u] is
/// the number of rank assignments with U == u. Recurrence on the top-ranked
/// element: ways(a, b, u) = ways(a-1, b, u-b) + ways(a, b-1, u). All counts
/// are integers below 2^53 for n, m <= 20, so sums over them are exact in
/// double regardless of summation order.
std::vector<double> exact_u_counts(std::size_t n, std::size_t m) {
    const std::size_t umax = n * m;
    // T[a][u] holds ways(a, b, u); b advances in the outer loop, updating in
    // place (T[a-1] is already at b, T[a][u] itself still at b-1).
    std::vector<std::vector<double>> t(n + 1, std::vector<double>(umax + 1, 0.0));
    for (std::size_t a = 0; a <= n; ++a) t[a][0] = 1.0;
    for (std::size_t b = 1; b <= m; ++b) {
        for (std::size_t a = 1; a <= n; ++a) {
            for (std::size_t u = b; u <= umax; ++u) {
                t[a][u] += t[a - 1][u - b];
            }
        }
    }
    return t[n];
}

double normal_sf(double z) {
    // Upper tail of the standard normal via erfc.
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

TestResult wmw_test(std::span<const double> a, std::span<const double> b, Alternative alternative,
                    double alpha) {
    if (a.empty() || b.empty()) {
        throw Error(Errc::EmptySample, "both samples must be non-empty");
    }
    const RankInfo info = rank_statistics(a, b);
    const std::size_t na = a.size(), nb = b.size();

    TestResult result;
    result.alternative = alternative;
    result.u_statistic = info.u_a;
    result.n_a = na;
    result.n_b = nb;
    result.alpha = alpha;

    double p_greater, p_less;
    if (!info.has_ties && na <= 20 && nb <= 20) {
        result.method = TestMethod::Exact;
        const std::vector<double> counts = exact_u_counts(na, nb);
        double total = 0.0;
        for (double c : counts) total += c;
        const std::size_t u = static_cast<std::size_t>(std::llround(info.u_a));
        double ge = 0.0, le = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (k >= u) ge += counts[k];
            if (k <= u) le += counts[k];
        }
        p_greater = ge / total;
        p_less = le / total;
    } else {
        result.method = TestMethod::NormalApprox;
        const double nn = static_cast<double>(na + nb);
        const double mean = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
        const double variance = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                                ((nn + 1.0) - info.tie_term / (nn * (nn - 1.0)));
        if (variance <= 0.0) {
            // All pooled values identical: no evidence either way.
            result.p_value = 1.0;
            result.significant = false;
            return result;
        }
        const double sd = std::sqrt(variance);
        p_greater = normal_sf((info.u_a - mean - 0.5) / sd);
        p_less = normal_sf(-(info.u_a - mean + 0.5) / sd);
    }

    switch (alternative) {
        case Alternative::Greater: result.p_value = p_greater; break;
        case Alternative::Less: result.p_value = p_less; break;
        case Alternative::TwoSided:
            result.p_value = std::min(1.0, 2.0 * std::min(p_greater, p_less));
            break;
    }
    result.significant = result.p_value < alpha;
    return result;
}

Sample reporter_centrality_sample(const Corpus& corpus, const WindowIndex& index,
                                  Category category, int phase, const SampleOptions& opts) {
    Sample sample;
    sample.category = category;
    sample.phase = phase;

    std::vector<const BugRecord*> bugs;
    for (const auto& [bug_id, record] : corpus) {
        if (record.resolved && record.category == category) bugs.push_back(&record);
    }

    std::vector<double> values(bugs.size(), 0.0);
    std::vector<char> present(bugs.size(), 0);
    parallel_for(bugs.size(), opts.threads, [&](std::size_t i) {
        const BugRecord& record = *bugs[i];
        const TimeInterval window = phase == 1
                                        ? preceding_window(record.created_at, opts.window_days)
                                        : following_window(record.created_at, opts.window_days);
        const CollaborationNetwork net = build_window_network(index.slice(window), window);
        const int node = net.find_node(record.reporter_id);
        if (net.in_lcc(node)) {
            const LccMetricsTable table =
                compute_lcc_metrics(net, /*evcent_only=*/true, opts.tolerance, opts.max_iter);
            values[i] = table.evcent.values[table.to_subgraph.at(node)];
            present[i] = 1;
        }
    });
    for (std::size_t i = 0; i < bugs.size(); ++i) {
        if (present[i] || opts.include_absent_as_zero) sample.values.push_back(values[i]);
    }
    return sample;
}

namespace {

HypothesisRow run_row(const std::string& hypothesis, const std::string& comparison,
                      const Sample& a, const Sample& b, double alpha) {
    HypothesisRow row;
    row.hypothesis = hypothesis;
    row.comparison = comparison;
    row.n_a = a.values.size();
    row.n_b = b.values.size();
    if (a.values.empty() || b.values.empty()) {
        row.insufficient = true;
        row.alternative = "-";
        return row;
    }
    const TestResult greater = wmw_test(a.values, b.values, Alternative::Greater, alpha);
    const TestResult less = wmw_test(a.values, b.values, Alternative::Less, alpha);
    const TestResult two = wmw_test(a.values, b.values, Alternative::TwoSided, alpha);
    const TestResult& one_sided = greater.p_value <= less.p_value ? greater : less;
    if (one_sided.significant) {
        row.alternative = alternative_symbol(one_sided.alternative);
        row.p_value = one_sided.p_value;
        row.accepted = true;
    } else if (two.significant) {
        row.alternative = alternative_symbol(Alternative::TwoSided);
        row.p_value = two.p_value;
        row.accepted = true;
    } else {
        row.alternative = alternative_symbol(Alternative::TwoSided);
        row.p_value = two.p_value;
        row.accepted = false;
    }
    return row;
}

}  // namespace

std::vector<HypothesisRow> hypothesis_suite(const Corpus& corpus, const WindowIndex& index,
                                            double alpha, const SampleOptions& opts) {
    auto sample = [&](Category c, int phase) {
        return reporter_centrality_sample(corpus, index, c, phase, opts);
    };
    const Sample fix1 = sample(Category::Fix, 1);
    const Sample fix2 = sample(Category::Fix, 2);
    const Sample dup1 = sample(Category::Dup, 1);
    const Sample dup2 = sample(Category::Dup, 2);
    const Sample inv1 = sample(Category::Inv, 1);
    const Sample inv2 = sample(Category::Inv, 2);
    const Sample wof1 = sample(Category::Wof, 1);
    const Sample inc1 = sample(Category::Inc, 1);

    std::vector<HypothesisRow> rows;
    rows.push_back(run_row("H1", "FIX1~FIX2", fix1, fix2, alpha));
    rows.push_back(run_row("H2", "DUP1~DUP2", dup1, dup2, alpha));
    rows.push_back(run_row("H2", "INV1~INV2", inv1, inv2, alpha));
    rows.push_back(run_row("H3", "FIX1~WOF1", fix1, wof1, alpha));
    rows.push_back(run_row("H3", "FIX1~DUP1", fix1, dup1, alpha));
    rows.push_back(run_row("H3", "FIX1~INV1", fix1, inv1, alpha));
    rows.push_back(run_row("H3", "FIX1~INC1", fix1, inc1, alpha));
    return rows;
}

void render_hypotheses_csv(std::ostream& out, const std::vector<HypothesisRow>& rows) {
    out << "hypothesis,comparison,alternative,p_value,accepted,n_a,n_b\n";
    char buf[64];
    for (const auto& row : rows) {
        if (row.insufficient) {
            out << row.hypothesis << ',' << row.comparison << ",-,," << "false" << ',' << row.n_a
                << ',' << row.n_b << '\n';
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%.6g", row.p_value);
        out << row.hypothesis << ',' << row.comparison << ',' << row.alternative << ',' << buf
            << ',' << (row.accepted ? "true" : "false") << ',' << row.n_a << ',' << row.n_b
            << '\n';
    }
}

void render_hypotheses_text(std::ostream& out, const std::vector<HypothesisRow>& rows) {
    out << "Hypothesis  Comparison    Result\n";
    char buf[128];
    for (const auto& row : rows) {
        if (row.insufficient) {
            std::snprintf(buf, sizeof(buf), "%-11s %-13s (-)(-)  (%zu, %zu)\n",
                          row.hypothesis.c_str(), row.comparison.c_str(), row.n_a, row.n_b);
        } else {
            std::snprintf(buf, sizeof(buf), "%-11s %-13s %-2s p=%.4g%s  (%zu, %zu)\n",
                          row.hypothesis.c_str(), row.comparison.c_str(),
                          row.alternative.c_str(), row.p_value, row.accepted ? " (*)" : "",
                          row.n_a, row.n_b);
        }
        out << buf;
    }
}

}  // namespace bugnet
