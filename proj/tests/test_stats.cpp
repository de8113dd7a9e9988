#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bugnet/error.hpp"
#include "bugnet/rng.hpp"
#include "bugnet/stats.hpp"
#include "bugnet/synth.hpp"

#include "oracles.hpp"

using namespace bugnet;

TEST_CASE("wmw exact: {1,2} vs {3,4} one-sided less is 1/6") {
    const std::vector<double> a{1, 2}, b{3, 4};
    const TestResult r = wmw_test(a, b, Alternative::Less);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.u_statistic == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK_FALSE(r.significant);
}

TEST_CASE("wmw on identical multisets: two-sided p is 1") {
    const std::vector<double> a{1, 2, 5, 5}, b{1, 2, 5, 5};
    const TestResult r = wmw_test(a, b, Alternative::TwoSided);
    CHECK(r.method == TestMethod::NormalApprox);  // ties force the approximation
    CHECK(r.p_value == 1.0);

    const std::vector<double> c{3, 3, 3}, d{3, 3, 3};
    CHECK(wmw_test(c, d, Alternative::Greater).p_value == 1.0);  // zero variance
}

TEST_CASE("wmw antisymmetry: greater(A,B) equals less(B,A) exactly") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t na = 1 + rng.index(25), nb = 1 + rng.index(25);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.unit());
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.unit());
        if (trial % 3 == 0 && !a.empty() && !b.empty()) b[0] = a[0];  // inject a tie
        const TestResult g = wmw_test(a, b, Alternative::Greater);
        const TestResult l = wmw_test(b, a, Alternative::Less);
        CHECK(g.p_value == l.p_value);
        CHECK(g.method == l.method);
    }
}

TEST_CASE("wmw empty sample is an error") {
    const std::vector<double> a{1.0}, empty;
    CHECK_THROWS_AS((void)wmw_test(a, empty, Alternative::Greater), Error);
    CHECK_THROWS_AS((void)wmw_test(empty, a, Alternative::Less), Error);
}

TEST_CASE("wmw exact path equals full enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t na = 1 + rng.index(8), nb = 1 + rng.index(8);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.unit());
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.unit());
        const oracle::WmwEnumeration expected = oracle::wmw_enumerate(a, b);
        const TestResult g = wmw_test(a, b, Alternative::Greater);
        const TestResult l = wmw_test(a, b, Alternative::Less);
        REQUIRE(g.method == TestMethod::Exact);
        CHECK(std::fabs(g.p_value - expected.p_greater) <= 1e-12);
        CHECK(std::fabs(l.p_value - expected.p_less) <= 1e-12);
    }
}

TEST_CASE("wmw exact and approximate p agree for tie-free samples") {
    Rng rng(13);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t na = 5 + rng.index(8), nb = 5 + rng.index(8);  // 5..12
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.unit());
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.unit() + 0.1);
        const TestResult exact = wmw_test(a, b, Alternative::Greater);
        REQUIRE(exact.method == TestMethod::Exact);

        // Same data with one sample blown past the exact-size cutoff is not
        // possible without changing it, so compare against the approximation
        // formula directly by replaying through a size-25 padding-free path:
        // instead, check the documented invariant via the two-sided value.
        const TestResult exact_two = wmw_test(a, b, Alternative::TwoSided);
        // normal approximation of the identical data
        const double mean = static_cast<double>(na * nb) / 2.0;
        const double var = static_cast<double>(na * nb) *
                           static_cast<double>(na + nb + 1) / 12.0;
        const double z = (exact.u_statistic - mean - 0.5) / std::sqrt(var);
        const double p_approx = 0.5 * std::erfc(z / std::sqrt(2.0));
        CHECK(std::fabs(exact.p_value - p_approx) <= 0.02);
        CHECK(exact_two.p_value <= 1.0);
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("wmw exact path at the 20x20 size boundary") {
    std::vector<double> a, b;
    Rng rng(29);
    for (int i = 0; i < 20; ++i) a.push_back(rng.unit());
    for (int i = 0; i < 20; ++i) b.push_back(rng.unit());
    const TestResult r = wmw_test(a, b, Alternative::Greater);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(wmw_test(b, a, Alternative::Less).p_value == r.p_value);

    // one more value on either side drops to the normal approximation
    a.push_back(rng.unit());
    CHECK(wmw_test(a, b, Alternative::Greater).method == TestMethod::NormalApprox);
}

TEST_CASE("wmw null rejection rate sits near alpha") {
    Rng rng(17);
    int rejections = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> a, b;
        for (int i = 0; i < 15; ++i) a.push_back(rng.unit());
        for (int i = 0; i < 15; ++i) b.push_back(rng.unit());
        if (wmw_test(a, b, Alternative::TwoSided).significant) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / trials;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("monotone shift weakly decreases p for alternative greater") {
    Rng rng(19);
    std::vector<double> a, b;
    for (int i = 0; i < 18; ++i) a.push_back(rng.unit());
    for (int i = 0; i < 16; ++i) b.push_back(rng.unit());
    double last = 1.0;
    for (double shift : {0.0, 0.05, 0.1, 0.3, 0.8}) {
        std::vector<double> shifted = a;
        for (double& x : shifted) x += shift;
        const double p = wmw_test(shifted, b, Alternative::Greater).p_value;
        CHECK(p <= last + 1e-15);
        last = p;
    }
}

namespace {

/// Small hand corpus: two FIX bugs whose reporter is a star center in the
/// preceding window, and one DUP bug from an isolated reporter.
struct TinyWorld {
    std::vector<ChangeEvent> events;
    Corpus corpus;

    TinyWorld() {
        const Instant t0 = *parse_instant("2011-06-01T00:00:00Z");
        auto day = [&](int d) { return t0 + d * kSecondsPerDay; };
        // star interactions in days 0..5 (preceding window of bugs at day 10)
        for (int leaf = 1; leaf <= 4; ++leaf) {
            events.push_back({"seed", day(leaf), "core", EventKind::CcAdd,
                              "leaf" + std::to_string(leaf)});
        }
        events.push_back({"seed", day(0), "core", EventKind::Create, ""});
        events.push_back({"fixbug", day(10), "core", EventKind::Create, ""});
        events.push_back({"fixbug", day(11), "core", EventKind::Status, "RESOLVED"});
        events.push_back({"fixbug", day(11), "core", EventKind::Resolution, "FIXED"});
        events.push_back({"dupbug", day(10), "stranger", EventKind::Create, ""});
        events.push_back({"dupbug", day(12), "core", EventKind::Status, "RESOLVED"});
        events.push_back({"dupbug", day(12), "core", EventKind::Resolution, "DUPLICATE"});
        std::stable_sort(events.begin(), events.end(),
                         [](const ChangeEvent& a, const ChangeEvent& b) { return a.ts < b.ts; });
        corpus = assemble_bug_records(events);
    }
};

}  // namespace

TEST_CASE("reporter centrality samples") {
    const TinyWorld world;
    const WindowIndex index(world.events);

    const Sample fix1 = reporter_centrality_sample(world.corpus, index, Category::Fix, 1);
    REQUIRE(fix1.values.size() == 1);
    CHECK(fix1.values[0] == 1.0);  // star center

    const Sample dup1 = reporter_centrality_sample(world.corpus, index, Category::Dup, 1);
    REQUIRE(dup1.values.size() == 1);
    CHECK(dup1.values[0] == 0.0);  // absent from the window network

    SampleOptions drop;
    drop.include_absent_as_zero = false;
    const Sample dup1_drop =
        reporter_centrality_sample(world.corpus, index, Category::Dup, 1, drop);
    CHECK(dup1_drop.values.empty());

    const Sample inc1 = reporter_centrality_sample(world.corpus, index, Category::Inc, 1);
    CHECK(inc1.values.empty());
}

TEST_CASE("hypothesis suite marks empty comparisons as insufficient") {
    const TinyWorld world;
    const WindowIndex index(world.events);
    const auto rows = hypothesis_suite(world.corpus, index);
    REQUIRE(rows.size() == 7);
    for (const auto& row : rows) {
        if (row.comparison == "FIX1~INC1" || row.comparison == "FIX1~WOF1" ||
            row.comparison == "INV1~INV2") {
            CHECK(row.insufficient);
            CHECK(row.alternative == "-");
        }
        if (row.comparison == "FIX1~DUP1") CHECK_FALSE(row.insufficient);
    }
}

TEST_CASE("hypothesis suite accepts the planted H3 signal") {
    SynthConfig cfg;
    cfg.n_users = 200;
    cfg.n_bugs = 600;
    cfg.months = 6;
    cfg.seed = 5;
    const std::vector<ChangeEvent> events = generate_community(cfg);
    const Corpus corpus = assemble_bug_records(events);
    const WindowIndex index(events);
    SampleOptions opts;
    opts.threads = 2;
    const auto rows = hypothesis_suite(corpus, index, 0.05, opts);
    for (const auto& row : rows) {
        if (row.comparison == "FIX1~DUP1") {
            CHECK(row.accepted);
            CHECK(row.alternative == ">");
        }
    }

    // stricter alpha never accepts more rows
    const auto strict = hypothesis_suite(corpus, index, 0.01, opts);
    std::size_t accepted_05 = 0, accepted_01 = 0;
    for (const auto& row : rows) accepted_05 += row.accepted;
    for (const auto& row : strict) accepted_01 += row.accepted;
    CHECK(accepted_01 <= accepted_05);
}

TEST_CASE("identical planted distributions retain the null") {
    // Route two identical samples through the row logic via a no-signal
    // generator: with p_core == p_peripheral there is no category/centrality
    // association, so H3 rows should overwhelmingly retain the null.
    SynthConfig cfg;
    cfg.n_users = 150;
    cfg.n_bugs = 400;
    cfg.months = 5;
    cfg.p_core_valid = 0.5;
    cfg.p_peripheral_valid = 0.5;
    cfg.seed = 9;
    const std::vector<ChangeEvent> events = generate_community(cfg);
    const Corpus corpus = assemble_bug_records(events);
    const WindowIndex index(events);
    const auto rows = hypothesis_suite(corpus, index);
    int accepted = 0;
    for (const auto& row : rows) {
        if (row.hypothesis == "H3" && row.accepted) ++accepted;
    }
    CHECK(accepted <= 1);  // chance rejections happen; a planted signal would hit all four
}

TEST_CASE("csv render shape") {
    std::vector<HypothesisRow> rows(1);
    rows[0] = {"H1", "FIX1~FIX2", "<", 0.0026, true, 5847, 6140, false};
    std::ostringstream out;
    render_hypotheses_csv(out, rows);
    CHECK(out.str() ==
          "hypothesis,comparison,alternative,p_value,accepted,n_a,n_b\n"
          "H1,FIX1~FIX2,<,0.0026,true,5847,6140\n");
}
