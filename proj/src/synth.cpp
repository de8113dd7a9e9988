#include "bugnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bugnet/error.hpp"
#include "bugnet/rng.hpp"
#include "bugnet/time.hpp"

namespace bugnet {

namespace {

// Fixed horizon start; only relative times matter.
const Instant kEpoch = *parse_instant("2010-01-01T00:00:00Z");
constexpr std::int64_t kMonth = 30 * kSecondsPerDay;

std::string padded_id(char prefix, int value, int width) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%c%0*d", prefix, width, value);
    return buf;
}

}  // namespace

void SynthConfig::validate() const {
    auto fail = [](const char* what) { throw Error(Errc::InvalidConfig, what); };
    if (n_users < 2) fail("n_users must be >= 2");
    if (n_bugs < 1) fail("n_bugs must be >= 1");
    if (months < 2) fail("months must be >= 2 (bugs start after the first month)");
    if (!(core_fraction > 0.0 && core_fraction < 1.0)) fail("core_fraction must be in (0,1)");
    if (p_core_valid < 0.0 || p_core_valid > 1.0) fail("p_core_valid must be in [0,1]");
    if (p_peripheral_valid < 0.0 || p_peripheral_valid > 1.0) {
        fail("p_peripheral_valid must be in [0,1]");
    }
    if (interactions_per_month < 1) fail("interactions_per_month must be >= 1");
    if (mix_dup < 0.0 || mix_inv < 0.0 || mix_inc < 0.0 ||
        std::fabs(mix_dup + mix_inv + mix_inc - 1.0) > 1e-9) {
        fail("faulty category mix must be non-negative and sum to 1");
    }
}

std::vector<ChangeEvent> generate_community(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const int n_core = std::max(1, static_cast<int>(std::ceil(
                                       cfg.core_fraction * static_cast<double>(cfg.n_users))));
    const int n_peripheral = cfg.n_users - n_core;
    const int user_width = static_cast<int>(std::to_string(cfg.n_users).size());
    auto user_id = [&](int u) { return padded_id('u', u, user_width); };
    const Instant horizon_end = kEpoch + static_cast<std::int64_t>(cfg.months) * kMonth;

    std::vector<ChangeEvent> events;

    // Bug schedule first: the interaction phase needs to know which bugs
    // already exist at any instant.
    struct Bug {
        std::string id;
        Instant created_at;
    };
    const int n_carriers = std::max(1, cfg.n_bugs / 100);
    const int bug_width = static_cast<int>(std::to_string(cfg.n_bugs + n_carriers).size());
    std::vector<Bug> bugs;  // sorted by created_at; carriers first (at kEpoch)
    for (int i = 0; i < n_carriers; ++i) {
        Bug carrier{padded_id('c', i + 1, bug_width), kEpoch};
        events.push_back({carrier.id, kEpoch, user_id(i % n_core), EventKind::Create, ""});
        bugs.push_back(carrier);
    }
    struct Planned {
        int index;           // into bugs
        bool valid;
        Category category;
        Instant resolve_at;
        int resolver;
        Instant incomplete_at;  // only for Inc
    };
    std::vector<Planned> planned;
    for (int i = 0; i < cfg.n_bugs; ++i) {
        const Instant created = rng.range(kEpoch + kMonth, horizon_end - 1);
        const int reporter = static_cast<int>(rng.index(cfg.n_users));
        const bool core = reporter < n_core;
        const bool valid = rng.unit() < (core ? cfg.p_core_valid : cfg.p_peripheral_valid);
        Category category;
        if (valid) {
            category = rng.unit() < 0.9 ? Category::Fix : Category::Wof;
        } else {
            const double r = rng.unit();
            if (r < cfg.mix_dup) category = Category::Dup;
            else if (r < cfg.mix_dup + cfg.mix_inv) category = Category::Inv;
            else category = Category::Inc;
        }
        const Instant resolve_at = created + rng.range(3600, kMonth);
        const int resolver = static_cast<int>(rng.index(n_core));
        Bug bug{padded_id('b', i + 1, bug_width), created};
        events.push_back({bug.id, created, user_id(reporter), EventKind::Create, ""});
        bugs.push_back(bug);
        planned.push_back({static_cast<int>(bugs.size()) - 1, valid, category, resolve_at,
                           resolver, created + (resolve_at - created) / 2});
    }
    for (const auto& p : planned) {
        const std::string& id = bugs[p.index].id;
        const std::string resolver = user_id(p.resolver);
        if (p.category == Category::Inc) {
            events.push_back({id, p.incomplete_at, resolver, EventKind::Status, "INCOMPLETE"});
        }
        events.push_back({id, p.resolve_at, resolver, EventKind::Status, "RESOLVED"});
        const char* resolution = "FIXED";
        switch (p.category) {
            case Category::Fix: resolution = "FIXED"; break;
            case Category::Wof: resolution = "WONTFIX"; break;
            case Category::Dup: resolution = "DUPLICATE"; break;
            case Category::Inv:
            case Category::Inc: resolution = "INVALID"; break;
            case Category::Unresolved: break;
        }
        events.push_back({id, p.resolve_at, resolver, EventKind::Resolution, resolution});
    }

    // Interactions attach to a random bug that already exists at their time.
    std::vector<Instant> creation_times;
    {
        std::vector<std::size_t> order(bugs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return bugs[a].created_at < bugs[b].created_at;
        });
        std::vector<Bug> sorted;
        sorted.reserve(bugs.size());
        for (std::size_t i : order) sorted.push_back(bugs[i]);
        bugs = std::move(sorted);
        for (const auto& b : bugs) creation_times.push_back(b.created_at);
    }
    auto host_bug = [&](Instant ts) -> const std::string& {
        const auto it = std::upper_bound(creation_times.begin(), creation_times.end(), ts);
        const std::size_t eligible = static_cast<std::size_t>(it - creation_times.begin());
        return bugs[rng.index(eligible)].id;  // carriers guarantee eligible >= 1
    };

    const int cc_core = cfg.interactions_per_month;
    const int cc_peripheral = n_peripheral > 0 ? std::max(1, cfg.interactions_per_month / 4) : 0;
    const int assigns = std::max(1, cfg.interactions_per_month / 8);
    for (int month = 0; month < cfg.months; ++month) {
        const Instant month_start = kEpoch + static_cast<std::int64_t>(month) * kMonth;
        for (int u = 0; u < n_core; ++u) {
            const std::string actor = user_id(u);
            auto emit = [&](EventKind kind, int target) {
                const Instant ts = month_start + rng.range(0, kMonth - 1);
                events.push_back({host_bug(ts), ts, actor, kind, user_id(target)});
            };
            for (int k = 0; k < cc_core && n_core > 1; ++k) {
                int target = static_cast<int>(rng.index(n_core - 1));
                if (target >= u) ++target;
                emit(EventKind::CcAdd, target);
            }
            for (int k = 0; k < cc_peripheral; ++k) {
                emit(EventKind::CcAdd, n_core + static_cast<int>(rng.index(n_peripheral)));
            }
            for (int k = 0; k < assigns && n_core > 1; ++k) {
                int target = static_cast<int>(rng.index(n_core - 1));
                if (target >= u) ++target;
                emit(EventKind::Assign, target);
            }
        }
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const ChangeEvent& a, const ChangeEvent& b) { return a.ts < b.ts; });
    return events;
}

}  // namespace bugnet
