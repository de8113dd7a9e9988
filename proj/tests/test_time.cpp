#include <doctest.h>

#include "bugnet/time.hpp"

using namespace bugnet;

TEST_CASE("parse and format ISO instants") {
    const auto t = parse_instant("2003-10-05T12:00:00Z");
    REQUIRE(t.has_value());
    CHECK(format_instant(*t) == "2003-10-05T12:00:00Z");
    CHECK(*parse_instant("1970-01-01T00:00:00Z") == 0);
    CHECK(*parse_instant("1970-01-02T00:00:00Z") == 86400);
    CHECK(*parse_instant("2000-02-29T23:59:59Z") ==
          *parse_instant("2000-03-01T00:00:00Z") - 1);

    CHECK_FALSE(parse_instant("2003-10-05 12:00:00Z").has_value());
    CHECK_FALSE(parse_instant("2003-10-05T12:00:00").has_value());
    CHECK_FALSE(parse_instant("2003-13-05T12:00:00Z").has_value());
    CHECK_FALSE(parse_instant("2003-02-29T12:00:00Z").has_value());
    CHECK_FALSE(parse_instant("2003-10-05T24:00:00Z").has_value());
    CHECK_FALSE(parse_instant("not a time").has_value());
}

TEST_CASE("format handles pre-epoch instants") {
    CHECK(format_instant(-1) == "1969-12-31T23:59:59Z");
}

TEST_CASE("preceding window is [t - 30d, t)") {
    const Instant t = *parse_instant("2003-10-31T00:00:00Z");
    const TimeInterval w = preceding_window(t, 30);
    CHECK(w.start == *parse_instant("2003-10-01T00:00:00Z"));
    CHECK(w.end == t);
    CHECK(w.contains(w.start));
    CHECK_FALSE(w.contains(t));

    const TimeInterval one_day = preceding_window(t, 1);
    CHECK(one_day.end - one_day.start == 86400);
}

TEST_CASE("following window covers (t, t + 30d]") {
    const TimeInterval w = following_window(0, 30);
    CHECK_FALSE(w.contains(0));
    CHECK(w.contains(1));
    CHECK(w.contains(2592000));
    CHECK_FALSE(w.contains(2592001));
}

TEST_CASE("preceding and following windows are disjoint and exclude t") {
    const Instant t = 123456789;
    const TimeInterval before = preceding_window(t);
    const TimeInterval after = following_window(t);
    CHECK_FALSE(before.contains(t));
    CHECK_FALSE(after.contains(t));
    CHECK(before.end <= after.start);
}
