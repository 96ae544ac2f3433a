#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "couplemap/error.hpp"
#include "couplemap/series.hpp"
#include "support.hpp"

using namespace couplemap;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

TimeSeries on_days(std::vector<std::int64_t> days, std::vector<double> values) {
    return TimeSeries(TimeAxis::date, std::move(days), std::move(values));
}

}  // namespace

TEST_CASE("parse_csv reads a two-row date series") {
    const auto s = parse_csv("date,value\n2019-07-30,26814.0\n2019-07-31,26864.27\n", "value");
    CHECK(s.size() == 2);
    CHECK(s.kind() == SeriesKind::raw);
    CHECK(s.axis() == TimeAxis::date);
    CHECK(s.values()[1] == doctest::Approx(26864.27));
    CHECK(s.label(0) == "2019-07-30");
}

TEST_CASE("parse_csv errors") {
    CHECK(kind_of([] { parse_csv("", "value"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_csv("date,value\n", "value"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_csv("<html><body>nope</body></html>", "value"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_csv("date,value\n2020-01-01,1\n2020-01-01,2\n", "value"); }) ==
          ErrorKind::DuplicateTimestamp);
    CHECK(kind_of([] { parse_csv("date,value\n2020-01-01,1\n2020-01-02,abc\n", "value"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_csv("date,price\n2020-01-01,1\n2020-01-02,2\n", "value"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_csv("date,value\n2020-13-01,1\n2020-01-02,2\n", "value"); }) == ErrorKind::ParseError);
}

TEST_CASE("parse_csv sorts rows and keeps the value multiset") {
    const auto s = parse_csv("date,Close\n2020-01-03,3\n2020-01-01,1\n2020-01-02,2\n", "Close");
    REQUIRE(s.size() == 3);
    CHECK(s.values()[0] == 1);
    CHECK(s.values()[1] == 2);
    CHECK(s.values()[2] == 3);
    CHECK(s.timestamps()[0] < s.timestamps()[1]);
}

TEST_CASE("parse_csv handles index axis, quotes, CRLF and case-insensitive columns") {
    const auto s = parse_csv("\xEF\xBB\xBFt,\"Value\"\r\n0,1.5\r\n\r\n1,2.5\r\n", "value");
    CHECK(s.axis() == TimeAxis::index);
    REQUIRE(s.size() == 2);
    CHECK(s.values()[0] == 1.5);
}

TEST_CASE("csv round trip and load_csv") {
    testing::TempDir dir;
    const auto s = on_days({18000, 18001, 18005}, {1.0 / 3.0, 2.5, 1e-300});
    save_csv(s, dir / "s.csv");
    const auto back = load_csv(dir / "s.csv", "value");
    CHECK(back == s);
    CHECK(kind_of([&] { load_csv(dir / "missing.csv", "value"); }) == ErrorKind::IoError);
    std::ofstream(dir / "empty.csv").close();
    CHECK(kind_of([&] { load_csv(dir / "empty.csv", "value"); }) == ErrorKind::ParseError);
}

TEST_CASE("iso dates") {
    CHECK(parse_iso_date("1970-01-01") == 0);
    CHECK(parse_iso_date("1970-01-02") == 1);
    CHECK(format_iso_date(parse_iso_date("2016-02-29")) == "2016-02-29");
    CHECK(kind_of([] { parse_iso_date("2015-02-29"); }) == ErrorKind::ParseError);
}

TEST_CASE("TimeSeries invariants") {
    CHECK(kind_of([] { TimeSeries::indexed({}); }) == ErrorKind::InvalidSeries);
    CHECK(kind_of([] { on_days({2, 1}, {1, 2}); }) == ErrorKind::InvalidSeries);
    CHECK(kind_of([] { TimeSeries::indexed({1, NAN}); }) == ErrorKind::InvalidSeries);
    CHECK(kind_of([] { TimeSeries::indexed({1, 2}, SeriesKind::standardized); }) == ErrorKind::InvalidSeries);
    CHECK_NOTHROW(TimeSeries::indexed({-1, 1}, SeriesKind::standardized));
}

TEST_CASE("align_pair intersects calendars") {
    const auto a = on_days({1, 2, 3}, {10, 20, 30});
    const auto b = on_days({2, 3, 4}, {200, 300, 400});
    const auto p = align_pair(a, b);
    CHECK(p.common_length() == 2);
    CHECK(p.x.values()[0] == 20);
    CHECK(p.y.values()[1] == 300);
    CHECK(p.x.timestamps()[0] == 2);

    const auto same = align_pair(a, a);
    CHECK(same.common_length() == 3);

    const auto c = on_days({7, 8}, {1, 2});
    CHECK(kind_of([&] { align_pair(a, c); }) == ErrorKind::EmptyIntersection);
    CHECK(kind_of([&] { align_pair(a, TimeSeries::indexed({1, 2})); }) == ErrorKind::EmptyIntersection);
}

TEST_CASE("align_pair is idempotent") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1, 2);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::int64_t> da, db;
        std::vector<double> va, vb;
        for (std::int64_t d = 0; d < 60; ++d) {
            if (u(rng) < 1.7) {
                da.push_back(d);
                va.push_back(u(rng));
            }
            if (u(rng) < 1.7) {
                db.push_back(d);
                vb.push_back(u(rng));
            }
        }
        const auto p = align_pair(on_days(da, va), on_days(db, vb));
        const auto q = align_pair(p.x, p.y);
        CHECK(q.x == p.x);
        CHECK(q.y == p.y);
    }
}

TEST_CASE("log_returns examples") {
    const auto flat = log_returns(TimeSeries::indexed({100, 100, 100}));
    REQUIRE(flat.size() == 2);
    CHECK(flat.values()[0] == 0.0);
    CHECK(flat.values()[1] == 0.0);
    CHECK(flat.kind() == SeriesKind::log_return);

    const double e = std::exp(1.0);
    const auto ones = log_returns(TimeSeries::indexed({1, e, e * e}));
    CHECK(ones.values()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ones.values()[1] == doctest::Approx(1.0).epsilon(1e-14));

    const auto r = log_returns(on_days({5, 6}, {100, 110}));
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r.values()[0] - 0.09531017980432486) < 1e-15);
    CHECK(r.timestamps()[0] == 6);
}

TEST_CASE("log_returns preconditions") {
    CHECK(kind_of([] { log_returns(TimeSeries::indexed({1, 0, 2})); }) == ErrorKind::NonPositiveValue);
    CHECK(kind_of([] { log_returns(TimeSeries::indexed({1, -2})); }) == ErrorKind::NonPositiveValue);
    CHECK(kind_of([] { log_returns(log_returns(TimeSeries::indexed({1, 2, 3}))); }) == ErrorKind::WrongKind);
    CHECK(kind_of([] { log_returns(TimeSeries::indexed({1})); }) == ErrorKind::LengthTooShort);
}

TEST_CASE("log_returns of exponential growth is constant") {
    for (double c : {-0.3, 0.0, 0.01, 1.7}) {
        std::vector<double> v;
        for (int t = 0; t < 50; ++t) v.push_back(std::exp(c * t));
        const auto r = log_returns(TimeSeries::indexed(v));
        for (double x : r.values()) CHECK(std::abs(x - c) < 1e-12);
    }
}

TEST_CASE("standardize examples") {
    const auto a = standardize(TimeSeries::indexed({-1, 1}));
    CHECK(a.values()[0] == -1.0);
    CHECK(a.values()[1] == 1.0);
    CHECK(a.kind() == SeriesKind::standardized);

    const auto b = standardize(TimeSeries::indexed({0, 10}));
    CHECK(b.values()[0] == -1.0);
    CHECK(b.values()[1] == 1.0);

    CHECK(kind_of([] { standardize(TimeSeries::indexed({4, 4, 4})); }) == ErrorKind::ZeroVariance);
    CHECK(kind_of([&] { standardize(b); }) == ErrorKind::WrongKind);
}

TEST_CASE("standardize is invariant under positive affine maps") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::vector<double> v(300);
    for (auto& x : v) x = g(rng);
    const auto base = standardize(TimeSeries::indexed(v));
    for (auto [a, b] : std::vector<std::pair<double, double>>{{2.0, 5.0}, {0.001, -3.0}, {1e4, 1e3}}) {
        std::vector<double> w;
        for (double x : v) w.push_back(a * x + b);
        const auto s = standardize(TimeSeries::indexed(w));
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(s.values()[i] - base.values()[i]) < 1e-9);
    }
}

TEST_CASE("raw -> log_returns -> standardize composes") {
    const auto s = standardize(log_returns(TimeSeries::indexed({100, 101, 99, 102, 98})));
    CHECK(s.kind() == SeriesKind::standardized);
    CHECK(std::abs(mean(s.values())) < 1e-12);
    CHECK(std::abs(population_std(s.values()) - 1) < 1e-12);
}
