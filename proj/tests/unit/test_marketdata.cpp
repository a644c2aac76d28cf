#include "doctest.h"
#include "support.hpp"

#include "intgarch/marketdata.hpp"
#include "intgarch/rng.hpp"

#include <cmath>
#include <sstream>

using namespace intgarch;
using namespace std::chrono;
using testing::error_of;

namespace {

Timestamp at(int day, int hour, int minute, int second = 0) {
    return Timestamp(sys_days{year{2014} / January / day}) + hours(hour) + minutes(minute) + seconds(second);
}

QuoteTick quote(Timestamp ts, double bid, double ask) { return {ts, bid, ask, std::nullopt}; }

Date on(int d) { return sys_days{year{2014} / January / d}; }

}  // namespace

TEST_CASE("rule 1 collapses identical timestamps to medians") {
    const auto ts = at(2, 10, 0);
    const auto out = clean_quotes({quote(ts, 10.0, 10.2), quote(ts, 10.1, 10.3), quote(ts, 9.9, 10.1)});
    REQUIRE(out.size() == 1);
    CHECK(out[0].bid == 10.0);
    CHECK(out[0].ask == 10.2);
    const auto even = clean_quotes({quote(ts, 10.0, 10.2), quote(ts, 10.1, 10.4)});
    REQUIRE(even.size() == 1);
    CHECK(even[0].bid == doctest::Approx(10.05));
    CHECK(even[0].ask == doctest::Approx(10.3));
}

TEST_CASE("rule 2 deletes negative spreads") {
    const auto out = clean_quotes({quote(at(2, 10, 0), 10.0, 10.1), quote(at(2, 10, 1), 10.2, 10.1),
                                   quote(at(2, 10, 2), 10.0, 10.0)});
    REQUIRE(out.size() == 2);
    CHECK(out[1].spread() == 0.0);
}

TEST_CASE("rule 3 deletes spreads far above the daily median") {
    std::vector<QuoteTick> ticks;
    for (int i = 0; i < 5; ++i) ticks.push_back(quote(at(2, 10, i), 10.0, 10.01));
    ticks.push_back(quote(at(2, 10, 5), 9.0, 11.0));  // spread 2.0 > 50 * 0.01
    ticks.push_back(quote(at(2, 10, 6), 10.0, 10.3));  // spread 0.3 < 0.5
    const auto out = clean_quotes(ticks);
    CHECK(out.size() == 6);
    for (const auto& q : out) CHECK(q.spread() < 1.0);
}

TEST_CASE("rule 3 is skipped when the median spread is zero") {
    std::vector<QuoteTick> ticks;
    for (int i = 0; i < 5; ++i) ticks.push_back(quote(at(2, 10, i), 10.0, 10.0));
    ticks.push_back(quote(at(2, 10, 5), 10.0, 10.5));
    CHECK(clean_quotes(ticks).size() == 6);
}

TEST_CASE("rule 4 deletes isolated mid-quote outliers") {
    Rng rng(1);
    std::vector<QuoteTick> ticks;
    for (int i = 0; i < 60; ++i) {
        const double mid = 100.0 + 0.01 * rng.normal();
        ticks.push_back(quote(at(3, 10, 0, i * 10), mid - 0.01, mid + 0.01));
    }
    ticks[30].bid = 109.0;
    ticks[30].ask = 109.02;
    const auto out = clean_quotes(ticks);
    CHECK(out.size() == 59);
    for (const auto& q : out) CHECK(std::abs(q.mid() - 100.0) < 1.0);
}

TEST_CASE("rule 4 needs a large enough window and nonzero dispersion") {
    std::vector<QuoteTick> few;
    for (int i = 0; i < 8; ++i) few.push_back(quote(at(3, 10, i), 100.0 + 0.01 * i, 100.02 + 0.01 * i));
    few[4].bid = 150.0;
    few[4].ask = 150.02;
    CHECK(clean_quotes(few).size() == 8);

    std::vector<QuoteTick> flat;
    for (int i = 0; i < 30; ++i) flat.push_back(quote(at(3, 10, i), 100.0, 100.02));
    flat[10].bid = 101.0;
    flat[10].ask = 101.02;
    // Window around tick 10 has MAD 0, so the rule cannot measure it; the neighbours see 1 deviant only.
    const auto out = clean_quotes(flat);
    CHECK(std::none_of(out.begin(), out.end(), [](const QuoteTick& q) { return q.bid != 100.0 && q.bid != 101.0; }));
}

TEST_CASE("rule 4 windows do not cross days") {
    std::vector<QuoteTick> ticks;
    for (int i = 0; i < 20; ++i) ticks.push_back(quote(at(6, 10, i), 100.0 + 0.01 * (i % 3), 100.05 + 0.01 * (i % 3)));
    for (int i = 0; i < 20; ++i) ticks.push_back(quote(at(7, 10, i), 120.0 + 0.01 * (i % 3), 120.05 + 0.01 * (i % 3)));
    CHECK(clean_quotes(ticks).size() == 40);
}

TEST_CASE("cleaning is idempotent") {
    Rng rng(2);
    std::vector<QuoteTick> ticks;
    for (int i = 0; i < 400; ++i) {
        const double mid = 50.0 + 0.05 * rng.normal() + (rng.uniform() < 0.03 ? 5.0 : 0.0);
        const double spread = rng.uniform() < 0.02 ? -0.01 : 0.02 * rng.uniform();
        ticks.push_back(quote(at(8, 9, 30) + seconds(static_cast<int>(rng.uniform() * 20000)), mid - spread / 2,
                              mid + spread / 2));
    }
    const auto once = clean_quotes(ticks);
    CHECK(clean_quotes(once) == once);
    CHECK(once.size() < ticks.size());
    for (const auto& q : once) CHECK(q.spread() >= 0.0);
}

TEST_CASE("clean_prices applies the rolling-median rule") {
    Rng rng(3);
    std::vector<PriceTick> ticks;
    for (int i = 0; i < 50; ++i) ticks.push_back({at(9, 11, i), 20.0 + 0.01 * rng.normal()});
    ticks[20].price = 10.0;
    const auto out = clean_prices(ticks);
    CHECK(out.size() == 49);
    CHECK(clean_prices(out) == out);
}

TEST_CASE("session sampling carries the last observation forward") {
    SessionConfig s;
    s.open = hours(10);
    s.close = hours(10) + minutes(20);
    s.spacing = minutes(5);
    std::vector<PriceTick> ticks{
        {at(2, 9, 50), 99.0},       // before the open: ignored
        {at(2, 10, 2), 100.0},
        {at(2, 10, 7), 101.0},
        {at(2, 10, 8), 102.0},
        {at(2, 10, 15), 103.0},     // lands on a grid point exactly
        {at(2, 16, 0), 500.0},      // after the close: ignored
    };
    const auto days = sample_days(ticks, s);
    REQUIRE(days.size() == 1);
    // grid 10:00 (nothing yet), 10:05 -> 100, 10:10 -> 102, 10:15 -> 103, 10:20 -> 103
    const std::vector<double> expect{std::log(100.0), std::log(102.0), std::log(103.0), std::log(103.0)};
    CHECK(days[0].log_prices == expect);
    CHECK(days[0].min_log == std::log(100.0));
    CHECK(days[0].max_log == std::log(103.0));
    CHECK(*days[0].close_log == std::log(103.0));
    const double rv = std::pow(std::log(102.0) - std::log(100.0), 2) + std::pow(std::log(103.0) - std::log(102.0), 2);
    CHECK(*days[0].rv == doctest::Approx(rv).epsilon(1e-14));

    s.spacing = minutes(0);
    CHECK(error_of([&] { (void)sample_days(ticks, s); }) == "session: need open < close and positive spacing");
}

TEST_CASE("days with fewer than two grid prices are dropped") {
    std::vector<QuoteTick> ticks{quote(at(2, 15, 59), 10.0, 10.1), quote(at(3, 10, 0), 10.0, 10.1)};
    const auto days = sample_days(ticks);
    REQUIRE(days.size() == 1);
    CHECK(days[0].date == on(3));
    // 10:00 .. 16:00 every 5 minutes, all from the single 10:00 quote
    CHECK(days[0].log_prices.size() == 73);
    CHECK(*days[0].rv == 0.0);
}

TEST_CASE("realized variance and interval returns") {
    const auto a = DayBars::from_log_prices(on(2), {0.0, 0.1, -0.05, 0.02});
    CHECK(realized_variance(a) == doctest::Approx(0.01 + 0.0225 + 0.0049).epsilon(1e-14));
    const auto b = DayBars::from_log_prices(on(3), {0.02, 0.3, 0.12});
    const auto r = interval_returns({a, b});
    REQUIRE(r.size() == 1);
    CHECK(r[0].lower() == doctest::Approx(0.02 - 0.1));
    CHECK(r[0].upper() == doctest::Approx(0.3 - (-0.05)));
    CHECK(r.dates()[0] == on(3));
    CHECK(closing_returns({a, b}) == std::vector<double>{0.12 - 0.02});
    CHECK(error_of([&] { (void)interval_returns({a}); }) == "interval returns need at least 2 days");
    CHECK(error_of([&] { (void)interval_returns({b, a}); }) ==
          "days must have strictly increasing dates (violated at 2014-01-02)");
    CHECK(error_of([] { (void)realized_variance(DayBars::from_log_prices(on(2), {1.0})); }) ==
          "insufficient intraday observations");
    const auto hl = DayBars::from_high_low(on(4), 9.0, 11.0, 10.0);
    CHECK(hl.min_log == std::log(9.0));
    CHECK_FALSE(hl.rv.has_value());
    CHECK(error_of([&] { (void)closing_returns({hl, DayBars::from_high_low(on(5), 9.0, 11.0)}); }) ==
          "closing price missing on 2014-01-05");
}

TEST_CASE("interval returns contain the closing return and the rv identity holds") {
    Rng rng(7);
    std::vector<DayBars> days;
    for (int d = 1; d <= 200; ++d) {
        std::vector<double> path{days.empty() ? 0.0 : *days.back().close_log};
        for (int i = 0; i < 78; ++i) path.push_back(path.back() + 0.001 * rng.normal());
        path.erase(path.begin());
        days.push_back(DayBars::from_log_prices(sys_days{year{2014} / January / 1} + std::chrono::days(d), path));
    }
    const auto r = interval_returns(days);
    const auto c = closing_returns(days);
    REQUIRE(r.size() == c.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
        CHECK(r[t].lower() <= c[t] + 1e-15);
        CHECK(c[t] <= r[t].upper() + 1e-15);
        CHECK(r[t].radius() == doctest::Approx(0.5 * ((days[t + 1].max_log - days[t + 1].min_log) +
                                                      (days[t].max_log - days[t].min_log))));
        double rv = 0;
        for (std::size_t s = 1; s < days[t].log_prices.size(); ++s)
            rv += std::pow(days[t].log_prices[s] - days[t].log_prices[s - 1], 2);
        CHECK(*days[t].rv == doctest::Approx(rv).epsilon(1e-13));
    }
}

TEST_CASE("interval series csv round trip is bit exact") {
    Rng rng(4);
    std::vector<Interval> items;
    std::vector<Date> dates;
    for (int i = 0; i < 500; ++i) {
        items.emplace_back(rng.normal() * 0.03, rng.gamma(1.3) * 0.01);
        dates.push_back(on(1) + std::chrono::days(i));
    }
    const IntervalSeries s(items, dates);
    std::stringstream buf;
    write_interval_series(buf, s, {"intgarch test", "seed = 4"});
    const auto back = std::get<IntervalSeries>(read_csv(buf, CsvSchema::IntervalSeries).table);
    CHECK(back == s);

    const IntervalSeries undated(items);
    std::stringstream ubuf;
    write_interval_series(ubuf, undated);
    CHECK(std::get<IntervalSeries>(read_csv(ubuf, CsvSchema::IntervalSeries).table) == undated);
}

TEST_CASE("low/high only interval files") {
    std::istringstream in("# comment\n\ndate,low,high\n2014-01-02,-0.01,0.02\n2014-01-03,-0.02,0.0\n");
    const auto s = std::get<IntervalSeries>(read_csv(in, CsvSchema::IntervalSeries).table);
    REQUIRE(s.size() == 2);
    CHECK(s[0].center() == doctest::Approx(0.005));
    CHECK(s[0].radius() == doctest::Approx(0.015));
}

TEST_CASE("day bars csv round trip") {
    std::vector<DayBars> days{DayBars::from_log_prices(on(2), {4.6, 4.61, 4.59}),
                              DayBars::from_log_prices(on(3), {4.59, 4.7})};
    std::stringstream buf;
    write_day_bars(buf, days);
    const auto back = std::get<std::vector<DayBars>>(read_csv(buf, CsvSchema::DailyBars).table);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].date == days[i].date);
        CHECK(back[i].min_log == days[i].min_log);
        CHECK(back[i].max_log == days[i].max_log);
        CHECK(*back[i].rv == *days[i].rv);
        CHECK(*back[i].close_log == *days[i].close_log);
    }
}

TEST_CASE("date,time,price files build day paths") {
    std::istringstream in("date,time,price\n2014-01-02,10:00,100\n2014-01-02,10:05,101\n2014-01-03,10:00,102\n");
    const auto days = std::get<std::vector<DayBars>>(read_csv(in, CsvSchema::DailyBars).table);
    REQUIRE(days.size() == 2);
    CHECK(days[0].log_prices.size() == 2);
    CHECK(*days[1].close_log == std::log(102.0));
}

TEST_CASE("tick csv round trip and unsorted warning") {
    std::vector<QuoteTick> ticks{{at(2, 10, 0), 10.0, 10.1, 10.05}, {at(2, 10, 0, 1) + milliseconds(250), 10.01, 10.11, std::nullopt}};
    std::stringstream buf;
    write_ticks(buf, ticks);
    const auto back = std::get<TickTable>(read_csv(buf, CsvSchema::Ticks).table);
    CHECK(back.quotes == ticks);

    std::istringstream unsorted("timestamp,price\n2014-01-02T10:00:05,10\n2014-01-02 10:00:01Z,11\n");
    const auto t = read_csv(unsorted, CsvSchema::Ticks);
    REQUIRE(t.warnings.size() == 1);
    const auto& trades = std::get<TickTable>(t.table).trades;
    REQUIRE(trades.size() == 2);
    CHECK(trades[0].price == 11.0);
}

TEST_CASE("csv errors name the line") {
    auto fail = [](const std::string& text, CsvSchema schema) {
        return error_of([&] {
            std::istringstream in(text);
            (void)read_csv(in, schema, "f.csv");
        });
    };
    CHECK(fail("# only comments\n", CsvSchema::IntervalSeries) == "f.csv: no data rows");
    CHECK(fail("date,low,high\n", CsvSchema::IntervalSeries) == "f.csv: no data rows");
    CHECK(fail("date,low,high,volume\n2014-01-02,1,2,3\n", CsvSchema::IntervalSeries) == "f.csv:1: unknown column 'volume'");
    CHECK(fail("date,low,high\n2014-01-02,2,1\n", CsvSchema::IntervalSeries) == "f.csv:2: high < low");
    CHECK(fail("date,low,high\n2014-01-02,x,1\n", CsvSchema::IntervalSeries) == "f.csv:2: unparsable low 'x'");
    CHECK(fail("date,low,high\n2014-13-02,0,1\n", CsvSchema::IntervalSeries) == "f.csv:2: unparsable date '2014-13-02'");
    CHECK(fail("date,low,high\n2014-01-02,0,1\n2014-01-02,0,1\n", CsvSchema::IntervalSeries) ==
          "f.csv:3: dates must be strictly increasing");
    CHECK(fail("date,low,high\n2014-01-02,0\n", CsvSchema::IntervalSeries) == "f.csv:2: expected 3 fields, found 2");
    CHECK(fail("timestamp,bid,ask\n2014-01-02T10:00,-1,2\n", CsvSchema::Ticks) == "f.csv:2: bid and ask must be positive");
    CHECK(fail("date,min_log,max_log,rv\n2014-01-02,1,0,0\n", CsvSchema::DailyBars) == "f.csv:2: max_log < min_log");
    CHECK(error_of([] { (void)load_csv("/nonexistent/x.csv", CsvSchema::Ticks); }) == "cannot open /nonexistent/x.csv");
}

TEST_CASE("date and timestamp formatting") {
    CHECK(format_date(on(2)) == "2014-01-02");
    CHECK(parse_date("2014-02-30") == std::nullopt);
    CHECK(parse_date("2014-1-02") == std::nullopt);
    CHECK(format_timestamp(at(2, 9, 30, 5) + milliseconds(7)) == "2014-01-02T09:30:05.007");
    CHECK(parse_timestamp("2014-01-02T09:30") == at(2, 9, 30));
    CHECK(parse_timestamp("2014-01-02 09:30:05.5") == at(2, 9, 30, 5) + milliseconds(500));
    CHECK(parse_timestamp("2014-01-02T25:00") == std::nullopt);
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("documented cleaning, rv and interval-return cases") {
    const auto ts = at(2, 10, 0);
    const auto one = clean_quotes({quote(ts, 10.0, 11.0), quote(ts, 12.0, 13.0)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].bid == 11.0);
    CHECK(one[0].ask == 12.0);
    CHECK(clean_quotes({quote(ts, 10.0, 9.0)}).empty());
    std::vector<QuoteTick> wide;
    for (int i = 0; i < 9; ++i) wide.push_back(quote(at(2, 10, i), 10.0, 10.01));
    wide.push_back(quote(at(2, 10, 9), 9.7, 10.3));
    const auto kept = clean_quotes(wide);
    CHECK(kept.size() == 9);
    CHECK(clean_quotes({}).empty());

    CHECK(realized_variance(DayBars::from_log_prices(on(2), {0.3, 0.3, 0.3})) == 0.0);
    CHECK(realized_variance(DayBars::from_log_prices(on(2), {0.0, 0.01})) == doctest::Approx(1e-4));
    CHECK(realized_variance(DayBars::from_log_prices(on(2), {0.0, 0.01, -0.01})) == doctest::Approx(5e-4));
    CHECK(realized_variance(DayBars::from_log_prices(on(2), {5.0, 5.01, 4.99})) == doctest::Approx(5e-4));

    const auto r = interval_returns({DayBars::from_log_prices(on(2), {0.0, 2.0}), DayBars::from_log_prices(on(3), {1.0, 3.0})});
    CHECK(r[0] == Interval(1.0, 2.0));
    const auto same = interval_returns({DayBars::from_log_prices(on(2), {0.5, 1.5}), DayBars::from_log_prices(on(3), {0.5, 1.5})});
    CHECK(same[0] == Interval(0.0, 1.0));
    const auto flat = interval_returns({DayBars::from_log_prices(on(2), {0.5, 0.5}), DayBars::from_log_prices(on(3), {0.5, 0.5})});
    CHECK(flat[0] == Interval(0.0, 0.0));
}
