#include "intgarch/marketdata.hpp"

#include "intgarch/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace intgarch {

namespace {

using std::chrono::days;
using std::chrono::floor;
using std::chrono::milliseconds;

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

Date day_of(Timestamp ts) { return floor<days>(ts); }

/// Indices of `values` that survive the rolling-median test, evaluated per day segment.
std::vector<bool> rule4_keep(const std::vector<double>& values, const std::vector<Date>& day, const CleaningConfig& c) {
    const std::size_t n = values.size();
    std::vector<bool> keep(n, true);
    std::vector<double> window;
    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = begin;
        while (end < n && day[end] == day[begin]) ++end;
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t lo = i >= begin + static_cast<std::size_t>(c.window_half) ? i - c.window_half : begin;
            const std::size_t hi = std::min(end, i + c.window_half + 1);
            window.clear();
            for (std::size_t j = lo; j < hi; ++j) {
                if (j != i) window.push_back(values[j]);
            }
            if (window.size() < static_cast<std::size_t>(c.min_window)) continue;
            const double med = median_of(window);
            double mad = 0.0;
            for (double w : window) mad += std::abs(w - med);
            mad /= static_cast<double>(window.size());
            // A flat window carries no scale to measure deviations against.
            if (mad > 0.0 && std::abs(values[i] - med) > c.mad_multiple * mad) keep[i] = false;
        }
        begin = end;
    }
    return keep;
}

template <typename T>
std::vector<T> filter(const std::vector<T>& v, const std::vector<bool>& keep) {
    std::vector<T> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (keep[i]) out.push_back(v[i]);
    }
    return out;
}

/// One pass of rules 1-4.
std::vector<QuoteTick> clean_pass(const std::vector<QuoteTick>& in, const CleaningConfig& c) {
    std::vector<QuoteTick> ticks;
    ticks.reserve(in.size());
    for (std::size_t i = 0; i < in.size();) {
        std::size_t j = i;
        while (j < in.size() && in[j].timestamp == in[i].timestamp) ++j;
        if (j - i == 1) {
            ticks.push_back(in[i]);
        } else {
            std::vector<double> bids;
            std::vector<double> asks;
            std::vector<double> prices;
            for (std::size_t s = i; s < j; ++s) {
                bids.push_back(in[s].bid);
                asks.push_back(in[s].ask);
                if (in[s].price) prices.push_back(*in[s].price);
            }
            QuoteTick q{in[i].timestamp, median_of(bids), median_of(asks), std::nullopt};
            if (!prices.empty()) q.price = median_of(prices);
            ticks.push_back(q);
        }
        i = j;
    }

    std::erase_if(ticks, [](const QuoteTick& q) { return q.spread() < 0.0; });

    std::map<Date, double> median_spread;
    {
        std::map<Date, std::vector<double>> spreads;
        for (const auto& q : ticks) spreads[day_of(q.timestamp)].push_back(q.spread());
        for (auto& [d, s] : spreads) median_spread[d] = median_of(std::move(s));
    }
    std::erase_if(ticks, [&](const QuoteTick& q) {
        const double med = median_spread[day_of(q.timestamp)];
        return med > 0.0 && q.spread() > c.spread_multiple * med;
    });

    std::vector<double> mids;
    std::vector<Date> day;
    for (const auto& q : ticks) {
        mids.push_back(q.mid());
        day.push_back(day_of(q.timestamp));
    }
    return filter(ticks, rule4_keep(mids, day, c));
}

template <typename Tick, typename PriceOf>
std::vector<DayBars> sample_grid(const std::vector<Tick>& ticks, const SessionConfig& s, PriceOf price_of) {
    if (s.spacing.count() <= 0 || s.close <= s.open) {
        throw InvalidInput("session: need open < close and positive spacing");
    }
    std::vector<DayBars> out;
    std::size_t i = 0;
    while (i < ticks.size()) {
        const Date d = day_of(ticks[i].timestamp);
        std::size_t end = i;
        while (end < ticks.size() && day_of(ticks[end].timestamp) == d) ++end;
        const Timestamp open = Timestamp(d) + s.open;
        const Timestamp close = Timestamp(d) + s.close;
        std::vector<double> logs;
        std::size_t cursor = i;
        std::optional<double> last;
        for (Timestamp g = open; g <= close; g += s.spacing) {
            while (cursor < end && ticks[cursor].timestamp <= g) {
                if (ticks[cursor].timestamp >= open) last = price_of(ticks[cursor]);
                ++cursor;
            }
            if (last) logs.push_back(std::log(*last));
        }
        if (logs.size() >= 2) out.push_back(DayBars::from_log_prices(d, std::move(logs)));
        i = end;
    }
    return out;
}

// ---- CSV helpers -------------------------------------------------------------

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

struct Row {
    std::size_t line;
    std::vector<std::string_view> cells;
};

/// Header and data rows of a CSV stream; storage owns the text the views point into.
struct RawCsv {
    std::vector<std::string> storage;
    std::vector<std::string> header;
    std::size_t header_line = 0;
    std::vector<Row> rows;
};

RawCsv read_raw(std::istream& in) {
    RawCsv raw;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<std::size_t, std::string>> lines;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        lines.emplace_back(lineno, std::string(t));
    }
    raw.storage.reserve(lines.size());
    for (auto& [no, text] : lines) raw.storage.push_back(std::move(text));
    for (std::size_t k = 0; k < lines.size(); ++k) {
        auto cells = split(raw.storage[k]);
        if (k == 0) {
            raw.header_line = lines[k].first;
            for (auto c : cells) {
                std::string name(c);
                std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
                raw.header.push_back(std::move(name));
            }
        } else {
            raw.rows.push_back({lines[k].first, std::move(cells)});
        }
    }
    return raw;
}

class CsvError {
public:
    explicit CsvError(std::string source) : source_(std::move(source)) {}
    [[noreturn]] void fail(std::size_t line, const std::string& what) const {
        throw InvalidInput(source_ + ":" + std::to_string(line) + ": " + what);
    }

private:
    std::string source_;
};

/// Column positions for the expected names; unknown or missing required columns are errors.
std::map<std::string, std::size_t> map_columns(const RawCsv& raw, const std::vector<std::string>& required,
                                               const std::vector<std::string>& optional, const CsvError& err) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        const auto& name = raw.header[c];
        const bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                           std::find(optional.begin(), optional.end(), name) != optional.end();
        if (!known) err.fail(raw.header_line, "unknown column '" + name + "'");
        if (pos.contains(name)) err.fail(raw.header_line, "duplicate column '" + name + "'");
        pos[name] = c;
    }
    for (const auto& r : required) {
        if (!pos.contains(r)) err.fail(raw.header_line, "missing column '" + r + "'");
    }
    return pos;
}

bool header_is(const RawCsv& raw, std::initializer_list<const char*> names) {
    if (raw.header.size() != names.size()) return false;
    std::size_t i = 0;
    for (const char* n : names) {
        if (raw.header[i++] != n) return false;
    }
    return true;
}

std::string_view cell(const Row& row, std::size_t col, std::size_t width, const CsvError& err) {
    if (row.cells.size() != width) {
        err.fail(row.line, "expected " + std::to_string(width) + " fields, found " + std::to_string(row.cells.size()));
    }
    return row.cells[col];
}

double number_cell(const Row& row, std::size_t col, std::size_t width, const char* name, const CsvError& err) {
    const auto v = parse_number(cell(row, col, width, err));
    if (!v) err.fail(row.line, std::string("unparsable ") + name + " '" + std::string(row.cells[col]) + "'");
    return *v;
}

CsvTable read_ticks(const RawCsv& raw, const CsvError& err) {
    CsvTable out;
    TickTable table;
    const std::size_t width = raw.header.size();
    if (header_is(raw, {"timestamp", "price"})) {
        for (const auto& row : raw.rows) {
            const auto ts = parse_timestamp(cell(row, 0, width, err));
            if (!ts) err.fail(row.line, "unparsable timestamp '" + std::string(row.cells[0]) + "'");
            const double p = number_cell(row, 1, width, "price", err);
            if (!(p > 0.0)) err.fail(row.line, "price must be positive");
            table.trades.push_back({*ts, p});
        }
        if (!std::is_sorted(table.trades.begin(), table.trades.end(),
                            [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; })) {
            std::stable_sort(table.trades.begin(), table.trades.end(),
                             [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
            out.warnings.emplace_back("timestamps were not sorted; rows were sorted on load");
        }
    } else {
        const auto pos = map_columns(raw, {"timestamp", "bid", "ask"}, {"price"}, err);
        for (const auto& row : raw.rows) {
            const auto ts = parse_timestamp(cell(row, pos.at("timestamp"), width, err));
            if (!ts) err.fail(row.line, "unparsable timestamp '" + std::string(row.cells[pos.at("timestamp")]) + "'");
            QuoteTick q{*ts, number_cell(row, pos.at("bid"), width, "bid", err),
                        number_cell(row, pos.at("ask"), width, "ask", err), std::nullopt};
            if (!(q.bid > 0.0) || !(q.ask > 0.0)) err.fail(row.line, "bid and ask must be positive");
            if (pos.contains("price") && !row.cells[pos.at("price")].empty()) {
                q.price = number_cell(row, pos.at("price"), width, "price", err);
                if (!(*q.price > 0.0)) err.fail(row.line, "price must be positive");
            }
            table.quotes.push_back(q);
        }
        if (!std::is_sorted(table.quotes.begin(), table.quotes.end(),
                            [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; })) {
            std::stable_sort(table.quotes.begin(), table.quotes.end(),
                             [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
            out.warnings.emplace_back("timestamps were not sorted; rows were sorted on load");
        }
    }
    out.table = std::move(table);
    return out;
}

CsvTable read_day_bars(const RawCsv& raw, const CsvError& err) {
    CsvTable out;
    std::vector<DayBars> days;
    const std::size_t width = raw.header.size();
    auto require_increasing = [&](const Row& row, Date d) {
        if (!days.empty() && !(days.back().date < d)) err.fail(row.line, "dates must be strictly increasing");
    };
    if (header_is(raw, {"date", "time", "price"})) {
        std::vector<std::pair<std::chrono::seconds, double>> path;
        std::optional<Date> current;
        auto flush = [&] {
            std::stable_sort(path.begin(), path.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            std::vector<double> logs;
            for (const auto& [t, p] : path) logs.push_back(std::log(p));
            days.push_back(DayBars::from_log_prices(*current, std::move(logs)));
            path.clear();
        };
        for (const auto& row : raw.rows) {
            const auto d = parse_date(cell(row, 0, width, err));
            if (!d) err.fail(row.line, "unparsable date '" + std::string(row.cells[0]) + "'");
            const auto ts = parse_timestamp(std::string(row.cells[0]) + "T" + std::string(row.cells[1]));
            if (!ts) err.fail(row.line, "unparsable time '" + std::string(row.cells[1]) + "'");
            const double p = number_cell(row, 2, width, "price", err);
            if (!(p > 0.0)) err.fail(row.line, "price must be positive");
            if (current && *d != *current) {
                if (*d < *current) err.fail(row.line, "dates must be nondecreasing");
                flush();
            }
            current = *d;
            path.emplace_back(std::chrono::floor<std::chrono::seconds>(*ts - Timestamp(*d)), p);
        }
        if (current) flush();
    } else {
        const auto pos = map_columns(raw, {"date", "min_log", "max_log", "rv"}, {"close_log"}, err);
        for (const auto& row : raw.rows) {
            const auto d = parse_date(cell(row, pos.at("date"), width, err));
            if (!d) err.fail(row.line, "unparsable date '" + std::string(row.cells[pos.at("date")]) + "'");
            require_increasing(row, *d);
            DayBars b;
            b.date = *d;
            b.min_log = number_cell(row, pos.at("min_log"), width, "min_log", err);
            b.max_log = number_cell(row, pos.at("max_log"), width, "max_log", err);
            if (b.max_log < b.min_log) err.fail(row.line, "max_log < min_log");
            const double rv = number_cell(row, pos.at("rv"), width, "rv", err);
            if (rv < 0.0) err.fail(row.line, "rv must be nonnegative");
            b.rv = rv;
            if (pos.contains("close_log")) {
                b.close_log = number_cell(row, pos.at("close_log"), width, "close_log", err);
            }
            days.push_back(std::move(b));
        }
    }
    out.table = std::move(days);
    return out;
}

CsvTable read_intervals(const RawCsv& raw, const CsvError& err) {
    if (raw.header.empty() || (raw.header[0] != "date" && raw.header[0] != "t")) {
        err.fail(raw.header_line, "first column must be 'date' or 't'");
    }
    const bool dated = raw.header[0] == "date";
    const auto pos = map_columns(raw, {raw.header[0], "low", "high"}, {"center", "radius"}, err);
    const bool exact = pos.contains("center") || pos.contains("radius");
    if (exact && !(pos.contains("center") && pos.contains("radius"))) {
        err.fail(raw.header_line, "center and radius columns must appear together");
    }
    const std::size_t width = raw.header.size();
    std::vector<Interval> items;
    std::vector<Date> dates;
    for (const auto& row : raw.rows) {
        if (dated) {
            const auto d = parse_date(cell(row, 0, width, err));
            if (!d) err.fail(row.line, "unparsable date '" + std::string(row.cells[0]) + "'");
            if (!dates.empty() && !(dates.back() < *d)) err.fail(row.line, "dates must be strictly increasing");
            dates.push_back(*d);
        } else {
            long long idx = 0;
            if (!parse_int(cell(row, 0, width, err), idx)) err.fail(row.line, "unparsable index '" + std::string(row.cells[0]) + "'");
        }
        const double low = number_cell(row, pos.at("low"), width, "low", err);
        const double high = number_cell(row, pos.at("high"), width, "high", err);
        if (high < low) err.fail(row.line, "high < low");
        if (exact) {
            const double c = number_cell(row, pos.at("center"), width, "center", err);
            const double r = number_cell(row, pos.at("radius"), width, "radius", err);
            if (r < 0.0) err.fail(row.line, "radius must be nonnegative");
            items.emplace_back(c, r);
        } else {
            items.push_back(Interval::from_bounds(low, high));
        }
    }
    CsvTable out;
    out.table = dated ? IntervalSeries(std::move(items), std::move(dates)) : IntervalSeries(std::move(items));
    return out;
}

void write_comments(std::ostream& out, const std::vector<std::string>& lines) {
    for (const auto& l : lines) out << "# " << l << '\n';
}

}  // namespace

DayBars DayBars::from_log_prices(Date date, std::vector<double> log_prices) {
    if (log_prices.empty()) {
        throw InvalidInput("day has no prices");
    }
    DayBars b;
    b.date = date;
    const auto [lo, hi] = std::minmax_element(log_prices.begin(), log_prices.end());
    b.min_log = *lo;
    b.max_log = *hi;
    b.close_log = log_prices.back();
    b.log_prices = std::move(log_prices);
    if (b.log_prices.size() >= 2) b.rv = realized_variance(b);
    return b;
}

DayBars DayBars::from_high_low(Date date, double low, double high, std::optional<double> close) {
    if (!(low > 0.0) || !(high >= low)) {
        throw InvalidInput("high/low bars need 0 < low <= high");
    }
    DayBars b;
    b.date = date;
    b.min_log = std::log(low);
    b.max_log = std::log(high);
    b.log_prices = {b.min_log, b.max_log};
    if (close) b.close_log = std::log(*close);
    return b;
}

std::vector<QuoteTick> clean_quotes(std::vector<QuoteTick> ticks, const CleaningConfig& config) {
    std::stable_sort(ticks.begin(), ticks.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    for (;;) {
        auto next = clean_pass(ticks, config);
        if (next == ticks) return next;
        ticks = std::move(next);
    }
}

std::vector<PriceTick> clean_prices(std::vector<PriceTick> ticks, const CleaningConfig& config) {
    std::stable_sort(ticks.begin(), ticks.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    for (;;) {
        std::vector<double> prices;
        std::vector<Date> day;
        for (const auto& t : ticks) {
            prices.push_back(t.price);
            day.push_back(day_of(t.timestamp));
        }
        auto next = filter(ticks, rule4_keep(prices, day, config));
        if (next.size() == ticks.size()) return next;
        ticks = std::move(next);
    }
}

std::vector<DayBars> sample_days(const std::vector<QuoteTick>& ticks, const SessionConfig& session) {
    return sample_grid(ticks, session, [](const QuoteTick& q) { return q.mid(); });
}

std::vector<DayBars> sample_days(const std::vector<PriceTick>& ticks, const SessionConfig& session) {
    return sample_grid(ticks, session, [](const PriceTick& p) { return p.price; });
}

double realized_variance(const DayBars& day) {
    if (day.log_prices.size() < 2) {
        throw InvalidInput("insufficient intraday observations");
    }
    double rv = 0.0;
    for (std::size_t s = 1; s < day.log_prices.size(); ++s) {
        const double d = day.log_prices[s] - day.log_prices[s - 1];
        rv += d * d;
    }
    return rv;
}

IntervalSeries interval_returns(const std::vector<DayBars>& days) {
    if (days.size() < 2) {
        throw InvalidInput("interval returns need at least 2 days");
    }
    std::vector<Interval> items;
    std::vector<Date> dates;
    for (std::size_t t = 1; t < days.size(); ++t) {
        if (!(days[t - 1].date < days[t].date)) {
            throw InvalidInput("days must have strictly increasing dates (violated at " + format_date(days[t].date) + ")");
        }
        items.push_back(Interval::from_bounds(days[t].min_log - days[t - 1].max_log, days[t].max_log - days[t - 1].min_log));
        dates.push_back(days[t].date);
    }
    return {std::move(items), std::move(dates)};
}

std::vector<double> closing_returns(const std::vector<DayBars>& days) {
    std::vector<double> out;
    for (std::size_t t = 1; t < days.size(); ++t) {
        if (!days[t].close_log || !days[t - 1].close_log) {
            throw InvalidInput("closing price missing on " + format_date(days[t].close_log ? days[t - 1].date : days[t].date));
        }
        out.push_back(*days[t].close_log - *days[t - 1].close_log);
    }
    return out;
}

CsvTable read_csv(std::istream& in, CsvSchema schema, const std::string& source) {
    const RawCsv raw = read_raw(in);
    const CsvError err(source);
    if (raw.header.empty()) {
        throw InvalidInput(source + ": no data rows");
    }
    if (raw.rows.empty()) {
        throw InvalidInput(source + ": no data rows");
    }
    switch (schema) {
        case CsvSchema::Ticks: return read_ticks(raw, err);
        case CsvSchema::DailyBars: return read_day_bars(raw, err);
        case CsvSchema::IntervalSeries: return read_intervals(raw, err);
    }
    throw InvalidInput("unknown schema");
}

CsvTable load_csv(const std::filesystem::path& path, CsvSchema schema) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    return read_csv(in, schema, path.string());
}

IntervalSeries load_interval_series(const std::filesystem::path& path) {
    return std::get<IntervalSeries>(load_csv(path, CsvSchema::IntervalSeries).table);
}

void write_interval_series(std::ostream& out, const IntervalSeries& series, const std::vector<std::string>& header_comments) {
    write_comments(out, header_comments);
    out << (series.has_dates() ? "date" : "t") << ",low,high,center,radius\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto& r = series[t];
        out << (series.has_dates() ? format_date(series.dates()[t]) : std::to_string(t + 1)) << ','
            << format_double(r.lower()) << ',' << format_double(r.upper()) << ',' << format_double(r.center()) << ','
            << format_double(r.radius()) << '\n';
    }
}

void write_day_bars(std::ostream& out, const std::vector<DayBars>& days, const std::vector<std::string>& header_comments) {
    write_comments(out, header_comments);
    const bool closes = std::all_of(days.begin(), days.end(), [](const DayBars& d) { return d.close_log.has_value(); });
    out << "date,min_log,max_log,rv" << (closes ? ",close_log" : "") << '\n';
    for (const auto& d : days) {
        if (!d.rv) {
            throw InvalidInput("day " + format_date(d.date) + " has no realized variance");
        }
        out << format_date(d.date) << ',' << format_double(d.min_log) << ',' << format_double(d.max_log) << ','
            << format_double(*d.rv);
        if (closes) out << ',' << format_double(*d.close_log);
        out << '\n';
    }
}

void write_ticks(std::ostream& out, const std::vector<QuoteTick>& ticks, const std::vector<std::string>& header_comments) {
    write_comments(out, header_comments);
    const bool prices = std::any_of(ticks.begin(), ticks.end(), [](const QuoteTick& q) { return q.price.has_value(); });
    out << "timestamp,bid,ask" << (prices ? ",price" : "") << '\n';
    for (const auto& q : ticks) {
        out << format_timestamp(q.timestamp) << ',' << format_double(q.bid) << ',' << format_double(q.ask);
        if (prices) out << ',' << (q.price ? format_double(*q.price) : std::string());
        out << '\n';
    }
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp ts) {
    const Date d = day_of(ts);
    const auto ms = (ts - Timestamp(d)).count();
    const auto h = ms / 3'600'000;
    const auto m = ms / 60'000 % 60;
    const auto s = ms / 1000 % 60;
    const auto frac = ms % 1000;
    char buf[32];
    if (frac != 0) {
        std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lld.%03lld", static_cast<long long>(h), static_cast<long long>(m),
                      static_cast<long long>(s), static_cast<long long>(frac));
    } else {
        std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lld", static_cast<long long>(h), static_cast<long long>(m),
                      static_cast<long long>(s));
    }
    return format_date(d) + buf;
}

std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned mo = 0;
    unsigned d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) || !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 16) return std::nullopt;
    const auto date = parse_date(text.substr(0, 10));
    if (!date || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
    std::string_view rest = text.substr(11);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    int h = 0;
    int m = 0;
    int s = 0;
    int ms = 0;
    if (rest.size() < 5 || rest[2] != ':' || !parse_int(rest.substr(0, 2), h) || !parse_int(rest.substr(3, 2), m)) {
        return std::nullopt;
    }
    rest.remove_prefix(5);
    if (!rest.empty()) {
        if (rest.size() < 3 || rest[0] != ':' || !parse_int(rest.substr(1, 2), s)) return std::nullopt;
        rest.remove_prefix(3);
        if (!rest.empty()) {
            if (rest[0] != '.' || rest.size() < 2 || rest.size() > 10) return std::nullopt;
            const auto digits = rest.substr(1);
            int value = 0;
            if (!parse_int(digits, value)) return std::nullopt;
            // Keep millisecond precision.
            const auto n = digits.size();
            ms = n >= 3 ? std::stoi(std::string(digits.substr(0, 3))) : value * (n == 1 ? 100 : 10);
        }
    }
    if (h > 23 || m > 59 || s > 60) return std::nullopt;
    return Timestamp(*date) + std::chrono::hours(h) + std::chrono::minutes(m) + std::chrono::seconds(s) +
           milliseconds(ms);
}

}  // namespace intgarch
