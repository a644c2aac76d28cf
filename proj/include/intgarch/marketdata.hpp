#pragma once

#include "intgarch/interval.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace intgarch {

/// Exchange-local wall-clock time; no time-zone conversion is applied.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

struct QuoteTick {
    Timestamp timestamp;
    double bid = 0.0;
    double ask = 0.0;
    std::optional<double> price;

    [[nodiscard]] double spread() const noexcept { return ask - bid; }
    [[nodiscard]] double mid() const noexcept { return 0.5 * (bid + ask); }
    friend bool operator==(const QuoteTick&, const QuoteTick&) = default;
};

/// Trade-only record, used when no quotes are available.
struct PriceTick {
    Timestamp timestamp;
    double price = 0.0;
    friend bool operator==(const PriceTick&, const PriceTick&) = default;
};

/// Per-day aggregates of the sampled log-price path.
struct DayBars {
    Date date;
    /// Sampled log prices; empty when the day was loaded from aggregates only.
    std::vector<double> log_prices;
    double min_log = 0.0;
    double max_log = 0.0;
    std::optional<double> rv;
    std::optional<double> close_log;

    /// Aggregates computed from a sampled path (at least one price).
    [[nodiscard]] static DayBars from_log_prices(Date date, std::vector<double> log_prices);
    /// Daily high/low fallback: the path is the two-point set {log low, log high}; rv stays unknown.
    [[nodiscard]] static DayBars from_high_low(Date date, double low, double high,
                                               std::optional<double> close = std::nullopt);
    friend bool operator==(const DayBars&, const DayBars&) = default;
};

struct SessionConfig {
    std::chrono::minutes open{9 * 60 + 30};
    std::chrono::minutes close{16 * 60};
    std::chrono::minutes spacing{5};
};

struct CleaningConfig {
    double spread_multiple = 50.0;
    int window_half = 25;
    int min_window = 10;
    double mad_multiple = 10.0;
};

/**
 * Quote filtration, applied in order:
 *  1. identical timestamps collapse to one tick with the median bid and median ask;
 *  2. negative spreads are deleted;
 *  3. spreads above spread_multiple times the day's median spread are deleted;
 *  4. mid-quotes further than mad_multiple mean absolute deviations from the
 *     centred rolling median of the surrounding window (same day, observation
 *     itself excluded) are deleted.
 * The rule set is repeated until nothing changes, so the result is idempotent.
 */
[[nodiscard]] std::vector<QuoteTick> clean_quotes(std::vector<QuoteTick> ticks, const CleaningConfig& config = {});

/// Rule 4 only, on trade prices.
[[nodiscard]] std::vector<PriceTick> clean_prices(std::vector<PriceTick> ticks, const CleaningConfig& config = {});

/// Log mid-quotes on the session grid, last observation carried forward; one DayBars per day with >= 2 grid prices.
[[nodiscard]] std::vector<DayBars> sample_days(const std::vector<QuoteTick>& ticks, const SessionConfig& session = {});
[[nodiscard]] std::vector<DayBars> sample_days(const std::vector<PriceTick>& ticks, const SessionConfig& session = {});

/// Sum of squared consecutive log-price differences within the day.
[[nodiscard]] double realized_variance(const DayBars& day);

/// r_t = [min_t - max_{t-1}, max_t - min_{t-1}], dated by day t.
[[nodiscard]] IntervalSeries interval_returns(const std::vector<DayBars>& days);

/// close_t - close_{t-1} for t = 1..n-1; every day needs close_log.
[[nodiscard]] std::vector<double> closing_returns(const std::vector<DayBars>& days);

enum class CsvSchema { Ticks, DailyBars, IntervalSeries };

struct TickTable {
    std::vector<QuoteTick> quotes;
    /// Filled instead of quotes for `timestamp,price` files.
    std::vector<PriceTick> trades;
};

struct CsvTable {
    std::variant<TickTable, std::vector<DayBars>, IntervalSeries> table;
    std::vector<std::string> warnings;
};

/**
 * Reads one of the documented CSV layouts. Lines starting with '#' and blank
 * lines are skipped. Errors name the offending line.
 *   Ticks:          timestamp,bid,ask[,price]  or  timestamp,price
 *   DailyBars:      date,min_log,max_log,rv[,close_log]  or  date,time,price
 *   IntervalSeries: date|t,low,high[,center,radius]
 */
[[nodiscard]] CsvTable read_csv(std::istream& in, CsvSchema schema, const std::string& source = "<stream>");
[[nodiscard]] CsvTable load_csv(const std::filesystem::path& path, CsvSchema schema);

[[nodiscard]] IntervalSeries load_interval_series(const std::filesystem::path& path);

/// Header comment lines are written as "# line".
void write_interval_series(std::ostream& out, const IntervalSeries& series,
                           const std::vector<std::string>& header_comments = {});
void write_day_bars(std::ostream& out, const std::vector<DayBars>& days,
                    const std::vector<std::string>& header_comments = {});
void write_ticks(std::ostream& out, const std::vector<QuoteTick>& ticks,
                 const std::vector<std::string>& header_comments = {});

/// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_double(double x);
[[nodiscard]] std::string format_date(Date d);
[[nodiscard]] std::string format_timestamp(Timestamp ts);
/// YYYY-MM-DD; nullopt when malformed.
[[nodiscard]] std::optional<Date> parse_date(std::string_view text);
/// YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z]; nullopt when malformed.
[[nodiscard]] std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace intgarch
