#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace intgarch {

using Date = std::chrono::sys_days;

/**
 * Closed real interval [center - radius, center + radius].
 *
 * Stored as (center, radius) because the model recursion consumes the two
 * components directly; lower()/upper() exist for I/O.
 */
class Interval {
public:
    constexpr Interval() = default;
    /// Throws InvalidInput when radius is negative or either value is not finite.
    Interval(double center, double radius);

    /// Builds [lower, upper]; throws InvalidInput when upper < lower.
    [[nodiscard]] static Interval from_bounds(double lower, double upper);

    [[nodiscard]] constexpr double center() const noexcept { return center_; }
    [[nodiscard]] constexpr double radius() const noexcept { return radius_; }
    [[nodiscard]] constexpr double lower() const noexcept { return center_ - radius_; }
    [[nodiscard]] constexpr double upper() const noexcept { return center_ + radius_; }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;

private:
    double center_ = 0.0;
    double radius_ = 0.0;
};

/// Time-ordered interval observations with optional calendar dates.
class IntervalSeries {
public:
    IntervalSeries() = default;
    explicit IntervalSeries(std::vector<Interval> items);
    /// Throws InvalidInput unless dates are strictly increasing and match items in length.
    IntervalSeries(std::vector<Interval> items, std::vector<Date> dates);
    /// Builds from aligned component vectors (radii must be nonnegative).
    static IntervalSeries from_components(std::span<const double> centers, std::span<const double> radii);

    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
    [[nodiscard]] const Interval& operator[](std::size_t t) const { return items_[t]; }
    [[nodiscard]] const std::vector<Interval>& items() const noexcept { return items_; }
    [[nodiscard]] bool has_dates() const noexcept { return dates_.has_value(); }
    [[nodiscard]] const std::vector<Date>& dates() const;

    [[nodiscard]] std::span<const double> centers() const noexcept { return centers_; }
    [[nodiscard]] std::span<const double> radii() const noexcept { return radii_; }

    /// Observations [first, first + count) with matching dates.
    [[nodiscard]] IntervalSeries slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const IntervalSeries& a, const IntervalSeries& b) {
        return a.items_ == b.items_ && a.dates_ == b.dates_;
    }

private:
    void build_views();

    std::vector<Interval> items_;
    std::optional<std::vector<Date>> dates_;
    std::vector<double> centers_;
    std::vector<double> radii_;
};

/// Mean, variance and autocovariances of an interval sample under the rho2 metric.
/// All moments use divisor n so that autocovariances[0] == variance.
struct SummaryMoments {
    Interval mean;
    double variance = 0.0;
    std::vector<double> autocovariances;
};

/// Euclidean distance between intervals in (center, radius) coordinates.
[[nodiscard]] double rho2_distance(const Interval& x, const Interval& y) noexcept;

/// Aumann (equivalently rho2-Frechet) sample mean: componentwise average.
[[nodiscard]] Interval aumann_mean(const IntervalSeries& series);

/// Var(centers) + Var(radii) with divisor n-1.
[[nodiscard]] double sample_variance(const IntervalSeries& series);

/// Cov(centers) + Cov(radii) with divisor n-1; series must have equal length.
[[nodiscard]] double sample_covariance(const IntervalSeries& x, const IntervalSeries& y);

/// Covariance normalised by the two rho2 standard deviations.
[[nodiscard]] double sample_correlation(const IntervalSeries& x, const IntervalSeries& y);

/**
 * Interval sample ACF:
 *   rho(s) = (gamma_center(s) + gamma_radius(s)) / (gamma_center(0) + gamma_radius(0))
 * with divisor-n autocovariances, s = 0..max_lag.
 */
[[nodiscard]] std::vector<double> sample_acf(const IntervalSeries& series, std::size_t max_lag);

/// Standard biased-denominator sample ACF of a scalar sequence.
[[nodiscard]] std::vector<double> component_acf(std::span<const double> values, std::size_t max_lag);

/// Divisor-n sample autocovariances of a scalar sequence for s = 0..max_lag.
[[nodiscard]] std::vector<double> autocovariances(std::span<const double> values, std::size_t max_lag);

[[nodiscard]] SummaryMoments summarize(const IntervalSeries& series, std::size_t max_lag);

}  // namespace intgarch
