#include "intgarch/interval.hpp"

#include "intgarch/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace intgarch {

Interval::Interval(double center, double radius) : center_(center), radius_(radius) {
    if (!std::isfinite(center) || !std::isfinite(radius)) {
        throw InvalidInput("interval components must be finite");
    }
    if (radius < 0.0) {
        throw InvalidInput("interval radius must be nonnegative");
    }
}

Interval Interval::from_bounds(double lower, double upper) {
    if (!(upper >= lower)) {
        throw InvalidInput("interval upper bound below lower bound");
    }
    // Rounding can push (upper - lower) / 2 a hair negative only when upper == lower.
    return Interval(0.5 * (lower + upper), std::max(0.0, 0.5 * (upper - lower)));
}

IntervalSeries::IntervalSeries(std::vector<Interval> items) : items_(std::move(items)) { build_views(); }

IntervalSeries::IntervalSeries(std::vector<Interval> items, std::vector<Date> dates)
    : items_(std::move(items)) {
    if (dates.size() != items_.size()) {
        throw InvalidInput("date count does not match interval count");
    }
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(dates[t - 1] < dates[t])) {
            throw InvalidInput("dates must be strictly increasing");
        }
    }
    dates_ = std::move(dates);
    build_views();
}

IntervalSeries IntervalSeries::from_components(std::span<const double> centers, std::span<const double> radii) {
    if (centers.size() != radii.size()) {
        throw InvalidInput("center and radius sequences differ in length");
    }
    std::vector<Interval> items;
    items.reserve(centers.size());
    for (std::size_t t = 0; t < centers.size(); ++t) {
        items.emplace_back(centers[t], radii[t]);
    }
    return IntervalSeries(std::move(items));
}

const std::vector<Date>& IntervalSeries::dates() const {
    if (!dates_) {
        throw InvalidInput("series carries no dates");
    }
    return *dates_;
}

IntervalSeries IntervalSeries::slice(std::size_t first, std::size_t count) const {
    if (first > items_.size() || count > items_.size() - first) {
        throw InvalidInput("slice out of range");
    }
    std::vector<Interval> items(items_.begin() + first, items_.begin() + first + count);
    if (dates_) {
        std::vector<Date> dates(dates_->begin() + first, dates_->begin() + first + count);
        return IntervalSeries(std::move(items), std::move(dates));
    }
    return IntervalSeries(std::move(items));
}

void IntervalSeries::build_views() {
    centers_.resize(items_.size());
    radii_.resize(items_.size());
    for (std::size_t t = 0; t < items_.size(); ++t) {
        centers_[t] = items_[t].center();
        radii_[t] = items_[t].radius();
    }
}

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double cross_sum(std::span<const double> x, std::span<const double> y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        acc += (x[t] - mx) * (y[t] - my);
    }
    return acc;
}

}  // namespace

double rho2_distance(const Interval& x, const Interval& y) noexcept {
    return std::hypot(x.center() - y.center(), x.radius() - y.radius());
}

Interval aumann_mean(const IntervalSeries& series) {
    if (series.empty()) {
        throw InvalidInput("empty input");
    }
    return Interval(mean_of(series.centers()), mean_of(series.radii()));
}

double sample_variance(const IntervalSeries& series) {
    if (series.size() < 2) {
        throw InvalidInput("insufficient data");
    }
    const double n1 = static_cast<double>(series.size() - 1);
    return (cross_sum(series.centers(), series.centers()) + cross_sum(series.radii(), series.radii())) / n1;
}

double sample_covariance(const IntervalSeries& x, const IntervalSeries& y) {
    if (x.size() != y.size()) {
        throw InvalidInput("series lengths differ");
    }
    if (x.size() < 2) {
        throw InvalidInput("insufficient data");
    }
    const double n1 = static_cast<double>(x.size() - 1);
    return (cross_sum(x.centers(), y.centers()) + cross_sum(x.radii(), y.radii())) / n1;
}

double sample_correlation(const IntervalSeries& x, const IntervalSeries& y) {
    const double vx = sample_variance(x);
    const double vy = sample_variance(y);
    if (vx <= 0.0 || vy <= 0.0) {
        throw InvalidInput("degenerate series");
    }
    return sample_covariance(x, y) / std::sqrt(vx * vy);
}

std::vector<double> autocovariances(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n < max_lag + 2) {
        throw InvalidInput("insufficient data");
    }
    const double m = mean_of(values);
    std::vector<double> dev(n);
    std::transform(values.begin(), values.end(), dev.begin(), [m](double v) { return v - m; });
    std::vector<double> out(max_lag + 1, 0.0);
    for (std::size_t s = 0; s <= max_lag; ++s) {
        double acc = 0.0;
        for (std::size_t t = 0; t + s < n; ++t) {
            acc += dev[t] * dev[t + s];
        }
        out[s] = acc / static_cast<double>(n);
    }
    return out;
}

std::vector<double> component_acf(std::span<const double> values, std::size_t max_lag) {
    auto gamma = autocovariances(values, max_lag);
    if (!(gamma[0] > 0.0)) {
        throw InvalidInput("degenerate series");
    }
    const double g0 = gamma[0];
    for (double& g : gamma) {
        g /= g0;
    }
    gamma[0] = 1.0;
    return gamma;
}

std::vector<double> sample_acf(const IntervalSeries& series, std::size_t max_lag) {
    const auto gc = autocovariances(series.centers(), max_lag);
    const auto gr = autocovariances(series.radii(), max_lag);
    const double denom = gc[0] + gr[0];
    if (!(denom > 0.0)) {
        throw InvalidInput("degenerate series");
    }
    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t s = 1; s <= max_lag; ++s) {
        out[s] = (gc[s] + gr[s]) / denom;
    }
    return out;
}

SummaryMoments summarize(const IntervalSeries& series, std::size_t max_lag) {
    const auto gc = autocovariances(series.centers(), max_lag);
    const auto gr = autocovariances(series.radii(), max_lag);
    SummaryMoments out;
    out.mean = aumann_mean(series);
    out.autocovariances.resize(max_lag + 1);
    for (std::size_t s = 0; s <= max_lag; ++s) {
        out.autocovariances[s] = gc[s] + gr[s];
    }
    out.variance = out.autocovariances[0];
    return out;
}

}  // namespace intgarch
