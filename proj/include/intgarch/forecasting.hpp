#pragma once

#include "intgarch/estimation.hpp"
#include "intgarch/interval.hpp"
#include "intgarch/process.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intgarch {

struct ForecastResult {
    int horizon = 0;
    /// h_hat[j] = h_t(j + 1).
    std::vector<double> h_hat;
    /// (1 + k/3) h_hat^2
    std::vector<double> sigma2_hat;
    std::size_t origin_index = 0;
    std::optional<Date> origin_date;
};

/**
 * Forecasts from origin t = history.size() - 1.
 *
 * Step 1 uses the observed lags. Later steps substitute sqrt(2/pi) h_hat,
 * k h_hat and h_hat for the unobserved |lambda|, delta and h, which for
 * first-order models is h(l) = mu + c1 h(l-1).
 * h_path must be aligned with history (one scale per observation).
 */
[[nodiscard]] ForecastResult forecast(const ModelParams& params, const IntervalSeries& history,
                                      std::span<const double> h_path, int horizon);

/// Same, using the fitted in-sample scale path.
[[nodiscard]] ForecastResult forecast(const FittedModel& fitted, const IntervalSeries& history, int horizon);

struct RollingOptions {
    /// Observations in the first training prefix; the first origin is train_size - 1.
    std::size_t train_size = 0;
    int max_horizon = 5;
    /// Refit every this many origins (1 = daily).
    std::size_t refit_every = 1;
    /// When set, no fitting happens and these parameters are used at every origin.
    std::optional<ModelParams> fixed_params;
};

struct RollingOrigin {
    std::size_t origin_index = 0;
    std::optional<Date> origin_date;
    bool ok = false;
    std::string error;
    /// Parameters used at this origin (valid when ok).
    ModelParams params;
    ForecastResult forecast;
};

/**
 * Walks origins train_size-1 .. size-2 with an expanding training window.
 * A failed refit marks its origin as not ok; later origins keep going.
 */
[[nodiscard]] std::vector<RollingOrigin> rolling_forecast(const IntervalSeries& series, const ModelOrders& orders,
                                                          const FitOptions& fit_options,
                                                          const RollingOptions& rolling);

}  // namespace intgarch
