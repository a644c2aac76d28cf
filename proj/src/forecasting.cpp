#include "intgarch/forecasting.hpp"

#include "intgarch/error.hpp"

#include <cmath>

namespace intgarch {

ForecastResult forecast(const ModelParams& params, const IntervalSeries& history, std::span<const double> h_path,
                        int horizon) {
    params.validate();
    if (horizon < 1) {
        throw InvalidInput("horizon must be >= 1");
    }
    const auto& o = params.orders;
    const auto n = static_cast<long>(history.size());
    if (n < o.m()) {
        throw InvalidInput("insufficient history: need at least max(p,q,w) observations");
    }
    if (h_path.size() != history.size()) {
        throw InvalidInput("h_path must align with history");
    }
    const auto lam = history.centers();
    const auto del = history.radii();

    ForecastResult out;
    out.horizon = horizon;
    out.origin_index = static_cast<std::size_t>(n - 1);
    if (history.has_dates()) out.origin_date = history.dates().back();
    out.h_hat.reserve(static_cast<std::size_t>(horizon));

    // Index n + j is the j-th future step (0-based); lags below n are observed.
    for (int j = 0; j < horizon; ++j) {
        const long target = n + j;
        double h = params.mu;
        for (int i = 0; i < o.p; ++i) {
            const long lag = target - 1 - i;
            h += params.alpha[i] * (lag < n ? std::abs(lam[lag]) : kSqrt2OverPi * out.h_hat[lag - n]);
        }
        for (int i = 0; i < o.q; ++i) {
            const long lag = target - 1 - i;
            h += params.beta[i] * (lag < n ? del[lag] : params.k * out.h_hat[lag - n]);
        }
        for (int i = 0; i < o.w; ++i) {
            const long lag = target - 1 - i;
            h += params.gamma[i] * (lag < n ? h_path[lag] : out.h_hat[lag - n]);
        }
        out.h_hat.push_back(h);
    }
    out.sigma2_hat.reserve(out.h_hat.size());
    for (double h : out.h_hat) out.sigma2_hat.push_back(intgarch_volatility(params, h));
    return out;
}

ForecastResult forecast(const FittedModel& fitted, const IntervalSeries& history, int horizon) {
    return forecast(fitted.params, history, fitted.h_path, horizon);
}

std::vector<RollingOrigin> rolling_forecast(const IntervalSeries& series, const ModelOrders& orders,
                                            const FitOptions& fit_options, const RollingOptions& rolling) {
    if (rolling.max_horizon < 1) {
        throw InvalidInput("horizon must be >= 1");
    }
    if (rolling.refit_every < 1) {
        throw InvalidInput("refit_every must be >= 1");
    }
    if (rolling.train_size < 1 || rolling.train_size >= series.size()) {
        throw InvalidInput("train_size must leave at least one evaluation observation");
    }
    if (rolling.fixed_params) rolling.fixed_params->validate();

    std::vector<RollingOrigin> out;
    std::optional<ModelParams> current = rolling.fixed_params;
    FitOptions opts = fit_options;
    const std::size_t first = rolling.train_size - 1;
    for (std::size_t origin = first; origin + 1 < series.size(); ++origin) {
        RollingOrigin ro;
        ro.origin_index = origin;
        if (series.has_dates()) ro.origin_date = series.dates()[origin];
        const IntervalSeries prefix = series.slice(0, origin + 1);
        try {
            if (!rolling.fixed_params && (origin - first) % rolling.refit_every == 0) {
                if (current) opts.warm_start = current->theta();
                current = fit_mle(prefix, orders, opts).params;
            }
            if (!current) {
                throw NumericalError("no fitted parameters available");
            }
            const auto ll = loglik_eval(*current, prefix, fit_options.init_mode);
            ro.forecast = forecast(*current, prefix, ll.h_path, rolling.max_horizon);
            ro.params = *current;
            ro.ok = true;
        } catch (const Error& e) {
            ro.error = e.what();
        }
        out.push_back(std::move(ro));
    }
    return out;
}

}  // namespace intgarch
