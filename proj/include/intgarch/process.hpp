#pragma once

#include "intgarch/interval.hpp"

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace intgarch {

/// E|Z| for standard normal Z.
inline constexpr double kSqrt2OverPi = std::numbers::sqrt2 * std::numbers::inv_sqrtpi;

/// Lag orders of the scale recursion: p lags of |center|, q of radius, w of scale.
struct ModelOrders {
    int p = 1;
    int q = 1;
    int w = 1;

    /// Throws InvalidInput unless p >= 1, q >= 1, w >= 0.
    void validate() const;
    [[nodiscard]] int m() const noexcept;
    /// Number of variance parameters: 1 + p + q + w.
    [[nodiscard]] int num_theta() const noexcept { return 1 + p + q + w; }
    friend bool operator==(const ModelOrders&, const ModelOrders&) = default;
};

/**
 * Int-GARCH(p,q,w) parameters:
 *   h_t = mu + sum alpha_i |lambda_{t-i}| + sum beta_i delta_{t-i} + sum gamma_i h_{t-i},
 *   r_t = h_t [eps_t - eta_t, eps_t + eta_t],  eps ~ N(0,1),  eta ~ Gamma(k, 1).
 */
struct ModelParams {
    ModelOrders orders;
    double k = 1.0;
    double mu = 1.0;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;

    /// Orders are inferred from the coefficient vector lengths; the result is validated.
    [[nodiscard]] static ModelParams make(double k, double mu, std::vector<double> alpha,
                                          std::vector<double> beta, std::vector<double> gamma);

    /// Throws InvalidInput naming the violated constraint.
    void validate() const;

    /// theta = (mu, alpha_1..p, beta_1..q, gamma_1..w).
    [[nodiscard]] std::vector<double> theta() const;
    void set_theta(const std::vector<double>& theta);
    [[nodiscard]] std::vector<std::string> theta_names() const;

    /// mu_i = E(x_{i,t}) = alpha_i sqrt(2/pi) + beta_i k + gamma_i for i = 1..m.
    [[nodiscard]] std::vector<double> mu_terms() const;
    /// Sum of mu_terms(); equals C1 = E(x_t) for first-order models.
    [[nodiscard]] double c1() const;
    /// Model has at most one lag in each group (the (1,1,1) theory applies with absent terms = 0).
    [[nodiscard]] bool is_first_order() const noexcept;

    [[nodiscard]] double alpha1() const noexcept { return alpha.empty() ? 0.0 : alpha[0]; }
    [[nodiscard]] double beta1() const noexcept { return beta.empty() ? 0.0 : beta[0]; }
    [[nodiscard]] double gamma1() const noexcept { return gamma.empty() ? 0.0 : gamma[0]; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// The m most recent scales and returns, index 0 = lag 1.
struct ProcessState {
    std::vector<double> h_history;
    std::vector<Interval> return_history;

    /// State with every lag set to (h, r).
    [[nodiscard]] static ProcessState constant(int m, double h, const Interval& r);
    /// Shift in a new observation at lag 1.
    void push(double h, const Interval& r);
};

struct TheoreticalMoments {
    double mean_h = 0.0;
    Interval mean_r;
    double c1 = 0.0;
    /// Second-moment quantities exist only for first-order models with c2 < 1.
    std::optional<double> mean_h2;
    std::optional<double> var_r;
    std::optional<double> c2;
};

struct MeanStationarity {
    bool is_stationary = false;
    double mu_sum = 0.0;
};

struct WeakStationarity {
    bool is_stationary = false;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// One step of the scale recursion. Requires histories of length m.
[[nodiscard]] double step_h(const ModelParams& params, const ProcessState& state);

/// Conditional rho2-variance of r_t given the past: h^2 (1 + k).
[[nodiscard]] double conditional_variance(const ModelParams& params, double h);

/// Equal-weight average of the point-return variances inside r_t: (1 + k/3) h^2.
[[nodiscard]] double intgarch_volatility(const ModelParams& params, double h);

/// Finite E(h_t) iff sum of mu_i < 1 (strict).
[[nodiscard]] MeanStationarity mean_stationarity(const ModelParams& params);

/// C2 = E(x_t^2) < 1 (first-order models only).
[[nodiscard]] WeakStationarity weak_stationarity(const ModelParams& params);

/// E(eta_t x_{t+1}) = alpha sqrt(2/pi) k + beta (k + k^2) + gamma k.
[[nodiscard]] double expected_eta_x(const ModelParams& params);

/// E(h_t h_{t+s} eta_t) for s >= 1 (first-order, weakly stationary).
[[nodiscard]] double expected_h_h_eta(const ModelParams& params, int s);

[[nodiscard]] TheoreticalMoments theoretical_moments(const ModelParams& params);

/// Cov(r_t, r_{t+s}) under the rho2 metric; s = 0 gives Var(r_t).
[[nodiscard]] double theoretical_acov(const ModelParams& params, int s);

/// rho(s) for s = 0..max_lag.
[[nodiscard]] std::vector<double> theoretical_acf(const ModelParams& params, int max_lag);

/// Sufficient condition for strict stationarity and ergodicity: E log x_t <= log C1 < 0.
[[nodiscard]] bool strict_stationarity_check(const ModelParams& params);

}  // namespace intgarch
