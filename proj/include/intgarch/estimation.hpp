#pragma once

#include "intgarch/interval.hpp"
#include "intgarch/process.hpp"
#include "intgarch/simulator.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace intgarch {

/// How dh_t/dtheta treats lagged scales.
enum class DerivativeMode {
    Full,        ///< recursive: direct term + sum_j gamma_j dh_{t-j}/dtheta
    DirectOnly,  ///< lagged h (and pre-sample values) treated as data
};

struct FitOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
    int step_halving_limit = 60;
    /// Rough guess of 1 - sum mu_i used to initialise mu.
    double init_fraction = 0.4;
    /// Initial contribution of each coefficient group to sum mu_i.
    double coef_budget = 0.2;
    InitMode init_mode = InitMode::MeanH;
    DerivativeMode derivative_mode = DerivativeMode::Full;
    double boundary_snap = 1e-8;
    /// Starting theta (same orders); replaces init_theta when feasible.
    std::optional<std::vector<double>> warm_start;
};

struct LoglikResult {
    double loglik = 0.0;
    std::vector<double> h_path;
};

struct ScoreHessian {
    double loglik = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    /// Expected information sum_t (k+2)/h_t^2 dh dh'.
    Eigen::MatrixXd information;
    std::vector<double> h_path;
};

struct FittedModel {
    ModelParams params;
    std::vector<double> h_path;
    double loglik = 0.0;
    /// Names of the free theta components, in theta order.
    std::vector<std::string> free_names;
    /// Hessian of the log-likelihood over the free components.
    Eigen::MatrixXd hessian;
    /// -hessian^{-1}; empty when the Hessian is not negative definite.
    Eigen::MatrixXd covariance;
    /// One entry per theta component; nullopt for boundary parameters.
    std::vector<std::optional<double>> std_errors;
    bool converged = false;
    int iterations = 0;
    double gradient_max_norm = 0.0;
    std::vector<std::string> boundary_set;
    InitMode init_mode = InitMode::MeanH;
    DerivativeMode derivative_mode = DerivativeMode::Full;
    std::size_t n_obs = 0;
    std::vector<double> loglik_trace;
};

/// Method-of-moments k = sqrt(2/pi) mean(delta) / mean(|lambda|).
[[nodiscard]] double estimate_k(const IntervalSeries& series);

/**
 * l(theta) = sum_t -(k+1) log h_t - lambda_t^2 / (2 h_t^2) - delta_t / h_t.
 *
 * Pre-sample lags use r = E(r_t) = [-k E h, k E h] and h = E h (MeanH) or 0
 * (ZeroH), with E h evaluated at the supplied parameters.
 */
[[nodiscard]] LoglikResult loglik_eval(const ModelParams& params, const IntervalSeries& series,
                                       InitMode init_mode = InitMode::MeanH);

/// Analytic gradient and Hessian of l with respect to theta = (mu, alpha, beta, gamma).
[[nodiscard]] ScoreHessian score_and_hessian(const ModelParams& params, const IntervalSeries& series,
                                             InitMode init_mode = InitMode::MeanH,
                                             DerivativeMode mode = DerivativeMode::Full);

/// Starting values: mu = init_fraction * mean(delta)/k, each group contributing coef_budget split equally.
[[nodiscard]] ModelParams init_theta(const IntervalSeries& series, double k, const ModelOrders& orders,
                                     const FitOptions& options = {});

/**
 * Two-stage fit: k from estimate_k, theta by scoring with step-halving.
 * Coefficients reaching 0 are fixed there and the sub-model is refit.
 * Requires series.size() >= 10 * (1 + p + q + w).
 */
[[nodiscard]] FittedModel fit_mle(const IntervalSeries& series, const ModelOrders& orders,
                                  const FitOptions& options = {});

/// -hessian^{-1} over the free parameters; throws unless the Hessian is negative definite.
[[nodiscard]] Eigen::MatrixXd asymptotic_covariance(const FittedModel& fitted);

}  // namespace intgarch
