#pragma once

#include "intgarch/estimation.hpp"
#include "intgarch/interval.hpp"
#include "intgarch/marketdata.hpp"
#include "intgarch/process.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intgarch {

struct LossOptions {
    /// Use v^2 in the QLIKE/HMSE numerators (as printed); false uses v.
    bool proxy_squared = true;
    /// (v^2/s2 - 1)^2 instead of the printed unsquared form.
    bool hmse_squared = false;
};

/// R^2 of the OLS regression rv = b0 + b1 sigma2 + e.
[[nodiscard]] double mz_r2(std::span<const double> rv, std::span<const double> sigma2);
/// (1/N) sum [log s2 + v^2/s2]
[[nodiscard]] double qlike(std::span<const double> rv, std::span<const double> sigma2, const LossOptions& options = {});
/// (1/N) sum (v^2/s2 - 1)
[[nodiscard]] double hmse(std::span<const double> rv, std::span<const double> sigma2, const LossOptions& options = {});

struct Garch11Params {
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Garch11Fit {
    Garch11Params params;
    /// sigma2[t] is the conditional variance of returns[t]; sigma2[0] = sample variance.
    std::vector<double> sigma2;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    double gradient_max_norm = 0.0;
};

struct Garch11Options {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
    std::optional<Garch11Params> warm_start;
};

/// Conditional variances sigma2[0..n] for sigma2_t = omega + a r_{t-1}^2 + b sigma2_{t-1}; the last entry is one step ahead.
[[nodiscard]] std::vector<double> garch11_filter(const Garch11Params& params, std::span<const double> returns);

/// Gaussian quasi-likelihood sum -0.5 (log s2_t + r_t^2 / s2_t) with its gradient and Hessian over (omega, a, b).
struct Garch11Score {
    double loglik = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};
[[nodiscard]] Garch11Score garch11_score(const Garch11Params& params, std::span<const double> returns);

/// Quasi-MLE by scoring; needs at least 50 returns. a reaching 0 fixes b at 0 too.
[[nodiscard]] Garch11Fit fit_garch11(std::span<const double> returns, const Garch11Options& options = {});

/// sigma2 forecasts 1..horizon from the end of `returns`.
[[nodiscard]] std::vector<double> garch11_forecast(const Garch11Params& params, std::span<const double> returns,
                                                   int horizon);

struct EvalReport {
    std::string asset;
    std::string model;
    /// 0 = in-sample.
    int horizon = 0;
    double r2 = 0.0;
    double qlike = 0.0;
    double hmse = 0.0;
    std::size_t n = 0;
    bool best_r2 = false;
    bool best_qlike = false;
    bool best_hmse = false;
};

/// Volatility forecasts of one model at one horizon, dated by target day.
struct ForecastSeries {
    std::string model;
    int horizon = 0;
    std::vector<Date> dates;
    std::vector<double> sigma2;
};

/**
 * One report per forecast series against the proxy. Every series must carry
 * exactly rv_dates; the first mismatch is reported. Within each horizon the
 * strictly best model per metric is flagged (higher R^2, lower QLIKE/HMSE).
 */
[[nodiscard]] std::vector<EvalReport> compare(const std::vector<ForecastSeries>& forecasts,
                                              const std::vector<Date>& rv_dates, std::span<const double> rv,
                                              const std::string& asset, const LossOptions& options = {});

/// Aligned inputs of a backtest: day t interval return, close-to-close return and proxy.
struct BacktestData {
    IntervalSeries intervals;
    std::vector<double> close_returns;
    std::vector<double> rv;
};

/// Drops the first day (no previous day); requires close prices and rv on every day.
[[nodiscard]] BacktestData backtest_data(const std::vector<DayBars>& days);

struct BacktestOptions {
    ModelOrders orders;
    FitOptions fit;
    /// Observations used for the first fit; evaluation targets follow.
    std::size_t train_size = 0;
    std::vector<int> horizons{1, 2, 5};
    std::size_t refit_every = 1;
    bool in_sample = true;
    LossOptions loss;
};

struct BacktestResult {
    std::vector<EvalReport> reports;
    std::vector<ForecastSeries> forecasts;
    /// Origins skipped because a refit failed, per model.
    std::size_t failed_intgarch = 0;
    std::size_t failed_garch = 0;
};

/**
 * In-sample fit of both models on the whole sample (horizon 0), then rolling
 * out-of-sample forecasts with an expanding window. A target is scored only
 * when both models produced a forecast for it.
 */
[[nodiscard]] BacktestResult backtest(const BacktestData& data, const BacktestOptions& options,
                                      const std::string& asset = "asset");

/// A simulated world: interval returns, closing returns inside each interval and a noisy variance proxy.
struct SyntheticWorld {
    BacktestData data;
    std::vector<double> h_path;
    std::vector<double> true_sigma2;
};

/**
 * Simulates Int-GARCH data (ZeroH start, burn-in 500). The closing return is
 * lambda_t + u_t delta_t with u_t ~ U(-1, 1), i.e. a uniformly placed point of
 * r_t; the proxy is (1 + k/3) h_t^2 times a mean-one lognormal factor with
 * standard deviation noise_sd.
 */
[[nodiscard]] SyntheticWorld simulate_world(const ModelParams& params, std::size_t length, std::uint64_t seed,
                                            double noise_sd);

// ---- Simulation study -------------------------------------------------------

struct Table1Design {
    std::string name;
    ModelParams params;
};

/// Published averages over 100 replications for one parameter; asym_se absent for k.
struct Table1Reference {
    double mean = 0.0;
    double mae = 0.0;
    double emp_se = 0.0;
    std::optional<double> asym_se;
};

/// The four designs with their published summary rows (parameter order: k, mu, alpha1, beta1[, gamma1]).
struct PaperDesign {
    Table1Design design;
    std::vector<Table1Reference> reference;
};
[[nodiscard]] std::vector<PaperDesign> paper_table1();

struct Table1Row {
    std::string model;
    std::string parameter;
    double true_value = 0.0;
    double mean = 0.0;
    double mae = 0.0;
    double emp_se = 0.0;
    /// Mean of the per-replication standard errors; absent for k.
    std::optional<double> asym_se;
    std::size_t reps_used = 0;
};

struct Table1Options {
    std::size_t reps = 100;
    std::size_t length = 1000;
    std::uint64_t seed = 20140101;
    unsigned jobs = 1;
    FitOptions fit;
};

struct Table1Result {
    std::vector<Table1Row> rows;
    /// Replications whose fit threw or did not converge, per design.
    std::vector<std::size_t> failures;
};

struct Replication {
    bool ok = false;
    double k = 0.0;
    std::vector<double> theta;
    std::vector<std::optional<double>> std_errors;
};

/// Independent simulate-and-fit replications; replication r uses seed derive_seed(seed, stream_base + r).
[[nodiscard]] std::vector<Replication> replicate(const ModelParams& params, std::size_t reps, std::size_t length,
                                                 std::uint64_t seed, std::uint64_t stream_base, unsigned jobs,
                                                 const FitOptions& fit);

/// Simulates (burn-in 0, h_0 = 0, r_0 = E r_t) and fits each design `reps` times.
[[nodiscard]] Table1Result reproduce_table1(const std::vector<Table1Design>& designs, const Table1Options& options);

void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports);
void write_reports_text(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace intgarch
