#include "intgarch/evaluation.hpp"

#include "intgarch/error.hpp"
#include "intgarch/forecasting.hpp"
#include "intgarch/rng.hpp"
#include "intgarch/scoring.hpp"
#include "intgarch/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

namespace intgarch {

namespace {

void check_pair(std::span<const double> rv, std::span<const double> sigma2, std::size_t min_len) {
    if (rv.size() != sigma2.size()) {
        throw InvalidInput("rv and sigma2 must have equal length");
    }
    if (rv.size() < min_len) {
        throw InvalidInput("need at least " + std::to_string(min_len) + " observations");
    }
}

void check_positive(std::span<const double> sigma2) {
    for (double s : sigma2) {
        if (!(s > 0.0)) {
            throw InvalidInput("sigma2 must be strictly positive");
        }
    }
}

double proxy_term(double v, const LossOptions& o) { return o.proxy_squared ? v * v : v; }

}  // namespace

double mz_r2(std::span<const double> rv, std::span<const double> sigma2) {
    check_pair(rv, sigma2, 3);
    const double n = static_cast<double>(rv.size());
    const double my = std::accumulate(rv.begin(), rv.end(), 0.0) / n;
    const double mx = std::accumulate(sigma2.begin(), sigma2.end(), 0.0) / n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t t = 0; t < rv.size(); ++t) {
        const double dx = sigma2[t] - mx;
        const double dy = rv[t] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw InvalidInput("R² undefined");
    }
    return std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
}

double qlike(std::span<const double> rv, std::span<const double> sigma2, const LossOptions& options) {
    check_pair(rv, sigma2, 1);
    check_positive(sigma2);
    double sum = 0.0;
    for (std::size_t t = 0; t < rv.size(); ++t) sum += std::log(sigma2[t]) + proxy_term(rv[t], options) / sigma2[t];
    return sum / static_cast<double>(rv.size());
}

double hmse(std::span<const double> rv, std::span<const double> sigma2, const LossOptions& options) {
    check_pair(rv, sigma2, 1);
    check_positive(sigma2);
    double sum = 0.0;
    for (std::size_t t = 0; t < rv.size(); ++t) {
        const double e = proxy_term(rv[t], options) / sigma2[t] - 1.0;
        sum += options.hmse_squared ? e * e : e;
    }
    return sum / static_cast<double>(rv.size());
}

// ---- GARCH(1,1) -------------------------------------------------------------

namespace {

double sample_variance_of(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (n - 1.0);
}

}  // namespace

std::vector<double> garch11_filter(const Garch11Params& params, std::span<const double> returns) {
    if (returns.size() < 2) {
        throw InvalidInput("insufficient data");
    }
    std::vector<double> s2(returns.size() + 1);
    s2[0] = sample_variance_of(returns);
    for (std::size_t t = 1; t <= returns.size(); ++t) {
        s2[t] = params.omega + params.a * returns[t - 1] * returns[t - 1] + params.b * s2[t - 1];
    }
    return s2;
}

Garch11Score garch11_score(const Garch11Params& params, std::span<const double> returns) {
    if (returns.size() < 2) {
        throw InvalidInput("insufficient data");
    }
    Garch11Score out;
    out.gradient = Eigen::Vector3d::Zero();
    out.hessian = Eigen::Matrix3d::Zero();
    double s2 = sample_variance_of(returns);
    Eigen::Vector3d ds = Eigen::Vector3d::Zero();
    Eigen::Matrix3d d2s = Eigen::Matrix3d::Zero();
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (t > 0) {
            const double r2 = returns[t - 1] * returns[t - 1];
            Eigen::Matrix3d d2 = params.b * d2s;
            d2.row(2) += ds.transpose();
            d2.col(2) += ds;
            const Eigen::Vector3d direct(1.0, r2, s2);
            ds = direct + params.b * ds;
            d2s = d2;
            s2 = params.omega + params.a * r2 + params.b * s2;
        }
        if (!std::isfinite(s2) || !(s2 > 0.0)) {
            throw NumericalError("numerical overflow in variance recursion");
        }
        const double y2 = returns[t] * returns[t];
        out.loglik += -0.5 * (std::log(s2) + y2 / s2);
        const double l1 = -0.5 * (1.0 / s2 - y2 / (s2 * s2));
        const double l2 = -0.5 * (-1.0 / (s2 * s2) + 2.0 * y2 / (s2 * s2 * s2));
        out.gradient += l1 * ds;
        out.hessian += l2 * ds * ds.transpose() + l1 * d2s;
    }
    return out;
}

Garch11Fit fit_garch11(std::span<const double> returns, const Garch11Options& options) {
    if (returns.size() < 50) {
        throw InvalidInput("GARCH(1,1) fit needs at least 50 returns");
    }
    const double var = sample_variance_of(returns);
    if (!(var > 0.0)) {
        throw InvalidInput("degenerate returns: zero variance");
    }
    Eigen::Vector3d x0(0.1 * var, 0.1, 0.8);
    if (options.warm_start) {
        const auto& w = *options.warm_start;
        if (w.omega > 0.0 && w.a >= 0.0 && w.b >= 0.0 && w.a + w.b < 1.0) x0 = {w.omega, w.a, w.b};
    }
    auto params_of = [](const Eigen::VectorXd& x) { return Garch11Params{x[0], x[1], x[2]}; };

    ScoringProblem problem;
    problem.strict = {true, false, false};
    problem.feasible = [](const Eigen::VectorXd& x) { return x[1] + x[2] < 1.0; };
    problem.evaluate = [&](const Eigen::VectorXd& x, bool with_derivatives, Evaluation& ev) {
        try {
            auto s = garch11_score(params_of(x), returns);
            ev.value = s.loglik;
            if (with_derivatives) {
                ev.gradient = std::move(s.gradient);
                ev.hessian = std::move(s.hessian);
            }
            return std::isfinite(ev.value);
        } catch (const Error&) {
            return false;
        }
    };
    // Without the ARCH term b only shapes the decay of the fixed start value.
    problem.on_fix = [](Eigen::VectorXd& x, std::vector<bool>& fixed) {
        if (fixed[1]) {
            fixed[2] = true;
            x[2] = 0.0;
        }
    };
    ScoringOptions so;
    so.max_iterations = options.max_iterations;
    so.gradient_tolerance = options.gradient_tolerance;
    const auto res = maximize_scoring(problem, x0, so);

    Garch11Fit fit;
    fit.params = params_of(res.x);
    fit.loglik = res.at_optimum.value;
    fit.converged = res.converged;
    fit.iterations = res.iterations;
    fit.gradient_max_norm = res.gradient_max_norm;
    fit.sigma2 = garch11_filter(fit.params, returns);
    fit.sigma2.pop_back();
    return fit;
}

std::vector<double> garch11_forecast(const Garch11Params& params, std::span<const double> returns, int horizon) {
    if (horizon < 1) {
        throw InvalidInput("horizon must be >= 1");
    }
    const auto path = garch11_filter(params, returns);
    std::vector<double> out{path.back()};
    for (int j = 1; j < horizon; ++j) out.push_back(params.omega + (params.a + params.b) * out.back());
    return out;
}

// ---- Comparison -------------------------------------------------------------

std::vector<EvalReport> compare(const std::vector<ForecastSeries>& forecasts, const std::vector<Date>& rv_dates,
                                std::span<const double> rv, const std::string& asset, const LossOptions& options) {
    if (rv_dates.size() != rv.size()) {
        throw InvalidInput("rv dates and values differ in length");
    }
    std::vector<EvalReport> out;
    for (const auto& f : forecasts) {
        if (f.dates.size() != f.sigma2.size()) {
            throw InvalidInput("forecast " + f.model + " has mismatched dates and values");
        }
        const std::size_t n = std::min(f.dates.size(), rv_dates.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (f.dates[i] != rv_dates[i]) {
                throw InvalidInput("misaligned dates: " + f.model + " horizon " + std::to_string(f.horizon) +
                                   " has " + format_date(f.dates[i]) + " where rv has " + format_date(rv_dates[i]));
            }
        }
        if (f.dates.size() != rv_dates.size()) {
            throw InvalidInput("misaligned dates: " + f.model + " horizon " + std::to_string(f.horizon) + " has " +
                               std::to_string(f.dates.size()) + " rows, rv has " + std::to_string(rv_dates.size()));
        }
        EvalReport r;
        r.asset = asset;
        r.model = f.model;
        r.horizon = f.horizon;
        r.n = rv.size();
        r.r2 = mz_r2(rv, f.sigma2);
        r.qlike = qlike(rv, f.sigma2, options);
        r.hmse = hmse(rv, f.sigma2, options);
        out.push_back(std::move(r));
    }
    std::map<int, std::vector<std::size_t>> by_horizon;
    for (std::size_t i = 0; i < out.size(); ++i) by_horizon[out[i].horizon].push_back(i);
    auto mark = [&](const std::vector<std::size_t>& idx, auto key, auto flag, bool higher) {
        std::size_t best = idx.front();
        bool unique = true;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            const double v = key(out[idx[k]]);
            const double b = key(out[best]);
            if (v == b) {
                unique = false;
            } else if (higher ? v > b : v < b) {
                best = idx[k];
                unique = true;
            }
        }
        if (unique && idx.size() > 1) out[best].*flag = true;
    };
    for (const auto& [h, idx] : by_horizon) {
        mark(idx, [](const EvalReport& r) { return r.r2; }, &EvalReport::best_r2, true);
        mark(idx, [](const EvalReport& r) { return r.qlike; }, &EvalReport::best_qlike, false);
        mark(idx, [](const EvalReport& r) { return r.hmse; }, &EvalReport::best_hmse, false);
    }
    return out;
}

BacktestData backtest_data(const std::vector<DayBars>& days) {
    BacktestData data;
    data.intervals = interval_returns(days);
    data.close_returns = closing_returns(days);
    for (std::size_t t = 1; t < days.size(); ++t) {
        if (!days[t].rv) {
            throw InvalidInput("realized variance missing on " + format_date(days[t].date));
        }
        data.rv.push_back(*days[t].rv);
    }
    return data;
}

BacktestResult backtest(const BacktestData& data, const BacktestOptions& options, const std::string& asset) {
    const std::size_t n = data.intervals.size();
    if (data.close_returns.size() != n || data.rv.size() != n) {
        throw InvalidInput("backtest inputs must be aligned (intervals, closing returns, rv)");
    }
    if (options.horizons.empty()) {
        throw InvalidInput("at least one horizon is required");
    }
    for (int h : options.horizons) {
        if (h < 1) throw InvalidInput("horizons must be >= 1");
    }
    std::vector<Date> dates(n);
    for (std::size_t t = 0; t < n; ++t) {
        dates[t] = data.intervals.has_dates() ? data.intervals.dates()[t] : Date(std::chrono::days(t));
    }
    const std::string ig = "Int-GARCH";
    const std::string g = "GARCH(1,1)";
    BacktestResult result;
    std::vector<ForecastSeries> series;

    if (options.in_sample) {
        const auto fit = fit_mle(data.intervals, options.orders, options.fit);
        ForecastSeries a{ig, 0, dates, {}};
        for (double h : fit.h_path) a.sigma2.push_back(intgarch_volatility(fit.params, h));
        const auto gfit = fit_garch11(data.close_returns);
        ForecastSeries b{g, 0, dates, gfit.sigma2};
        const auto rep = compare({a, b}, dates, data.rv, asset, options.loss);
        result.reports.insert(result.reports.end(), rep.begin(), rep.end());
        series.push_back(std::move(a));
        series.push_back(std::move(b));
    }

    if (options.train_size > 0 && options.train_size < n) {
        const int max_h = *std::max_element(options.horizons.begin(), options.horizons.end());
        RollingOptions ro;
        ro.train_size = options.train_size;
        ro.max_horizon = max_h;
        ro.refit_every = options.refit_every;
        const auto int_fc = rolling_forecast(data.intervals, options.orders, options.fit, ro);

        // GARCH on the same origins and refit schedule.
        std::vector<std::optional<std::vector<double>>> garch_fc;
        std::optional<Garch11Params> current;
        const std::size_t first = options.train_size - 1;
        for (std::size_t origin = first; origin + 1 < n; ++origin) {
            const std::span<const double> prefix(data.close_returns.data(), origin + 1);
            try {
                if ((origin - first) % options.refit_every == 0) {
                    Garch11Options go;
                    go.warm_start = current;
                    current = fit_garch11(prefix, go).params;
                }
                if (!current) throw NumericalError("no fitted parameters available");
                garch_fc.emplace_back(garch11_forecast(*current, prefix, max_h));
            } catch (const Error&) {
                garch_fc.emplace_back(std::nullopt);
            }
        }
        for (const auto& o : int_fc) result.failed_intgarch += o.ok ? 0 : 1;
        for (const auto& o : garch_fc) result.failed_garch += o ? 0 : 1;

        for (int h : options.horizons) {
            ForecastSeries a{ig, h, {}, {}};
            ForecastSeries b{g, h, {}, {}};
            std::vector<Date> target_dates;
            std::vector<double> target_rv;
            for (std::size_t i = 0; i < int_fc.size(); ++i) {
                const std::size_t target = int_fc[i].origin_index + static_cast<std::size_t>(h);
                if (target >= n || !int_fc[i].ok || !garch_fc[i]) continue;
                a.sigma2.push_back(int_fc[i].forecast.sigma2_hat[h - 1]);
                b.sigma2.push_back((*garch_fc[i])[h - 1]);
                target_dates.push_back(dates[target]);
                target_rv.push_back(data.rv[target]);
            }
            if (target_rv.size() < 3) continue;
            a.dates = target_dates;
            b.dates = target_dates;
            const auto rep = compare({a, b}, target_dates, target_rv, asset, options.loss);
            result.reports.insert(result.reports.end(), rep.begin(), rep.end());
            series.push_back(std::move(a));
            series.push_back(std::move(b));
        }
    }
    result.forecasts = std::move(series);
    return result;
}

SyntheticWorld simulate_world(const ModelParams& params, std::size_t length, std::uint64_t seed, double noise_sd) {
    if (noise_sd < 0.0) {
        throw InvalidInput("noise_sd must be nonnegative");
    }
    SimConfig cfg;
    cfg.params = params;
    cfg.length = length;
    cfg.burn_in = 500;
    cfg.seed = seed;
    cfg.init_mode = InitMode::ZeroH;
    auto sim = simulate(cfg);
    auto aux = make_stream(seed, Stream::Auxiliary);
    const double s2 = std::log1p(noise_sd * noise_sd);
    const double s = std::sqrt(s2);

    SyntheticWorld w;
    w.h_path = std::move(sim.h_path);
    std::vector<Date> dates(length);
    for (std::size_t t = 0; t < length; ++t) dates[t] = Date(std::chrono::days(t + 1));
    for (std::size_t t = 0; t < length; ++t) {
        const auto& r = sim.series[t];
        const double u = 2.0 * aux.uniform() - 1.0;
        w.data.close_returns.push_back(r.center() + u * r.radius());
        const double sigma2 = intgarch_volatility(params, w.h_path[t]);
        w.true_sigma2.push_back(sigma2);
        w.data.rv.push_back(sigma2 * std::exp(s * aux.normal() - 0.5 * s2));
    }
    w.data.intervals = IntervalSeries(sim.series.items(), std::move(dates));
    return w;
}

// ---- Simulation study -------------------------------------------------------

std::vector<PaperDesign> paper_table1() {
    using R = Table1Reference;
    return {
        {{"I", ModelParams::make(1.8147, 0.0906, {0.0318}, {0.374}, {0.1265})},
         {R{1.8081, 0.077, 0.1061, std::nullopt}, R{0.0887, 0.0072, 0.0086, 0.0082}, R{0.0284, 0.0184, 0.0235, 0.0211},
          R{0.3586, 0.0171, 0.0148, 0.0149}, R{0.1269, 0.0314, 0.0381, 0.0314}}},
        {{"II", ModelParams::make(1.2134, 0.071, {0.1833}, {0.2334}, {0.1732})},
         {R{1.2251, 0.0412, 0.05, std::nullopt}, R{0.0712, 0.0068, 0.0086, 0.0094}, R{0.1784, 0.025, 0.0318, 0.0306},
          R{0.2345, 0.0152, 0.0192, 0.0207}, R{0.174, 0.0467, 0.0579, 0.0602}}},
        {{"III", ModelParams::make(1.5139, 0.074, {0.037}, {0.3436}, {})},
         {R{1.5045, 0.04, 0.0506, std::nullopt}, R{0.0738, 0.0026, 0.0034, 0.0036}, R{0.0334, 0.0185, 0.0228, 0.0208},
          R{0.3426, 0.0139, 0.017, 0.0174}}},
        {{"IV", ModelParams::make(1.3632, 0.0584, {0.1927}, {0.322}, {})},
         {R{1.3621, 0.038, 0.0486, std::nullopt}, R{0.0593, 0.0029, 0.0037, 0.0033}, R{0.1962, 0.0208, 0.026, 0.0269},
          R{0.3253, 0.0161, 0.0197, 0.0195}}},
    };
}

std::vector<Replication> replicate(const ModelParams& params, std::size_t reps, std::size_t length,
                                   std::uint64_t seed, std::uint64_t stream_base, unsigned jobs,
                                   const FitOptions& fit) {
    params.validate();
    std::vector<Replication> out(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < reps; r = next++) {
            SimConfig cfg;
            cfg.params = params;
            cfg.length = length;
            cfg.burn_in = 0;
            cfg.seed = derive_seed(seed, stream_base + r);
            cfg.init_mode = InitMode::ZeroH;
            Replication rep;
            try {
                const auto sim = simulate(cfg);
                const auto f = fit_mle(sim.series, params.orders, fit);
                rep.ok = f.converged;
                rep.k = f.params.k;
                rep.theta = f.params.theta();
                rep.std_errors = f.std_errors;
            } catch (const Error&) {
                rep.ok = false;
            }
            out[r] = std::move(rep);
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(reps)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

Table1Result reproduce_table1(const std::vector<Table1Design>& designs, const Table1Options& options) {
    if (options.reps < 2) {
        throw InvalidInput("reps must be >= 2");
    }
    Table1Result result;
    for (std::size_t d = 0; d < designs.size(); ++d) {
        const auto& design = designs[d];
        const auto reps = replicate(design.params, options.reps, options.length, options.seed,
                                    static_cast<std::uint64_t>(d) * 1'000'000, options.jobs, options.fit);
        std::vector<const Replication*> ok;
        for (const auto& r : reps) {
            if (r.ok) ok.push_back(&r);
        }
        result.failures.push_back(reps.size() - ok.size());
        const auto names = design.params.theta_names();
        const auto truth = design.params.theta();
        const std::size_t n_par = truth.size() + 1;
        for (std::size_t j = 0; j < n_par; ++j) {
            Table1Row row;
            row.model = design.name;
            row.parameter = j == 0 ? "k" : names[j - 1];
            row.true_value = j == 0 ? design.params.k : truth[j - 1];
            row.reps_used = ok.size();
            std::vector<double> est;
            double se_sum = 0.0;
            std::size_t se_n = 0;
            for (const auto* r : ok) {
                est.push_back(j == 0 ? r->k : r->theta[j - 1]);
                if (j > 0 && r->std_errors[j - 1]) {
                    se_sum += *r->std_errors[j - 1];
                    ++se_n;
                }
            }
            if (!est.empty()) {
                const double n = static_cast<double>(est.size());
                row.mean = std::accumulate(est.begin(), est.end(), 0.0) / n;
                double mae = 0.0;
                double ss = 0.0;
                for (double e : est) {
                    mae += std::abs(e - row.true_value);
                    ss += (e - row.mean) * (e - row.mean);
                }
                row.mae = mae / n;
                row.emp_se = est.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            }
            if (se_n > 0) row.asym_se = se_sum / static_cast<double>(se_n);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
    out << "asset,model,horizon,metric,value,n,best\n";
    for (const auto& r : reports) {
        const std::pair<const char*, std::pair<double, bool>> metrics[] = {
            {"r2", {r.r2, r.best_r2}}, {"qlike", {r.qlike, r.best_qlike}}, {"hmse", {r.hmse, r.best_hmse}}};
        for (const auto& [name, vb] : metrics) {
            out << r.asset << ',' << r.model << ',' << r.horizon << ',' << name << ',' << format_double(vb.first) << ','
                << r.n << ',' << (vb.second ? 1 : 0) << '\n';
        }
    }
}

void write_reports_text(std::ostream& out, const std::vector<EvalReport>& reports) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-12s %7s %10s %10s %10s %6s\n", "asset", "model", "horizon", "R2", "QLIKE",
                  "HMSE", "N");
    out << line;
    for (const auto& r : reports) {
        auto cellf = [](double v, bool best) {
            char b[32];
            std::snprintf(b, sizeof b, "%.4f%s", v, best ? "*" : "");
            return std::string(b);
        };
        std::snprintf(line, sizeof line, "%-10s %-12s %7d %10s %10s %10s %6zu\n", r.asset.c_str(), r.model.c_str(),
                      r.horizon, cellf(r.r2, r.best_r2).c_str(), cellf(r.qlike, r.best_qlike).c_str(),
                      cellf(r.hmse, r.best_hmse).c_str(), r.n);
        out << line;
    }
    out << "(* = better of the two models on that metric)\n";
}

}  // namespace intgarch
