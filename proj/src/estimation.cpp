#include "intgarch/estimation.hpp"

#include "intgarch/error.hpp"
#include "intgarch/scoring.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace intgarch {

namespace {

/// Pre-sample values and their theta-derivatives.
struct Presample {
    double h = 0.0;
    double delta = 0.0;
    Eigen::VectorXd dh;
    Eigen::VectorXd ddelta;
    Eigen::MatrixXd d2h;
    Eigen::MatrixXd d2delta;
};

/// Weight of each theta component in sum mu_i (0 for mu itself).
Eigen::VectorXd stationarity_weights(const ModelParams& params) {
    const auto& o = params.orders;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(o.num_theta());
    for (int i = 0; i < o.p; ++i) w[1 + i] = kSqrt2OverPi;
    for (int i = 0; i < o.q; ++i) w[1 + o.p + i] = params.k;
    for (int i = 0; i < o.w; ++i) w[1 + o.p + o.q + i] = 1.0;
    return w;
}

Presample make_presample(const ModelParams& params, InitMode init_mode) {
    const int n = params.orders.num_theta();
    Presample pre;
    pre.dh = Eigen::VectorXd::Zero(n);
    pre.ddelta = Eigen::VectorXd::Zero(n);
    pre.d2h = Eigen::MatrixXd::Zero(n, n);
    pre.d2delta = Eigen::MatrixXd::Zero(n, n);

    const Eigen::VectorXd w = stationarity_weights(params);
    const auto theta = params.theta();
    const Eigen::Map<const Eigen::VectorXd> th(theta.data(), n);
    const double d = 1.0 - w.dot(th);
    if (!(d > 0.0)) {
        if (init_mode == InitMode::MeanH) {
            throw InvalidInput("mean-h initialisation requires sum of mu_i < 1");
        }
        return pre;
    }
    const double mu = params.mu;
    const double mean_h = mu / d;
    // E h = mu / (1 - w'theta)
    Eigen::VectorXd de = w * (mu / (d * d));
    de[0] = 1.0 / d;
    Eigen::MatrixXd d2e = w * w.transpose() * (2.0 * mu / (d * d * d));
    d2e.row(0) = w.transpose() / (d * d);
    d2e.col(0) = w / (d * d);
    d2e(0, 0) = 0.0;

    pre.delta = params.k * mean_h;
    pre.ddelta = params.k * de;
    pre.d2delta = params.k * d2e;
    if (init_mode == InitMode::MeanH) {
        pre.h = mean_h;
        pre.dh = de;
        pre.d2h = d2e;
    }
    return pre;
}

enum class Level { Value, Derivatives };

ScoreHessian run_recursion(const ModelParams& params, const IntervalSeries& series, InitMode init_mode,
                           DerivativeMode mode, Level level) {
    params.validate();
    if (series.empty()) {
        throw InvalidInput("empty input");
    }
    const auto& o = params.orders;
    const int n = o.num_theta();
    const auto big_t = static_cast<long>(series.size());
    const auto lam = series.centers();
    const auto del = series.radii();
    const Presample pre = make_presample(params, init_mode);
    const bool derivs = level == Level::Derivatives;
    const bool full = derivs && mode == DerivativeMode::Full;
    const double k = params.k;
    const int ia = 1;
    const int ib = 1 + o.p;
    const int ig = 1 + o.p + o.q;

    ScoreHessian out;
    out.h_path.resize(series.size());
    if (derivs) {
        out.gradient = Eigen::VectorXd::Zero(n);
        out.hessian = Eigen::MatrixXd::Zero(n, n);
        out.information = Eigen::MatrixXd::Zero(n, n);
    }
    std::vector<Eigen::VectorXd> dh_path;
    std::vector<Eigen::MatrixXd> d2h_path;
    if (full) {
        dh_path.resize(series.size());
        d2h_path.resize(series.size());
    }
    Eigen::VectorXd dh(n);
    Eigen::MatrixXd d2h(n, n);

    double ll = 0.0;
    for (long t = 0; t < big_t; ++t) {
        double h = params.mu;
        if (derivs) {
            dh.setZero();
            dh[0] = 1.0;
        }
        if (full) d2h.setZero();
        for (int i = 0; i < o.p; ++i) {
            const long lag = t - 1 - i;
            const double a = lag >= 0 ? std::abs(lam[lag]) : 0.0;
            h += params.alpha[i] * a;
            if (derivs) dh[ia + i] += a;
        }
        for (int i = 0; i < o.q; ++i) {
            const long lag = t - 1 - i;
            const double b = params.beta[i];
            const double x = lag >= 0 ? del[lag] : pre.delta;
            h += b * x;
            if (derivs) dh[ib + i] += x;
            if (full && lag < 0) {
                dh += b * pre.ddelta;
                d2h += b * pre.d2delta;
                d2h.row(ib + i) += pre.ddelta.transpose();
                d2h.col(ib + i) += pre.ddelta;
            }
        }
        for (int i = 0; i < o.w; ++i) {
            const long lag = t - 1 - i;
            const double g = params.gamma[i];
            const double x = lag >= 0 ? out.h_path[lag] : pre.h;
            h += g * x;
            if (derivs) dh[ig + i] += x;
            if (full) {
                const Eigen::VectorXd& dx = lag >= 0 ? dh_path[lag] : pre.dh;
                const Eigen::MatrixXd& d2x = lag >= 0 ? d2h_path[lag] : pre.d2h;
                dh += g * dx;
                d2h += g * d2x;
                d2h.row(ig + i) += dx.transpose();
                d2h.col(ig + i) += dx;
            }
        }
        if (!std::isfinite(h) || !(h > 0.0)) {
            throw NumericalError("numerical overflow in h recursion");
        }
        out.h_path[t] = h;
        const double l2 = lam[t] * lam[t];
        const double inv = 1.0 / h;
        ll += -(k + 1.0) * std::log(h) - 0.5 * l2 * inv * inv - del[t] * inv;
        if (derivs) {
            const double d1 = -(k + 1.0) * inv + l2 * inv * inv * inv + del[t] * inv * inv;
            const double d2 = (k + 1.0) * inv * inv - 3.0 * l2 * inv * inv * inv * inv - 2.0 * del[t] * inv * inv * inv;
            out.gradient += d1 * dh;
            out.hessian.noalias() += d2 * dh * dh.transpose();
            out.information.noalias() += (k + 2.0) * inv * inv * dh * dh.transpose();
            if (full) {
                out.hessian += d1 * d2h;
                dh_path[t] = dh;
                d2h_path[t] = d2h;
            }
        }
    }
    if (!std::isfinite(ll)) {
        throw NumericalError("numerical overflow in h recursion");
    }
    out.loglik = ll;
    return out;
}

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

double estimate_k(const IntervalSeries& series) {
    if (series.empty()) {
        throw InvalidInput("empty input");
    }
    double abs_sum = 0.0;
    for (double c : series.centers()) abs_sum += std::abs(c);
    if (!(abs_sum > 0.0)) {
        throw InvalidInput("degenerate centers: k not identified");
    }
    const double n = static_cast<double>(series.size());
    const double k = kSqrt2OverPi * mean_of(series.radii()) / (abs_sum / n);
    if (!(k > 0.0)) {
        throw InvalidInput("degenerate radii: k not identified");
    }
    return k;
}

LoglikResult loglik_eval(const ModelParams& params, const IntervalSeries& series, InitMode init_mode) {
    auto r = run_recursion(params, series, init_mode, DerivativeMode::Full, Level::Value);
    return {r.loglik, std::move(r.h_path)};
}

ScoreHessian score_and_hessian(const ModelParams& params, const IntervalSeries& series, InitMode init_mode,
                               DerivativeMode mode) {
    return run_recursion(params, series, init_mode, mode, Level::Derivatives);
}

ModelParams init_theta(const IntervalSeries& series, double k, const ModelOrders& orders, const FitOptions& options) {
    orders.validate();
    if (series.empty()) {
        throw InvalidInput("empty input");
    }
    if (!(k > 0.0)) {
        throw InvalidInput("k must be positive");
    }
    // E(delta_t) = k E(h_t)
    const double h_bar = mean_of(series.radii()) / k;
    ModelParams p;
    p.orders = orders;
    p.k = k;
    p.mu = options.init_fraction * h_bar;
    p.alpha.assign(orders.p, options.coef_budget * kSqrt2OverPi / orders.p);
    p.beta.assign(orders.q, options.coef_budget / (k * orders.q));
    p.gamma.assign(orders.w, orders.w > 0 ? options.coef_budget / orders.w : 0.0);
    if (!(p.mu > 0.0)) {
        throw InvalidInput("degenerate radii: scale level not identified");
    }
    p.validate();
    return p;
}

FittedModel fit_mle(const IntervalSeries& series, const ModelOrders& orders, const FitOptions& options) {
    orders.validate();
    const int n = orders.num_theta();
    const std::size_t floor = 10 * static_cast<std::size_t>(n);
    if (series.size() < floor) {
        throw InvalidInput("series too short: need at least " + std::to_string(floor) + " observations for orders (" +
                           std::to_string(orders.p) + "," + std::to_string(orders.q) + "," +
                           std::to_string(orders.w) + ")");
    }
    const double k = estimate_k(series);
    ModelParams model = init_theta(series, k, orders, options);
    const Eigen::VectorXd weights = stationarity_weights(model);

    auto params_at = [&](const Eigen::VectorXd& x) {
        ModelParams p = model;
        p.set_theta(std::vector<double>(x.data(), x.data() + x.size()));
        return p;
    };
    auto feasible = [&](const Eigen::VectorXd& x) { return x[0] > 0.0 && weights.dot(x) < 1.0; };

    Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(model.theta().data(), n);
    if (options.warm_start && options.warm_start->size() == static_cast<std::size_t>(n)) {
        const Eigen::VectorXd ws = Eigen::Map<const Eigen::VectorXd>(options.warm_start->data(), n);
        if (ws.allFinite() && (ws.array() >= 0.0).all() && feasible(ws)) x0 = ws;
    }

    ScoringProblem problem;
    problem.strict.assign(static_cast<std::size_t>(n), false);
    problem.strict[0] = true;
    problem.feasible = feasible;
    problem.evaluate = [&](const Eigen::VectorXd& x, bool with_derivatives, Evaluation& ev) {
        try {
            auto r = run_recursion(params_at(x), series, options.init_mode, options.derivative_mode,
                                   with_derivatives ? Level::Derivatives : Level::Value);
            ev.value = r.loglik;
            if (with_derivatives) {
                ev.gradient = std::move(r.gradient);
                ev.hessian = std::move(r.hessian);
                ev.information = std::move(r.information);
            }
            return std::isfinite(ev.value);
        } catch (const Error&) {
            return false;
        }
    };
    // With every alpha and beta at 0 the scale path is deterministic and gamma is not identified apart from mu.
    problem.on_fix = [&](Eigen::VectorXd& x, std::vector<bool>& fixed) {
        bool all = true;
        for (int j = 1; j < 1 + orders.p + orders.q; ++j) all = all && fixed[j];
        if (!all) return;
        for (int j = 1 + orders.p + orders.q; j < n; ++j) {
            fixed[j] = true;
            x[j] = 0.0;
        }
    };

    ScoringOptions so;
    so.max_iterations = options.max_iterations;
    so.gradient_tolerance = options.gradient_tolerance;
    so.step_halving_limit = options.step_halving_limit;
    so.boundary_snap = options.boundary_snap;
    so.root_mode = options.derivative_mode == DerivativeMode::DirectOnly;
    const ScoringResult res = maximize_scoring(problem, x0, so);

    FittedModel fit;
    fit.params = params_at(res.x);
    fit.converged = res.converged;
    fit.iterations = res.iterations;
    fit.gradient_max_norm = res.gradient_max_norm;
    fit.init_mode = options.init_mode;
    fit.derivative_mode = options.derivative_mode;
    fit.n_obs = series.size();
    fit.loglik_trace = res.trace;

    const auto full = score_and_hessian(fit.params, series, options.init_mode, options.derivative_mode);
    fit.loglik = full.loglik;
    fit.h_path = full.h_path;

    const auto names = fit.params.theta_names();
    std::vector<int> free;
    for (int j = 0; j < n; ++j) {
        if (res.fixed[j]) {
            fit.boundary_set.push_back(names[j]);
        } else {
            free.push_back(j);
            fit.free_names.push_back(names[j]);
        }
    }
    const auto nf = static_cast<Eigen::Index>(free.size());
    fit.hessian.resize(nf, nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
        for (Eigen::Index b = 0; b < nf; ++b) fit.hessian(a, b) = full.hessian(free[a], free[b]);
    }
    fit.std_errors.assign(static_cast<std::size_t>(n), std::nullopt);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-fit.hessian);
    const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double low = eig.eigenvalues().minCoeff();
    if (!(top > 0.0) || std::abs(low) <= 1e-12 * top) {
        throw NumericalError("Hessian singular: model over-parameterized for data");
    }
    if (low > 0.0) {
        fit.covariance = asymptotic_covariance(fit);
        for (Eigen::Index a = 0; a < nf; ++a) fit.std_errors[free[a]] = std::sqrt(fit.covariance(a, a));
    }
    return fit;
}

Eigen::MatrixXd asymptotic_covariance(const FittedModel& fitted) {
    const Eigen::MatrixXd neg = -fitted.hessian;
    Eigen::LLT<Eigen::MatrixXd> llt(neg);
    if (neg.size() == 0 || llt.info() != Eigen::Success) {
        throw NumericalError("not at an interior maximum");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(neg.rows(), neg.cols()));
    return 0.5 * (inv + inv.transpose());
}

}  // namespace intgarch
