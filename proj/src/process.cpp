#include "intgarch/process.hpp"

#include "intgarch/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace intgarch {

void ModelOrders::validate() const {
    if (p < 1) {
        throw InvalidInput("order p must be >= 1");
    }
    if (q < 1) {
        throw InvalidInput("order q must be >= 1");
    }
    if (w < 0) {
        throw InvalidInput("order w must be >= 0");
    }
}

int ModelOrders::m() const noexcept { return std::max({p, q, w}); }

ModelParams ModelParams::make(double k, double mu, std::vector<double> alpha, std::vector<double> beta,
                              std::vector<double> gamma) {
    ModelParams out;
    out.orders = ModelOrders{static_cast<int>(alpha.size()), static_cast<int>(beta.size()),
                             static_cast<int>(gamma.size())};
    out.k = k;
    out.mu = mu;
    out.alpha = std::move(alpha);
    out.beta = std::move(beta);
    out.gamma = std::move(gamma);
    out.validate();
    return out;
}

void ModelParams::validate() const {
    orders.validate();
    if (alpha.size() != static_cast<std::size_t>(orders.p) || beta.size() != static_cast<std::size_t>(orders.q) ||
        gamma.size() != static_cast<std::size_t>(orders.w)) {
        throw InvalidInput("coefficient counts do not match orders (p,q,w)");
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidInput("k must be positive");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw InvalidInput("mu must be positive");
    }
    auto check = [](const std::vector<double>& v, const char* name) {
        for (double c : v) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw InvalidInput(std::string(name) + " coefficients must be nonnegative");
            }
        }
    };
    check(alpha, "alpha");
    check(beta, "beta");
    check(gamma, "gamma");
}

std::vector<double> ModelParams::theta() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(orders.num_theta()));
    out.push_back(mu);
    out.insert(out.end(), alpha.begin(), alpha.end());
    out.insert(out.end(), beta.begin(), beta.end());
    out.insert(out.end(), gamma.begin(), gamma.end());
    return out;
}

void ModelParams::set_theta(const std::vector<double>& theta) {
    if (theta.size() != static_cast<std::size_t>(orders.num_theta())) {
        throw InvalidInput("theta has wrong length for orders");
    }
    auto it = theta.begin();
    mu = *it++;
    std::copy_n(it, orders.p, alpha.begin());
    it += orders.p;
    std::copy_n(it, orders.q, beta.begin());
    it += orders.q;
    std::copy_n(it, orders.w, gamma.begin());
}

std::vector<std::string> ModelParams::theta_names() const {
    std::vector<std::string> names{"mu"};
    for (int i = 1; i <= orders.p; ++i) names.push_back("alpha" + std::to_string(i));
    for (int i = 1; i <= orders.q; ++i) names.push_back("beta" + std::to_string(i));
    for (int i = 1; i <= orders.w; ++i) names.push_back("gamma" + std::to_string(i));
    return names;
}

std::vector<double> ModelParams::mu_terms() const {
    const int m = orders.m();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        if (i < orders.p) out[i] += alpha[i] * kSqrt2OverPi;
        if (i < orders.q) out[i] += beta[i] * k;
        if (i < orders.w) out[i] += gamma[i];
    }
    return out;
}

double ModelParams::c1() const {
    const auto terms = mu_terms();
    return std::accumulate(terms.begin(), terms.end(), 0.0);
}

bool ModelParams::is_first_order() const noexcept { return orders.p <= 1 && orders.q <= 1 && orders.w <= 1; }

ProcessState ProcessState::constant(int m, double h, const Interval& r) {
    ProcessState s;
    s.h_history.assign(static_cast<std::size_t>(m), h);
    s.return_history.assign(static_cast<std::size_t>(m), r);
    return s;
}

void ProcessState::push(double h, const Interval& r) {
    std::rotate(h_history.rbegin(), h_history.rbegin() + 1, h_history.rend());
    std::rotate(return_history.rbegin(), return_history.rbegin() + 1, return_history.rend());
    h_history.front() = h;
    return_history.front() = r;
}

double step_h(const ModelParams& params, const ProcessState& state) {
    const auto m = static_cast<std::size_t>(params.orders.m());
    if (state.h_history.size() != m || state.return_history.size() != m) {
        throw InvalidInput("process state histories must have length max(p,q,w)");
    }
    double h = params.mu;
    for (int i = 0; i < params.orders.p; ++i) h += params.alpha[i] * std::abs(state.return_history[i].center());
    for (int i = 0; i < params.orders.q; ++i) h += params.beta[i] * state.return_history[i].radius();
    for (int i = 0; i < params.orders.w; ++i) h += params.gamma[i] * state.h_history[i];
    return h;
}

double conditional_variance(const ModelParams& params, double h) { return h * h * (1.0 + params.k); }

double intgarch_volatility(const ModelParams& params, double h) { return (1.0 + params.k / 3.0) * h * h; }

MeanStationarity mean_stationarity(const ModelParams& params) {
    const double sum = params.c1();
    return {sum < 1.0, sum};
}

namespace {

void require_first_order(const ModelParams& params) {
    if (!params.is_first_order()) {
        throw InvalidInput("weak-stationarity closed form available only for (1,1,1)");
    }
}

double c2_of(const ModelParams& params) {
    const double a = params.alpha1();
    const double b = params.beta1();
    const double g = params.gamma1();
    const double k = params.k;
    return a * a + b * b * (k + k * k) + g * g + 2.0 * a * b * kSqrt2OverPi * k + 2.0 * a * g * kSqrt2OverPi +
           2.0 * b * g * k;
}

struct FirstOrderMoments {
    double c1;
    double c2;
    double mean_h;
    double mean_h2;
};

FirstOrderMoments first_order_moments(const ModelParams& params) {
    require_first_order(params);
    const double c1 = params.c1();
    const double c2 = c2_of(params);
    if (!(c2 < 1.0)) {
        throw NumericalError("nonstationary: moments do not exist");
    }
    const double mu = params.mu;
    return {c1, c2, mu / (1.0 - c1), mu * mu * (c1 + 1.0) / ((c2 - 1.0) * (c1 - 1.0))};
}

}  // namespace

WeakStationarity weak_stationarity(const ModelParams& params) {
    require_first_order(params);
    const double c2 = c2_of(params);
    return {c2 < 1.0, params.c1(), c2};
}

double expected_eta_x(const ModelParams& params) {
    require_first_order(params);
    const double k = params.k;
    return params.alpha1() * kSqrt2OverPi * k + params.beta1() * (k + k * k) + params.gamma1() * k;
}

double expected_h_h_eta(const ModelParams& params, int s) {
    if (s < 1) {
        throw InvalidInput("lag must be >= 1");
    }
    const auto fm = first_order_moments(params);
    // h_{t+s} = mu (1 + x_{t+s} + ... + x_{t+s}..x_{t+2}) + x_{t+s}..x_{t+1} h_t; only x_{t+1} involves eta_t.
    const double geometric = (1.0 - std::pow(fm.c1, s)) / (1.0 - fm.c1);
    return params.mu * params.k * fm.mean_h * geometric +
           fm.mean_h2 * expected_eta_x(params) * std::pow(fm.c1, s - 1);
}

TheoreticalMoments theoretical_moments(const ModelParams& params) {
    const auto ms = mean_stationarity(params);
    if (!ms.is_stationary) {
        throw NumericalError("nonstationary: moments do not exist");
    }
    TheoreticalMoments out;
    out.c1 = ms.mu_sum;
    out.mean_h = params.mu / (1.0 - ms.mu_sum);
    out.mean_r = Interval(0.0, params.k * out.mean_h);
    if (params.is_first_order()) {
        const auto fm = first_order_moments(params);
        const double k = params.k;
        out.c2 = fm.c2;
        out.mean_h2 = fm.mean_h2;
        out.var_r = (1.0 + k + k * k) * fm.mean_h2 - k * k * fm.mean_h * fm.mean_h;
    }
    return out;
}

double theoretical_acov(const ModelParams& params, int s) {
    if (s < 0) {
        throw InvalidInput("lag must be >= 0");
    }
    const auto fm = first_order_moments(params);
    const double k = params.k;
    if (s == 0) {
        return (1.0 + k + k * k) * fm.mean_h2 - k * k * fm.mean_h * fm.mean_h;
    }
    return k * expected_h_h_eta(params, s) - k * k * fm.mean_h * fm.mean_h;
}

std::vector<double> theoretical_acf(const ModelParams& params, int max_lag) {
    if (max_lag < 1) {
        throw InvalidInput("max_lag must be positive");
    }
    const double var = theoretical_acov(params, 0);
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1);
    out[0] = 1.0;
    for (int s = 1; s <= max_lag; ++s) {
        out[static_cast<std::size_t>(s)] = theoretical_acov(params, s) / var;
    }
    return out;
}

bool strict_stationarity_check(const ModelParams& params) {
    if (!params.is_first_order()) {
        throw InvalidInput("strict-stationarity check available only for (1,1,1)");
    }
    return params.c1() < 1.0;
}

}  // namespace intgarch
