#include "intgarch/simulator.hpp"

#include "intgarch/error.hpp"
#include "intgarch/rng.hpp"

namespace intgarch {

ProcessState presample_state(const ModelParams& params, InitMode mode) {
    const auto ms = mean_stationarity(params);
    if (!ms.is_stationary) {
        if (mode == InitMode::MeanH) {
            throw InvalidInput("mean-h initialisation requires sum of mu_i < 1 (got " + std::to_string(ms.mu_sum) + ")");
        }
        return ProcessState::constant(params.orders.m(), 0.0, Interval(0.0, 0.0));
    }
    const double mean_h = params.mu / (1.0 - ms.mu_sum);
    const double h0 = mode == InitMode::MeanH ? mean_h : 0.0;
    return ProcessState::constant(params.orders.m(), h0, Interval(0.0, params.k * mean_h));
}

SimResult simulate(const SimConfig& config) {
    config.params.validate();
    if (config.length < 1) {
        throw InvalidInput("simulation length must be >= 1");
    }
    auto eps_rng = make_stream(config.seed, Stream::Epsilon);
    auto eta_rng = make_stream(config.seed, Stream::Eta);
    auto state = presample_state(config.params, config.init_mode);

    const std::size_t total = config.burn_in + config.length;
    std::vector<Interval> items;
    std::vector<double> h_path;
    items.reserve(config.length);
    h_path.reserve(config.length);
    for (std::size_t t = 0; t < total; ++t) {
        const double h = step_h(config.params, state);
        const double eps = eps_rng.normal();
        const double eta = eta_rng.gamma(config.params.k);
        const Interval r(h * eps, h * eta);
        state.push(h, r);
        if (t >= config.burn_in) {
            items.push_back(r);
            h_path.push_back(h);
        }
    }
    return {IntervalSeries(std::move(items)), std::move(h_path)};
}

}  // namespace intgarch
