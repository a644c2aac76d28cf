#pragma once

#include "intgarch/interval.hpp"
#include "intgarch/process.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace intgarch {

/// Pre-sample scale values h_0..h_{-(m-1)}.
enum class InitMode {
    ZeroH,  ///< h = 0
    MeanH,  ///< h = E(h_t) = mu / (1 - sum mu_i)
};

struct SimConfig {
    ModelParams params;
    std::size_t length = 1000;
    std::size_t burn_in = 500;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::ZeroH;
};

struct SimResult {
    IntervalSeries series;
    std::vector<double> h_path;
};

/**
 * Pre-sample state: every lag holds h (per init mode) and r = E(r_t) = [-k E h, k E h].
 * When the parameters are not mean-stationary E(r_t) does not exist; the
 * returns are then the degenerate [0, 0] and MeanH is rejected.
 */
[[nodiscard]] ProcessState presample_state(const ModelParams& params, InitMode mode);

/**
 * Simulates burn_in + length steps and returns the last `length`.
 *
 * eps_t comes from sub-stream Stream::Epsilon and eta_t from Stream::Eta of
 * config.seed, so the two noise sequences never share engine state.
 */
[[nodiscard]] SimResult simulate(const SimConfig& config);

}  // namespace intgarch
