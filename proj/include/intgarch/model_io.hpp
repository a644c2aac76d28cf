#pragma once

#include "intgarch/estimation.hpp"
#include "intgarch/process.hpp"

#include "json.hpp"

#include <filesystem>

namespace intgarch {

/// {"k": .., "mu": .., "alpha": [..], "beta": [..], "gamma": [..]}
[[nodiscard]] nlohmann::json params_to_json(const ModelParams& params);

/**
 * Accepts the flat form above (scalar coefficients allowed, missing gamma = w 0)
 * or a fitted-model document, whose "params" member is used.
 */
[[nodiscard]] ModelParams params_from_json(const nlohmann::json& doc);

/**
 * Fitted-model document:
 *   orders {p,q,w}, k, theta {name: value}, params (flat form), boundary_set,
 *   std_errors {name: value | null}, covariance {names, matrix}, loglik,
 *   convergence {converged, iterations, gradient_max_norm}, init_mode,
 *   derivative_mode, n_obs.
 */
[[nodiscard]] nlohmann::json fitted_to_json(const FittedModel& fitted);

/// Settings recorded in a fitted document that affect how the scale path is rebuilt.
struct ModelDocument {
    ModelParams params;
    InitMode init_mode = InitMode::MeanH;
};

[[nodiscard]] ModelDocument model_from_json(const nlohmann::json& doc);
[[nodiscard]] ModelDocument load_model(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& doc);

[[nodiscard]] const char* to_string(InitMode mode) noexcept;
[[nodiscard]] const char* to_string(DerivativeMode mode) noexcept;
[[nodiscard]] InitMode parse_init_mode(const std::string& text);
[[nodiscard]] DerivativeMode parse_derivative_mode(const std::string& text);

}  // namespace intgarch
