#include "intgarch/model_io.hpp"

#include "intgarch/error.hpp"

#include <fstream>

namespace intgarch {

using nlohmann::json;

namespace {

std::vector<double> coefficients(const json& doc, const char* key, bool required) {
    if (!doc.contains(key) || doc[key].is_null()) {
        if (required) {
            throw InvalidInput(std::string("model: missing '") + key + "'");
        }
        return {};
    }
    const auto& v = doc[key];
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) {
        throw InvalidInput(std::string("model: '") + key + "' must be a number or an array");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw InvalidInput(std::string("model: '") + key + "' entries must be numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

double number(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw InvalidInput(std::string("model: missing numeric '") + key + "'");
    }
    return doc[key].get<double>();
}

}  // namespace

json params_to_json(const ModelParams& params) {
    return json{{"k", params.k}, {"mu", params.mu}, {"alpha", params.alpha}, {"beta", params.beta}, {"gamma", params.gamma}};
}

ModelParams params_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw InvalidInput("model: expected a JSON object");
    }
    const json& flat = doc.contains("params") ? doc["params"] : doc;
    return ModelParams::make(number(flat, "k"), number(flat, "mu"), coefficients(flat, "alpha", true),
                             coefficients(flat, "beta", true), coefficients(flat, "gamma", false));
}

json fitted_to_json(const FittedModel& fitted) {
    const auto names = fitted.params.theta_names();
    const auto theta = fitted.params.theta();
    json th = json::object();
    json se = json::object();
    for (std::size_t j = 0; j < names.size(); ++j) {
        th[names[j]] = theta[j];
        se[names[j]] = fitted.std_errors.size() > j && fitted.std_errors[j] ? json(*fitted.std_errors[j]) : json(nullptr);
    }
    json matrix = json::array();
    for (Eigen::Index a = 0; a < fitted.covariance.rows(); ++a) {
        json row = json::array();
        for (Eigen::Index b = 0; b < fitted.covariance.cols(); ++b) row.push_back(fitted.covariance(a, b));
        matrix.push_back(std::move(row));
    }
    const auto& o = fitted.params.orders;
    return json{
        {"orders", {{"p", o.p}, {"q", o.q}, {"w", o.w}}},
        {"k", fitted.params.k},
        {"theta", th},
        {"params", params_to_json(fitted.params)},
        {"boundary_set", fitted.boundary_set},
        {"std_errors", se},
        {"covariance", {{"names", fitted.free_names}, {"matrix", matrix}}},
        {"loglik", fitted.loglik},
        {"convergence",
         {{"converged", fitted.converged}, {"iterations", fitted.iterations}, {"gradient_max_norm", fitted.gradient_max_norm}}},
        {"init_mode", to_string(fitted.init_mode)},
        {"derivative_mode", to_string(fitted.derivative_mode)},
        {"n_obs", fitted.n_obs},
    };
}

ModelDocument model_from_json(const json& doc) {
    ModelDocument out{params_from_json(doc), InitMode::MeanH};
    if (doc.contains("init_mode")) out.init_mode = parse_init_mode(doc["init_mode"].get<std::string>());
    return out;
}

ModelDocument load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    try {
        return model_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

void save_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

const char* to_string(InitMode mode) noexcept { return mode == InitMode::MeanH ? "mean" : "zero"; }

const char* to_string(DerivativeMode mode) noexcept { return mode == DerivativeMode::Full ? "full" : "direct"; }

InitMode parse_init_mode(const std::string& text) {
    if (text == "mean") return InitMode::MeanH;
    if (text == "zero") return InitMode::ZeroH;
    throw InvalidInput("init mode must be 'mean' or 'zero' (got '" + text + "')");
}

DerivativeMode parse_derivative_mode(const std::string& text) {
    if (text == "full") return DerivativeMode::Full;
    if (text == "direct") return DerivativeMode::DirectOnly;
    throw InvalidInput("derivative mode must be 'full' or 'direct' (got '" + text + "')");
}

}  // namespace intgarch
