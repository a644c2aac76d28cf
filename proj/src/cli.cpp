#include "intgarch/cli.hpp"

#include "intgarch/error.hpp"
#include "intgarch/estimation.hpp"
#include "intgarch/evaluation.hpp"
#include "intgarch/forecasting.hpp"
#include "intgarch/marketdata.hpp"
#include "intgarch/model_io.hpp"
#include "intgarch/simulator.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace intgarch {

namespace {

using nlohmann::json;

// ---- config files -----------------------------------------------------------

/// Flag tokens equivalent to the entries of a config file (JSON object or key=value lines).
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open config " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::vector<std::string> tokens;
    auto add = [&](const std::string& key, const std::string& value) {
        tokens.push_back("--" + key);
        tokens.push_back(value);
    };
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw InvalidInput("config " + path + ": " + e.what());
        }
        for (const auto& [key, value] : doc.items()) {
            if (value.is_boolean()) {
                if (value.get<bool>()) tokens.push_back("--" + key);
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& v : value) {
                    if (!joined.empty()) joined += ',';
                    joined += v.is_string() ? v.get<std::string>() : v.dump();
                }
                add(key, joined);
            } else if (value.is_string()) {
                add(key, value.get<std::string>());
            } else if (value.is_number()) {
                add(key, value.dump());
            } else {
                throw InvalidInput("config " + path + ": unsupported value for '" + key + "'");
            }
        }
        return tokens;
    }
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#' || line[b] == ';' || line[b] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config " + path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto l = s.find_first_not_of(" \t\r\"");
            const auto r = s.find_last_not_of(" \t\r\"");
            return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value == "true") {
            tokens.push_back("--" + key);
        } else if (value != "false") {
            add(key, value);
        }
    }
    return tokens;
}

/// Inserts config-file tokens right after the subcommand so explicit flags (parsed later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    if (sub == args.end()) return args;
    std::vector<std::string> out(args.begin(), sub + 1);
    const auto extra = config_tokens(path);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), sub + 1, args.end());
    return out;
}

// ---- helpers ----------------------------------------------------------------

ModelOrders parse_orders(const std::string& text) {
    ModelOrders o;
    if (std::sscanf(text.c_str(), "%d,%d,%d", &o.p, &o.q, &o.w) != 3) {
        throw InvalidInput("--orders expects p,q,w (got '" + text + "')");
    }
    o.validate();
    return o;
}

std::chrono::minutes parse_clock(const std::string& text) {
    int h = 0;
    int m = 0;
    if (std::sscanf(text.c_str(), "%d:%d", &h, &m) != 2 || h < 0 || h > 24 || m < 0 || m > 59) {
        throw InvalidInput("expected HH:MM (got '" + text + "')");
    }
    return std::chrono::minutes(h * 60 + m);
}

/// Runs `fn` against the named file, or against `fallback` when the path is empty or "-".
void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw InvalidInput("cannot write " + path);
    }
    fn(f);
}

/// "intgarch <cmd>" followed by every resolved option as key=value.
std::vector<std::string> provenance(const CLI::App& sub) {
    std::vector<std::string> lines{"intgarch " + sub.get_name()};
    std::istringstream cfg(sub.config_to_str(true, false));
    std::string line;
    while (std::getline(cfg, line)) {
        if (!line.empty() && line[0] != '[') lines.push_back(line);
    }
    return lines;
}

/// Uses the explicit --seed or draws one and records it as if it had been passed.
std::uint64_t resolve_seed(CLI::Option* opt, std::uint64_t value, std::vector<std::string>& notes) {
    if (opt->count() > 0) return value;
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    opt->add_result(std::to_string(seed));
    notes.push_back("seed was auto-generated: " + std::to_string(seed));
    return seed;
}

struct ModelFlags {
    std::string model_path;
    double k = 0.0;
    double mu = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;

    void add(CLI::App* app) {
        app->add_option("--model", model_path, "Model JSON (flat parameters or a fitted-model document)");
        app->add_option("--k", k, "Gamma shape k");
        app->add_option("--mu", mu, "Intercept mu");
        app->add_option("--alpha", alpha, "alpha_1..alpha_p (comma separated)")->delimiter(',');
        app->add_option("--beta", beta, "beta_1..beta_q (comma separated)")->delimiter(',');
        app->add_option("--gamma", gamma, "gamma_1..gamma_w (comma separated)")->delimiter(',');
    }
    [[nodiscard]] ModelParams resolve() const {
        if (!model_path.empty()) return load_model(model_path).params;
        if (alpha.empty() || beta.empty()) {
            throw InvalidInput("give --model or --k, --mu, --alpha and --beta");
        }
        return ModelParams::make(k, mu, alpha, beta, gamma);
    }
};

void write_fit_summary(std::ostream& out, const FittedModel& fit) {
    const auto names = fit.params.theta_names();
    const auto theta = fit.params.theta();
    char line[128];
    std::snprintf(line, sizeof line, "k (moment estimate) = %.6g\n", fit.params.k);
    out << line;
    out << "parameter    estimate      std_error\n";
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto& se = fit.std_errors[j];
        const bool boundary = std::find(fit.boundary_set.begin(), fit.boundary_set.end(), names[j]) != fit.boundary_set.end();
        std::string se_text = boundary ? "boundary" : (se ? std::to_string(*se) : "n/a");
        std::snprintf(line, sizeof line, "%-10s %10.6f %14s\n", names[j].c_str(), theta[j], se_text.c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "loglik = %.10g\nconverged = %s (iterations %d, max |gradient| %.3g)\n", fit.loglik,
                  fit.converged ? "yes" : "no", fit.iterations, fit.gradient_max_norm);
    out << line;
    out << "boundary set = {";
    for (std::size_t i = 0; i < fit.boundary_set.size(); ++i) out << (i ? ", " : "") << fit.boundary_set[i];
    out << "}\n";
    std::snprintf(line, sizeof line, "sum mu_i = %.6f\n", fit.params.c1());
    out << line;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interval-valued GARCH toolkit", "intgarch"};
    app.require_subcommand(1, 1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", "intgarch 1.0");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate an Int-GARCH path");
    ModelFlags sim_model;
    sim_model.add(sim);
    std::size_t sim_t = 1000;
    std::size_t sim_burn = 500;
    std::uint64_t sim_seed = 0;
    std::string sim_init = "zero";
    std::string sim_out;
    std::string sim_h_out;
    bool sim_require = false;
    std::string sim_config;
    sim->add_option("--T", sim_t, "Number of returned observations")->capture_default_str();
    sim->add_option("--burn-in", sim_burn, "Discarded initial observations")->capture_default_str();
    auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "RNG seed (auto-generated and recorded when absent)");
    sim->add_option("--init", sim_init, "Pre-sample h: zero or mean")->capture_default_str();
    sim->add_option("--out", sim_out, "Interval series CSV (default stdout)");
    sim->add_option("--h-out", sim_h_out, "Optional CSV of the scale path");
    sim->add_flag("--require-stationary", sim_require, "Refuse parameters with sum mu_i >= 1");
    sim->add_option("--config", sim_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // fit
    auto* fit = app.add_subcommand("fit", "Two-stage estimation (moment k, scoring MLE for theta)");
    std::string fit_in;
    std::string fit_orders = "1,1,1";
    std::string fit_init = "mean";
    std::string fit_deriv = "full";
    FitOptions fit_opts;
    std::string fit_out;
    std::string fit_summary;
    std::string fit_config;
    fit->add_option("--in", fit_in, "Interval series CSV")->required();
    fit->add_option("--orders", fit_orders, "p,q,w")->capture_default_str();
    fit->add_option("--init", fit_init, "Pre-sample h: mean or zero")->capture_default_str();
    fit->add_option("--derivatives", fit_deriv, "full (recursive) or direct")->capture_default_str();
    fit->add_option("--max-iter", fit_opts.max_iterations, "Scoring iteration limit")->capture_default_str();
    fit->add_option("--tol", fit_opts.gradient_tolerance, "Gradient max-norm tolerance")->capture_default_str();
    fit->add_option("--init-fraction", fit_opts.init_fraction, "Initial guess of 1 - sum mu_i")->capture_default_str();
    fit->add_option("--coef-budget", fit_opts.coef_budget, "Initial sum mu_i share per coefficient group")
        ->capture_default_str();
    fit->add_option("--out", fit_out, "Fitted-model JSON");
    fit->add_option("--summary", fit_summary, "Text summary (default stdout)");
    fit->add_option("--config", fit_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // forecast
    auto* fc = app.add_subcommand("forecast", "Multi-step forecasts of h and sigma^2");
    std::string fc_in;
    std::string fc_model;
    int fc_horizon = 5;
    std::size_t fc_start = 0;
    std::string fc_out;
    std::string fc_config;
    fc->add_option("--in", fc_in, "Interval series CSV (history)")->required();
    fc->add_option("--model", fc_model, "Model JSON")->required();
    fc->add_option("--horizon", fc_horizon, "Steps ahead")->capture_default_str();
    fc->add_option("--start", fc_start, "Emit forecasts at every origin from this 1-based row on (default: last row only)");
    fc->add_option("--out", fc_out, "CSV output (default stdout)");
    fc->add_option("--config", fc_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // acf
    auto* acf = app.add_subcommand("acf", "Sample (and theoretical) autocorrelation functions");
    std::string acf_in;
    std::string acf_model;
    std::size_t acf_lags = 20;
    std::string acf_out;
    std::string acf_config;
    acf->add_option("--in", acf_in, "Interval series CSV")->required();
    acf->add_option("--model", acf_model, "Model JSON for the theoretical column");
    acf->add_option("--max-lag", acf_lags, "Largest lag")->capture_default_str();
    acf->add_option("--out", acf_out, "CSV output (default stdout)");
    acf->add_option("--config", acf_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // prepare
    auto* prep = app.add_subcommand("prepare", "Clean ticks, sample the intraday grid, build RV and interval returns");
    std::string prep_ticks;
    std::string prep_prices;
    std::string prep_open = "09:30";
    std::string prep_close = "16:00";
    int prep_spacing = 5;
    bool prep_no_clean = false;
    std::string prep_out;
    std::string prep_days_out;
    std::string prep_config;
    auto* ticks_opt = prep->add_option("--ticks", prep_ticks, "Ticks CSV (timestamp,bid,ask[,price] or timestamp,price)");
    auto* prices_opt = prep->add_option("--prices", prep_prices, "Long-format prices CSV (date,time,price), already on a grid");
    ticks_opt->excludes(prices_opt);
    prep->add_option("--open", prep_open, "Session open HH:MM")->capture_default_str();
    prep->add_option("--close", prep_close, "Session close HH:MM")->capture_default_str();
    prep->add_option("--spacing", prep_spacing, "Grid spacing in minutes")->capture_default_str();
    prep->add_flag("--no-clean", prep_no_clean, "Skip the filtration rules");
    prep->add_option("--out", prep_out, "Interval series CSV (default stdout)");
    prep->add_option("--days-out", prep_days_out, "Daily bars CSV (date,min_log,max_log,rv,close_log)");
    prep->add_option("--config", prep_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // backtest
    auto* bt = app.add_subcommand("backtest", "In-sample and rolling out-of-sample comparison with GARCH(1,1)");
    std::string bt_days;
    std::string bt_sim_model;
    std::size_t bt_t = 1250;
    std::uint64_t bt_seed = 0;
    double bt_noise = 0.2;
    std::string bt_orders = "1,1,1";
    std::size_t bt_train = 0;
    std::vector<int> bt_horizons{1, 2, 5};
    std::size_t bt_refit = 1;
    bool bt_no_in = false;
    std::string bt_format = "csv";
    std::string bt_proxy = "squared";
    bool bt_hmse_sq = false;
    std::string bt_asset = "asset";
    std::string bt_out;
    std::string bt_fc_out;
    std::string bt_config;
    auto* days_opt = bt->add_option("--days", bt_days, "Daily bars CSV with close_log");
    auto* simm_opt = bt->add_option("--simulate", bt_sim_model, "Model JSON: evaluate on a simulated world instead");
    days_opt->excludes(simm_opt);
    bt->add_option("--T", bt_t, "Simulated world length")->capture_default_str();
    auto* bt_seed_opt = bt->add_option("--seed", bt_seed, "RNG seed for --simulate (auto-generated when absent)");
    bt->add_option("--noise-sd", bt_noise, "SD of the multiplicative proxy noise for --simulate")->capture_default_str();
    bt->add_option("--orders", bt_orders, "Int-GARCH orders p,q,w")->capture_default_str();
    bt->add_option("--train", bt_train, "Training observations (default: first 5/6 of the sample)");
    bt->add_option("--horizons", bt_horizons, "Out-of-sample horizons")->delimiter(',')->capture_default_str();
    bt->add_option("--refit-every", bt_refit, "Refit interval in observations (1 = daily)")->capture_default_str();
    bt->add_flag("--no-in-sample", bt_no_in, "Skip the in-sample comparison");
    bt->add_option("--format", bt_format, "csv or text")->capture_default_str();
    bt->add_option("--proxy", bt_proxy, "Loss numerator: squared (v^2, as printed) or plain (v)")->capture_default_str();
    bt->add_flag("--hmse-squared", bt_hmse_sq, "Use (v^2/s2 - 1)^2 for HMSE");
    bt->add_option("--asset", bt_asset, "Asset label in the report")->capture_default_str();
    bt->add_option("--out", bt_out, "Report output (default stdout)");
    bt->add_option("--forecasts-out", bt_fc_out, "Optional CSV of all evaluated forecasts");
    bt->add_option("--config", bt_config, "JSON or key=value file of flag values (flags given explicitly win)");

    // table1
    auto* t1 = app.add_subcommand("table1", "Simulation study: parameter recovery for the four published designs");
    Table1Options t1_opts;
    std::vector<std::string> t1_models{"I", "II", "III", "IV"};
    std::string t1_format = "text";
    std::string t1_out;
    std::string t1_config;
    t1->add_option("--reps", t1_opts.reps, "Replications per design")->capture_default_str();
    t1->add_option("--T", t1_opts.length, "Observations per replication")->capture_default_str();
    auto* t1_seed_opt = t1->add_option("--seed", t1_opts.seed, "RNG seed (auto-generated when absent)");
    t1->add_option("--jobs", t1_opts.jobs, "Worker threads")->capture_default_str();
    t1->add_option("--models", t1_models, "Subset of I,II,III,IV")->delimiter(',')->capture_default_str();
    t1->add_option("--format", t1_format, "text or csv")->capture_default_str();
    t1->add_option("--out", t1_out, "Output (default stdout)");
    t1->add_option("--config", t1_config, "JSON or key=value file of flag values (flags given explicitly win)");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? 0 : static_cast<int>(ErrorCode::BadInput);
        }

        if (sim->parsed()) {
            std::vector<std::string> notes;
            const std::uint64_t seed = resolve_seed(sim_seed_opt, sim_seed, notes);
            SimConfig cfg;
            cfg.params = sim_model.resolve();
            cfg.length = sim_t;
            cfg.burn_in = sim_burn;
            cfg.seed = seed;
            cfg.init_mode = parse_init_mode(sim_init);
            if (sim_require) {
                const auto ms = mean_stationarity(cfg.params);
                if (!ms.is_stationary) {
                    throw InvalidInput("nonstationary parameters: sum of mu_i = " + format_double(ms.mu_sum) + " >= 1");
                }
            }
            const auto res = simulate(cfg);
            auto header = provenance(*sim);
            header.insert(header.end(), notes.begin(), notes.end());
            with_output(sim_out, out, [&](std::ostream& o) { write_interval_series(o, res.series, header); });
            if (!sim_h_out.empty()) {
                with_output(sim_h_out, out, [&](std::ostream& o) {
                    for (const auto& l : header) o << "# " << l << '\n';
                    o << "t,h\n";
                    for (std::size_t t = 0; t < res.h_path.size(); ++t) o << t + 1 << ',' << format_double(res.h_path[t]) << '\n';
                });
            }
            return 0;
        }

        if (fit->parsed()) {
            const auto series = load_interval_series(fit_in);
            fit_opts.init_mode = parse_init_mode(fit_init);
            fit_opts.derivative_mode = parse_derivative_mode(fit_deriv);
            const auto fitted = fit_mle(series, parse_orders(fit_orders), fit_opts);
            if (!fit_out.empty()) {
                auto doc = fitted_to_json(fitted);
                doc["provenance"] = provenance(*fit);
                save_json(fit_out, doc);
            }
            with_output(fit_summary, out, [&](std::ostream& o) { write_fit_summary(o, fitted); });
            if (!fitted.converged) {
                err << "warning: scoring did not converge within " << fit_opts.max_iterations << " iterations\n";
                return static_cast<int>(ErrorCode::NonConvergence);
            }
            return 0;
        }

        if (fc->parsed()) {
            const auto series = load_interval_series(fc_in);
            const auto doc = load_model(fc_model);
            std::vector<ForecastResult> results;
            if (fc_start == 0) {
                const auto ll = loglik_eval(doc.params, series, doc.init_mode);
                results.push_back(forecast(doc.params, series, ll.h_path, fc_horizon));
            } else {
                RollingOptions ro;
                ro.train_size = fc_start;
                ro.max_horizon = fc_horizon;
                ro.fixed_params = doc.params;
                FitOptions fo;
                fo.init_mode = doc.init_mode;
                for (const auto& o : rolling_forecast(series, doc.params.orders, fo, ro)) {
                    if (!o.ok) throw NumericalError("forecast failed at origin " + std::to_string(o.origin_index + 1) + ": " + o.error);
                    results.push_back(o.forecast);
                }
                const auto ll = loglik_eval(doc.params, series, doc.init_mode);
                results.push_back(forecast(doc.params, series, ll.h_path, fc_horizon));
            }
            with_output(fc_out, out, [&](std::ostream& o) {
                for (const auto& l : provenance(*fc)) o << "# " << l << '\n';
                o << "origin,origin_date,horizon,h_hat,sigma2_hat\n";
                for (const auto& r : results) {
                    for (int j = 0; j < r.horizon; ++j) {
                        o << r.origin_index + 1 << ',' << (r.origin_date ? format_date(*r.origin_date) : std::string()) << ','
                          << j + 1 << ',' << format_double(r.h_hat[j]) << ',' << format_double(r.sigma2_hat[j]) << '\n';
                    }
                }
            });
            return 0;
        }

        if (acf->parsed()) {
            const auto series = load_interval_series(acf_in);
            if (series.size() < acf_lags + 2) {
                throw InvalidInput("insufficient data: need more than max-lag + 1 observations");
            }
            const auto both = sample_acf(series, acf_lags);
            const auto c = component_acf(series.centers(), acf_lags);
            const auto r = component_acf(series.radii(), acf_lags);
            std::vector<double> theo;
            if (!acf_model.empty()) theo = theoretical_acf(load_model(acf_model).params, static_cast<int>(acf_lags));
            with_output(acf_out, out, [&](std::ostream& o) {
                for (const auto& l : provenance(*acf)) o << "# " << l << '\n';
                o << "lag,sample,center,radius" << (theo.empty() ? "" : ",theoretical") << '\n';
                for (std::size_t s = 0; s <= acf_lags; ++s) {
                    o << s << ',' << format_double(both[s]) << ',' << format_double(c[s]) << ',' << format_double(r[s]);
                    if (!theo.empty()) o << ',' << format_double(theo[s]);
                    o << '\n';
                }
            });
            return 0;
        }

        if (prep->parsed()) {
            std::vector<DayBars> days;
            if (!prep_ticks.empty()) {
                auto loaded = load_csv(prep_ticks, CsvSchema::Ticks);
                for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
                auto& table = std::get<TickTable>(loaded.table);
                SessionConfig session{parse_clock(prep_open), parse_clock(prep_close), std::chrono::minutes(prep_spacing)};
                if (!table.quotes.empty()) {
                    const std::size_t before = table.quotes.size();
                    auto ticks = prep_no_clean ? table.quotes : clean_quotes(table.quotes);
                    err << "ticks: " << before << " read, " << ticks.size() << " after cleaning\n";
                    days = sample_days(ticks, session);
                } else {
                    const std::size_t before = table.trades.size();
                    auto ticks = prep_no_clean ? table.trades : clean_prices(table.trades);
                    err << "trades: " << before << " read, " << ticks.size() << " after cleaning\n";
                    days = sample_days(ticks, session);
                }
            } else if (!prep_prices.empty()) {
                auto loaded = load_csv(prep_prices, CsvSchema::DailyBars);
                days = std::get<std::vector<DayBars>>(loaded.table);
            } else {
                throw InvalidInput("give --ticks or --prices");
            }
            err << "days: " << days.size() << '\n';
            const auto series = interval_returns(days);
            const auto header = provenance(*prep);
            with_output(prep_out, out, [&](std::ostream& o) { write_interval_series(o, series, header); });
            if (!prep_days_out.empty()) {
                with_output(prep_days_out, out, [&](std::ostream& o) { write_day_bars(o, days, header); });
            }
            return 0;
        }

        if (bt->parsed()) {
            std::vector<std::string> notes;
            BacktestData data;
            if (!bt_sim_model.empty()) {
                const std::uint64_t seed = resolve_seed(bt_seed_opt, bt_seed, notes);
                data = simulate_world(load_model(bt_sim_model).params, bt_t, seed, bt_noise).data;
            } else if (!bt_days.empty()) {
                auto loaded = load_csv(bt_days, CsvSchema::DailyBars);
                data = backtest_data(std::get<std::vector<DayBars>>(loaded.table));
            } else {
                throw InvalidInput("give --days or --simulate");
            }
            BacktestOptions bo;
            bo.orders = parse_orders(bt_orders);
            bo.train_size = bt_train > 0 ? bt_train : data.intervals.size() * 5 / 6;
            bo.horizons = bt_horizons;
            bo.refit_every = bt_refit;
            bo.in_sample = !bt_no_in;
            if (bt_proxy != "squared" && bt_proxy != "plain") {
                throw InvalidInput("--proxy must be 'squared' or 'plain'");
            }
            bo.loss.proxy_squared = bt_proxy == "squared";
            bo.loss.hmse_squared = bt_hmse_sq;
            if (bt_format != "csv" && bt_format != "text") {
                throw InvalidInput("--format must be 'csv' or 'text'");
            }
            const auto result = backtest(data, bo, bt_asset);
            auto header = provenance(*bt);
            header.insert(header.end(), notes.begin(), notes.end());
            header.push_back("failed refits: Int-GARCH " + std::to_string(result.failed_intgarch) + ", GARCH(1,1) " +
                             std::to_string(result.failed_garch));
            with_output(bt_out, out, [&](std::ostream& o) {
                for (const auto& l : header) o << "# " << l << '\n';
                if (bt_format == "csv") {
                    write_reports_csv(o, result.reports);
                } else {
                    write_reports_text(o, result.reports);
                }
            });
            if (!bt_fc_out.empty()) {
                with_output(bt_fc_out, out, [&](std::ostream& o) {
                    for (const auto& l : header) o << "# " << l << '\n';
                    o << "model,horizon,date,sigma2\n";
                    for (const auto& f : result.forecasts) {
                        for (std::size_t i = 0; i < f.dates.size(); ++i) {
                            o << f.model << ',' << f.horizon << ',' << format_date(f.dates[i]) << ','
                              << format_double(f.sigma2[i]) << '\n';
                        }
                    }
                });
            }
            return 0;
        }

        if (t1->parsed()) {
            std::vector<std::string> notes;
            t1_opts.seed = resolve_seed(t1_seed_opt, t1_opts.seed, notes);
            if (t1_format != "csv" && t1_format != "text") {
                throw InvalidInput("--format must be 'csv' or 'text'");
            }
            std::vector<Table1Design> designs;
            std::vector<std::vector<Table1Reference>> refs;
            for (const auto& name : t1_models) {
                bool found = false;
                for (const auto& pd : paper_table1()) {
                    if (pd.design.name == name) {
                        designs.push_back(pd.design);
                        refs.push_back(pd.reference);
                        found = true;
                    }
                }
                if (!found) throw InvalidInput("unknown design '" + name + "' (use I, II, III, IV)");
            }
            const auto result = reproduce_table1(designs, t1_opts);
            auto header = provenance(*t1);
            header.insert(header.end(), notes.begin(), notes.end());
            with_output(t1_out, out, [&](std::ostream& o) {
                for (const auto& l : header) o << "# " << l << '\n';
                auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
                std::size_t row = 0;
                char line[200];
                if (t1_format == "csv") {
                    o << "model,parameter,true,mean,mae,emp_se,asym_se,reps_used,ref_mean,ref_mae,ref_emp_se,ref_asym_se\n";
                } else {
                    std::snprintf(line, sizeof line, "%-5s %-7s %8s | %8s %8s | %8s %8s | %8s %8s | %8s %8s\n", "model",
                                  "param", "true", "mean", "ref", "MAE", "ref", "emp.SE", "ref", "asy.SE", "ref");
                    o << line;
                }
                for (std::size_t d = 0; d < designs.size(); ++d) {
                    for (std::size_t j = 0; j < refs[d].size(); ++j, ++row) {
                        const auto& r = result.rows[row];
                        const auto& ref = refs[d][j];
                        if (t1_format == "csv") {
                            o << r.model << ',' << r.parameter << ',' << format_double(r.true_value) << ','
                              << format_double(r.mean) << ',' << format_double(r.mae) << ',' << format_double(r.emp_se)
                              << ',' << opt(r.asym_se) << ',' << r.reps_used << ',' << format_double(ref.mean) << ','
                              << format_double(ref.mae) << ',' << format_double(ref.emp_se) << ',' << opt(ref.asym_se)
                              << '\n';
                        } else {
                            std::snprintf(line, sizeof line,
                                          "%-5s %-7s %8.4f | %8.4f %8.4f | %8.4f %8.4f | %8.4f %8.4f | %8s %8s\n",
                                          r.model.c_str(), r.parameter.c_str(), r.true_value, r.mean, ref.mean, r.mae,
                                          ref.mae, r.emp_se, ref.emp_se,
                                          r.asym_se ? std::to_string(*r.asym_se).substr(0, 6).c_str() : "",
                                          ref.asym_se ? std::to_string(*ref.asym_se).substr(0, 6).c_str() : "");
                            o << line;
                        }
                    }
                }
                if (t1_format == "text") {
                    for (std::size_t d = 0; d < designs.size(); ++d) {
                        o << "model " << designs[d].name << ": " << result.failures[d]
                          << " replication(s) without a converged fit\n";
                    }
                }
            });
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorCode::BadInput);
    }
    return static_cast<int>(ErrorCode::BadInput);
}

}  // namespace intgarch
