#include "intgarch/scoring.hpp"

#include "intgarch/error.hpp"

#include <cmath>
#include <limits>

namespace intgarch {

namespace {

std::vector<int> free_indices(const std::vector<bool>& fixed) {
    std::vector<int> out;
    for (std::size_t j = 0; j < fixed.size(); ++j) {
        if (!fixed[j]) out.push_back(static_cast<int>(j));
    }
    return out;
}

double max_abs_free(const Eigen::VectorXd& g, const std::vector<int>& free) {
    double out = 0.0;
    for (int j : free) out = std::max(out, std::abs(g[j]));
    return out;
}

/// Solves for an ascent direction on the free block (a Newton step on g = 0 in root mode).
Eigen::VectorXd ascent_direction(const Evaluation& ev, const std::vector<int>& free, bool root_mode) {
    const auto n = static_cast<Eigen::Index>(free.size());
    Eigen::VectorXd g(n);
    Eigen::MatrixXd neg_h(n, n);
    Eigen::MatrixXd info(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        g[a] = ev.gradient[free[a]];
        for (Eigen::Index b = 0; b < n; ++b) {
            neg_h(a, b) = -ev.hessian(free[a], free[b]);
            info(a, b) = ev.information.size() > 0 ? ev.information(free[a], free[b]) : neg_h(a, b);
        }
    }
    if (root_mode) {
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(neg_h);
        if (lu.isInvertible()) {
            Eigen::VectorXd d = lu.solve(g);
            if (d.allFinite()) return d;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
    if (llt.info() == Eigen::Success) {
        Eigen::VectorXd d = llt.solve(g);
        if (d.allFinite() && d.dot(g) > 0.0) return d;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Eigen::VectorXd d = ldlt.solve(g);
        if (d.allFinite() && d.dot(g) > 0.0) return d;
    }
    // Steepest ascent, scaled so that the first trial moves each coordinate by at most ~1.
    return g / std::max(1.0, g.cwiseAbs().maxCoeff());
}

}  // namespace

ScoringResult maximize_scoring(const ScoringProblem& problem, Eigen::VectorXd x0, const ScoringOptions& options) {
    const auto dim = x0.size();
    if (problem.strict.size() != static_cast<std::size_t>(dim)) {
        throw InvalidInput("scoring problem: strict flags do not match dimension");
    }
    auto feasible = [&](const Eigen::VectorXd& x) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (!std::isfinite(x[j])) return false;
            if (problem.strict[j] ? !(x[j] > 0.0) : x[j] < 0.0) return false;
        }
        return !problem.feasible || problem.feasible(x);
    };

    ScoringResult res;
    res.x = std::move(x0);
    res.fixed.assign(static_cast<std::size_t>(dim), false);
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (!problem.strict[j] && res.x[j] == 0.0) res.fixed[j] = true;
    }
    if (problem.on_fix) problem.on_fix(res.x, res.fixed);
    if (!feasible(res.x) || !problem.evaluate(res.x, true, res.at_optimum)) {
        throw NumericalError("starting point outside the feasible region");
    }
    res.trace.push_back(res.at_optimum.value);
    std::vector<int> releases(static_cast<std::size_t>(dim), 0);
    const double round_off = 1e-11;

    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        auto free = free_indices(res.fixed);
        const Evaluation& cur = res.at_optimum;
        res.gradient_max_norm = max_abs_free(cur.gradient, free);
        if (res.gradient_max_norm < options.gradient_tolerance) {
            // KKT: a fixed coordinate whose gradient points into the interior is released.
            bool released = false;
            for (Eigen::Index j = 0; j < dim; ++j) {
                if (res.fixed[j] && cur.gradient[j] > options.gradient_tolerance &&
                    releases[j] < options.max_releases) {
                    res.fixed[j] = false;
                    ++releases[j];
                    released = true;
                }
            }
            if (!released) {
                res.converged = true;
                break;
            }
            if (problem.on_fix) problem.on_fix(res.x, res.fixed);
            free = free_indices(res.fixed);
        }

        const Eigen::VectorXd d_free = ascent_direction(cur, free, options.root_mode);
        Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
        for (std::size_t a = 0; a < free.size(); ++a) d[free[a]] = d_free[static_cast<Eigen::Index>(a)];

        // Truncate at the first non-strict bound the full step would cross.
        double tau = 1.0;
        Eigen::Index hit = -1;
        for (int j : free) {
            if (!problem.strict[j] && d[j] < 0.0) {
                const double t = res.x[j] / -d[j];
                if (t < tau) {
                    tau = t;
                    hit = j;
                }
            }
        }

        const double tol = round_off * (1.0 + std::abs(cur.value));
        bool accepted = false;
        Eigen::VectorXd trial(dim);
        Evaluation probe;
        for (int halving = 0; halving <= options.step_halving_limit; ++halving) {
            const double s = tau * std::ldexp(1.0, -halving);
            trial = res.x + s * d;
            for (int j : free) {
                if (!problem.strict[j] && trial[j] < 0.0) trial[j] = 0.0;
            }
            if (halving == 0 && hit >= 0) trial[hit] = 0.0;
            if (!feasible(trial) || !problem.evaluate(trial, options.root_mode, probe) || !std::isfinite(probe.value)) {
                continue;
            }
            if (options.root_mode ? max_abs_free(probe.gradient, free) < res.gradient_max_norm
                                  : probe.value >= cur.value - tol) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No acceptable step along the direction: numerically stationary.
            break;
        }

        res.x = trial;
        bool newly_fixed = false;
        for (int j : free) {
            if (!problem.strict[j] && res.x[j] <= options.boundary_snap) {
                res.x[j] = 0.0;
                res.fixed[j] = true;
                newly_fixed = true;
            }
        }
        if (newly_fixed && problem.on_fix) problem.on_fix(res.x, res.fixed);
        if (!problem.evaluate(res.x, true, res.at_optimum)) {
            throw NumericalError("objective failed at an accepted point");
        }
        res.trace.push_back(res.at_optimum.value);
    }
    res.gradient_max_norm = max_abs_free(res.at_optimum.gradient, free_indices(res.fixed));
    if (!res.converged && res.gradient_max_norm < options.gradient_tolerance) {
        res.converged = true;
    }
    return res;
}

}  // namespace intgarch
