#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace intgarch {

/// Objective value with optional first and second derivatives.
struct Evaluation {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    /// Positive semidefinite curvature model (expected information); used when -hessian is not PD.
    Eigen::MatrixXd information;
};

/**
 * Maximisation problem over x with x_j >= 0 for every coordinate.
 *
 * Coordinates flagged `strict` must stay strictly positive and are never
 * snapped to the boundary; all others may be fixed at exactly 0.
 */
struct ScoringProblem {
    /// Fills `out`; returns false when x lies outside the objective's domain.
    std::function<bool(const Eigen::VectorXd& x, bool with_derivatives, Evaluation& out)> evaluate;
    std::vector<bool> strict;
    /// Extra feasibility constraints beyond the sign bounds.
    std::function<bool(const Eigen::VectorXd& x)> feasible;
    /// Called after the fixed set grows; may fix further coordinates (set them to 0 in x too).
    std::function<void(Eigen::VectorXd& x, std::vector<bool>& fixed)> on_fix;
};

struct ScoringOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;
    int step_halving_limit = 60;
    double boundary_snap = 1e-8;
    /// How often a boundary coordinate may be released when the KKT sign test fails.
    int max_releases = 2;
    /// The supplied gradient is an estimating equation rather than the derivative of the value:
    /// steps are accepted when they shrink max |g_free| instead of when the value does not fall.
    bool root_mode = false;
};

struct ScoringResult {
    Eigen::VectorXd x;
    std::vector<bool> fixed;
    Evaluation at_optimum;
    bool converged = false;
    int iterations = 0;
    double gradient_max_norm = 0.0;
    /// Objective value after each accepted iteration (first entry = start point).
    std::vector<double> trace;
};

/**
 * Scoring iterations x <- x + [-H]^{-1} g on the free coordinates, falling
 * back to the information matrix when -H is not positive definite. Steps that
 * would cross a bound are truncated to land on it, then halved until the
 * objective does not decrease and the point is feasible. A coordinate that
 * ends within boundary_snap of 0 is fixed at exactly 0 and the remaining
 * sub-problem is iterated; converged means max |g_free| < gradient_tolerance.
 */
[[nodiscard]] ScoringResult maximize_scoring(const ScoringProblem& problem, Eigen::VectorXd x0,
                                             const ScoringOptions& options);

}  // namespace intgarch
