#pragma once

// Picard iteration for the (exact or regularized) mild-solution equation
//
//   u(t) = Q(t) u0 + S(t) u1 + integral_0^t S(t - tau) f(tau, u(tau)) dtau
//
// on a uniform time grid. The Volterra term uses the composite trapezoid rule
// with the multiplier S evaluated exactly at every node difference.

#include "illposed/filters.hpp"
#include "illposed/nonlinearity.hpp"
#include "illposed/propagators.hpp"
#include "illposed/spectral.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace illposed {

/// Uniform nodes t_i = i T / M, i = 0..M.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] std::size_t size() const noexcept { return steps_ + 1; }
    [[nodiscard]] double step() const noexcept { return horizon_ / static_cast<double>(steps_); }
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return horizon_ * (static_cast<double>(i) / static_cast<double>(steps_));
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    std::size_t steps_;
};

/// The multipliers driving the map: either the exact family or a filter.
class Evolution {
public:
    [[nodiscard]] static Evolution exact(const PropagatorFamily& family);
    [[nodiscard]] static Evolution filtered(const FilterScheme& scheme);

    [[nodiscard]] double q(double t, double lambda) const { return q_(t, lambda); }
    [[nodiscard]] double s(double t, double lambda) const { return s_(t, lambda); }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    /// M2 and gamma(T, beta) when the operators are bounded (filtered case).
    struct Bounds {
        double m2 = 1.0;
        double gamma_T = 1.0;
    };
    [[nodiscard]] const std::optional<Bounds>& bounds() const noexcept { return bounds_; }

private:
    using Multiplier = std::function<double(double, double)>;
    Evolution(std::string label, Multiplier q, Multiplier s, std::optional<Bounds> bounds);

    std::string label_;
    Multiplier q_;
    Multiplier s_;
    std::optional<Bounds> bounds_;
};

struct MildProblem {
    Evolution evolution;
    CoefficientVector data;                       // u0 or its noisy version
    std::optional<CoefficientVector> velocity;    // u1, when the initial velocity is nonzero
    Nonlinearity nonlinearity = Nonlinearity::zero();
};

/// The discretized map Phi with multipliers tabulated once per grid.
class MildSolutionMap {
public:
    MildSolutionMap(const SpectrumModel& spectrum, const TimeGrid& grid, MildProblem problem);

    /// Phi(v) at every node; v holds one state per node.
    [[nodiscard]] std::vector<CoefficientVector> apply(std::span<const CoefficientVector> v) const;

    /// The terms independent of v: Q(t_i) u0 + S(t_i) u1.
    [[nodiscard]] const std::vector<CoefficientVector>& free_term() const noexcept { return free_; }

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const MildProblem& problem() const noexcept { return problem_; }
    [[nodiscard]] const SpectrumModel& spectrum() const noexcept { return *spectrum_; }

private:
    const SpectrumModel* spectrum_;
    TimeGrid grid_;
    MildProblem problem_;
    std::vector<double> s_table_;  // (M+1) x K, s(t_i, lambda_k)
    std::vector<CoefficientVector> free_;
};

[[nodiscard]] std::vector<CoefficientVector> phi_apply(std::span<const CoefficientVector> v,
                                                       const SpectrumModel& spectrum, const TimeGrid& grid,
                                                       const MildProblem& problem);

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_iters = 200;
};

struct SolveDiagnostics {
    std::size_t iterations = 0;          // Phi applications producing the returned iterate
    double final_residual = 0.0;         // sup_i ||Phi(u)(t_i) - u(t_i)||_H of the returned iterate
    std::vector<double> residual_history;
    std::optional<std::size_t> m0_bound; // a-priori contraction index, when the operators are bounded
};

struct Solution {
    TimeGrid grid;
    std::vector<CoefficientVector> states;
    SolveDiagnostics diagnostics;

    /// max_i ||u(t_i)||_H.
    [[nodiscard]] double sup_norm() const;
};

/// Iterates Phi from the zero function until the sup-over-nodes change falls
/// below tol (or below the rounding floor of the iterate), and returns the
/// iterate whose residual was certified. Throws NonConvergenceError with the
/// residual history when max_iters is exhausted or the iterates blow up.
[[nodiscard]] Solution picard_solve(const SpectrumModel& spectrum, const TimeGrid& grid, const MildProblem& problem,
                                    const SolveOptions& options = {});

/// Smallest m >= 1 with (M2 L gamma_T T)^m / m! < 1.
[[nodiscard]] std::size_t m0_estimate(double m2, double lipschitz, double gamma_T, double horizon);

}  // namespace illposed
