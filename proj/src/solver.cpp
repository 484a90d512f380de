#include "illposed/solver.hpp"

#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace illposed {

namespace {

constexpr std::size_t kMaxContractionIndex = 1'000'000;

void require_finite_multiplier(double value, const char* which, const std::string& label, double t, double lambda) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "multiplier " << which << " of " << label << " is not finite at t = " << t << ", lambda = " << lambda;
        throw RangeError(msg.str());
    }
}

}  // namespace

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("time horizon must be positive and finite");
    if (steps < 1) throw InvalidArgument("time grid needs at least one step");
}

Evolution::Evolution(std::string label, Multiplier q, Multiplier s, std::optional<Bounds> bounds)
    : label_(std::move(label)), q_(std::move(q)), s_(std::move(s)), bounds_(bounds) {}

Evolution Evolution::exact(const PropagatorFamily& family) {
    return Evolution(
        std::string(family.name()), [family](double t, double lambda) { return family.q(t, lambda); },
        [family](double t, double lambda) { return family.s(t, lambda); }, std::nullopt);
}

Evolution Evolution::filtered(const FilterScheme& scheme) {
    std::string label = std::string(scheme.family().name()) + "/" + std::string(to_string(scheme.kind()));
    const double gamma_T = scheme.gamma()(scheme.horizon(), scheme.beta());
    return Evolution(
        std::move(label), [scheme](double t, double lambda) { return scheme.q(t, lambda); },
        [scheme](double t, double lambda) { return scheme.s(t, lambda); }, Bounds{scheme.m2(), gamma_T});
}

MildSolutionMap::MildSolutionMap(const SpectrumModel& spectrum, const TimeGrid& grid, MildProblem problem)
    : spectrum_(&spectrum), grid_(grid), problem_(std::move(problem)) {
    spectrum.require_aligned(problem_.data);
    if (problem_.velocity) spectrum.require_aligned(*problem_.velocity);
    problem_.nonlinearity.check_zero_at_zero(spectrum, grid.horizon());

    const std::size_t modes = spectrum.mode_count();
    const std::size_t nodes = grid.size();
    const Evolution& evo = problem_.evolution;
    s_table_.resize(nodes * modes);
    free_.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double t = grid.node(i);
        CoefficientVector free(modes);
        for (std::size_t k = 0; k < modes; ++k) {
            const double lambda = spectrum.eigenvalue(k);
            const double s = evo.s(t, lambda);
            require_finite_multiplier(s, "S", evo.label(), t, lambda);
            s_table_[i * modes + k] = s;
            if (problem_.data[k] != 0.0) {
                const double q = evo.q(t, lambda);
                require_finite_multiplier(q, "Q", evo.label(), t, lambda);
                free[k] = q * problem_.data[k];
            }
            if (problem_.velocity && (*problem_.velocity)[k] != 0.0) free[k] += s * (*problem_.velocity)[k];
        }
        free_.push_back(std::move(free));
    }
}

std::vector<CoefficientVector> MildSolutionMap::apply(std::span<const CoefficientVector> v) const {
    const std::size_t nodes = grid_.size();
    const std::size_t modes = spectrum_->mode_count();
    if (v.size() != nodes) {
        throw InvalidArgument("candidate has " + std::to_string(v.size()) + " states, grid has " +
                              std::to_string(nodes) + " nodes");
    }
    std::vector<CoefficientVector> out = free_;
    if (problem_.nonlinearity.is_zero()) return out;

    std::vector<CoefficientVector> forcing;
    forcing.reserve(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        forcing.push_back(problem_.nonlinearity(grid_.node(j), v[j], *spectrum_));
    }

    const double h = grid_.step();
    for (std::size_t i = 1; i < nodes; ++i) {
        double* target = out[i].values().data();
        for (std::size_t j = 0; j <= i; ++j) {
            const double weight = (j == 0 || j == i) ? 0.5 * h : h;
            const double* kernel = &s_table_[(i - j) * modes];
            const auto f = forcing[j].values();
            for (std::size_t k = 0; k < modes; ++k) target[k] += weight * kernel[k] * f[k];
        }
    }
    return out;
}

std::vector<CoefficientVector> phi_apply(std::span<const CoefficientVector> v, const SpectrumModel& spectrum,
                                         const TimeGrid& grid, const MildProblem& problem) {
    return MildSolutionMap(spectrum, grid, problem).apply(v);
}

double Solution::sup_norm() const {
    double worst = 0.0;
    for (const auto& state : states) worst = std::max(worst, h_norm(state));
    return worst;
}

Solution picard_solve(const SpectrumModel& spectrum, const TimeGrid& grid, const MildProblem& problem,
                      const SolveOptions& options) {
    if (!(options.tol > 0.0)) throw InvalidArgument("Picard tolerance must be positive");
    if (options.max_iters < 1) throw InvalidArgument("Picard needs at least one iteration");

    const MildSolutionMap phi(spectrum, grid, problem);
    SolveDiagnostics diagnostics;
    if (const auto& bounds = problem.evolution.bounds(); bounds && problem.nonlinearity.is_global()) {
        const double lipschitz = problem.nonlinearity.lipschitz_constant(0.0);
        if (lipschitz > 0.0) {
            try {
                diagnostics.m0_bound = m0_estimate(bounds->m2, lipschitz, bounds->gamma_T, grid.horizon());
            } catch (const InvalidArgument&) {
                // contraction index beyond the practical range; reported as absent
            }
        }
    }

    std::vector<CoefficientVector> current(grid.size(), CoefficientVector(spectrum.mode_count()));
    for (std::size_t n = 1; n <= options.max_iters; ++n) {
        std::vector<CoefficientVector> next = phi.apply(current);
        double residual = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            residual = std::max(residual, h_norm(next[i] - current[i]));
            scale = std::max(scale, h_norm(next[i]));
        }
        diagnostics.residual_history.push_back(residual);
        if (!std::isfinite(residual)) {
            throw NonConvergenceError("Picard iterates diverged at iteration " + std::to_string(n),
                                      diagnostics.residual_history);
        }
        const double rounding_floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
        if (residual < options.tol || residual <= rounding_floor) {
            diagnostics.iterations = n - 1;
            diagnostics.final_residual = residual;
            return Solution{grid, std::move(current), std::move(diagnostics)};
        }
        current = std::move(next);
    }
    std::ostringstream msg;
    msg << "Picard iteration did not reach tol " << options.tol << " in " << options.max_iters
        << " iterations (last residual " << diagnostics.residual_history.back() << ")";
    throw NonConvergenceError(msg.str(), diagnostics.residual_history);
}

std::size_t m0_estimate(double m2, double lipschitz, double gamma_T, double horizon) {
    for (double arg : {m2, lipschitz, gamma_T, horizon}) {
        if (!(arg > 0.0) || !std::isfinite(arg)) throw InvalidArgument("m0_estimate arguments must be positive");
    }
    const double rate = m2 * lipschitz * gamma_T * horizon;
    // term = rate^m / m! kept as mantissa * 2^exponent so the peak cannot overflow.
    double mantissa = 1.0;
    long exponent = 0;
    for (std::size_t m = 1; m <= kMaxContractionIndex; ++m) {
        mantissa *= rate / static_cast<double>(m);
        int e = 0;
        mantissa = std::frexp(mantissa, &e);  // mantissa in [0.5, 1)
        exponent += e;
        if (exponent <= 0) return m;
    }
    std::ostringstream msg;
    msg << "contraction index exceeds " << kMaxContractionIndex << " for M2 L gamma(T) T = " << rate;
    throw InvalidArgument(msg.str());
}

}  // namespace illposed
