#pragma once

// Reaction terms f(t, u) acting on elements of H, either pointwise on the
// physical grid (synthesize -> rule -> analyze) or directly on coefficients,
// together with a declared Lipschitz bound in the H norm.

#include "illposed/spectral.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>

namespace illposed {

struct GlobalLipschitz {
    double constant = 0.0;
};

/// Nondecreasing E -> L(E): Lipschitz constant on the ball of radius E.
struct LocalLipschitz {
    std::function<double(double)> bound;
};

using LipschitzBound = std::variant<GlobalLipschitz, LocalLipschitz>;

class Nonlinearity {
public:
    using Rule = std::function<CoefficientVector(double t, const CoefficientVector& w, const SpectrumModel& spectrum)>;
    using GridRule = std::function<GridFunction(double t, const GridFunction& u)>;
    using SpectralRule = std::function<CoefficientVector(double t, const CoefficientVector& w)>;

    /// f = 0, globally Lipschitz with constant 0.
    [[nodiscard]] static Nonlinearity zero();

    /// Rule applied to grid samples; needs a spectrum with eigenfunctions.
    [[nodiscard]] static Nonlinearity physical(std::string name, GridRule rule, LipschitzBound lipschitz);

    /// Rule applied to coefficients directly.
    [[nodiscard]] static Nonlinearity spectral(std::string name, SpectralRule rule, LipschitzBound lipschitz);

    /// Rule on H elements with access to the spectrum (used for wrappers).
    [[nodiscard]] static Nonlinearity general(std::string name, Rule rule, LipschitzBound lipschitz);

    [[nodiscard]] CoefficientVector operator()(double t, const CoefficientVector& w,
                                               const SpectrumModel& spectrum) const;

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool is_zero() const noexcept { return zero_; }
    [[nodiscard]] bool is_global() const noexcept { return std::holds_alternative<GlobalLipschitz>(lipschitz_); }
    [[nodiscard]] const LipschitzBound& lipschitz() const noexcept { return lipschitz_; }

    /// Global constant, or L(radius) for a local bound.
    [[nodiscard]] double lipschitz_constant(double radius) const;

    /// Sampled check that f(t, 0) = 0 on [0, T]; throws InvalidArgument otherwise.
    void check_zero_at_zero(const SpectrumModel& spectrum, double horizon) const;

private:
    Nonlinearity(std::string name, Rule rule, LipschitzBound lipschitz, bool zero);

    std::string name_;
    Rule rule_;
    LipschitzBound lipschitz_;
    bool zero_ = false;
};

/// f_B(t, w) = f(t, min(B/||w||, 1) w), globally Lipschitz with 2 L(B).
[[nodiscard]] Nonlinearity truncate_nonlinearity(const Nonlinearity& f, double radius);

struct LipschitzAudit {
    double worst_ratio = 0.0;  // max ||f(w1) - f(w2)|| / (L ||w1 - w2||)
    std::size_t pairs = 0;
    bool pass = false;         // worst_ratio <= 1.001
};

/// Random pairs inside the ball of the given radius, seeded.
[[nodiscard]] LipschitzAudit lipschitz_audit(const Nonlinearity& f, const SpectrumModel& spectrum, double radius,
                                             std::size_t pairs, std::uint64_t seed, double t = 0.0);

/// Builtin reaction term by name: zero, linear {a}, sine {a}, cubic {a},
/// vanderpol {a}. Missing `a` defaults to 1.
struct NonlinearitySpec {
    std::string name = "zero";
    std::map<std::string, double> params;
};

[[nodiscard]] Nonlinearity make_nonlinearity(const NonlinearitySpec& spec, const SpectrumModel& spectrum);

}  // namespace illposed
