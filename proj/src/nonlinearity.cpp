#include "illposed/nonlinearity.hpp"

#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace illposed {

Nonlinearity::Nonlinearity(std::string name, Rule rule, LipschitzBound lipschitz, bool zero)
    : name_(std::move(name)), rule_(std::move(rule)), lipschitz_(std::move(lipschitz)), zero_(zero) {
    if (const auto* g = std::get_if<GlobalLipschitz>(&lipschitz_); g && !(g->constant >= 0.0)) {
        throw InvalidArgument("Lipschitz constant must be nonnegative");
    }
    if (const auto* l = std::get_if<LocalLipschitz>(&lipschitz_); l && !l->bound) {
        throw InvalidArgument("local Lipschitz bound needs a map E -> L(E)");
    }
}

Nonlinearity Nonlinearity::zero() {
    return Nonlinearity(
        "zero", [](double, const CoefficientVector& w, const SpectrumModel&) { return CoefficientVector(w.size()); },
        GlobalLipschitz{0.0}, true);
}

Nonlinearity Nonlinearity::physical(std::string name, GridRule rule, LipschitzBound lipschitz) {
    auto wrapped = [rule = std::move(rule)](double t, const CoefficientVector& w, const SpectrumModel& spectrum) {
        return analyze(rule(t, synthesize(w, spectrum)), spectrum);
    };
    return Nonlinearity(std::move(name), std::move(wrapped), std::move(lipschitz), false);
}

Nonlinearity Nonlinearity::spectral(std::string name, SpectralRule rule, LipschitzBound lipschitz) {
    auto wrapped = [rule = std::move(rule)](double t, const CoefficientVector& w, const SpectrumModel&) {
        return rule(t, w);
    };
    return Nonlinearity(std::move(name), std::move(wrapped), std::move(lipschitz), false);
}

Nonlinearity Nonlinearity::general(std::string name, Rule rule, LipschitzBound lipschitz) {
    return Nonlinearity(std::move(name), std::move(rule), std::move(lipschitz), false);
}

CoefficientVector Nonlinearity::operator()(double t, const CoefficientVector& w, const SpectrumModel& spectrum) const {
    return rule_(t, w, spectrum);
}

double Nonlinearity::lipschitz_constant(double radius) const {
    if (const auto* g = std::get_if<GlobalLipschitz>(&lipschitz_)) return g->constant;
    return std::get<LocalLipschitz>(lipschitz_).bound(radius);
}

void Nonlinearity::check_zero_at_zero(const SpectrumModel& spectrum, double horizon) const {
    if (zero_) return;
    const CoefficientVector origin(spectrum.mode_count());
    constexpr int kSamples = 5;
    for (int i = 0; i < kSamples; ++i) {
        const double t = horizon * i / (kSamples - 1);
        const double norm = h_norm((*this)(t, origin, spectrum));
        if (norm != 0.0) {
            std::ostringstream msg;
            msg << "nonlinearity '" << name_ << "' has f(t, 0) != 0 at t = " << t << " (norm " << norm << ")";
            throw InvalidArgument(msg.str());
        }
    }
}

Nonlinearity truncate_nonlinearity(const Nonlinearity& f, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("truncation radius must be positive");
    const double constant = 2.0 * f.lipschitz_constant(radius);
    auto rule = [f, radius](double t, const CoefficientVector& w, const SpectrumModel& spectrum) {
        const double norm = h_norm(w);
        if (norm <= radius) return f(t, w, spectrum);
        return f(t, (radius / norm) * w, spectrum);
    };
    std::ostringstream name;
    name << f.name() << "|B=" << radius;
    return Nonlinearity::general(name.str(), std::move(rule), GlobalLipschitz{constant});
}

LipschitzAudit lipschitz_audit(const Nonlinearity& f, const SpectrumModel& spectrum, double radius,
                               std::size_t pairs, std::uint64_t seed, double t) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    const std::size_t modes = spectrum.mode_count();
    auto draw = [&] {
        CoefficientVector w(modes);
        for (std::size_t k = 0; k < modes; ++k) w[k] = normal(rng);
        const double scale = radius * unit(rng) / h_norm(w);
        return scale * w;
    };
    const double constant = f.lipschitz_constant(radius);
    LipschitzAudit audit;
    for (std::size_t i = 0; i < pairs; ++i) {
        const CoefficientVector w1 = draw();
        const CoefficientVector w2 = draw();
        const double dw = h_norm(w1 - w2);
        if (dw == 0.0) continue;
        const double df = h_norm(f(t, w1, spectrum) - f(t, w2, spectrum));
        const double ratio = constant > 0.0 ? df / (constant * dw) : (df > 0.0 ? INFINITY : 0.0);
        audit.worst_ratio = std::max(audit.worst_ratio, ratio);
        ++audit.pairs;
    }
    audit.pass = audit.worst_ratio <= 1.001;
    return audit;
}

namespace {

double param(const NonlinearitySpec& spec, const std::string& key, double fallback) {
    const auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

template <typename Scalar>
Nonlinearity::GridRule pointwise(Scalar scalar) {
    return [scalar](double, const GridFunction& u) {
        GridFunction out{std::vector<double>(u.values.size())};
        std::transform(u.values.begin(), u.values.end(), out.values.begin(), scalar);
        return out;
    };
}

}  // namespace

Nonlinearity make_nonlinearity(const NonlinearitySpec& spec, const SpectrumModel& spectrum) {
    const double a = param(spec, "a", 1.0);
    if (!std::isfinite(a)) throw InvalidArgument("nonlinearity parameter a must be finite");
    if (spec.name == "zero") return Nonlinearity::zero();
    if (spec.name == "linear") {
        return Nonlinearity::spectral(
            "linear", [a](double, const CoefficientVector& w) { return a * w; }, GlobalLipschitz{std::abs(a)});
    }
    if (spec.name == "sine") {
        return Nonlinearity::physical("sine", pointwise([a](double u) { return a * std::sin(u); }),
                                      GlobalLipschitz{std::abs(a)});
    }
    // |u^3 - v^3| <= 3 max(|u|,|v|)^2 |u - v| pointwise, and sup|u| <= kappa ||u||_H.
    const double kappa2 = spectrum.has_eigenfunctions() ? std::pow(spectrum.sup_norm_constant(), 2) : 0.0;
    if (spec.name == "cubic") {
        return Nonlinearity::physical("cubic", pointwise([a](double u) { return a * u * u * u; }),
                                      LocalLipschitz{[a, kappa2](double e) { return 3.0 * std::abs(a) * kappa2 * e * e; }});
    }
    if (spec.name == "vanderpol") {
        return Nonlinearity::physical(
            "vanderpol", pointwise([a](double u) { return a * (u * u * u - u); }),
            LocalLipschitz{[a, kappa2](double e) { return std::abs(a) * (3.0 * kappa2 * e * e + 1.0); }});
    }
    throw InvalidArgument("unknown nonlinearity '" + spec.name + "' (expected zero, linear, sine, cubic, vanderpol)");
}

}  // namespace illposed
