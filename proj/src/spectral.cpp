#include "illposed/spectral.hpp"

#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace illposed {

namespace {

void require_finite(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw InvalidArgument("coefficient " + std::to_string(k + 1) + " is not finite");
        }
    }
}

void require_same_size(const CoefficientVector& a, const CoefficientVector& b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("coefficient vectors have different lengths (" +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

// Euclidean norm with scaling so that large entries cannot overflow the sum.
double scaled_norm(std::span<const double> x) {
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (double v : x) {
        const double r = v / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

}  // namespace

CoefficientVector::CoefficientVector(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    require_finite(c_);
}

CoefficientVector::CoefficientVector(std::initializer_list<double> coefficients) : c_(coefficients) {
    require_finite(c_);
}

bool CoefficientVector::all_finite() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
}

CoefficientVector& CoefficientVector::operator+=(const CoefficientVector& other) {
    require_same_size(*this, other);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += other.c_[k];
    return *this;
}

CoefficientVector& CoefficientVector::operator-=(const CoefficientVector& other) {
    require_same_size(*this, other);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= other.c_[k];
    return *this;
}

CoefficientVector& CoefficientVector::operator*=(double a) noexcept {
    for (double& v : c_) v *= a;
    return *this;
}

CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b) { return a += b; }
CoefficientVector operator-(CoefficientVector a, const CoefficientVector& b) { return a -= b; }
CoefficientVector operator*(double a, CoefficientVector v) { return v *= a; }

SpectrumModel::SpectrumModel(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) throw InvalidArgument("spectrum needs at least one mode");
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
        if (!(eigenvalues_[k] > 0.0) || !std::isfinite(eigenvalues_[k])) {
            throw InvalidArgument("eigenvalue " + std::to_string(k + 1) + " must be positive and finite");
        }
        if (k > 0 && !(eigenvalues_[k] > eigenvalues_[k - 1])) {
            throw InvalidArgument("eigenvalues must be strictly increasing (mode " + std::to_string(k + 1) + ")");
        }
    }
}

SpectrumModel::SpectrumModel(std::vector<double> eigenvalues, std::vector<double> nodes, double weight,
                             const Evaluator& evaluator)
    : SpectrumModel(std::move(eigenvalues)) {
    const std::size_t modes = eigenvalues_.size();
    const std::size_t points = nodes.size();
    if (points < modes) {
        throw InvalidArgument("grid size " + std::to_string(points) + " is smaller than mode count " +
                              std::to_string(modes));
    }
    if (!(weight > 0.0)) throw InvalidArgument("quadrature weight must be positive");

    EigenfunctionTable basis{std::move(nodes), std::vector<double>(modes * points), weight};
    for (std::size_t k = 0; k < modes; ++k) {
        for (std::size_t j = 0; j < points; ++j) basis.table[k * points + j] = evaluator(k, j);
    }

    // Discrete orthonormality under the quadrature inner product.
    for (std::size_t k = 0; k < modes; ++k) {
        for (std::size_t m = k; m < modes; ++m) {
            double dot = 0.0;
            for (std::size_t j = 0; j < points; ++j) {
                dot += basis.table[k * points + j] * basis.table[m * points + j];
            }
            dot *= weight;
            const double expected = (k == m) ? 1.0 : 0.0;
            if (std::abs(dot - expected) > 1e-12) {
                std::ostringstream msg;
                msg << "eigenfunctions " << k + 1 << " and " << m + 1
                    << " are not discretely orthonormal (inner product " << dot << ")";
                throw InvalidArgument(msg.str());
            }
        }
    }
    basis_ = std::move(basis);
}

std::size_t SpectrumModel::grid_size() const noexcept { return basis_ ? basis_->nodes.size() : 0; }

const EigenfunctionTable& SpectrumModel::basis() const {
    if (!basis_) throw InvalidArgument("spectrum is abstract: no eigenfunctions on a physical grid");
    return *basis_;
}

double SpectrumModel::eigenfunction(std::size_t k, std::size_t j) const {
    const auto& b = basis();
    return b.table[k * b.nodes.size() + j];
}

double SpectrumModel::sup_norm_constant() const {
    const auto& b = basis();
    const std::size_t points = b.nodes.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < points; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < mode_count(); ++k) {
            const double phi = b.table[k * points + j];
            sum += phi * phi;
        }
        worst = std::max(worst, sum);
    }
    return std::sqrt(worst);
}

void SpectrumModel::require_aligned(const CoefficientVector& v) const {
    if (v.size() != mode_count()) {
        throw InvalidArgument("coefficient vector has " + std::to_string(v.size()) + " entries, spectrum has " +
                              std::to_string(mode_count()) + " modes");
    }
}

double h_norm(const CoefficientVector& v) { return scaled_norm(v.values()); }

double wtilde_norm(const CoefficientVector& v, std::span<const double> eigenvalues, double horizon,
                   const std::function<double(double)>& growth_rate) {
    if (!(horizon > 0.0)) throw InvalidArgument("horizon T must be positive");
    if (v.size() != eigenvalues.size()) {
        throw InvalidArgument("coefficient vector is not aligned with the spectrum");
    }
    std::vector<double> weighted(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double weight = std::exp(horizon * growth_rate(eigenvalues[k]));
        if (!std::isfinite(weight)) {
            std::ostringstream msg;
            msg << "smoothness weight exp(T rho(lambda)) overflows at mode " << k + 1
                << " (lambda = " << eigenvalues[k] << ", T = " << horizon << ")";
            throw RangeError(msg.str());
        }
        weighted[k] = weight * v[k];
        if (!std::isfinite(weighted[k])) {
            throw RangeError("weighted coefficient overflows at mode " + std::to_string(k + 1));
        }
    }
    const double norm = scaled_norm(weighted);
    if (!std::isfinite(norm)) throw RangeError("smoothness norm overflows");
    return norm;
}

SpectrumModel dirichlet_laplacian_1d(std::size_t modes, std::size_t grid_points) {
    if (modes < 1) throw InvalidArgument("need at least one mode");
    if (modes > grid_points) {
        throw InvalidArgument("mode count K = " + std::to_string(modes) + " exceeds grid size N = " +
                              std::to_string(grid_points));
    }
    const double pi = std::numbers::pi;
    const double spacing = pi / static_cast<double>(grid_points + 1);
    std::vector<double> eigenvalues(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const double wavenumber = static_cast<double>(k + 1);
        eigenvalues[k] = wavenumber * wavenumber;
    }
    std::vector<double> nodes(grid_points);
    for (std::size_t j = 0; j < grid_points; ++j) nodes[j] = static_cast<double>(j + 1) * spacing;

    const double amplitude = std::sqrt(2.0 / pi);
    const std::size_t period = 2 * (grid_points + 1);
    auto evaluator = [&](std::size_t k, std::size_t j) {
        // sin(k x_j) = sin(pi * (k j mod 2(N+1)) / (N+1)), reduced to keep the
        // argument small and the discrete orthogonality exact to rounding.
        const std::size_t phase = ((k + 1) * (j + 1)) % period;
        return amplitude * std::sin(static_cast<double>(phase) * spacing);
    };
    return SpectrumModel(std::move(eigenvalues), std::move(nodes), spacing, evaluator);
}

GridFunction synthesize(const CoefficientVector& v, const SpectrumModel& spectrum) {
    const auto& b = spectrum.basis();
    spectrum.require_aligned(v);
    const std::size_t points = b.nodes.size();
    GridFunction g{std::vector<double>(points, 0.0)};
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double c = v[k];
        if (c == 0.0) continue;
        const double* row = &b.table[k * points];
        for (std::size_t j = 0; j < points; ++j) g.values[j] += c * row[j];
    }
    return g;
}

CoefficientVector analyze(const GridFunction& g, const SpectrumModel& spectrum) {
    const auto& b = spectrum.basis();
    const std::size_t points = b.nodes.size();
    if (g.values.size() != points) {
        throw InvalidArgument("grid function has " + std::to_string(g.values.size()) + " samples, grid has " +
                              std::to_string(points));
    }
    std::vector<double> c(spectrum.mode_count(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double* row = &b.table[k * points];
        double dot = 0.0;
        for (std::size_t j = 0; j < points; ++j) dot += g.values[j] * row[j];
        c[k] = b.weight * dot;
    }
    return CoefficientVector(std::move(c));
}

double grid_norm(const GridFunction& g, const SpectrumModel& spectrum) {
    const auto& b = spectrum.basis();
    if (g.values.size() != b.nodes.size()) throw InvalidArgument("grid function does not match the grid");
    return std::sqrt(b.weight) * scaled_norm(g.values);
}

}  // namespace illposed
