#pragma once

// Spectral representation of the Hilbert space H: elements are coefficient
// sequences over the eigenbasis of a positive self-adjoint operator A with a
// finite (band-limited) spectrum. An optional eigenfunction table on a uniform
// physical grid lets nonlinearities be evaluated pointwise.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace illposed {

/// An element of H stored by its spectral coefficients c_1..c_K.
class CoefficientVector {
public:
    CoefficientVector() = default;
    explicit CoefficientVector(std::size_t size) : c_(size, 0.0) {}
    explicit CoefficientVector(std::vector<double> coefficients);
    CoefficientVector(std::initializer_list<double> coefficients);

    [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return c_[k]; }
    [[nodiscard]] double& operator[](std::size_t k) noexcept { return c_[k]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return c_; }
    [[nodiscard]] std::span<double> values() noexcept { return c_; }
    [[nodiscard]] bool all_finite() const noexcept;

    CoefficientVector& operator+=(const CoefficientVector& other);
    CoefficientVector& operator-=(const CoefficientVector& other);
    CoefficientVector& operator*=(double a) noexcept;

    friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

private:
    std::vector<double> c_;
};

[[nodiscard]] CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b);
[[nodiscard]] CoefficientVector operator-(CoefficientVector a, const CoefficientVector& b);
[[nodiscard]] CoefficientVector operator*(double a, CoefficientVector v);

/// Samples of a real function on the physical grid of a SpectrumModel.
struct GridFunction {
    std::vector<double> values;
};

/// Eigenfunctions tabulated on the physical grid, with the uniform quadrature
/// weight that makes them discretely orthonormal.
struct EigenfunctionTable {
    std::vector<double> nodes;   // x_1..x_N
    std::vector<double> table;   // row-major K x N, table[k*N + j] = phi_k(x_j)
    double weight = 0.0;         // quadrature weight of every node
};

/// Eigenvalue sequence of A, optionally with eigenfunctions on a grid.
///
/// Eigenvalues must be strictly positive and strictly increasing. When a table
/// is supplied its discrete orthonormality is verified to 1e-12.
class SpectrumModel {
public:
    using Evaluator = std::function<double(std::size_t k, std::size_t j)>;

    /// Abstract spectrum: no physical grid, only eigenvalues.
    explicit SpectrumModel(std::vector<double> eigenvalues);

    /// Spectrum with eigenfunctions phi_k(x_j) given by `evaluator` for
    /// k < K, j < N on `nodes`, integrated with the uniform `weight`.
    SpectrumModel(std::vector<double> eigenvalues, std::vector<double> nodes, double weight,
                  const Evaluator& evaluator);

    [[nodiscard]] std::size_t mode_count() const noexcept { return eigenvalues_.size(); }
    [[nodiscard]] std::size_t grid_size() const noexcept;
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] double eigenvalue(std::size_t k) const noexcept { return eigenvalues_[k]; }
    [[nodiscard]] bool has_eigenfunctions() const noexcept { return basis_.has_value(); }
    [[nodiscard]] const EigenfunctionTable& basis() const;
    [[nodiscard]] double eigenfunction(std::size_t k, std::size_t j) const;

    /// Smallest kappa with max_j |sum_k c_k phi_k(x_j)| <= kappa * ||c||_H.
    [[nodiscard]] double sup_norm_constant() const;

    /// Throws InvalidArgument unless v has one coefficient per mode.
    void require_aligned(const CoefficientVector& v) const;

private:
    std::vector<double> eigenvalues_;
    std::optional<EigenfunctionTable> basis_;
};

/// ||v||_H = (sum_k c_k^2)^{1/2}.
[[nodiscard]] double h_norm(const CoefficientVector& v);

/// Weighted norm (sum_k e^{2 T rho(lambda_k)} c_k^2)^{1/2} of the smoothness
/// space. Throws RangeError naming the mode whose weight overflows.
[[nodiscard]] double wtilde_norm(const CoefficientVector& v, std::span<const double> eigenvalues,
                                 double horizon, const std::function<double(double)>& growth_rate);

/// -d^2/dx^2 on (0, pi) with zero boundary values: lambda_k = k^2,
/// phi_k = sqrt(2/pi) sin(kx), nodes x_j = j pi / (N+1).
[[nodiscard]] SpectrumModel dirichlet_laplacian_1d(std::size_t modes, std::size_t grid_points);

/// g(x_j) = sum_k c_k phi_k(x_j).
[[nodiscard]] GridFunction synthesize(const CoefficientVector& v, const SpectrumModel& spectrum);

/// c_k = quadrature inner product of g with phi_k.
[[nodiscard]] CoefficientVector analyze(const GridFunction& g, const SpectrumModel& spectrum);

/// Quadrature norm (w sum_j g_j^2)^{1/2} on the spectrum's grid.
[[nodiscard]] double grid_norm(const GridFunction& g, const SpectrumModel& spectrum);

}  // namespace illposed
