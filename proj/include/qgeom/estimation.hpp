// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file estimation.hpp
 * @brief Finite POVMs, the classical families they induce, classical Fisher
 *        information, the measurement built for quasi-parallel models and
 *        Monte Carlo estimator statistics.
 *
 * Elements act on orthonormal coordinates u = sqrt(w) phi of a state. Each
 * element is stored as a factor F with E = F F^dagger, so that
 *
 *     p = |F^dagger u|^2,      d p = 2 Re <F^dagger u, F^dagger du>.
 *
 * Projective measurements onto an incomplete orthonormal set carry one extra
 * "complement" outcome I - Q Q^dagger, stored through the isometry Q.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "qgeom/model.hpp"

namespace qgeom {

using SparseC = Eigen::SparseMatrix<cplx>;

inline constexpr double kPovmPsdTol = 1e-10;
inline constexpr double kPovmCompletenessTol = 1e-8;
/// Outcomes below this probability are left out of Fisher sums.
inline constexpr double kProbabilityFloor = 1e-12;

class Povm {
  public:
    /// Factors act on orthonormal coordinates; completeness is checked.
    Povm(Space space, std::vector<std::string> labels, std::vector<SparseC> factors,
         std::optional<CMatrix> complement_isometry = std::nullopt);

    /// Hermitian PSD elements in orthonormal coordinates.
    [[nodiscard]] static Povm from_elements(Space space, std::vector<std::string> labels,
                                            const std::vector<CMatrix>& elements);

    [[nodiscard]] const Space& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] bool has_complement() const noexcept { return complement_.has_value(); }

    /// Dense element k in orthonormal coordinates.
    [[nodiscard]] CMatrix element(std::size_t k) const;

    /// p_k for a unit vector.
    [[nodiscard]] RVector probabilities(const StateVector& state) const;
    /// d p_k along `direction` (an unnormalized tangent vector).
    [[nodiscard]] RVector probability_derivative(const StateVector& state, const StateVector& direction) const;
    /// p_k = tr(rho E_k) for a density matrix in orthonormal coordinates.
    [[nodiscard]] RVector probabilities(const CMatrix& rho) const;

    /// Outcomes a and b replaced by a single outcome (appended last).
    [[nodiscard]] Povm merged(std::size_t a, std::size_t b) const;

  private:
    void validate() const;

    Space space_;
    std::vector<std::string> labels_;
    std::vector<SparseC> factors_;
    std::optional<CMatrix> complement_;  ///< isometry Q of the projective part
};

/// Projectors onto the computational basis of any space.
[[nodiscard]] Povm standard_basis_pvm(const Space& space);
/// One projector per grid cell; on a grid this is the standard basis.
[[nodiscard]] Povm grid_pvm(const GridSpace& space);
/// Rank-1 projectors onto an orthonormal set plus the complement when the
/// set does not span the space. Throws NonOrthonormalError.
[[nodiscard]] Povm pvm_from_basis(const std::vector<StateVector>& basis);

/// Clips values above -1e-10 to zero and checks normalization; throws
/// MeasurementDefinitionError otherwise.
[[nodiscard]] RVector induced_distribution(const Povm& povm, const CMatrix& rho);
[[nodiscard]] RVector induced_distribution(const Povm& povm, const StateVector& state);

/// theta -> p(.|theta) and the outcome-by-parameter Jacobian.
struct ClassicalFamily {
    std::size_t parameter_count = 1;
    std::function<RVector(std::span<const double>)> probabilities;
    /// Rows are outcomes, columns parameters. Empty: central differences.
    std::function<RMatrix(std::span<const double>)> jacobian;
    DerivativeMode mode = DerivativeMode::analytic;

    [[nodiscard]] RMatrix jacobian_at(std::span<const double> theta) const;
};

[[nodiscard]] ClassicalFamily induced_family(const Povm& povm, const PureStateModel& model);

/**
 * J^C_ij = sum over p > 1e-12 of d_i p d_j p / p. Outcomes left out must
 * carry no derivative above 1e-8 and no more than 1e-10 of total mass;
 * otherwise SingularSupportError.
 */
[[nodiscard]] RMatrix classical_fisher(const ClassicalFamily& family, std::span<const double> theta);

/**
 * Projective measurement attaining the SLD bound at every sample of a
 * quasi-parallel model: the samples and their lifts are phase-aligned,
 * orthonormalized over the reals and the basis is rotated by a fixed real
 * orthogonal matrix so that no sample is orthogonal to a basis vector.
 * Throws NonRealOverlapError (carrying the witness pair) when the samples
 * are not quasi-parallel.
 */
[[nodiscard]] Povm optimal_measurement_quasi_parallel(const PureStateModel& model,
                                                      const std::vector<Theta>& samples, double tol = 1e-6);

using Outcomes = std::vector<std::size_t>;

/// i.i.d. outcomes from a std::mt19937_64 seeded with (seed, stream).
[[nodiscard]] Outcomes sample_outcomes(const Povm& povm, const StateVector& state, std::size_t n,
                                       std::uint64_t seed, std::uint64_t stream = 0);
[[nodiscard]] Outcomes sample_outcomes(const Povm& povm, const CMatrix& rho, std::size_t n, std::uint64_t seed,
                                       std::uint64_t stream = 0);

struct EstimatorStats {
    RVector mean;
    RMatrix covariance;  ///< unbiased
    std::size_t n = 0;
    std::optional<std::uint64_t> seed;
};

using EstimateFn = std::function<RVector(std::size_t)>;

/// Throws SampleSizeError for fewer than two outcomes.
[[nodiscard]] EstimatorStats estimator_covariance(const Outcomes& outcomes, const EstimateFn& estimate);

/// theta0 + J^C(theta0)^{-1} grad log p(omega|theta0); locally unbiased at theta0.
[[nodiscard]] EstimateFn score_estimator(const ClassicalFamily& family, std::span<const double> theta0);

/// Grid cell k -> its position; the sample mean of a position-shift model.
[[nodiscard]] EstimateFn position_estimator(const GridSpace& grid);

}  // namespace qgeom
