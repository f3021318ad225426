// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Finite inner-product spaces: labelled bases and uniform 1-d grids.
 *
 * A grid space stands in for L^2 of an interval. Amplitudes are point values
 * of the wave function and inner products use the rectangle rule
 *
 *     <u|v> = w * sum_k conj(u_k) v_k,
 *
 * with w = (upper - lower) / n for periodic grids and (upper - lower) / (n - 1)
 * for open ones. Basis spaces use w = 1. Because the weight is uniform, the
 * "orthonormal coordinates" sqrt(w) * amplitudes turn every operator into an
 * ordinary matrix; projectors and measurements are expressed in them.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qgeom {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

struct BasisSpace {
    std::size_t dimension = 1;
    /// Optional per-index annotations, e.g. magnetic numbers "-1", "0", "1".
    std::vector<std::string> labels;

    explicit BasisSpace(std::size_t dim, std::vector<std::string> labels_ = {});
};

struct GridSpace {
    std::size_t n_points = 2;
    double lower = 0.0;
    double upper = 1.0;
    bool periodic = false;

    GridSpace(std::size_t n, double lo, double hi, bool periodic_ = false);

    [[nodiscard]] double weight() const noexcept;
    [[nodiscard]] double point(std::size_t k) const noexcept { return lower + weight() * static_cast<double>(k); }
    [[nodiscard]] std::vector<double> points() const;
};

using Space = std::variant<BasisSpace, GridSpace>;

[[nodiscard]] std::size_t dimension(const Space& space) noexcept;
[[nodiscard]] double quadrature_weight(const Space& space) noexcept;
[[nodiscard]] bool same_space(const Space& a, const Space& b) noexcept;
[[nodiscard]] std::string describe(const Space& space);

/// Amplitude vector over a space. Unit norm is not enforced here because
/// tangents and lifts share the type; states handed out by models are unit
/// vectors.
class StateVector {
  public:
    StateVector(Space space, CVector amplitudes);

    [[nodiscard]] const Space& space() const noexcept { return space_; }
    [[nodiscard]] const CVector& amplitudes() const noexcept { return amps_; }
    [[nodiscard]] CVector& amplitudes() noexcept { return amps_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(amps_.size()); }

    [[nodiscard]] double norm() const;
    [[nodiscard]] StateVector normalized() const;
    [[nodiscard]] bool is_normalized(double tol = 1e-8) const;

    /// sqrt(w) * amplitudes.
    [[nodiscard]] CVector orthonormal_coordinates() const;
    [[nodiscard]] static StateVector from_orthonormal_coordinates(Space space, const CVector& coords);

    StateVector& operator+=(const StateVector& other);
    StateVector& operator-=(const StateVector& other);
    StateVector& operator*=(cplx factor);

  private:
    Space space_;
    CVector amps_;
};

[[nodiscard]] StateVector operator+(StateVector a, const StateVector& b);
[[nodiscard]] StateVector operator-(StateVector a, const StateVector& b);
[[nodiscard]] StateVector operator*(cplx factor, StateVector v);
[[nodiscard]] StateVector operator*(StateVector v, cplx factor);

/// Weighted inner product, antilinear in the first argument.
[[nodiscard]] cplx inner(const StateVector& u, const StateVector& v);

/// Standard basis vector e_k.
[[nodiscard]] StateVector basis_state(const BasisSpace& space, std::size_t k);

/// Samples f at the grid points (no normalization).
[[nodiscard]] StateVector sample(const GridSpace& grid, const std::function<cplx(double)>& f);

/**
 * Orthonormalizes `vectors` over the reals.
 *
 * The hypothesis checked is that every pairwise overlap of the inputs is real:
 * |Im<v_i|v_j>| < tol * |v_i| |v_j|, otherwise NonRealOverlapError names the
 * pair. Projections use the real part of the overlap, so every input is a real
 * combination of the output. Inputs whose residual falls below tol times the
 * largest input norm are skipped.
 */
[[nodiscard]] std::vector<StateVector> gram_schmidt_real(std::span<const StateVector> vectors,
                                                         double tol = 1e-8);

/// Momentum grid conjugate to `position`: n points p_j = (j - n/2) dp with
/// dp = 2 pi / (n dx), stored as a periodic grid so its weight is dp.
[[nodiscard]] GridSpace momentum_grid(const GridSpace& position);

/**
 * Psi(p) = (2 pi)^{-1/2} sum_k dx psi(x_k) exp(-i p x_k) on the momentum grid
 * (hbar = 1). Exactly unitary between the two weighted spaces. States must be
 * negligible at the grid edges for this to approximate the continuum transform.
 */
[[nodiscard]] StateVector momentum_transform(const StateVector& state);

/// Inverse of momentum_transform; `position` is the grid the state came from.
[[nodiscard]] StateVector inverse_momentum_transform(const StateVector& momentum_state,
                                                     const GridSpace& position);

/// Index j' with p_{j'} = -p_j on the momentum grid; the Nyquist index 0 maps to itself.
[[nodiscard]] std::size_t reversed_momentum_index(std::size_t j, std::size_t n) noexcept;

/// |phi><phi| in orthonormal coordinates. Requires a unit vector.
[[nodiscard]] CMatrix projector(const StateVector& state);

/// Frobenius distance between the projectors of two unit vectors, computed
/// without forming either projector.
[[nodiscard]] double ray_distance(const StateVector& a, const StateVector& b);

}  // namespace qgeom
