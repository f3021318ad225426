// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file symmetry.hpp
 * @brief Antiunitary operators: conjugation in a basis, time reversal, its
 *        momentum-phase generalization T_alpha, and invariance checks.
 *
 * T_alpha sends the plane wave e^{ipx} to e^{i alpha(p)} e^{-ipx}. In the
 * momentum representation of a grid state this is
 *
 *     Psi'(p) = e^{i alpha(-p)} conj(Psi(-p)),
 *
 * with -p read through reversed_momentum_index. On an even grid the Nyquist
 * mode has no partner; it is mapped to itself with the phase that makes
 * alpha = 0 coincide with pointwise conjugation.
 */

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgeom/hilbert.hpp"

namespace qgeom {

class AntiunitaryOp {
  public:
    enum class Kind { basis_conjugation, pointwise_conjugation, momentum_reversal };

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const Space& space() const noexcept { return space_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    [[nodiscard]] StateVector apply(const StateVector& v) const;
    [[nodiscard]] StateVector operator()(const StateVector& v) const { return apply(v); }

    /// Conjugation in the orthonormal basis given by the columns of a unitary
    /// (orthonormal coordinates).
    [[nodiscard]] static AntiunitaryOp from_unitary(Space space, CMatrix unitary, std::string description);
    /// Complex conjugation of the amplitudes.
    [[nodiscard]] static AntiunitaryOp pointwise(Space space);
    /// T_alpha with phase alpha(-p_j) stored per momentum index j.
    [[nodiscard]] static AntiunitaryOp momentum(GridSpace space, RVector phases, std::string description);

    /// Momentum phase table (momentum_reversal only).
    [[nodiscard]] const RVector& phases() const noexcept { return phases_; }

  private:
    AntiunitaryOp(Kind kind, Space space, std::string description)
        : kind_(kind), space_(std::move(space)), description_(std::move(description)) {}

    Kind kind_;
    Space space_;
    std::string description_;
    CMatrix unitary_;
    RVector phases_;
};

/**
 * K_B: sum a_i |b_i> -> sum conj(a_i) |b_i>. An incomplete basis is completed
 * by a QR factorization; the real span of B is fixed either way. Throws
 * NonOrthonormalError when B is not orthonormal within 1e-8.
 */
[[nodiscard]] AntiunitaryOp conjugation_in_basis(const std::vector<StateVector>& basis);
[[nodiscard]] AntiunitaryOp standard_conjugation(const Space& space);

/// Pointwise conjugation of a grid wave function.
[[nodiscard]] StateVector time_reversal(const StateVector& phi);
[[nodiscard]] AntiunitaryOp time_reversal_op(const GridSpace& grid);

using MomentumPhase = std::function<double(double)>;

[[nodiscard]] AntiunitaryOp generalized_time_reversal_op(const GridSpace& grid, const MomentumPhase& alpha);
[[nodiscard]] StateVector generalized_time_reversal(const MomentumPhase& alpha, const StateVector& phi);

/// Threshold below which a momentum amplitude counts as a spectral zero.
inline constexpr double kSpectralZero = 1e-10;

/**
 * T_alpha with alpha(p) = beta(p) + beta(-p), e^{i beta} = Psi / |Psi|
 * (beta = 0 at spectral zeros). It fixes phi whenever |Psi(p)| = |Psi(-p)|.
 */
[[nodiscard]] AntiunitaryOp matched_reversal(const StateVector& phi);

struct MomentumSymmetry {
    bool flag = false;
    double max_asymmetry = 0.0;  ///< max_p ||Psi(p)|^2 - |Psi(-p)|^2|
    double at_momentum = 0.0;    ///< p where the maximum is reached
    double mean_momentum = 0.0;  ///< removed first by the centered check, else 0
};

inline constexpr double kMomentumSymmetryTol = 1e-8;

[[nodiscard]] MomentumSymmetry momentum_symmetry_check(const StateVector& phi, double tol = kMomentumSymmetryTol);

/**
 * Same test after removing the mean momentum, phi -> e^{-i<p>x} phi. A
 * boosted symmetric profile fails the literal test but passes this one; it
 * is the form that tracks quasi-parallelism of the position-shift model.
 */
[[nodiscard]] MomentumSymmetry centered_momentum_symmetry_check(const StateVector& phi,
                                                                double tol = kMomentumSymmetryTol);

/// max over states of |A phi - phi|.
[[nodiscard]] double invariance_defect(const AntiunitaryOp& op, std::span<const StateVector> states);
[[nodiscard]] bool is_invariant(const AntiunitaryOp& op, std::span<const StateVector> states, double tol = 1e-8);

struct InvarianceConstruction {
    std::optional<AntiunitaryOp> op;  ///< present when the construction succeeded
    double defect = 0.0;
    std::string reason;  ///< why it failed, empty on success
};

/**
 * K_B with B the real Gram-Schmidt basis of the (already phase-aligned)
 * states. Fails when an overlap is not real or when K_B does not fix every
 * state within tol.
 */
[[nodiscard]] InvarianceConstruction construct_invariant_conjugation(std::span<const StateVector> aligned,
                                                                     double tol = 1e-8);

}  // namespace qgeom
