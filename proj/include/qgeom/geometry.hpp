// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry.hpp
 * @brief SLD Fisher metric, Berry curvature, the D-transform and CR bounds.
 *
 * With lifts l_i at a point:
 *
 *     J_S = [Re <l_i|l_j>]          (SLD Fisher matrix, symmetric PSD)
 *     J~  = [Im <l_i|l_j>]          (curvature of the Pancharatnam connection)
 *     D   = J_S^{-1} J~             (D-transform in coordinates)
 *
 * The eigenvalues of D are +-i beta_j with 0 <= beta_j <= 1. They are read
 * off the real antisymmetric matrix K = J_S^{-1/2} J~ J_S^{-1/2}, which is
 * similar to D. At weight G = J_S the attainable CR bound is
 *
 *     CR(J_S) = sum_j 4 / (1 + sqrt(1 - beta_j^2)) + (m - 2 #pairs),
 *
 * equal to m exactly when J~ = 0.
 */

#pragma once

#include <optional>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom {

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kBetaTolerance = 1e-8;
/// beta above 1 + this is a broken model rather than round-off.
inline constexpr double kBetaHardLimit = 1e-6;

/// Symmetric, non-negative weight matrix for CR-type bounds.
class WeightMatrix {
  public:
    explicit WeightMatrix(RMatrix g);
    [[nodiscard]] const RMatrix& matrix() const noexcept { return g_; }

  private:
    RMatrix g_;
};

[[nodiscard]] RMatrix sld_fisher(const HorizontalLift& lift);
[[nodiscard]] RMatrix berry_curvature(const HorizontalLift& lift);

struct DTransform {
    RMatrix d;          ///< J_S^{-1} J~
    RMatrix symmetric;  ///< K = J_S^{-1/2} J~ J_S^{-1/2}, real antisymmetric
    std::vector<double> betas;  ///< non-zero |Im| of the spectrum, one per pair, descending
};

/// Throws RankDeficiencyError (naming the null directions) when the smallest
/// eigenvalue of J_S is below kRankTolerance times the largest.
[[nodiscard]] DTransform d_transform(const RMatrix& j_s, const RMatrix& j_tilde);

/**
 * The D-transform through the complex structure: the lift of X is multiplied
 * by the imaginary unit and projected onto span_R{l_1..l_m} with respect to
 * Re<.|.>; the result is returned in the lift frame. The phase of the unit
 * is chosen so that the result is D X with D = J_S^{-1} J~ (with this
 * library's inner product, antilinear in the first slot, that is -i).
 */
[[nodiscard]] RVector d_via_projection(const HorizontalLift& lift, const RVector& x);

/// Tr G J_S^{-1}.
[[nodiscard]] double sld_bound(const WeightMatrix& g, const RMatrix& j_s);

[[nodiscard]] double attainable_cr_js(const RMatrix& j_s, const RMatrix& j_tilde);
/// Same formula from an already computed spectrum.
[[nodiscard]] double attainable_cr_from_betas(std::size_t m, const std::vector<double>& betas);

/// max |J~_ij| < tol * max(1, max |J_S_ij|).
[[nodiscard]] bool is_quasi_classical(const RMatrix& j_tilde, double tol, const RMatrix& j_s);

struct GeometryReport {
    Theta theta;
    RMatrix j_s;
    RMatrix j_tilde;
    std::optional<RMatrix> d;   ///< absent when rank deficient
    std::vector<double> betas;
    std::optional<double> cr_js;
    bool quasi_classical = false;
    bool rank_deficient = false;
    double max_vertical = 0.0;  ///< max |<l_i|phi>| of the lift used
    double quasi_classical_tol = 1e-8;

    /// Tr G J_S^{-1}; throws RankDeficiencyError when rank deficient.
    [[nodiscard]] double sld_bound(const WeightMatrix& g) const;
};

[[nodiscard]] GeometryReport geometry_report(const HorizontalLift& lift, double quasi_classical_tol = 1e-8);
[[nodiscard]] GeometryReport geometry_report(const PureStateModel& model, std::span<const double> theta,
                                             double quasi_classical_tol = 1e-8);

}  // namespace qgeom
