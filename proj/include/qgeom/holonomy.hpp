// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file holonomy.hpp
 * @brief Discrete Pancharatnam transport: Berry phases of chains of states,
 *        small-loop curvature checks and the quasi-parallel test.
 *
 * The phase of a closed chain phi_0, ..., phi_{K-1} is the argument of the
 * Bargmann product
 *
 *     <phi_0|phi_1> <phi_1|phi_2> ... <phi_{K-1}|phi_0>,
 *
 * which does not depend on the phase of any individual vector. An open chain
 * is closed by the geodesic step <phi_K|phi_0>, so for a chain whose end ray
 * equals its start ray both definitions agree.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom {

struct PhaseResult {
    double gamma = 0.0;  ///< in (-pi, pi]
    std::size_t n_segments = 0;
    double min_overlap = 1.0;
};

/// Segments with a smaller overlap are refined (when a model is available)
/// or rejected.
inline constexpr double kMinSegmentOverlap = 1e-6;
inline constexpr int kMaxRefinementLevels = 3;

/// Closed chain given as states; the last factor is <phi_{K-1}|phi_0>. No
/// refinement is possible without a model.
[[nodiscard]] PhaseResult berry_phase_loop(std::span<const StateVector> states);
/// Open chain phi_0..phi_K.
[[nodiscard]] PhaseResult berry_phase_open(std::span<const StateVector> states);

/// The curve's last point is the same ray as its first; it is replaced by
/// the first state when closing the product.
[[nodiscard]] PhaseResult berry_phase_loop(const Curve& curve);
[[nodiscard]] PhaseResult berry_phase_open(const Curve& curve);

struct CurvatureCheck {
    double measured = 0.0;
    double predicted = 0.0;
};

/**
 * Phase of the rectangle theta -> theta + eps e_i -> theta + eps e_i + eps e_j
 * -> theta + eps e_j -> theta with `n_sub` segments per side, against the
 * second-order prediction J~_ij eps^2 / 2.
 */
[[nodiscard]] CurvatureCheck curvature_check(const PureStateModel& model, std::span<const double> theta,
                                             std::size_t i, std::size_t j, double eps, std::size_t n_sub = 1);

struct QuasiParallelResult {
    bool flag = false;
    std::size_t anchor = 0;
    std::size_t witness_first = 0;
    std::size_t witness_second = 0;
    /// max |Im <phi_a|phi_b>| / max(|<phi_a|phi_b>|, 1e-3) after alignment.
    double witness_value = 0.0;
    /// max |Im <phi_a|phi_b>| after alignment, unscaled.
    double max_imag = 0.0;
    double tol = 0.0;
    /// Samples rephased so that <anchor|phi_a> is real and positive.
    std::vector<StateVector> aligned;
};

inline constexpr double kQuasiParallelTol = 1e-6;

/**
 * Aligns the samples to the anchor with the largest worst-case overlap and
 * tests that every pairwise overlap is then real. Throws InconclusiveError
 * when every candidate anchor is orthogonal (below 1e-6) to some sample.
 */
[[nodiscard]] QuasiParallelResult is_quasi_parallel(std::span<const StateVector> states,
                                                    double tol = kQuasiParallelTol);
[[nodiscard]] QuasiParallelResult is_quasi_parallel(const PureStateModel& model,
                                                    const std::vector<Theta>& samples,
                                                    double tol = kQuasiParallelTol);

}  // namespace qgeom
