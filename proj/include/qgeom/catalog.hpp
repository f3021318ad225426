// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file catalog.hpp
 * @brief The named example models and the wave-function profiles they shift.
 *
 * Grid models default to [-10, 10] with 512 points (QGEOM_GRID_POINTS
 * overrides the count); the two-well model defaults to 2048 points on
 * [-8, 8] and the ring to 1024 periodic points on [0, 2 pi).
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qgeom/model.hpp"

namespace qgeom {

/// A wave function on the real line together with its x-derivative.
struct Profile {
    std::string description;
    std::function<cplx(double)> value;
    std::function<cplx(double)> derivative;
};

/// Harmonic-oscillator eigenfunction psi_n (hbar = m = omega = 1).
[[nodiscard]] Profile hermite_profile(int n);

struct GaussianComponent {
    cplx amplitude{1.0, 0.0};
    double sigma = 1.0;
    double center = 0.0;
    double momentum = 0.0;
    /// Quadratic phase exp(i chirp x^2).
    double chirp = 0.0;
};

/// Sum of Gaussian wave packets a exp(-(x-c)^2 / (2 sigma^2) + i p x + i q x^2).
[[nodiscard]] Profile superposition_profile(std::vector<GaussianComponent> components);
[[nodiscard]] Profile gaussian_profile(double sigma = 1.0, double center = 0.0, double momentum = 0.0,
                                       double chirp = 0.0);

/// u^2 exp(-u^2 + i g(u)) with g = 0 for u >= 0 and alpha for u < 0.
[[nodiscard]] Profile two_well_profile(double alpha);

[[nodiscard]] GridSpace default_line_grid();

/// |phi(theta)> = psi(x - theta).
[[nodiscard]] PureStateModel position_shift(const Profile& profile, const GridSpace& grid);
/// |phi(theta)> = exp(i theta x) psi(x).
[[nodiscard]] PureStateModel momentum_shift(const Profile& profile, const GridSpace& grid);
/// |phi(theta)> = exp(i theta_2 x) psi(x - theta_1), parameters ordered (x-shift, p-shift).
[[nodiscard]] PureStateModel position_momentum_shift(const Profile& profile, const GridSpace& grid);

/// |phi(theta)> = exp(-i theta J_z) |psi>; `amplitudes` are ordered m = -S, ..., S.
[[nodiscard]] PureStateModel spin_jz(double spin, std::vector<cplx> amplitudes);

/// Position-shift model of the two-well profile.
[[nodiscard]] PureStateModel two_well(double alpha, const GridSpace& grid = GridSpace(2048, -8.0, 8.0));

/// const (2 - cos(w - theta)) exp(i alpha (f(w - theta) + theta)) on the ring,
/// with f(s) = s mod 2 pi in [0, 2 pi).
[[nodiscard]] PureStateModel ring_flux(double alpha,
                                       const GridSpace& grid = GridSpace(1024, 0.0, 6.283185307179586, true));

/// Spin-1/2 rays (cos(t/2), exp(i p) sin(t/2)), parameters (polar t, azimuth p).
[[nodiscard]] PureStateModel bloch();

[[nodiscard]] const std::vector<std::string>& catalog_names();

/**
 * Builds a named catalog model from a JSON parameter object. Recognized keys
 * depend on the model; every model accepts "derivative" ("analytic" or
 * "finite_difference") and "fd_step" (number or per-parameter array).
 * Errors are SpecError with a dotted field path.
 */
[[nodiscard]] PureStateModel catalog(std::string_view name, const nlohmann::json& params);

/// Profile from its JSON description ({"type": "hermite", "n": 0}, ...).
[[nodiscard]] Profile profile_from_json(const nlohmann::json& j, const std::string& path = "profile");

/// The JSON profile a catalog model shifts, or null for models without one.
[[nodiscard]] nlohmann::json shifted_profile_json(std::string_view name, const nlohmann::json& params);

}  // namespace qgeom
