// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Parametrized pure-state models, tangents and horizontal lifts.
 *
 * A model maps a parameter point theta in a box of R^m to a unit vector
 * |phi(theta)>. Derivatives are either supplied in closed form or taken by
 * central differences. The horizontal lift of the coordinate direction i is
 *
 *     |l_i> = 2 d_i|phi> - 2 <phi|d_i phi> |phi>,
 *
 * the unique representative of d_i rho with <l_i|phi> = 0.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgeom/hilbert.hpp"

namespace qgeom {

using Theta = std::vector<double>;

enum class DerivativeMode { analytic, finite_difference, table_difference };

[[nodiscard]] std::string to_string(DerivativeMode mode);

/// Closed box; infinite bounds are allowed.
struct ParameterBox {
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] static ParameterBox unbounded(std::size_t m);
    [[nodiscard]] std::size_t size() const noexcept { return lower.size(); }
    [[nodiscard]] bool contains(std::span<const double> theta) const noexcept;
};

using AmplitudeFn = std::function<CVector(std::span<const double>)>;
/// Returns d/dtheta_i of the amplitudes.
using DerivativeFn = std::function<CVector(std::span<const double>, std::size_t)>;

class PureStateModel {
  public:
    PureStateModel(std::string name, Space space, ParameterBox domain, AmplitudeFn amplitudes,
                   DerivativeFn derivative = {});

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const Space& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return domain_.size(); }
    [[nodiscard]] const ParameterBox& domain() const noexcept { return domain_; }
    [[nodiscard]] DerivativeMode derivative_mode() const noexcept { return mode_; }
    [[nodiscard]] bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

    /// Same model with central differences; `steps` overrides the default
    /// h_i = 1e-4 * max(1, |theta_i|) per component.
    [[nodiscard]] PureStateModel with_finite_differences(std::optional<std::vector<double>> steps = {}) const;

    /// Restores closed-form derivatives if the model was built with them.
    [[nodiscard]] PureStateModel with_analytic_derivatives() const;

    [[nodiscard]] PureStateModel renamed(std::string name) const;

    [[nodiscard]] StateVector evaluate(std::span<const double> theta) const;
    [[nodiscard]] StateVector tangent(std::span<const double> theta, std::size_t i) const;
    [[nodiscard]] double fd_step(std::span<const double> theta, std::size_t i) const;

    /// Marks the derivative as a table difference (used by tabulated models).
    void set_table_mode() noexcept { mode_ = DerivativeMode::table_difference; }

  private:
    void check_domain(std::span<const double> theta) const;
    /// Amplitudes and the renormalization factor applied to them.
    [[nodiscard]] std::pair<CVector, double> normalized_amplitudes(std::span<const double> theta) const;

    std::string name_;
    Space space_;
    ParameterBox domain_;
    AmplitudeFn amplitudes_;
    DerivativeFn derivative_;
    DerivativeMode mode_;
    std::vector<double> step_override_;
};

struct HorizontalLift {
    Theta theta;
    StateVector phi;
    std::vector<StateVector> lifts;

    /// max_i |<l_i|phi>|.
    [[nodiscard]] double max_vertical_component() const;
    [[nodiscard]] std::size_t parameter_count() const noexcept { return lifts.size(); }
};

[[nodiscard]] inline StateVector evaluate(const PureStateModel& model, std::span<const double> theta) {
    return model.evaluate(theta);
}
[[nodiscard]] inline StateVector tangent(const PureStateModel& model, std::span<const double> theta,
                                         std::size_t i) {
    return model.tangent(theta, i);
}
[[nodiscard]] HorizontalLift horizontal_lift(const PureStateModel& model, std::span<const double> theta);

/// 1/2 (|l><phi| + |phi><l|) in orthonormal coordinates: the image of a lift
/// under the projection to rays.
[[nodiscard]] CMatrix push_forward(const StateVector& lift, const StateVector& phi);

/// Multiplies every state by exp(i alpha(theta)); `gradient` gives d alpha
/// and keeps closed-form derivatives available.
[[nodiscard]] PureStateModel rephase(const PureStateModel& model,
                                     std::function<double(std::span<const double>)> alpha,
                                     std::function<RVector(std::span<const double>)> gradient = {});

/**
 * One-parameter model defined by a table of states on a uniform theta grid.
 * It can be evaluated only at table points; derivatives are central
 * differences between neighbouring rows after aligning their phases to the
 * row itself, so the arbitrary phases of tabulated rows do not leak into the
 * tangent.
 */
[[nodiscard]] PureStateModel tabulated_model(std::string name, Space space, std::vector<double> thetas,
                                             std::vector<CVector> rows);

/// Ordered list of parameter points on one model.
class Curve {
  public:
    /// Throws SpecError if `closed` and the end points are different rays.
    Curve(PureStateModel model, std::vector<Theta> points, bool closed);

    [[nodiscard]] const PureStateModel& model() const noexcept { return model_; }
    [[nodiscard]] const std::vector<Theta>& points() const noexcept { return points_; }
    [[nodiscard]] bool closed() const noexcept { return closed_; }

    /// Polyline through `vertices` with `subdivisions` equal steps per edge.
    [[nodiscard]] static Curve polyline(PureStateModel model, const std::vector<Theta>& vertices,
                                        std::size_t subdivisions, bool closed);

  private:
    PureStateModel model_;
    std::vector<Theta> points_;
    bool closed_;
};

inline constexpr double kRayClosureTol = 1e-8;

}  // namespace qgeom
