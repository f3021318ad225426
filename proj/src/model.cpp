// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qgeom/errors.hpp"

namespace qgeom {

namespace {
constexpr double kNormDriftLimit = 1e-6;
constexpr double kDefaultRelativeStep = 1e-4;
}  // namespace

std::string to_string(DerivativeMode mode) {
    switch (mode) {
        case DerivativeMode::analytic: return "analytic";
        case DerivativeMode::finite_difference: return "finite_difference";
        case DerivativeMode::table_difference: return "table_difference";
    }
    return "unknown";
}

ParameterBox ParameterBox::unbounded(std::size_t m) {
    const double inf = std::numeric_limits<double>::infinity();
    return ParameterBox{std::vector<double>(m, -inf), std::vector<double>(m, inf)};
}

bool ParameterBox::contains(std::span<const double> theta) const noexcept {
    if (theta.size() != lower.size()) return false;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!(theta[i] >= lower[i] && theta[i] <= upper[i])) return false;
    }
    return true;
}

PureStateModel::PureStateModel(std::string name, Space space, ParameterBox domain, AmplitudeFn amplitudes,
                               DerivativeFn derivative)
    : name_(std::move(name)),
      space_(std::move(space)),
      domain_(std::move(domain)),
      amplitudes_(std::move(amplitudes)),
      derivative_(std::move(derivative)),
      mode_(derivative_ ? DerivativeMode::analytic : DerivativeMode::finite_difference) {
    if (domain_.size() == 0) throw DimensionError("model needs at least one parameter");
    if (domain_.upper.size() != domain_.lower.size()) throw DimensionError("malformed parameter box");
    if (!amplitudes_) throw ModelDefinitionError("model has no amplitude function");
}

PureStateModel PureStateModel::with_finite_differences(std::optional<std::vector<double>> steps) const {
    PureStateModel out = *this;
    out.mode_ = DerivativeMode::finite_difference;
    if (steps) {
        if (steps->size() != parameter_count()) throw DimensionError("one step per parameter expected");
        for (double h : *steps) {
            if (!(h > 0.0)) throw StepError("finite-difference steps must be positive");
        }
        out.step_override_ = std::move(*steps);
    }
    return out;
}

PureStateModel PureStateModel::with_analytic_derivatives() const {
    if (!derivative_) throw ModelDefinitionError("model '" + name_ + "' has no closed-form derivative");
    PureStateModel out = *this;
    out.mode_ = DerivativeMode::analytic;
    return out;
}

PureStateModel PureStateModel::renamed(std::string name) const {
    PureStateModel out = *this;
    out.name_ = std::move(name);
    return out;
}

void PureStateModel::check_domain(std::span<const double> theta) const {
    if (theta.size() != parameter_count()) {
        std::ostringstream os;
        os << "model '" << name_ << "' expects " << parameter_count() << " parameters, got "
           << theta.size();
        throw DimensionError(os.str());
    }
    if (!domain_.contains(theta)) {
        std::ostringstream os;
        os << "theta = (";
        for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? ", " : "") << theta[i];
        os << ") lies outside the domain of model '" << name_ << "'";
        throw DomainError(os.str());
    }
}

std::pair<CVector, double> PureStateModel::normalized_amplitudes(std::span<const double> theta) const {
    check_domain(theta);
    CVector a = amplitudes_(theta);
    if (static_cast<std::size_t>(a.size()) != dimension(space_)) {
        throw ModelDefinitionError("model '" + name_ + "' returned the wrong number of amplitudes");
    }
    const double norm = std::sqrt(quadrature_weight(space_)) * a.norm();
    if (!std::isfinite(norm) || std::abs(norm * norm - 1.0) >= kNormDriftLimit) {
        std::ostringstream os;
        os << "model '" << name_ << "' is not normalized (|phi|^2 = " << norm * norm << ")";
        throw ModelDefinitionError(os.str());
    }
    a /= norm;
    return {std::move(a), norm};
}

StateVector PureStateModel::evaluate(std::span<const double> theta) const {
    return StateVector(space_, normalized_amplitudes(theta).first);
}

double PureStateModel::fd_step(std::span<const double> theta, std::size_t i) const {
    if (!step_override_.empty()) return step_override_[i];
    return kDefaultRelativeStep * std::max(1.0, std::abs(theta[i]));
}

StateVector PureStateModel::tangent(std::span<const double> theta, std::size_t i) const {
    check_domain(theta);
    if (i >= parameter_count()) throw DimensionError("parameter index out of range");

    if (mode_ != DerivativeMode::finite_difference) {
        const double norm = normalized_amplitudes(theta).second;
        CVector d = derivative_(theta, i);
        if (static_cast<std::size_t>(d.size()) != dimension(space_)) {
            throw ModelDefinitionError("model '" + name_ + "' returned a derivative of the wrong size");
        }
        return StateVector(space_, d / norm);
    }

    const double h = fd_step(theta, i);
    Theta plus(theta.begin(), theta.end());
    Theta minus = plus;
    plus[i] += h;
    minus[i] -= h;
    if (!domain_.contains(plus) || !domain_.contains(minus)) {
        std::ostringstream os;
        os << "central difference with step " << h << " in direction " << i
           << " leaves the domain of model '" << name_ << "'";
        throw StepError(os.str());
    }
    const CVector ap = normalized_amplitudes(plus).first;
    const CVector am = normalized_amplitudes(minus).first;
    return StateVector(space_, (ap - am) / (2.0 * h));
}

double HorizontalLift::max_vertical_component() const {
    double worst = 0.0;
    for (const auto& l : lifts) worst = std::max(worst, std::abs(inner(l, phi)));
    return worst;
}

HorizontalLift horizontal_lift(const PureStateModel& model, std::span<const double> theta) {
    StateVector phi = model.evaluate(theta);
    std::vector<StateVector> lifts;
    lifts.reserve(model.parameter_count());
    for (std::size_t i = 0; i < model.parameter_count(); ++i) {
        const StateVector t = model.tangent(theta, i);
        const cplx vertical = inner(phi, t);
        lifts.push_back(2.0 * t - (2.0 * vertical) * phi);
    }
    return HorizontalLift{Theta(theta.begin(), theta.end()), std::move(phi), std::move(lifts)};
}

CMatrix push_forward(const StateVector& lift, const StateVector& phi) {
    const CVector l = lift.orthonormal_coordinates();
    const CVector p = phi.orthonormal_coordinates();
    return 0.5 * (l * p.adjoint() + p * l.adjoint());
}

PureStateModel rephase(const PureStateModel& model, std::function<double(std::span<const double>)> alpha,
                       std::function<RVector(std::span<const double>)> gradient) {
    // Works on normalized states so the base model's own renormalization is
    // reproduced exactly.
    AmplitudeFn amps = [model, alpha](std::span<const double> theta) -> CVector {
        return std::polar(1.0, alpha(theta)) * model.evaluate(theta).amplitudes();
    };
    DerivativeFn deriv;
    if (gradient && model.derivative_mode() != DerivativeMode::finite_difference) {
        deriv = [model, alpha, gradient](std::span<const double> theta, std::size_t i) -> CVector {
            const cplx phase = std::polar(1.0, alpha(theta));
            const RVector g = gradient(theta);
            const StateVector phi = model.evaluate(theta);
            const StateVector t = model.tangent(theta, i);
            return phase * (t.amplitudes() + kI * g(static_cast<Eigen::Index>(i)) * phi.amplitudes());
        };
    }
    PureStateModel out(model.name() + "/rephased", model.space(), model.domain(), std::move(amps),
                       std::move(deriv));
    return out;
}

PureStateModel tabulated_model(std::string name, Space space, std::vector<double> thetas,
                               std::vector<CVector> rows) {
    if (thetas.size() != rows.size()) throw SpecError("theta table and amplitude table differ in length");
    if (thetas.size() < 2) throw SpecError("a tabulated model needs at least two rows");
    const double h = thetas[1] - thetas[0];
    if (!(h > 0.0)) throw SpecError("tabulated theta values must increase");
    for (std::size_t k = 1; k < thetas.size(); ++k) {
        const double step = thetas[k] - thetas[k - 1];
        if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            std::ostringstream os;
            os << "tabulated theta grid is not uniform at row " << k;
            throw SpecError(os.str());
        }
    }
    const std::size_t dim = dimension(space);
    const double w = quadrature_weight(space);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (static_cast<std::size_t>(rows[k].size()) != dim) {
            std::ostringstream os;
            os << "amplitudes[" << k << "]: expected " << dim << " entries, got " << rows[k].size();
            throw SpecError(os.str());
        }
        const double n = std::sqrt(w) * rows[k].norm();
        if (!(n > 0.0)) {
            std::ostringstream os;
            os << "amplitudes[" << k << "]: zero vector";
            throw SpecError(os.str());
        }
        rows[k] /= n;
    }

    struct Table {
        std::vector<double> thetas;
        std::vector<CVector> rows;
        double h;
        double w;
        [[nodiscard]] std::size_t index_of(double t) const {
            const double pos = (t - thetas.front()) / h;
            const double r = std::round(pos);
            if (r < 0.0 || r >= static_cast<double>(thetas.size()) || std::abs(pos - r) > 1e-6) {
                std::ostringstream os;
                os << "theta = " << t << " is not a row of the table";
                throw DomainError(os.str());
            }
            return static_cast<std::size_t>(r);
        }
        [[nodiscard]] CVector aligned(std::size_t k, std::size_t to) const {
            const cplx ov = w * rows[to].dot(rows[k]);
            const double a = std::abs(ov);
            if (a == 0.0) return rows[k];
            return rows[k] * (std::conj(ov) / a);
        }
    };
    auto table = std::make_shared<const Table>(Table{std::move(thetas), std::move(rows), h, w});

    AmplitudeFn amps = [table](std::span<const double> theta) -> CVector {
        return table->rows[table->index_of(theta[0])];
    };
    DerivativeFn deriv = [table](std::span<const double> theta, std::size_t) -> CVector {
        const std::size_t k = table->index_of(theta[0]);
        if (k == 0 || k + 1 == table->rows.size()) {
            throw StepError("table differences need neighbouring rows on both sides");
        }
        return (table->aligned(k + 1, k) - table->aligned(k - 1, k)) / (2.0 * table->h);
    };
    ParameterBox box{{table->thetas.front()}, {table->thetas.back()}};
    PureStateModel model(std::move(name), std::move(space), std::move(box), std::move(amps), std::move(deriv));
    model.set_table_mode();
    return model;
}

Curve::Curve(PureStateModel model, std::vector<Theta> points, bool closed)
    : model_(std::move(model)), points_(std::move(points)), closed_(closed) {
    if (points_.size() < 2) throw SpecError("a curve needs at least two points");
    for (const auto& p : points_) {
        if (p.size() != model_.parameter_count()) throw SpecError("curve point has the wrong dimension");
    }
    if (closed_) {
        const double d = ray_distance(model_.evaluate(points_.front()), model_.evaluate(points_.back()));
        if (d >= kRayClosureTol) {
            std::ostringstream os;
            os << "curve marked closed but its end points are distinct rays (distance " << d << ")";
            throw SpecError(os.str());
        }
    }
}

Curve Curve::polyline(PureStateModel model, const std::vector<Theta>& vertices, std::size_t subdivisions,
                      bool closed) {
    if (vertices.size() < 2) throw SpecError("a polyline needs at least two vertices");
    if (subdivisions < 1) throw SpecError("a polyline needs at least one subdivision per edge");
    std::vector<Theta> pts;
    pts.reserve((vertices.size() - 1) * subdivisions + 1);
    for (std::size_t e = 0; e + 1 < vertices.size(); ++e) {
        const Theta& a = vertices[e];
        const Theta& b = vertices[e + 1];
        if (a.size() != b.size()) throw SpecError("polyline vertices differ in dimension");
        for (std::size_t s = 0; s < subdivisions; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(subdivisions);
            Theta p(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) p[i] = (1.0 - t) * a[i] + t * b[i];
            pts.push_back(std::move(p));
        }
    }
    pts.push_back(vertices.back());
    return Curve(std::move(model), std::move(pts), closed);
}

}  // namespace qgeom
