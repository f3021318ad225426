// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

#include "qgeom/errors.hpp"

namespace qgeom {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Profiles

Profile hermite_profile(int n) {
    if (n < 0) throw SpecError("hermite order must be >= 0");
    // psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}
    auto values = [](int order, double x) {
        std::vector<double> psi(static_cast<std::size_t>(order) + 2);
        psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
        psi[1] = std::sqrt(2.0) * x * psi[0];
        for (int k = 1; k <= order; ++k) {
            const auto kk = static_cast<double>(k);
            psi[static_cast<std::size_t>(k) + 1] =
                std::sqrt(2.0 / (kk + 1.0)) * x * psi[static_cast<std::size_t>(k)] -
                std::sqrt(kk / (kk + 1.0)) * psi[static_cast<std::size_t>(k) - 1];
        }
        return psi;
    };
    Profile p;
    p.description = "hermite(" + std::to_string(n) + ")";
    p.value = [n, values](double x) -> cplx { return values(n, x)[static_cast<std::size_t>(n)]; };
    p.derivative = [n, values](double x) -> cplx {
        const auto psi = values(n, x);
        const auto nn = static_cast<double>(n);
        const double up = std::sqrt((nn + 1.0) / 2.0) * psi[static_cast<std::size_t>(n) + 1];
        const double down = n > 0 ? std::sqrt(nn / 2.0) * psi[static_cast<std::size_t>(n) - 1] : 0.0;
        return down - up;
    };
    return p;
}

Profile superposition_profile(std::vector<GaussianComponent> components) {
    if (components.empty()) throw SpecError("superposition needs at least one component");
    for (const auto& c : components) {
        if (!(c.sigma > 0.0)) throw SpecError("gaussian sigma must be positive");
    }
    auto term = [](const GaussianComponent& c, double x) {
        const double u = (x - c.center) / c.sigma;
        return c.amplitude * std::exp(cplx(-0.5 * u * u, c.momentum * x + c.chirp * x * x));
    };
    Profile p;
    std::ostringstream os;
    os << "superposition(" << components.size() << ")";
    p.description = os.str();
    p.value = [components, term](double x) {
        cplx s = 0.0;
        for (const auto& c : components) s += term(c, x);
        return s;
    };
    p.derivative = [components, term](double x) {
        cplx s = 0.0;
        for (const auto& c : components) {
            const cplx slope(-(x - c.center) / (c.sigma * c.sigma), c.momentum + 2.0 * c.chirp * x);
            s += slope * term(c, x);
        }
        return s;
    };
    return p;
}

Profile gaussian_profile(double sigma, double center, double momentum, double chirp) {
    Profile p = superposition_profile({GaussianComponent{1.0, sigma, center, momentum, chirp}});
    p.description = "gaussian";
    return p;
}

Profile two_well_profile(double alpha) {
    Profile p;
    p.description = "two_well";
    const cplx left = std::polar(1.0, alpha);
    p.value = [left](double u) -> cplx {
        const double f = u * u * std::exp(-u * u);
        return u >= 0.0 ? cplx(f, 0.0) : f * left;
    };
    // g is piecewise constant and the modulus vanishes to second order at the
    // jump, so the derivative is the pointwise one.
    p.derivative = [left](double u) -> cplx {
        const double df = (2.0 * u - 2.0 * u * u * u) * std::exp(-u * u);
        return u >= 0.0 ? cplx(df, 0.0) : df * left;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Models

namespace {

double profile_norm(const Profile& profile, const GridSpace& grid) {
    double s = 0.0;
    for (std::size_t k = 0; k < grid.n_points; ++k) s += std::norm(profile.value(grid.point(k)));
    const double n = std::sqrt(grid.weight() * s);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw SpecError("profile '" + profile.description + "' is not normalizable on the grid");
    }
    return n;
}

ParameterBox shift_box(const GridSpace& grid) {
    const double quarter = 0.25 * (grid.upper - grid.lower);
    return ParameterBox{{grid.lower + quarter}, {grid.upper - quarter}};
}

double momentum_limit(const GridSpace& grid) { return 0.25 * std::numbers::pi / grid.weight(); }

std::vector<std::string> spin_labels(double spin, std::size_t dim) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < dim; ++k) {
        std::ostringstream os;
        os << (-spin + static_cast<double>(k));
        labels.push_back(os.str());
    }
    return labels;
}

}  // namespace

GridSpace default_line_grid() {
    std::size_t n = 512;
    if (const char* env = std::getenv("QGEOM_GRID_POINTS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 2) n = static_cast<std::size_t>(v);
    }
    return GridSpace(n, -10.0, 10.0);
}

PureStateModel position_shift(const Profile& profile, const GridSpace& grid) {
    const double c = 1.0 / profile_norm(profile, grid);
    const auto xs = grid.points();
    AmplitudeFn amps = [profile, xs, c](std::span<const double> th) {
        CVector a(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t k = 0; k < xs.size(); ++k) a(static_cast<Eigen::Index>(k)) = c * profile.value(xs[k] - th[0]);
        return a;
    };
    DerivativeFn deriv = [profile, xs, c](std::span<const double> th, std::size_t) {
        CVector a(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t k = 0; k < xs.size(); ++k) {
            a(static_cast<Eigen::Index>(k)) = -c * profile.derivative(xs[k] - th[0]);
        }
        return a;
    };
    return PureStateModel("position_shift", grid, shift_box(grid), std::move(amps), std::move(deriv));
}

PureStateModel momentum_shift(const Profile& profile, const GridSpace& grid) {
    const double c = 1.0 / profile_norm(profile, grid);
    const auto xs = grid.points();
    CVector base(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) base(static_cast<Eigen::Index>(k)) = c * profile.value(xs[k]);
    auto amps = [base, xs](std::span<const double> th) {
        CVector a = base;
        for (std::size_t k = 0; k < xs.size(); ++k) a(static_cast<Eigen::Index>(k)) *= std::polar(1.0, th[0] * xs[k]);
        return a;
    };
    DerivativeFn deriv = [amps, xs](std::span<const double> th, std::size_t) {
        CVector a = amps(th);
        for (std::size_t k = 0; k < xs.size(); ++k) a(static_cast<Eigen::Index>(k)) *= kI * xs[k];
        return a;
    };
    const double pmax = momentum_limit(grid);
    return PureStateModel("momentum_shift", grid, ParameterBox{{-pmax}, {pmax}}, amps, std::move(deriv));
}

PureStateModel position_momentum_shift(const Profile& profile, const GridSpace& grid) {
    const double c = 1.0 / profile_norm(profile, grid);
    const auto xs = grid.points();
    AmplitudeFn amps = [profile, xs, c](std::span<const double> th) {
        CVector a(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t k = 0; k < xs.size(); ++k) {
            a(static_cast<Eigen::Index>(k)) = c * std::polar(1.0, th[1] * xs[k]) * profile.value(xs[k] - th[0]);
        }
        return a;
    };
    DerivativeFn deriv = [profile, xs, c](std::span<const double> th, std::size_t i) {
        CVector a(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const cplx boost = std::polar(1.0, th[1] * xs[k]);
            a(static_cast<Eigen::Index>(k)) = i == 0 ? -c * boost * profile.derivative(xs[k] - th[0])
                                                     : kI * xs[k] * c * boost * profile.value(xs[k] - th[0]);
        }
        return a;
    };
    const auto xbox = shift_box(grid);
    const double pmax = momentum_limit(grid);
    ParameterBox box{{xbox.lower[0], -pmax}, {xbox.upper[0], pmax}};
    return PureStateModel("position_momentum_shift", grid, std::move(box), std::move(amps), std::move(deriv));
}

PureStateModel spin_jz(double spin, std::vector<cplx> amplitudes) {
    const double twice = 2.0 * spin;
    if (!(spin > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
        throw SpecError("spin must be a positive multiple of 1/2");
    }
    const auto dim = static_cast<std::size_t>(std::round(twice)) + 1;
    if (amplitudes.size() != dim) {
        std::ostringstream os;
        os << "spin " << spin << " needs " << dim << " amplitudes, got " << amplitudes.size();
        throw SpecError(os.str());
    }
    CVector psi(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) psi(static_cast<Eigen::Index>(k)) = amplitudes[k];
    const double n = psi.norm();
    if (!(n > 0.0)) throw SpecError("spin amplitudes must not all vanish");
    psi /= n;
    RVector m(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) m(static_cast<Eigen::Index>(k)) = -spin + static_cast<double>(k);

    auto amps = [psi, m](std::span<const double> th) {
        CVector a = psi;
        for (Eigen::Index k = 0; k < a.size(); ++k) a(k) *= std::polar(1.0, -th[0] * m(k));
        return a;
    };
    DerivativeFn deriv = [amps, m](std::span<const double> th, std::size_t) {
        CVector a = amps(th);
        for (Eigen::Index k = 0; k < a.size(); ++k) a(k) *= -kI * m(k);
        return a;
    };
    return PureStateModel("spin_jz", BasisSpace(dim, spin_labels(spin, dim)), ParameterBox::unbounded(1), amps,
                          std::move(deriv));
}

PureStateModel two_well(double alpha, const GridSpace& grid) {
    return position_shift(two_well_profile(alpha), grid).renamed("two_well");
}

PureStateModel ring_flux(double alpha, const GridSpace& grid) {
    const double two_pi = 2.0 * std::numbers::pi;
    const auto ws = grid.points();
    auto raw = [ws, alpha, two_pi](std::span<const double> th, bool derivative) {
        CVector a(static_cast<Eigen::Index>(ws.size()));
        for (std::size_t k = 0; k < ws.size(); ++k) {
            const double s = ws[k] - th[0];
            double f = std::fmod(s, two_pi);
            if (f < 0.0) f += two_pi;
            const cplx phase = std::polar(1.0, alpha * (f + th[0]));
            // The phase is locally constant in theta; only the modulus moves.
            a(static_cast<Eigen::Index>(k)) = (derivative ? -std::sin(s) : 2.0 - std::cos(s)) * phase;
        }
        return a;
    };
    const double c = 1.0 / (std::sqrt(grid.weight()) * raw(std::vector<double>{0.0}, false).norm());
    AmplitudeFn amps = [raw, c](std::span<const double> th) -> CVector { return c * raw(th, false); };
    DerivativeFn deriv = [raw, c](std::span<const double> th, std::size_t) -> CVector { return c * raw(th, true); };
    return PureStateModel("ring_flux", grid, ParameterBox::unbounded(1), std::move(amps), std::move(deriv));
}

PureStateModel bloch() {
    auto amps = [](std::span<const double> th) {
        CVector a(2);
        a(0) = std::cos(0.5 * th[0]);
        a(1) = std::polar(std::sin(0.5 * th[0]), th[1]);
        return a;
    };
    DerivativeFn deriv = [](std::span<const double> th, std::size_t i) {
        CVector a(2);
        if (i == 0) {
            a(0) = -0.5 * std::sin(0.5 * th[0]);
            a(1) = std::polar(0.5 * std::cos(0.5 * th[0]), th[1]);
        } else {
            a(0) = 0.0;
            a(1) = kI * std::polar(std::sin(0.5 * th[0]), th[1]);
        }
        return a;
    };
    const double inf = std::numeric_limits<double>::infinity();
    return PureStateModel("bloch", BasisSpace(2, {"+1/2", "-1/2"}), ParameterBox{{0.0, -inf}, {std::numbers::pi, inf}},
                          amps, std::move(deriv));
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"position_shift", "momentum_shift", "position_momentum_shift",
                                                "spin_jz",        "two_well",       "ring_flux",
                                                "bloch"};
    return names;
}

// ---------------------------------------------------------------------------
// JSON front end

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SpecError(path + ": " + msg); }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.contains(key)) fail(path + "." + key, "unknown key");
    }
}

double get_number(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required number is missing");
    }
    const auto& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path + "." + key, "expected a finite number");
    return d;
}

cplx get_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    fail(path, "expected a number or a [re, im] pair");
}

GridSpace grid_from_json(const json& j, const std::string& path, const GridSpace& fallback) {
    if (j.is_null()) return fallback;
    check_keys(j, path, {"n_points", "lower", "upper", "periodic"});
    std::size_t n = fallback.n_points;
    if (j.contains("n_points")) {
        const auto& v = j.at("n_points");
        if (!v.is_number_integer() || v.get<long long>() < 2) fail(path + ".n_points", "expected an integer >= 2");
        n = v.get<std::size_t>();
    }
    const double lo = get_number(j, "lower", path, fallback.lower);
    const double hi = get_number(j, "upper", path, fallback.upper);
    bool periodic = fallback.periodic;
    if (j.contains("periodic")) {
        if (!j.at("periodic").is_boolean()) fail(path + ".periodic", "expected a boolean");
        periodic = j.at("periodic").get<bool>();
    }
    if (!(hi > lo)) fail(path, "upper must exceed lower");
    return GridSpace(n, lo, hi, periodic);
}

PureStateModel apply_derivative_options(PureStateModel model, const json& params, const std::string& path) {
    std::string mode = "analytic";
    if (params.contains("derivative")) {
        if (!params.at("derivative").is_string()) fail(path + ".derivative", "expected a string");
        mode = params.at("derivative").get<std::string>();
        if (mode != "analytic" && mode != "finite_difference") {
            fail(path + ".derivative", "expected 'analytic' or 'finite_difference'");
        }
    }
    std::optional<std::vector<double>> steps;
    if (params.contains("fd_step")) {
        const auto& s = params.at("fd_step");
        if (s.is_number()) {
            steps = std::vector<double>(model.parameter_count(), s.get<double>());
        } else if (s.is_array() && s.size() == model.parameter_count()) {
            steps.emplace();
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!s[i].is_number()) fail(path + ".fd_step[" + std::to_string(i) + "]", "expected a number");
                steps->push_back(s[i].get<double>());
            }
        } else {
            fail(path + ".fd_step", "expected a number or one number per parameter");
        }
        for (double h : *steps) {
            if (!(h > 0.0)) fail(path + ".fd_step", "steps must be positive");
        }
    }
    if (mode == "finite_difference" || steps) {
        if (mode == "analytic" && steps) fail(path + ".fd_step", "only meaningful with derivative = finite_difference");
        return model.with_finite_differences(steps);
    }
    return model;
}

}  // namespace

Profile profile_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        fail(path + ".type", "expected a profile type string");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "hermite") {
        check_keys(j, path, {"type", "n"});
        const double n = get_number(j, "n", path, 0.0);
        if (n < 0 || n != std::floor(n)) fail(path + ".n", "expected a non-negative integer");
        return hermite_profile(static_cast<int>(n));
    }
    if (type == "gaussian") {
        check_keys(j, path, {"type", "sigma", "center", "momentum", "chirp"});
        const double sigma = get_number(j, "sigma", path, 1.0);
        if (!(sigma > 0.0)) fail(path + ".sigma", "must be positive");
        return gaussian_profile(sigma, get_number(j, "center", path, 0.0), get_number(j, "momentum", path, 0.0),
                                get_number(j, "chirp", path, 0.0));
    }
    if (type == "superposition") {
        check_keys(j, path, {"type", "components"});
        if (!j.contains("components") || !j.at("components").is_array() || j.at("components").empty()) {
            fail(path + ".components", "expected a non-empty array");
        }
        std::vector<GaussianComponent> comps;
        for (std::size_t i = 0; i < j.at("components").size(); ++i) {
            const auto& c = j.at("components")[i];
            const std::string cp = path + ".components[" + std::to_string(i) + "]";
            check_keys(c, cp, {"amplitude", "sigma", "center", "momentum", "chirp"});
            GaussianComponent g;
            g.amplitude = c.contains("amplitude") ? get_complex(c.at("amplitude"), cp + ".amplitude") : cplx(1.0);
            g.sigma = get_number(c, "sigma", cp, 1.0);
            if (!(g.sigma > 0.0)) fail(cp + ".sigma", "must be positive");
            g.center = get_number(c, "center", cp, 0.0);
            g.momentum = get_number(c, "momentum", cp, 0.0);
            g.chirp = get_number(c, "chirp", cp, 0.0);
            comps.push_back(g);
        }
        return superposition_profile(std::move(comps));
    }
    if (type == "two_well") {
        check_keys(j, path, {"type", "alpha"});
        return two_well_profile(get_number(j, "alpha", path, std::nullopt));
    }
    fail(path + ".type", "unknown profile type '" + type + "'");
}

json shifted_profile_json(std::string_view name, const json& params) {
    if (name == "position_shift") {
        return params.contains("profile") ? params.at("profile") : json{{"type", "hermite"}, {"n", 0}};
    }
    if (name == "two_well") {
        return json{{"type", "two_well"}, {"alpha", params.value("alpha", 0.0)}};
    }
    return nullptr;
}

PureStateModel catalog(std::string_view name, const json& params_in) {
    const json params = params_in.is_null() ? json::object() : params_in;
    const std::string path = "params";
    if (!params.is_object()) fail(path, "expected an object");

    if (name == "position_shift" || name == "momentum_shift" || name == "position_momentum_shift") {
        check_keys(params, path, {"profile", "grid", "derivative", "fd_step"});
        const Profile profile = params.contains("profile") ? profile_from_json(params.at("profile"), path + ".profile")
                                                           : hermite_profile(0);
        const GridSpace grid = grid_from_json(params.value("grid", json()), path + ".grid", default_line_grid());
        PureStateModel m = name == "position_shift"   ? position_shift(profile, grid)
                           : name == "momentum_shift" ? momentum_shift(profile, grid)
                                                      : position_momentum_shift(profile, grid);
        return apply_derivative_options(std::move(m), params, path);
    }
    if (name == "spin_jz") {
        check_keys(params, path, {"spin", "amplitudes", "derivative", "fd_step"});
        const double spin = get_number(params, "spin", path, 1.0);
        if (!params.contains("amplitudes") || !params.at("amplitudes").is_array()) {
            fail(path + ".amplitudes", "expected an array of amplitudes ordered m = -S..S");
        }
        std::vector<cplx> amps;
        for (std::size_t i = 0; i < params.at("amplitudes").size(); ++i) {
            amps.push_back(get_complex(params.at("amplitudes")[i], path + ".amplitudes[" + std::to_string(i) + "]"));
        }
        return apply_derivative_options(spin_jz(spin, std::move(amps)), params, path);
    }
    if (name == "two_well") {
        check_keys(params, path, {"alpha", "grid", "derivative", "fd_step"});
        const double alpha = get_number(params, "alpha", path, std::nullopt);
        const GridSpace grid = grid_from_json(params.value("grid", json()), path + ".grid", GridSpace(2048, -8.0, 8.0));
        return apply_derivative_options(two_well(alpha, grid), params, path);
    }
    if (name == "ring_flux") {
        check_keys(params, path, {"alpha", "grid", "derivative", "fd_step"});
        const double alpha = get_number(params, "alpha", path, std::nullopt);
        const GridSpace grid = grid_from_json(params.value("grid", json()), path + ".grid",
                                              GridSpace(1024, 0.0, 2.0 * std::numbers::pi, true));
        return apply_derivative_options(ring_flux(alpha, grid), params, path);
    }
    if (name == "bloch") {
        check_keys(params, path, {"derivative", "fd_step"});
        return apply_derivative_options(bloch(), params, path);
    }
    throw SpecError("name: unknown catalog model '" + std::string(name) + "'");
}

}  // namespace qgeom
