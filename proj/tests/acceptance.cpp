// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgeom/catalog.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/estimation.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/holonomy.hpp"
#include "qgeom/symmetry.hpp"
#include "test_util.hpp"

namespace {

using namespace qgeom;
using nlohmann::json;
using std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

struct Instance {
    std::string label;
    PureStateModel model;
};

/// One instance per catalog name, plus the second spin case.
std::vector<Instance> catalog_instances() {
    const json gauss = {{"profile", {{"type", "hermite"}, {"n", 0}}},
                        {"grid", {{"n_points", 512}, {"lower", -10.0}, {"upper", 10.0}}}};
    std::vector<Instance> out;
    for (const auto& name : catalog_names()) {
        json params = json::object();
        if (name == "position_shift" || name == "momentum_shift" || name == "position_momentum_shift") params = gauss;
        if (name == "spin_jz") params = {{"spin", 1.0}, {"amplitudes", {0.5, std::sqrt(0.5), 0.5}}};
        if (name == "two_well") params = {{"alpha", pi / 2}};
        if (name == "ring_flux") params = {{"alpha", 0.3}};
        out.push_back({name, catalog(name, params)});
    }
    out.push_back({"spin_jz_asymmetric", catalog("spin_jz", {{"spin", 1.0}, {"amplitudes", {0.8, 0.6, 0.0}}})});
    return out;
}

/// k evenly spaced points on the diagonal of the central half of the domain.
std::vector<Theta> interior_points(const PureStateModel& m, int k) {
    std::vector<Theta> out;
    for (int j = 0; j < k; ++j) {
        const double f = 0.25 + 0.5 * j / (k - 1);
        Theta t(m.parameter_count());
        for (std::size_t i = 0; i < t.size(); ++i) {
            double lo = m.domain().lower[i], hi = m.domain().upper[i];
            if (!std::isfinite(lo) || !std::isfinite(hi)) lo = -1.0, hi = 1.0;
            // Offset the second coordinate so 2-d grids are not on a symmetry line.
            t[i] = lo + (hi - lo) * std::clamp(f + 0.07 * static_cast<double>(i), 0.0, 1.0);
        }
        out.push_back(t);
    }
    return out;
}

std::vector<Theta> line(double lo, double hi, int n) {
    std::vector<Theta> out;
    for (int k = 0; k < n; ++k) out.push_back({lo + (hi - lo) * k / (n - 1)});
    return out;
}

double wrap(double a) { return std::remainder(a, 2 * pi); }

double max_abs(const RMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// 1. Lifts are horizontal and reconstruct d rho.
void horizontal_lift_contract(Outcome& o) {
    double worst_vertical = 0.0, worst_reconstruction = 0.0;
    for (const auto& inst : catalog_instances()) {
        for (const auto& t : interior_points(inst.model, 5)) {
            const auto lift = horizontal_lift(inst.model, t);
            worst_vertical = std::max(worst_vertical, lift.max_vertical_component());
            if (inst.model.name().rfind("spin_jz", 0) != 0 && inst.label.rfind("spin_jz", 0) != 0) continue;
            for (std::size_t i = 0; i < t.size(); ++i) {
                Theta p = t, q = t;
                const double h = 1e-5;
                p[i] += h;
                q[i] -= h;
                const CMatrix drho = (projector(inst.model.evaluate(p)) - projector(inst.model.evaluate(q))) / (2 * h);
                worst_reconstruction =
                    std::max(worst_reconstruction, (push_forward(lift.lifts[i], lift.phi) - drho).cwiseAbs().maxCoeff());
            }
        }
    }
    o.require(worst_vertical < 1e-6, "vertical component");
    o.require(worst_reconstruction < 1e-6, "projector reconstruction");
    o.detail << "max |<l|phi>| = " << worst_vertical << ", max reconstruction error = " << worst_reconstruction;
}

// 2. Geometry and loop phases do not depend on the gauge.
void gauge_invariance(Outcome& o) {
    std::mt19937_64 rng(20260101);
    double worst = 0.0;
    for (const auto& inst : catalog_instances()) {
        const auto pts = interior_points(inst.model, 3);
        const GeometryReport base = geometry_report(inst.model, pts[1]);
        // Small triangle at the middle point (there and back for one parameter).
        std::vector<Theta> loop(3, pts[1]);
        loop[1][0] += 0.2;
        if (inst.model.parameter_count() >= 2) loop[2][1] += 0.2;
        else loop[2][0] += 0.4;
        auto states = [&](const PureStateModel& m) {
            std::vector<StateVector> s;
            for (const auto& t : loop) s.push_back(m.evaluate(t));
            return s;
        };
        const double gamma = berry_phase_loop(states(inst.model)).gamma;
        for (int trial = 0; trial < 20; ++trial) {
            const auto re = testing::randomly_rephased(inst.model, rng);
            const GeometryReport r = geometry_report(re, pts[1]);
            double d = std::max(max_abs(r.j_s - base.j_s), max_abs(r.j_tilde - base.j_tilde));
            if (r.betas.size() != base.betas.size()) {
                o.require(false, inst.label + " beta count");
                continue;
            }
            for (std::size_t k = 0; k < r.betas.size(); ++k) d = std::max(d, std::abs(r.betas[k] - base.betas[k]));
            if (r.cr_js && base.cr_js) d = std::max(d, std::abs(*r.cr_js - *base.cr_js));
            d = std::max(d, std::abs(wrap(berry_phase_loop(states(re)).gamma - gamma)));
            worst = std::max(worst, d);
            o.require(d < 1e-6, inst.label);
        }
    }
    o.detail << "max deviation over 20 rephasings per model = " << worst;
}

// 3. Gaussian phase-space shift.
void gaussian_phase_space(Outcome& o) {
    const auto m = catalog("position_momentum_shift",
                           {{"profile", {{"type", "gaussian"}}},
                            {"grid", {{"n_points", 512}, {"lower", -10.0}, {"upper", 10.0}}},
                            {"derivative", "finite_difference"},
                            {"fd_step", 1e-4}});
    const GeometryReport r = geometry_report(m, Theta{0.0, 0.0});
    const double js_err = std::max({std::abs(r.j_s(0, 0) / 2 - 1), std::abs(r.j_s(1, 1) / 2 - 1),
                                    std::abs(r.j_s(0, 1)) / 2});
    const double jt_err = std::abs(std::abs(r.j_tilde(0, 1)) - 2);
    const double beta = r.betas.empty() ? 0.0 : r.betas.front();
    const double cr = r.cr_js.value_or(0.0);
    const double sld = r.sld_bound(WeightMatrix(r.j_s));
    o.require(js_err < 1e-4, "J_S");
    o.require(jt_err < 1e-4, "J~_12");
    o.require(r.betas.size() == 1 && std::abs(beta - 1) < 1e-4, "beta_1");
    o.require(std::abs(cr - 4) < 0.05, "cr_js");
    o.require(std::abs(sld - 2) < 1e-12, "sld_bound");
    o.require(cr > 2, "gap cr_js > m");
    o.detail << "J_S rel err = " << js_err << ", J~_12 = " << r.j_tilde(0, 1) << ", beta_1 = " << beta
             << ", cr_js = " << cr << ", sld_bound = " << sld;
}

// 4. Attainable bound against beta.
void cr_formula(Outcome& o) {
    const RMatrix js = RMatrix::Identity(2, 2);
    const RMatrix zero = RMatrix::Zero(2, 2);
    const double at_zero = attainable_cr_js(js, zero);
    o.require(at_zero == 2.0, "beta = 0 gives m");
    o.require(attainable_cr_from_betas(3, {}) == 3.0, "no betas gives m");
    // A quasi-classical model from the catalog (real spin amplitudes) also gives exactly m.
    const auto spin = catalog("spin_jz", {{"spin", 1.0}, {"amplitudes", {0.5, std::sqrt(0.5), 0.5}}});
    const auto rep = geometry_report(spin, Theta{0.3});
    o.require(rep.cr_js && *rep.cr_js == 1.0, "catalog quasi-classical cr_js");
    double prev = -1.0;
    o.detail << "cr_js(beta) =";
    for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        RMatrix jt = zero;
        jt(0, 1) = beta;
        jt(1, 0) = -beta;
        const double cr = attainable_cr_js(js, jt);
        o.require(cr > prev, "strictly increasing");
        prev = cr;
        o.detail << " " << cr;
    }
}

// 5. Small loops follow the curvature; the octant loop encloses pi/4.
void curvature_holonomy(Outcome& o) {
    const auto gauss = catalog("position_momentum_shift",
                               {{"profile", {{"type", "hermite"}, {"n", 0}}},
                                {"grid", {{"n_points", 512}, {"lower", -10.0}, {"upper", 10.0}}}});
    const auto bloch_model = catalog("bloch", json::object());
    auto ratios = [&](const PureStateModel& m, const Theta& t, std::vector<double>& res) {
        for (double eps : {0.1, 0.05, 0.025}) {
            const auto c = curvature_check(m, t, 0, 1, eps);
            res.push_back(std::abs(c.measured - c.predicted));
        }
    };
    std::vector<double> g, b;
    ratios(gauss, Theta{0.0, 0.0}, g);
    ratios(bloch_model, Theta{1.0, 0.5}, b);
    // On the Gaussian the rectangle phase equals the curvature term exactly,
    // so the residual sits at round-off and cannot halve further.
    constexpr double kRoundOff = 1e-12;
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        o.require(g[k + 1] < kRoundOff || g[k] / g[k + 1] >= 7, "gaussian halving ratio");
        o.require(b[k] / b[k + 1] >= 7, "bloch halving ratio");
    }
    o.detail << "gaussian residuals " << g[0] << " " << g[1] << " " << g[2] << "; bloch ratios " << b[0] / b[1] << " "
             << b[1] / b[2];

    // Octant: pole -> equator -> quarter turn -> pole, 2000 segments (the
    // chain closes back to the first state).
    std::vector<StateVector> s;
    auto edge = [&](const Theta& a, const Theta& c, int n) {
        for (int k = 0; k < n; ++k) {
            const double f = static_cast<double>(k) / n;
            s.push_back(bloch_model.evaluate(Theta{a[0] + f * (c[0] - a[0]), a[1] + f * (c[1] - a[1])}));
        }
    };
    edge({0.0, 0.0}, {pi / 2, 0.0}, 667);
    edge({pi / 2, 0.0}, {pi / 2, pi / 2}, 667);
    edge({pi / 2, pi / 2}, {0.0, pi / 2}, 666);
    const auto oct = berry_phase_loop(s);
    o.require(oct.n_segments == 2000, "2000 segments");
    o.require(std::abs(std::abs(oct.gamma) - pi / 4) < 1e-3, "octant phase");
    o.detail << "; octant |gamma| - pi/4 = " << std::abs(oct.gamma) - pi / 4 << " (" << oct.n_segments
             << " segments)";
}

// 6. Quasi-parallel classification with its two equivalent forms.
void classification(Outcome& o) {
    const GridSpace grid(512, -10.0, 10.0);
    const double rt = std::sqrt(0.5);
    struct Case {
        std::string label;
        PureStateModel model;
        std::vector<Theta> samples;
        bool expected;
        bool position_shift;
    };
    std::vector<Case> cases;
    for (int n = 0; n <= 2; ++n)
        cases.push_back({"hermite" + std::to_string(n), position_shift(hermite_profile(n), grid), line(-1, 1, 9), true,
                         true});
    cases.push_back({"spin_symmetric", spin_jz(1.0, {0.5, rt, 0.5}), line(-1.5, 1.5, 9), true, false});
    cases.push_back({"spin_asymmetric", spin_jz(1.0, {0.8, 0.6, 0.0}), line(-1.5, 1.5, 9), false, false});
    cases.push_back({"two_well", two_well(pi / 2), line(-1, 1, 9), false, true});
    cases.push_back({"ring_flux", ring_flux(0.3), line(-1, 1, 9), false, false});
    for (const auto& c : cases) {
        const auto qp = is_quasi_parallel(c.model, c.samples);
        o.require(qp.flag == c.expected, c.label + " classification");
        if (c.expected) o.require(qp.max_imag < 1e-8, c.label + " max |Im|");
        if (c.label == "spin_asymmetric") o.require(qp.max_imag > 1e-3, c.label + " witness");
        const auto built = construct_invariant_conjugation(qp.aligned);
        if (c.expected) o.require(built.op.has_value(), c.label + " antiunitary construction");
        if (c.position_shift) {
            const auto ms = momentum_symmetry_check(c.model.evaluate(Theta{0.0}));
            o.require(ms.flag == qp.flag, c.label + " momentum symmetry agreement");
        }
        o.detail << c.label << "=" << (qp.flag ? "QP" : "not QP") << "(" << qp.max_imag << ") ";
    }
}

// 7. Position measurement attains the bound on the two counter-examples.
void counterexample_attainment(Outcome& o) {
    for (const auto& m : {two_well(pi / 2, GridSpace(2048, -8.0, 8.0)), ring_flux(0.3, GridSpace(1024, 0.0, 2 * pi, true))}) {
        const auto fam = induced_family(grid_pvm(std::get<GridSpace>(m.space())), m);
        double worst = 0.0;
        for (const auto& t : line(-0.8, 0.8, 5)) {
            const double js = sld_fisher(horizontal_lift(m, t))(0, 0);
            worst = std::max(worst, std::abs(classical_fisher(fam, t)(0, 0) / js - 1));
        }
        o.require(worst < 5e-3, m.name());
        o.detail << m.name() << " max rel gap = " << worst << "  ";
    }
}

// 8. Fixed optimal measurement for the symmetric spin.
void quasi_parallel_measurement(Outcome& o) {
    const auto m = spin_jz(1.0, {0.5, std::sqrt(0.5), 0.5});
    const auto samples = line(-1.2, 1.2, 9);
    const auto fam = induced_family(optimal_measurement_quasi_parallel(m, samples), m);
    double worst = 0.0;
    for (const auto& t : samples) {
        worst = std::max(worst, std::abs(classical_fisher(fam, t)(0, 0) - 2.0));
        worst = std::max(worst, std::abs(sld_fisher(horizontal_lift(m, t))(0, 0) - 2.0));
    }
    o.require(worst < 1e-6, "J_C = J_S = 2");
    o.detail << "max |J - 2| over " << samples.size() << " samples = " << worst;
}

// 9. J_S - J_C is positive semidefinite.
void monotonicity(Outcome& o) {
    double worst = 0.0;
    int pairs = 0;
    std::mt19937_64 rng(9);
    for (const auto& inst : catalog_instances()) {
        const auto& m = inst.model;
        const auto pts = interior_points(m, 3);
        std::vector<std::pair<std::string, Povm>> povms{{"basis", standard_basis_pvm(m.space())}};
        if (const auto* g = std::get_if<GridSpace>(&m.space())) povms.push_back({"grid", grid_pvm(*g)});
        if (dimension(m.space()) <= 8) {
            const auto n = static_cast<Eigen::Index>(dimension(m.space()));
            const CMatrix u =
                Eigen::HouseholderQR<CMatrix>(testing::random_cvector(rng, n * n).reshaped(n, n)).householderQ();
            std::vector<StateVector> basis;
            for (Eigen::Index k = 0; k < n; ++k) basis.push_back(StateVector(m.space(), u.col(k)));
            povms.push_back({"random_basis", pvm_from_basis(basis)});
        }
        try {
            povms.push_back({"schmidt", optimal_measurement_quasi_parallel(m, pts)});
        } catch (const NumericalError&) {
            // Not quasi-parallel on these samples: no Schmidt measurement.
        }
        for (const auto& [name, povm] : povms) {
            const auto fam = induced_family(povm, m);
            for (const auto& t : pts) {
                const RMatrix gap = sld_fisher(horizontal_lift(m, t)) - classical_fisher(fam, t);
                const double e = Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (gap + gap.transpose())).eigenvalues().minCoeff();
                worst = std::min(worst, e);
                o.require(e >= -1e-6, inst.label + "/" + name);
            }
            ++pairs;
        }
    }
    o.detail << pairs << " (model, measurement) pairs, min eigenvalue of J_S - J_C = " << worst;
}

// 10. Sample mean of position measurements.
void monte_carlo(Outcome& o) {
    const GridSpace g(512, -10.0, 10.0);
    const auto m = position_shift(hermite_profile(0), g);
    const double theta = 0.3;
    const auto out = sample_outcomes(grid_pvm(g), m.evaluate(Theta{theta}), 100000, 12345);
    const auto stats = estimator_covariance(out, position_estimator(g));
    const double var = stats.covariance(0, 0);
    o.require(std::abs(var / 0.5 - 1) < 0.02, "variance");
    o.detail << "n = 100000, seed = 12345, variance = " << var << " (1/J_S = 0.5), mean = " << stats.mean(0);
}

// 11. D spectrum on random models.
void spectral_contracts(Outcome& o) {
    double worst_re = 0.0, worst_pair = 0.0, worst_beta = 0.0, worst_proj = 0.0;
    for (int k = 0; k < 50; ++k) {
        const std::size_t m = k % 2 == 0 ? 2 : 3;
        const auto model = testing::random_smooth_model(1000 + static_cast<std::uint64_t>(k), 4, m);
        std::mt19937_64 rng(static_cast<std::uint64_t>(k));
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        Theta t(m);
        for (auto& x : t) x = u(rng);
        const auto lift = horizontal_lift(model, t);
        const RMatrix js = sld_fisher(lift), jt = berry_curvature(lift);
        const auto dt = d_transform(js, jt);
        Eigen::SelfAdjointEigenSolver<RMatrix> es(js);
        const RMatrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                 es.eigenvectors().transpose();
        const RMatrix sym = inv_sqrt * jt * inv_sqrt;
        const Eigen::VectorXcd ev = Eigen::EigenSolver<RMatrix>(sym).eigenvalues();
        std::vector<double> plus, minus;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            worst_re = std::max(worst_re, std::abs(ev(i).real()));
            (ev(i).imag() >= 0 ? plus : minus).push_back(std::abs(ev(i).imag()));
        }
        // The zero of odd m lands on either side; drop it before pairing.
        auto drop_zero = [](std::vector<double>& v) {
            auto it = std::min_element(v.begin(), v.end());
            if (it != v.end() && *it < 1e-8) v.erase(it);
        };
        if (plus.size() != minus.size()) drop_zero(plus.size() > minus.size() ? plus : minus);
        std::sort(plus.begin(), plus.end());
        std::sort(minus.begin(), minus.end());
        if (plus.size() != minus.size()) {
            o.require(false, "unpaired eigenvalues");
            continue;
        }
        for (std::size_t i = 0; i < plus.size(); ++i) worst_pair = std::max(worst_pair, std::abs(plus[i] - minus[i]));
        for (double b : dt.betas) worst_beta = std::max(worst_beta, b);
        for (std::size_t i = 0; i < m; ++i) {
            const RVector e = RVector::Unit(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i));
            worst_proj = std::max(worst_proj, (d_via_projection(lift, e) - dt.d * e).cwiseAbs().maxCoeff());
        }
    }
    o.require(worst_re < 1e-8, "|Re| of eigenvalues");
    o.require(worst_pair < 1e-8, "+-i pairing");
    o.require(worst_beta <= 1 + 1e-8, "beta <= 1");
    o.require(worst_proj < 1e-8, "projection route");
    o.detail << "max |Re| = " << worst_re << ", max pair mismatch = " << worst_pair << ", max beta = " << worst_beta
             << ", max |D_proj - D| = " << worst_proj;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"horizontal_lift_contract", horizontal_lift_contract},
        {"gauge_invariance", gauge_invariance},
        {"gaussian_phase_space_shift", gaussian_phase_space},
        {"attainable_cr_formula", cr_formula},
        {"curvature_holonomy", curvature_holonomy},
        {"quasi_parallel_classification", classification},
        {"counterexample_attainment", counterexample_attainment},
        {"quasi_parallel_optimal_measurement", quasi_parallel_measurement},
        {"quantum_monotonicity", monotonicity},
        {"monte_carlo_cramer_rao", monte_carlo},
        {"spectral_contracts", spectral_contracts},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("[%s] %zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.str().c_str(), secs);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
