// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "qgeom/catalog.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/estimation.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/holonomy.hpp"
#include "qgeom/spec_io.hpp"
#include "qgeom/symmetry.hpp"

namespace qgeom {

namespace {

ordered_json header(const std::string& command, const ModelSpec& spec) {
    ordered_json doc;
    doc["tool"] = "qgeom";
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["model"] = spec.serialize();
    return doc;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

WeightMatrix parse_weight(const std::string& text, const RMatrix& j_s) {
    if (text == "js") return WeightMatrix(j_s);
    if (text.rfind("diag:", 0) != 0) throw SpecError("--weight: expected 'js' or 'diag:a,b,...'");
    const auto values = parse_theta_list(text.substr(5), 1);
    if (static_cast<Eigen::Index>(values.size()) != j_s.rows()) {
        throw DimensionError("--weight: expected " + std::to_string(j_s.rows()) + " diagonal entries");
    }
    RVector d(j_s.rows());
    for (std::size_t i = 0; i < values.size(); ++i) d(static_cast<Eigen::Index>(i)) = values[i][0];
    return WeightMatrix(d.asDiagonal());
}

/// Evaluates f on every item, `threads` at a time, preserving order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, unsigned threads, F f) {
    using R = decltype(f(items.front()));
    std::vector<R> out;
    out.reserve(items.size());
    if (threads <= 1 || items.size() <= 1) {
        for (const auto& it : items) out.push_back(f(it));
        return out;
    }
    const std::size_t chunk = (items.size() + threads - 1) / threads;
    std::vector<std::future<std::vector<R>>> jobs;
    for (std::size_t start = 0; start < items.size(); start += chunk) {
        const std::size_t stop = std::min(items.size(), start + chunk);
        jobs.push_back(std::async(std::launch::async, [&, start, stop] {
            std::vector<R> part;
            for (std::size_t k = start; k < stop; ++k) part.push_back(f(items[k]));
            return part;
        }));
    }
    for (auto& j : jobs) {
        for (auto& r : j.get()) out.push_back(std::move(r));
    }
    return out;
}

struct ReportArgs {
    std::string model;
    std::string theta;
    std::string weight = "js";
    double tol = 1e-8;
    unsigned threads = 1;
};

ordered_json cmd_report(const ReportArgs& a) {
    const ModelSpec spec = ModelSpec::parse(read_json_file(a.model));
    const PureStateModel model = spec.build();
    const auto thetas = parse_theta_list(a.theta, model.parameter_count());
    const auto reports = parallel_map(thetas, a.threads, [&](const Theta& t) { return geometry_report(model, t, a.tol); });

    ordered_json doc = header("report", spec);
    doc["tolerances"] = {{"quasi_classical", a.tol},
                         {"rank", kRankTolerance},
                         {"beta", kBetaTolerance},
                         {"derivative_mode", to_string(model.derivative_mode())}};
    doc["weight"] = a.weight;
    ordered_json points = ordered_json::array();
    bool all_qc = true, any_rank = false;
    double max_beta = 0.0, max_gap = 0.0;
    for (const auto& r : reports) {
        ordered_json e;
        e["theta"] = to_json(r.theta);
        e["j_s"] = to_json(r.j_s);
        e["j_tilde"] = to_json(r.j_tilde);
        e["d"] = r.d ? to_json(*r.d) : ordered_json(nullptr);
        e["betas"] = r.betas;
        e["cr_js"] = optional_number(r.cr_js);
        std::optional<double> bound;
        if (!r.rank_deficient) bound = r.sld_bound(parse_weight(a.weight, r.j_s));
        e["sld_bound"] = optional_number(bound);
        e["quasi_classical"] = r.quasi_classical;
        e["rank_deficient"] = r.rank_deficient;
        e["max_vertical_component"] = r.max_vertical;
        points.push_back(std::move(e));
        all_qc = all_qc && r.quasi_classical;
        any_rank = any_rank || r.rank_deficient;
        for (double b : r.betas) max_beta = std::max(max_beta, b);
        if (r.cr_js) max_gap = std::max(max_gap, *r.cr_js - static_cast<double>(model.parameter_count()));
    }
    doc["points"] = std::move(points);
    doc["summary"] = {{"n_points", reports.size()},
                      {"quasi_classical_everywhere", all_qc},
                      {"rank_deficient_anywhere", any_rank},
                      {"max_beta", max_beta},
                      {"max_cr_gap", max_gap}};
    return doc;
}

struct HolonomyArgs {
    std::string model;
    std::string loop;
    bool closed = false;
};

ordered_json cmd_holonomy(const HolonomyArgs& a) {
    const ModelSpec spec = ModelSpec::parse(read_json_file(a.model));
    const PureStateModel model = spec.build();
    const LoopSpec loop = parse_loop_spec(read_json_file(a.loop), model.parameter_count());
    const bool closed = loop.closed || a.closed;
    const Curve curve(model, loop.points, closed);
    const PhaseResult r = closed ? berry_phase_loop(curve) : berry_phase_open(curve);

    ordered_json doc = header("holonomy", spec);
    doc["tolerances"] = {{"min_segment_overlap", kMinSegmentOverlap},
                         {"max_refinement_levels", kMaxRefinementLevels},
                         {"ray_closure", kRayClosureTol}};
    doc["holonomy"] = {{"closed", closed},
                       {"n_points", loop.points.size()},
                       {"gamma", r.gamma},
                       {"abs_gamma", std::abs(r.gamma)},
                       {"n_segments", r.n_segments},
                       {"min_overlap", r.min_overlap}};
    return doc;
}

struct CheckArgs {
    std::string model;
    std::string samples;
    double tol = kQuasiParallelTol;
    double symmetry_tol = kMomentumSymmetryTol;
};

ordered_json symmetry_json(const MomentumSymmetry& s) {
    return {{"flag", s.flag}, {"max_asymmetry", s.max_asymmetry}, {"at_momentum", s.at_momentum}};
}

ordered_json cmd_check(const CheckArgs& a) {
    const ModelSpec spec = ModelSpec::parse(read_json_file(a.model));
    const PureStateModel model = spec.build();
    const auto samples = parse_theta_list(a.samples, model.parameter_count());
    const QuasiParallelResult qp = is_quasi_parallel(model, samples, a.tol);
    const InvarianceConstruction inv = construct_invariant_conjugation(qp.aligned, 1e-8);

    ordered_json doc = header("check", spec);
    doc["tolerances"] = {{"quasi_parallel", a.tol}, {"invariance", 1e-8}, {"momentum_symmetry", a.symmetry_tol}};
    doc["quasi_parallel"] = {{"flag", qp.flag},
                             {"anchor", qp.anchor},
                             {"max_imag", qp.max_imag},
                             {"witness",
                              {{"first", qp.witness_first},
                               {"second", qp.witness_second},
                               {"theta_first", to_json(samples[qp.witness_first])},
                               {"theta_second", to_json(samples[qp.witness_second])},
                               {"value", qp.witness_value}}}};
    doc["antiunitary"] = {{"constructed", inv.op.has_value()}, {"defect", inv.defect}, {"reason", inv.reason}};

    const bool shift = spec.is_catalog() && (spec.name() == "position_shift" || spec.name() == "two_well");
    if (shift) {
        const auto& box = model.domain();
        double mid = 0.5 * (box.lower[0] + box.upper[0]);
        if (!std::isfinite(mid)) mid = 0.0;
        const StateVector profile = model.evaluate(Theta{mid});
        const MomentumSymmetry lit = momentum_symmetry_check(profile, a.symmetry_tol);
        const MomentumSymmetry cen = centered_momentum_symmetry_check(profile, a.symmetry_tol);
        ordered_json ms = {{"applicable", true}};
        ms.update(symmetry_json(lit));
        ordered_json c = symmetry_json(cen);
        c["mean_momentum"] = cen.mean_momentum;
        ms["centered"] = std::move(c);
        ms["agrees_with_quasi_parallel"] = cen.flag == qp.flag;
        doc["momentum_symmetry"] = std::move(ms);
    } else {
        doc["momentum_symmetry"] = {{"applicable", false}};
    }
    return doc;
}

Povm build_povm(const std::string& kind, const PureStateModel& model, const std::vector<Theta>& samples,
                double tol) {
    if (kind == "basis") return standard_basis_pvm(model.space());
    if (kind == "grid") {
        const auto* grid = std::get_if<GridSpace>(&model.space());
        if (grid == nullptr) throw UnsupportedSpaceError("--povm grid needs a grid model");
        return grid_pvm(*grid);
    }
    if (kind == "schmidt") return optimal_measurement_quasi_parallel(model, samples, tol);
    return parse_povm_spec(read_json_file(kind), model.space());
}

ordered_json povm_json(const std::string& kind, const Povm& povm) {
    return {{"kind", kind == "basis" || kind == "grid" || kind == "schmidt" ? kind : "file"},
            {"outcomes", povm.size()},
            {"complement_outcome", povm.has_complement()}};
}

struct FisherArgs {
    std::string model;
    std::string povm = "basis";
    std::string theta;
    std::string samples;
    double tol = kQuasiParallelTol;
};

ordered_json cmd_fisher(const FisherArgs& a) {
    const ModelSpec spec = ModelSpec::parse(read_json_file(a.model));
    const PureStateModel model = spec.build();
    const auto thetas = parse_theta_list(a.theta, model.parameter_count());
    const auto samples = a.samples.empty() ? thetas : parse_theta_list(a.samples, model.parameter_count());
    const Povm povm = build_povm(a.povm, model, samples, a.tol);
    const ClassicalFamily family = induced_family(povm, model);

    ordered_json doc = header("fisher", spec);
    doc["tolerances"] = {{"probability_floor", kProbabilityFloor}, {"completeness", kPovmCompletenessTol}};
    doc["povm"] = povm_json(a.povm, povm);
    ordered_json points = ordered_json::array();
    double worst_rel = 0.0, worst_gap = std::numeric_limits<double>::infinity();
    for (const auto& t : thetas) {
        const RMatrix jc = classical_fisher(family, t);
        const RMatrix js = sld_fisher(horizontal_lift(model, t));
        const RMatrix diff = js - jc;
        const double gap = Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (diff + diff.transpose())).eigenvalues().minCoeff();
        const double rel = diff.norm() / std::max(js.norm(), std::numeric_limits<double>::min());
        points.push_back({{"theta", to_json(t)},
                          {"j_c", to_json(jc)},
                          {"j_s", to_json(js)},
                          {"min_gap_eigenvalue", gap},
                          {"relative_gap", rel}});
        worst_rel = std::max(worst_rel, rel);
        worst_gap = std::min(worst_gap, gap);
    }
    doc["points"] = std::move(points);
    doc["summary"] = {{"max_relative_gap", worst_rel},
                      {"min_gap_eigenvalue", worst_gap},
                      {"monotone", worst_gap >= -1e-6}};
    return doc;
}

struct SampleArgs {
    std::string model;
    std::string povm = "basis";
    std::string theta;
    std::string samples;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string estimator = "score";
    double tol = kQuasiParallelTol;
};

ordered_json cmd_sample(const SampleArgs& a) {
    const ModelSpec spec = ModelSpec::parse(read_json_file(a.model));
    const PureStateModel model = spec.build();
    const auto thetas = parse_theta_list(a.theta, model.parameter_count());
    if (thetas.size() != 1) throw SpecError("--theta: expected exactly one point");
    const Theta& t = thetas.front();
    const auto samples = a.samples.empty() ? thetas : parse_theta_list(a.samples, model.parameter_count());
    const Povm povm = build_povm(a.povm, model, samples, a.tol);
    const ClassicalFamily family = induced_family(povm, model);
    const StateVector phi = model.evaluate(t);

    EstimateFn estimate;
    if (a.estimator == "score") {
        estimate = score_estimator(family, t);
    } else if (a.estimator == "position") {
        const auto* grid = std::get_if<GridSpace>(&model.space());
        if (grid == nullptr || model.parameter_count() != 1 || povm.size() != grid->n_points || povm.has_complement()) {
            throw SpecError("--estimator position needs a one-parameter grid model and --povm grid");
        }
        estimate = position_estimator(*grid);
    } else {
        throw SpecError("--estimator: expected 'score' or 'position'");
    }

    const Outcomes outcomes = sample_outcomes(povm, phi, a.n, a.seed);
    EstimatorStats stats = estimator_covariance(outcomes, estimate);
    stats.seed = a.seed;
    const RMatrix jc = classical_fisher(family, t);
    const RMatrix js = sld_fisher(horizontal_lift(model, t));

    ordered_json doc = header("sample", spec);
    doc["povm"] = povm_json(a.povm, povm);
    ordered_json s;
    s["theta"] = to_json(t);
    s["n"] = stats.n;
    s["seed"] = a.seed;
    s["estimator"] = a.estimator;
    s["mean"] = to_json(stats.mean);
    s["covariance"] = to_json(stats.covariance);
    s["j_c"] = to_json(jc);
    s["j_s"] = to_json(js);
    s["sld_bound_inverse"] = to_json(RMatrix(js.inverse()));
    if (model.parameter_count() == 1) {
        const double v = stats.covariance(0, 0);
        s["variance_times_j_s"] = v * js(0, 0);
        s["variance_times_j_c"] = v * jc(0, 0);
        s["relative_standard_error"] = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(stats.n - 1, 1)));
    }
    if (povm.size() <= 64) {
        std::vector<std::size_t> counts(povm.size(), 0);
        for (auto o : outcomes) ++counts[o];
        ordered_json c = ordered_json::object();
        for (std::size_t k = 0; k < counts.size(); ++k) c[povm.labels()[k]] = counts[k];
        s["counts"] = std::move(c);
    }
    doc["sample"] = std::move(s);
    return doc;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Estimation geometry of pure-state quantum models", "qgeom"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    ReportArgs report;
    auto* r = app.add_subcommand("report", "SLD metric, curvature, D spectrum and bounds at theta points");
    r->add_option("--model", report.model, "model spec file")->required();
    r->add_option("--theta", report.theta, "points, ';' between points and ',' between components")->required();
    r->add_option("--weight", report.weight, "js or diag:a,b,...");
    r->add_option("--tol", report.tol, "quasi-classical tolerance");
    r->add_option("--threads", report.threads, "worker threads")->check(CLI::Range(1u, 256u));

    HolonomyArgs hol;
    auto* h = app.add_subcommand("holonomy", "Berry phase of a curve or loop");
    h->add_option("--model", hol.model, "model spec file")->required();
    h->add_option("--loop", hol.loop, "loop spec file")->required();
    h->add_flag("--closed", hol.closed, "treat the curve as a loop");

    CheckArgs check;
    auto* c = app.add_subcommand("check", "quasi-parallel, antiunitary and momentum-symmetry checks");
    c->add_option("--model", check.model, "model spec file")->required();
    c->add_option("--samples", check.samples, "sample points")->required();
    c->add_option("--tol", check.tol, "quasi-parallel tolerance");
    c->add_option("--symmetry-tol", check.symmetry_tol, "momentum symmetry tolerance");

    FisherArgs fisher;
    auto* f = app.add_subcommand("fisher", "classical against SLD Fisher information");
    f->add_option("--model", fisher.model, "model spec file")->required();
    f->add_option("--povm", fisher.povm, "basis, grid, schmidt or a POVM file");
    f->add_option("--theta", fisher.theta, "points")->required();
    f->add_option("--samples", fisher.samples, "samples defining the schmidt measurement (default: --theta)");
    f->add_option("--tol", fisher.tol, "quasi-parallel tolerance for schmidt");

    SampleArgs sample;
    auto* s = app.add_subcommand("sample", "Monte Carlo estimator statistics");
    s->add_option("--model", sample.model, "model spec file")->required();
    s->add_option("--povm", sample.povm, "basis, grid, schmidt or a POVM file");
    s->add_option("--theta", sample.theta, "true parameter point")->required();
    s->add_option("--samples", sample.samples, "samples defining the schmidt measurement (default: --theta)");
    s->add_option("--n", sample.n, "number of draws")->required()->check(CLI::PositiveNumber);
    s->add_option("--seed", sample.seed, "random seed")->required();
    s->add_option("--estimator", sample.estimator, "score or position");
    s->add_option("--tol", sample.tol, "quasi-parallel tolerance for schmidt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        ordered_json doc;
        if (*r) doc = cmd_report(report);
        else if (*h) doc = cmd_holonomy(hol);
        else if (*c) doc = cmd_check(check);
        else if (*f) doc = cmd_fisher(fisher);
        else doc = cmd_sample(sample);
        out << doc.dump(2) << '\n';
        return kExitOk;
    } catch (const InputError& e) {
        err << "qgeom: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "qgeom: numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace qgeom
