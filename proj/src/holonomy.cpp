// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qgeom/errors.hpp"
#include "qgeom/geometry.hpp"

namespace qgeom {

namespace {

double principal(cplx z) {
    const double g = std::arg(z);
    return g <= -std::numbers::pi ? std::numbers::pi : g;
}

/// Running product of unit phases plus bookkeeping.
struct Chain {
    cplx phase{1.0, 0.0};
    std::size_t segments = 0;
    double min_overlap = 1.0;

    void push(cplx z) {
        const double a = std::abs(z);
        min_overlap = std::min(min_overlap, a);
        phase *= z / a;
        phase /= std::abs(phase);
        ++segments;
    }

    [[nodiscard]] PhaseResult result() const { return {principal(phase), segments, min_overlap}; }
};

[[noreturn]] void refine_error(std::size_t segment, double overlap) {
    std::ostringstream os;
    os << "segment " << segment << " has overlap " << overlap
       << " below " << kMinSegmentOverlap << "; refine the discretization";
    throw RefineDiscretizationError(os.str(), segment);
}

void push_checked(Chain& chain, const StateVector& a, const StateVector& b, std::size_t segment) {
    const cplx z = inner(a, b);
    if (std::abs(z) < kMinSegmentOverlap) refine_error(segment, std::abs(z));
    chain.push(z);
}

/// Adds the factors of one curve segment, bisecting in theta while the
/// overlap is too small.
void push_refined(Chain& chain, const PureStateModel& model, const Theta& ta, const Theta& tb,
                  const StateVector& a, const StateVector& b, std::size_t segment, int level) {
    const cplx z = inner(a, b);
    if (std::abs(z) >= kMinSegmentOverlap) {
        chain.push(z);
        return;
    }
    if (level >= kMaxRefinementLevels) refine_error(segment, std::abs(z));
    Theta mid(ta.size());
    for (std::size_t k = 0; k < ta.size(); ++k) mid[k] = 0.5 * (ta[k] + tb[k]);
    const StateVector m = model.evaluate(mid);
    push_refined(chain, model, ta, mid, a, m, segment, level + 1);
    push_refined(chain, model, mid, tb, m, b, segment, level + 1);
}

std::vector<StateVector> evaluate_all(const PureStateModel& model, const std::vector<Theta>& pts) {
    std::vector<StateVector> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(model.evaluate(p));
    return out;
}

void check_same_space(std::span<const StateVector> states) {
    for (const auto& s : states) {
        if (!same_space(s.space(), states.front().space())) throw DimensionError("chain states live in different spaces");
    }
}

cplx closing_overlap(const StateVector& end, const StateVector& start) {
    const cplx z = inner(end, start);
    if (std::abs(z) < kMinSegmentOverlap) {
        std::ostringstream os;
        os << "end point is orthogonal to the start (|overlap| = " << std::abs(z) << "); relative phase undefined";
        throw UndefinedRelativePhaseError(os.str());
    }
    return z;
}

}  // namespace

PhaseResult berry_phase_loop(std::span<const StateVector> states) {
    if (states.size() < 2) throw SpecError("a loop needs at least two states");
    check_same_space(states);
    Chain chain;
    for (std::size_t k = 0; k < states.size(); ++k) {
        push_checked(chain, states[k], states[(k + 1) % states.size()], k);
    }
    return chain.result();
}

PhaseResult berry_phase_open(std::span<const StateVector> states) {
    if (states.size() < 2) throw SpecError("a curve needs at least two states");
    check_same_space(states);
    Chain chain;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) push_checked(chain, states[k], states[k + 1], k);
    const cplx close = closing_overlap(states.back(), states.front());
    PhaseResult r = chain.result();
    r.gamma = principal(chain.phase * close / std::abs(close));
    return r;
}

PhaseResult berry_phase_loop(const Curve& curve) {
    if (!curve.closed()) throw SpecError("berry_phase_loop needs a closed curve");
    const auto& pts = curve.points();
    auto states = evaluate_all(curve.model(), pts);
    // The end point is the start ray; use the start vector itself.
    states.back() = states.front();
    Chain chain;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        push_refined(chain, curve.model(), pts[k], pts[k + 1], states[k], states[k + 1], k, 0);
    }
    return chain.result();
}

PhaseResult berry_phase_open(const Curve& curve) {
    const auto& pts = curve.points();
    const auto states = evaluate_all(curve.model(), pts);
    Chain chain;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        push_refined(chain, curve.model(), pts[k], pts[k + 1], states[k], states[k + 1], k, 0);
    }
    const cplx close = closing_overlap(states.back(), states.front());
    PhaseResult r = chain.result();
    r.gamma = principal(chain.phase * close / std::abs(close));
    return r;
}

CurvatureCheck curvature_check(const PureStateModel& model, std::span<const double> theta, std::size_t i,
                               std::size_t j, double eps, std::size_t n_sub) {
    const std::size_t m = model.parameter_count();
    if (m < 2) throw DimensionError("curvature_check needs at least two parameters");
    if (i >= m || j >= m || i == j) throw DimensionError("curvature_check needs two distinct parameter indices");
    if (theta.size() != m) throw DimensionError("theta has the wrong dimension");
    const Theta base(theta.begin(), theta.end());
    Theta a = base, b = base, c = base;
    a[i] += eps;
    b[i] += eps;
    b[j] += eps;
    c[j] += eps;
    for (const auto& corner : {a, b, c}) {
        if (!model.domain().contains(corner)) throw DomainError("curvature_check rectangle leaves the parameter domain");
    }
    const Curve loop = Curve::polyline(model, {base, a, b, c, base}, n_sub, true);
    const RMatrix jt = berry_curvature(horizontal_lift(model, theta));
    return {berry_phase_loop(loop).gamma, 0.5 * jt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * eps * eps};
}

QuasiParallelResult is_quasi_parallel(std::span<const StateVector> states, double tol) {
    const std::size_t n = states.size();
    if (n == 0) throw SpecError("quasi-parallel test needs at least one sample");
    check_same_space(states);

    CMatrix overlaps(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const cplx z = inner(states[a], states[b]);
            overlaps(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = z;
            overlaps(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = std::conj(z);
        }
    }

    std::size_t anchor = 0;
    double best = -1.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double worst = overlaps.row(static_cast<Eigen::Index>(a)).cwiseAbs().minCoeff();
        if (worst > best) {
            best = worst;
            anchor = a;
        }
    }
    if (best < kMinSegmentOverlap) {
        throw InconclusiveError("every candidate anchor is orthogonal to some sample; sample more densely");
    }

    QuasiParallelResult r;
    r.tol = tol;
    r.anchor = anchor;
    std::vector<cplx> factors(n);
    for (std::size_t a = 0; a < n; ++a) {
        const cplx z = overlaps(static_cast<Eigen::Index>(anchor), static_cast<Eigen::Index>(a));
        factors[a] = std::conj(z) / std::abs(z);
        r.aligned.push_back(factors[a] * states[a]);
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const cplx z = std::conj(factors[a]) * factors[b] *
                           overlaps(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            const double im = std::abs(z.imag());
            const double score = im / std::max(std::abs(z), 1e-3);
            r.max_imag = std::max(r.max_imag, im);
            if (score > r.witness_value) {
                r.witness_value = score;
                r.witness_first = a;
                r.witness_second = b;
            }
        }
    }
    r.flag = r.witness_value < tol;
    return r;
}

QuasiParallelResult is_quasi_parallel(const PureStateModel& model, const std::vector<Theta>& samples,
                                      double tol) {
    const auto states = evaluate_all(model, samples);
    return is_quasi_parallel(states, tol);
}

}  // namespace qgeom
