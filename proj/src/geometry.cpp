// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgeom/errors.hpp"

namespace qgeom {

WeightMatrix::WeightMatrix(RMatrix g) : g_(std::move(g)) {
    if (g_.rows() != g_.cols() || g_.rows() == 0) throw DimensionError("weight matrix must be square");
    if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g_.cwiseAbs().maxCoeff())) {
        throw InputError("weight matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g_);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, g_.cwiseAbs().maxCoeff())) {
        throw InputError("weight matrix must be non-negative");
    }
}

namespace {

RMatrix gram(const HorizontalLift& lift, bool imaginary) {
    const auto m = static_cast<Eigen::Index>(lift.lifts.size());
    RMatrix out(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            const cplx v = inner(lift.lifts[static_cast<std::size_t>(i)], lift.lifts[static_cast<std::size_t>(j)]);
            if (imaginary) {
                out(i, j) = v.imag();
                out(j, i) = -v.imag();
            } else {
                out(i, j) = out(j, i) = v.real();
            }
        }
    }
    if (imaginary) out.diagonal().setZero();
    return out;
}

void require_square(const RMatrix& a, Eigen::Index m, const char* what) {
    if (a.rows() != m || a.cols() != m) {
        std::ostringstream os;
        os << what << " must be " << m << "x" << m;
        throw DimensionError(os.str());
    }
}

/// Eigen-decomposition of J_S with the rank check shared by every bound.
Eigen::SelfAdjointEigenSolver<RMatrix> checked_metric(const RMatrix& j_s) {
    if (j_s.rows() != j_s.cols() || j_s.rows() == 0) throw DimensionError("J_S must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (j_s + j_s.transpose()));
    const RVector& lam = es.eigenvalues();
    const double top = lam.maxCoeff();
    if (!(top > 0.0)) throw RankDeficiencyError("J_S vanishes: every direction is degenerate");
    std::vector<Eigen::Index> null_dirs;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        if (lam(k) <= kRankTolerance * top) null_dirs.push_back(k);
    }
    if (!null_dirs.empty()) {
        std::ostringstream os;
        os << "J_S is rank deficient; null directions:";
        for (auto k : null_dirs) {
            os << " (";
            for (Eigen::Index i = 0; i < lam.size(); ++i) os << (i ? ", " : "") << es.eigenvectors()(i, k);
            os << ")";
        }
        throw RankDeficiencyError(os.str());
    }
    return es;
}

}  // namespace

RMatrix sld_fisher(const HorizontalLift& lift) { return gram(lift, false); }
RMatrix berry_curvature(const HorizontalLift& lift) { return gram(lift, true); }

DTransform d_transform(const RMatrix& j_s, const RMatrix& j_tilde) {
    const auto es = checked_metric(j_s);
    const Eigen::Index m = j_s.rows();
    require_square(j_tilde, m, "J~");

    const RVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    const RMatrix s = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    RMatrix k = s * j_tilde * s;
    k = 0.5 * (k - k.transpose());

    // i K is Hermitian with eigenvalues +-beta_j (and zeros).
    const CMatrix h = kI * k.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> hs(h);
    std::vector<double> betas;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double b = hs.eigenvalues()(i);
        if (b > kBetaTolerance) betas.push_back(b);
    }
    std::sort(betas.begin(), betas.end(), std::greater<>());

    DTransform out;
    out.d = es.eigenvectors() * inv_sqrt.cwiseProduct(inv_sqrt).asDiagonal() * es.eigenvectors().transpose() *
            j_tilde;
    out.symmetric = std::move(k);
    out.betas = std::move(betas);
    return out;
}

RVector d_via_projection(const HorizontalLift& lift, const RVector& x) {
    const auto m = static_cast<Eigen::Index>(lift.lifts.size());
    if (x.size() != m) throw DimensionError("tangent coefficients do not match the parameter count");
    const RMatrix j_s = sld_fisher(lift);
    const auto es = checked_metric(j_s);

    StateVector lx = 0.0 * lift.lifts.front();
    for (Eigen::Index j = 0; j < m; ++j) lx += cplx(x(j), 0.0) * lift.lifts[static_cast<std::size_t>(j)];
    const StateVector rotated = -kI * lx;

    RVector rhs(m);
    for (Eigen::Index k = 0; k < m; ++k) rhs(k) = inner(lift.lifts[static_cast<std::size_t>(k)], rotated).real();
    // Normal equations of the Re<.|.> projection onto the lift frame.
    const RVector lam_inv = es.eigenvalues().cwiseInverse();
    return es.eigenvectors() * lam_inv.asDiagonal() * (es.eigenvectors().transpose() * rhs);
}

double sld_bound(const WeightMatrix& g, const RMatrix& j_s) {
    const auto es = checked_metric(j_s);
    require_square(g.matrix(), j_s.rows(), "G");
    const RMatrix inv =
        es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return (g.matrix() * inv).trace();
}

double attainable_cr_from_betas(std::size_t m, const std::vector<double>& betas) {
    if (2 * betas.size() > m) throw SpectralConsistencyError("more beta pairs than dimensions");
    double cr = 0.0;
    for (double b : betas) {
        if (b > 1.0 + kBetaHardLimit) {
            std::ostringstream os;
            os << "beta = " << b << " exceeds 1; the model is not a pure-state model";
            throw SpectralConsistencyError(os.str());
        }
        const double bb = std::min(b, 1.0);
        cr += 4.0 / (1.0 + std::sqrt(1.0 - bb * bb));
    }
    // Directions outside the rotating pairs contribute 1 each.
    cr += static_cast<double>(m - 2 * betas.size());
    return cr;
}

double attainable_cr_js(const RMatrix& j_s, const RMatrix& j_tilde) {
    const DTransform dt = d_transform(j_s, j_tilde);
    return attainable_cr_from_betas(static_cast<std::size_t>(j_s.rows()), dt.betas);
}

bool is_quasi_classical(const RMatrix& j_tilde, double tol, const RMatrix& j_s) {
    const double scale = std::max(1.0, j_s.size() ? j_s.cwiseAbs().maxCoeff() : 0.0);
    const double worst = j_tilde.size() ? j_tilde.cwiseAbs().maxCoeff() : 0.0;
    return worst < tol * scale;
}

double GeometryReport::sld_bound(const WeightMatrix& g) const {
    if (rank_deficient) throw RankDeficiencyError("SLD bound undefined: J_S is rank deficient");
    return qgeom::sld_bound(g, j_s);
}

GeometryReport geometry_report(const HorizontalLift& lift, double quasi_classical_tol) {
    GeometryReport r;
    r.theta = lift.theta;
    r.j_s = sld_fisher(lift);
    r.j_tilde = berry_curvature(lift);
    r.max_vertical = lift.max_vertical_component();
    r.quasi_classical_tol = quasi_classical_tol;
    r.quasi_classical = is_quasi_classical(r.j_tilde, quasi_classical_tol, r.j_s);
    try {
        DTransform dt = d_transform(r.j_s, r.j_tilde);
        r.d = std::move(dt.d);
        r.betas = std::move(dt.betas);
        r.cr_js = attainable_cr_from_betas(lift.lifts.size(), r.betas);
    } catch (const RankDeficiencyError&) {
        r.rank_deficient = true;
    }
    return r;
}

GeometryReport geometry_report(const PureStateModel& model, std::span<const double> theta,
                               double quasi_classical_tol) {
    return geometry_report(horizontal_lift(model, theta), quasi_classical_tol);
}

}  // namespace qgeom
