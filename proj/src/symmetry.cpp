// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgeom/errors.hpp"

namespace qgeom {

namespace {

const GridSpace& require_grid(const Space& space, const char* what) {
    const auto* grid = std::get_if<GridSpace>(&space);
    if (grid == nullptr) throw UnsupportedSpaceError(std::string(what) + " needs a grid space");
    return *grid;
}

/// Phase e^{i N dp x0} picked up by the unpaired Nyquist mode under
/// pointwise conjugation.
cplx nyquist_phase(const GridSpace& grid) {
    const GridSpace pg = momentum_grid(grid);
    return std::polar(1.0, static_cast<double>(grid.n_points) * pg.weight() * grid.lower);
}

}  // namespace

AntiunitaryOp AntiunitaryOp::from_unitary(Space space, CMatrix unitary, std::string description) {
    const auto n = static_cast<Eigen::Index>(dimension(space));
    if (unitary.rows() != n || unitary.cols() != n) throw DimensionError("unitary has the wrong shape");
    AntiunitaryOp op(Kind::basis_conjugation, std::move(space), std::move(description));
    op.unitary_ = std::move(unitary);
    return op;
}

AntiunitaryOp AntiunitaryOp::pointwise(Space space) {
    return AntiunitaryOp(Kind::pointwise_conjugation, std::move(space), "complex conjugation");
}

AntiunitaryOp AntiunitaryOp::momentum(GridSpace space, RVector phases, std::string description) {
    if (phases.size() != static_cast<Eigen::Index>(space.n_points)) {
        throw DimensionError("momentum phase table has the wrong length");
    }
    AntiunitaryOp op(Kind::momentum_reversal, space, std::move(description));
    op.phases_ = std::move(phases);
    return op;
}

StateVector AntiunitaryOp::apply(const StateVector& v) const {
    if (!same_space(v.space(), space_)) throw DimensionError("antiunitary operator applied to a foreign state");
    switch (kind_) {
        case Kind::pointwise_conjugation:
            return StateVector(space_, v.amplitudes().conjugate());
        case Kind::basis_conjugation: {
            const CVector u = v.orthonormal_coordinates();
            const CVector c = (unitary_.adjoint() * u).conjugate();
            return StateVector::from_orthonormal_coordinates(space_, unitary_ * c);
        }
        case Kind::momentum_reversal: {
            const GridSpace& grid = std::get<GridSpace>(space_);
            const StateVector psi = momentum_transform(v);
            const std::size_t n = grid.n_points;
            CVector out(psi.amplitudes().size());
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t r = reversed_momentum_index(j, n);
                cplx z = std::polar(1.0, phases_(static_cast<Eigen::Index>(j))) *
                         std::conj(psi.amplitudes()(static_cast<Eigen::Index>(r)));
                if (n % 2 == 0 && j == 0) z *= nyquist_phase(grid);
                out(static_cast<Eigen::Index>(j)) = z;
            }
            return inverse_momentum_transform(StateVector(psi.space(), std::move(out)), grid);
        }
    }
    throw Error("unknown antiunitary kind");
}

AntiunitaryOp conjugation_in_basis(const std::vector<StateVector>& basis) {
    if (basis.empty()) throw NonOrthonormalError("empty basis");
    const Space& space = basis.front().space();
    const auto n = static_cast<Eigen::Index>(dimension(space));
    const auto r = static_cast<Eigen::Index>(basis.size());
    if (r > n) throw NonOrthonormalError("more basis vectors than dimensions");
    CMatrix q(n, r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const auto& b = basis[static_cast<std::size_t>(k)];
        if (!same_space(b.space(), space)) throw DimensionError("basis vectors live in different spaces");
        q.col(k) = b.orthonormal_coordinates();
    }
    const double err = (q.adjoint() * q - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff();
    if (err > 1e-8) {
        std::ostringstream os;
        os << "basis is not orthonormal (max Gram deviation " << err << ")";
        throw NonOrthonormalError(os.str());
    }
    // Q = H R with |R_ii| = 1; H diag(R_ii) is unitary and starts with Q.
    Eigen::HouseholderQR<CMatrix> qr(q);
    CMatrix u = qr.householderQ();
    const CMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < r; ++k) u.col(k) *= rr(k, k) / std::abs(rr(k, k));
    u.leftCols(r) = q;
    std::ostringstream os;
    os << "conjugation in a " << r << "-vector real basis";
    return AntiunitaryOp::from_unitary(space, std::move(u), os.str());
}

AntiunitaryOp standard_conjugation(const Space& space) { return AntiunitaryOp::pointwise(space); }

StateVector time_reversal(const StateVector& phi) {
    require_grid(phi.space(), "time reversal");
    return AntiunitaryOp::pointwise(phi.space()).apply(phi);
}

AntiunitaryOp time_reversal_op(const GridSpace& grid) { return AntiunitaryOp::pointwise(grid); }

AntiunitaryOp generalized_time_reversal_op(const GridSpace& grid, const MomentumPhase& alpha) {
    const GridSpace pg = momentum_grid(grid);
    RVector phases(static_cast<Eigen::Index>(grid.n_points));
    for (std::size_t j = 0; j < grid.n_points; ++j) phases(static_cast<Eigen::Index>(j)) = alpha(-pg.point(j));
    return AntiunitaryOp::momentum(grid, std::move(phases), "generalized time reversal");
}

StateVector generalized_time_reversal(const MomentumPhase& alpha, const StateVector& phi) {
    return generalized_time_reversal_op(require_grid(phi.space(), "generalized time reversal"), alpha).apply(phi);
}

AntiunitaryOp matched_reversal(const StateVector& phi) {
    const GridSpace& grid = require_grid(phi.space(), "matched reversal");
    const StateVector psi = momentum_transform(phi);
    const std::size_t n = grid.n_points;
    RVector beta(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const cplx z = psi.amplitudes()(static_cast<Eigen::Index>(j));
        beta(static_cast<Eigen::Index>(j)) = std::abs(z) >= kSpectralZero ? std::arg(z) : 0.0;
    }
    RVector phases(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = reversed_momentum_index(j, n);
        double a = beta(static_cast<Eigen::Index>(j)) + beta(static_cast<Eigen::Index>(r));
        if (n % 2 == 0 && j == 0) a -= std::arg(nyquist_phase(grid));
        phases(static_cast<Eigen::Index>(j)) = a;
    }
    return AntiunitaryOp::momentum(grid, std::move(phases), "momentum-matched time reversal");
}

namespace {

MomentumSymmetry asymmetry(const StateVector& phi, double tol) {
    const GridSpace& grid = require_grid(phi.space(), "momentum symmetry check");
    const StateVector psi = momentum_transform(phi);
    const GridSpace& pg = std::get<GridSpace>(psi.space());
    MomentumSymmetry out;
    const std::size_t n = grid.n_points;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = reversed_momentum_index(j, n);
        const double d = std::abs(std::norm(psi.amplitudes()(static_cast<Eigen::Index>(j))) -
                                  std::norm(psi.amplitudes()(static_cast<Eigen::Index>(r))));
        if (d > out.max_asymmetry) {
            out.max_asymmetry = d;
            out.at_momentum = pg.point(j);
        }
    }
    out.flag = out.max_asymmetry < tol;
    return out;
}

}  // namespace

MomentumSymmetry momentum_symmetry_check(const StateVector& phi, double tol) { return asymmetry(phi, tol); }

MomentumSymmetry centered_momentum_symmetry_check(const StateVector& phi, double tol) {
    const GridSpace& grid = require_grid(phi.space(), "momentum symmetry check");
    const StateVector psi = momentum_transform(phi);
    const GridSpace& pg = std::get<GridSpace>(psi.space());
    double mean = 0.0;
    double mass = 0.0;
    for (std::size_t j = 0; j < pg.n_points; ++j) {
        const double w = std::norm(psi.amplitudes()(static_cast<Eigen::Index>(j)));
        mean += pg.point(j) * w;
        mass += w;
    }
    mean /= mass;
    CVector shifted = phi.amplitudes();
    for (std::size_t k = 0; k < grid.n_points; ++k) {
        shifted(static_cast<Eigen::Index>(k)) *= std::polar(1.0, -mean * grid.point(k));
    }
    MomentumSymmetry out = asymmetry(StateVector(grid, std::move(shifted)), tol);
    out.mean_momentum = mean;
    return out;
}

double invariance_defect(const AntiunitaryOp& op, std::span<const StateVector> states) {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, (op.apply(s) - s).norm());
    return worst;
}

bool is_invariant(const AntiunitaryOp& op, std::span<const StateVector> states, double tol) {
    return invariance_defect(op, states) < tol;
}

InvarianceConstruction construct_invariant_conjugation(std::span<const StateVector> aligned, double tol) {
    InvarianceConstruction out;
    std::vector<StateVector> basis;
    try {
        basis = gram_schmidt_real(aligned, tol);
    } catch (const NonRealOverlapError& e) {
        out.reason = e.what();
        return out;
    }
    AntiunitaryOp op = conjugation_in_basis(basis);
    out.defect = invariance_defect(op, aligned);
    if (out.defect < tol) {
        out.op = std::move(op);
    } else {
        std::ostringstream os;
        os << "K_B moves an aligned state by " << out.defect;
        out.reason = os.str();
    }
    return out;
}

}  // namespace qgeom
