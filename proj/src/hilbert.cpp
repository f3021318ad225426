// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "qgeom/errors.hpp"

namespace qgeom {

BasisSpace::BasisSpace(std::size_t dim, std::vector<std::string> labels_)
    : dimension(dim), labels(std::move(labels_)) {
    if (dim < 1) {
        throw DimensionError("basis space dimension must be >= 1");
    }
    if (!labels.empty() && labels.size() != dim) {
        throw DimensionError("basis space labels must match the dimension");
    }
}

GridSpace::GridSpace(std::size_t n, double lo, double hi, bool periodic_)
    : n_points(n), lower(lo), upper(hi), periodic(periodic_) {
    if (n < 2) {
        throw DimensionError("grid needs at least 2 points");
    }
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DimensionError("grid requires finite endpoints with upper > lower");
    }
}

double GridSpace::weight() const noexcept {
    const auto n = static_cast<double>(n_points);
    return periodic ? (upper - lower) / n : (upper - lower) / (n - 1.0);
}

std::vector<double> GridSpace::points() const {
    std::vector<double> xs(n_points);
    for (std::size_t k = 0; k < n_points; ++k) xs[k] = point(k);
    return xs;
}

std::size_t dimension(const Space& space) noexcept {
    return std::visit(
        [](const auto& s) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BasisSpace>) {
                return s.dimension;
            } else {
                return s.n_points;
            }
        },
        space);
}

double quadrature_weight(const Space& space) noexcept {
    if (const auto* g = std::get_if<GridSpace>(&space)) return g->weight();
    return 1.0;
}

bool same_space(const Space& a, const Space& b) noexcept {
    if (a.index() != b.index()) return false;
    if (const auto* ba = std::get_if<BasisSpace>(&a)) {
        return ba->dimension == std::get<BasisSpace>(b).dimension;
    }
    const auto& ga = std::get<GridSpace>(a);
    const auto& gb = std::get<GridSpace>(b);
    const double scale = std::max(1.0, std::abs(ga.upper) + std::abs(ga.lower));
    return ga.n_points == gb.n_points && ga.periodic == gb.periodic &&
           std::abs(ga.lower - gb.lower) <= 1e-12 * scale &&
           std::abs(ga.upper - gb.upper) <= 1e-12 * scale;
}

std::string describe(const Space& space) {
    std::ostringstream os;
    if (const auto* b = std::get_if<BasisSpace>(&space)) {
        os << "basis(" << b->dimension << ")";
    } else {
        const auto& g = std::get<GridSpace>(space);
        os << (g.periodic ? "periodic_grid(" : "grid(") << g.n_points << ", [" << g.lower << ", "
           << g.upper << "])";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Space space, CVector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != dimension(space_)) {
        std::ostringstream os;
        os << "amplitude count " << amps_.size() << " does not match " << describe(space_);
        throw DimensionError(os.str());
    }
}

double StateVector::norm() const {
    return std::sqrt(quadrature_weight(space_)) * amps_.norm();
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NormalizationError("cannot normalize a zero or non-finite vector");
    }
    return StateVector(space_, amps_ / n);
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm() * norm() - 1.0) < tol;
}

CVector StateVector::orthonormal_coordinates() const {
    return std::sqrt(quadrature_weight(space_)) * amps_;
}

StateVector StateVector::from_orthonormal_coordinates(Space space, const CVector& coords) {
    const double s = std::sqrt(quadrature_weight(space));
    return StateVector(std::move(space), coords / s);
}

namespace {
void require_same_space(const StateVector& a, const StateVector& b) {
    if (!same_space(a.space(), b.space())) {
        throw DimensionError("space mismatch: " + describe(a.space()) + " vs " + describe(b.space()));
    }
}
}  // namespace

StateVector& StateVector::operator+=(const StateVector& other) {
    require_same_space(*this, other);
    amps_ += other.amps_;
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
    require_same_space(*this, other);
    amps_ -= other.amps_;
    return *this;
}

StateVector& StateVector::operator*=(cplx factor) {
    amps_ *= factor;
    return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(cplx factor, StateVector v) { return v *= factor; }
StateVector operator*(StateVector v, cplx factor) { return v *= factor; }

cplx inner(const StateVector& u, const StateVector& v) {
    require_same_space(u, v);
    return quadrature_weight(u.space()) * u.amplitudes().dot(v.amplitudes());
}

StateVector basis_state(const BasisSpace& space, std::size_t k) {
    if (k >= space.dimension) throw DimensionError("basis index out of range");
    CVector e = CVector::Zero(static_cast<Eigen::Index>(space.dimension));
    e(static_cast<Eigen::Index>(k)) = 1.0;
    return StateVector(space, std::move(e));
}

StateVector sample(const GridSpace& grid, const std::function<cplx(double)>& f) {
    CVector a(static_cast<Eigen::Index>(grid.n_points));
    for (std::size_t k = 0; k < grid.n_points; ++k) a(static_cast<Eigen::Index>(k)) = f(grid.point(k));
    return StateVector(grid, std::move(a));
}

// ---------------------------------------------------------------------------
// Real-span orthonormalization

std::vector<StateVector> gram_schmidt_real(std::span<const StateVector> vectors, double tol) {
    std::vector<StateVector> basis;
    if (vectors.empty()) return basis;

    std::vector<double> norms;
    norms.reserve(vectors.size());
    for (const auto& v : vectors) {
        require_same_space(vectors.front(), v);
        norms.push_back(v.norm());
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            const double im = inner(vectors[i], vectors[j]).imag();
            if (std::abs(im) >= tol * norms[i] * norms[j]) {
                std::ostringstream os;
                os << "overlap <v" << i << "|v" << j << "> has imaginary part " << im;
                throw NonRealOverlapError(os.str(), i, j, im);
            }
        }
    }

    const double max_norm = *std::max_element(norms.begin(), norms.end());
    const double skip = tol * max_norm;
    for (const auto& v : vectors) {
        StateVector r = v;
        // Two passes of modified Gram-Schmidt keep the basis orthogonal to
        // working precision even for nearly dependent inputs.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                r -= cplx(inner(b, r).real(), 0.0) * b;
            }
        }
        const double rn = r.norm();
        if (rn < skip) continue;
        r *= cplx(1.0 / rn, 0.0);
        basis.push_back(std::move(r));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Momentum representation

GridSpace momentum_grid(const GridSpace& position) {
    const auto n = static_cast<double>(position.n_points);
    const double dp = 2.0 * std::numbers::pi / (n * position.weight());
    const double half = std::floor(n / 2.0);
    return GridSpace(position.n_points, -half * dp, (n - half) * dp, true);
}

std::size_t reversed_momentum_index(std::size_t j, std::size_t n) noexcept {
    // p_j = (j - floor(n/2)) dp; for even n, j = 0 is the unpaired Nyquist mode.
    const std::size_t half = n / 2;
    if (n % 2 == 0) return j == 0 ? 0 : n - j;
    // odd n: (j - half) -> (half - j), i.e. j -> 2 half - j
    return 2 * half - j;
}

StateVector momentum_transform(const StateVector& state) {
    const auto* grid = std::get_if<GridSpace>(&state.space());
    if (grid == nullptr) {
        throw UnsupportedSpaceError("momentum transform needs a grid space");
    }
    const std::size_t n = grid->n_points;
    const GridSpace pgrid = momentum_grid(*grid);
    const double dx = grid->weight();
    const double x0 = grid->lower;
    const auto half = static_cast<double>(n / 2);

    // p_j x_k = p_j x0 + 2 pi (j - half) k / n: fold the (j - half) shift into
    // a per-sample phase and the x0 offset into a per-mode phase.
    std::vector<cplx> in(n), out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * half * static_cast<double>(k) / static_cast<double>(n);
        in[k] = state.amplitudes()(static_cast<Eigen::Index>(k)) * std::polar(1.0, ang);
    }
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    const double scale = dx / std::sqrt(2.0 * std::numbers::pi);
    CVector psi(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double p = pgrid.point(j);
        psi(static_cast<Eigen::Index>(j)) = scale * std::polar(1.0, -p * x0) * out[j];
    }
    return StateVector(pgrid, std::move(psi));
}

StateVector inverse_momentum_transform(const StateVector& momentum_state, const GridSpace& position) {
    const auto* pg = std::get_if<GridSpace>(&momentum_state.space());
    if (pg == nullptr) {
        throw UnsupportedSpaceError("inverse momentum transform needs a grid space");
    }
    const GridSpace expected = momentum_grid(position);
    if (!same_space(*pg, expected)) {
        throw DimensionError("momentum state is not on the grid conjugate to the target");
    }
    const std::size_t n = position.n_points;
    const double dx = position.weight();
    const double x0 = position.lower;
    const auto half = static_cast<double>(n / 2);

    std::vector<cplx> in(n), out(n);
    const double scale = std::sqrt(2.0 * std::numbers::pi) / dx;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = expected.point(j);
        in[j] = scale * std::polar(1.0, p * x0) * momentum_state.amplitudes()(static_cast<Eigen::Index>(j));
    }
    Eigen::FFT<double> fft;
    fft.inv(out, in);  // includes the 1/n factor

    CVector psi(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = -2.0 * std::numbers::pi * half * static_cast<double>(k) / static_cast<double>(n);
        psi(static_cast<Eigen::Index>(k)) = out[k] * std::polar(1.0, ang);
    }
    return StateVector(position, std::move(psi));
}

// ---------------------------------------------------------------------------

CMatrix projector(const StateVector& state) {
    if (!state.is_normalized(1e-8)) {
        throw NormalizationError("projector requires a unit vector");
    }
    const CVector u = state.orthonormal_coordinates();
    return u * u.adjoint();
}

double ray_distance(const StateVector& a, const StateVector& b) {
    const cplx c = inner(a, b);
    const double ac = std::abs(c);
    if (ac == 0.0) return std::sqrt(2.0);
    const StateVector aligned = b * (std::conj(c) / ac);
    const double d = (a - aligned).norm();
    return std::sqrt(2.0) * d * std::sqrt(std::max(0.0, 1.0 - d * d / 4.0));
}

}  // namespace qgeom
