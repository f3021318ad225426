// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qgeom/errors.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/holonomy.hpp"

namespace qgeom {

namespace {

Eigen::Index as_index(std::size_t k) { return static_cast<Eigen::Index>(k); }

SparseC unit_column(std::size_t n, std::size_t k) {
    SparseC f(as_index(n), 1);
    f.insert(as_index(k), 0) = cplx(1.0, 0.0);
    f.makeCompressed();
    return f;
}

SparseC dense_factor(const CMatrix& m) {
    SparseC f = m.sparseView(cplx(0.0, 0.0), 0.0);
    f.makeCompressed();
    return f;
}

CMatrix complement_projector(const CMatrix& q) {
    return CMatrix::Identity(q.rows(), q.rows()) - q * q.adjoint();
}

void check_space(const Space& povm_space, const Space& other) {
    if (!same_space(povm_space, other)) {
        throw DimensionError("measurement acts on " + describe(povm_space) + " but the state lives in " +
                             describe(other));
    }
}

}  // namespace

Povm::Povm(Space space, std::vector<std::string> labels, std::vector<SparseC> factors,
           std::optional<CMatrix> complement_isometry)
    : space_(std::move(space)),
      labels_(std::move(labels)),
      factors_(std::move(factors)),
      complement_(std::move(complement_isometry)) {
    const std::size_t expected = factors_.size() + (complement_ ? 1 : 0);
    if (labels_.size() != expected) throw MeasurementDefinitionError("one label per outcome is required");
    if (expected == 0) throw MeasurementDefinitionError("a measurement needs at least one outcome");
    validate();
}

void Povm::validate() const {
    const auto n = as_index(dimension(space_));
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (factors_[k].rows() != n) {
            std::ostringstream os;
            os << "outcome " << labels_[k] << ": factor has " << factors_[k].rows() << " rows, expected " << n;
            throw MeasurementDefinitionError(os.str());
        }
    }
    double err = 0.0;
    if (complement_) {
        const CMatrix& q = *complement_;
        if (q.rows() != n) throw MeasurementDefinitionError("complement isometry has the wrong row count");
        err = (q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
        Eigen::Index cols = 0;
        for (const auto& f : factors_) cols += f.cols();
        CMatrix all(n, cols);
        cols = 0;
        for (const auto& f : factors_) {
            all.middleCols(cols, f.cols()) = CMatrix(f);
            cols += f.cols();
        }
        const CMatrix sum = all * all.adjoint() - q * q.adjoint();
        if (sum.size()) err = std::max(err, sum.cwiseAbs().maxCoeff());
    } else {
        SparseC sum(n, n);
        for (const auto& f : factors_) sum += f * SparseC(f.adjoint());
        SparseC id(n, n);
        id.setIdentity();
        sum -= id;
        for (Eigen::Index c = 0; c < sum.outerSize(); ++c) {
            for (SparseC::InnerIterator it(sum, c); it; ++it) err = std::max(err, std::abs(it.value()));
        }
    }
    if (err > kPovmCompletenessTol) {
        std::ostringstream os;
        os << "elements do not sum to the identity (max deviation " << err << ")";
        throw MeasurementDefinitionError(os.str());
    }
}

Povm Povm::from_elements(Space space, std::vector<std::string> labels, const std::vector<CMatrix>& elements) {
    const auto n = as_index(dimension(space));
    std::vector<SparseC> factors;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const CMatrix& e = elements[k];
        const std::string name = k < labels.size() ? labels[k] : std::to_string(k);
        if (e.rows() != n || e.cols() != n) {
            throw MeasurementDefinitionError("element " + name + " has the wrong shape");
        }
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kPovmPsdTol) {
            throw MeasurementDefinitionError("element " + name + " is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (e + e.adjoint()));
        if (es.eigenvalues().minCoeff() < -kPovmPsdTol) {
            std::ostringstream os;
            os << "element " << name << " has eigenvalue " << es.eigenvalues().minCoeff();
            throw MeasurementDefinitionError(os.str());
        }
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (es.eigenvalues()(i) > 0.0) keep.push_back(i);
        }
        CMatrix f = CMatrix::Zero(n, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(keep.size())));
        for (std::size_t c = 0; c < keep.size(); ++c) {
            f.col(as_index(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
        }
        factors.push_back(dense_factor(f));
    }
    return Povm(std::move(space), std::move(labels), std::move(factors));
}

CMatrix Povm::element(std::size_t k) const {
    if (k >= size()) throw DimensionError("outcome index out of range");
    if (k < factors_.size()) return CMatrix(factors_[k] * SparseC(factors_[k].adjoint()));
    return complement_projector(*complement_);
}

RVector Povm::probabilities(const StateVector& state) const {
    check_space(space_, state.space());
    const CVector u = state.orthonormal_coordinates();
    RVector p(as_index(size()));
    for (std::size_t k = 0; k < factors_.size(); ++k) p(as_index(k)) = (factors_[k].adjoint() * u).squaredNorm();
    if (complement_) p(p.size() - 1) = u.squaredNorm() - (complement_->adjoint() * u).squaredNorm();
    return p;
}

RVector Povm::probability_derivative(const StateVector& state, const StateVector& direction) const {
    check_space(space_, state.space());
    check_space(space_, direction.space());
    const CVector u = state.orthonormal_coordinates();
    const CVector du = direction.orthonormal_coordinates();
    RVector dp(as_index(size()));
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        const SparseC fa = factors_[k].adjoint();
        dp(as_index(k)) = 2.0 * (fa * u).dot(fa * du).real();
    }
    if (complement_) {
        const CMatrix qa = complement_->adjoint();
        dp(dp.size() - 1) = 2.0 * (u.dot(du).real() - (qa * u).dot(qa * du).real());
    }
    return dp;
}

RVector Povm::probabilities(const CMatrix& rho) const {
    const auto n = as_index(dimension(space_));
    if (rho.rows() != n || rho.cols() != n) throw DimensionError("density matrix has the wrong shape");
    RVector p(as_index(size()));
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        const SparseC& f = factors_[k];
        p(as_index(k)) = (SparseC(f.adjoint()) * (rho * f)).trace().real();
    }
    if (complement_) {
        const CMatrix& q = *complement_;
        p(p.size() - 1) = rho.trace().real() - (q.adjoint() * rho * q).trace().real();
    }
    return p;
}

Povm Povm::merged(std::size_t a, std::size_t b) const {
    if (a >= size() || b >= size() || a == b) throw DimensionError("merge needs two distinct outcome indices");
    auto factor = [&](std::size_t k) -> SparseC {
        if (k < factors_.size()) return factors_[k];
        return dense_factor(complement_projector(*complement_));
    };
    std::vector<SparseC> factors;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < size(); ++k) {
        if (k == a || k == b) continue;
        factors.push_back(factor(k));
        labels.push_back(labels_[k]);
    }
    const SparseC fa = factor(a);
    const SparseC fb = factor(b);
    CMatrix joined(fa.rows(), fa.cols() + fb.cols());
    joined << CMatrix(fa), CMatrix(fb);
    factors.push_back(dense_factor(joined));
    labels.push_back(labels_[a] + "+" + labels_[b]);
    return Povm(space_, std::move(labels), std::move(factors));
}

Povm standard_basis_pvm(const Space& space) {
    const std::size_t n = dimension(space);
    std::vector<SparseC> factors;
    std::vector<std::string> labels;
    factors.reserve(n);
    const auto* basis = std::get_if<BasisSpace>(&space);
    for (std::size_t k = 0; k < n; ++k) {
        factors.push_back(unit_column(n, k));
        labels.push_back(basis && k < basis->labels.size() ? basis->labels[k] : std::to_string(k));
    }
    return Povm(space, std::move(labels), std::move(factors));
}

Povm grid_pvm(const GridSpace& space) { return standard_basis_pvm(space); }

Povm pvm_from_basis(const std::vector<StateVector>& basis) {
    if (basis.empty()) throw NonOrthonormalError("empty basis");
    const Space& space = basis.front().space();
    const auto n = as_index(dimension(space));
    if (as_index(basis.size()) > n) throw NonOrthonormalError("more basis vectors than dimensions");
    CMatrix q(n, as_index(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (!same_space(basis[k].space(), space)) throw DimensionError("basis vectors live in different spaces");
        q.col(as_index(k)) = basis[k].orthonormal_coordinates();
    }
    const double err = (q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-8) {
        std::ostringstream os;
        os << "basis is not orthonormal (max Gram deviation " << err << ")";
        throw NonOrthonormalError(os.str());
    }
    std::vector<SparseC> factors;
    std::vector<std::string> labels;
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        factors.push_back(dense_factor(q.col(k)));
        labels.push_back("b" + std::to_string(k));
    }
    if (q.cols() == n) return Povm(space, std::move(labels), std::move(factors));
    labels.emplace_back("complement");
    return Povm(space, std::move(labels), std::move(factors), q);
}

namespace {

RVector checked_distribution(RVector p) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (!(p(k) >= -kPovmPsdTol)) {
            std::ostringstream os;
            os << "outcome " << k << " has probability " << p(k);
            throw MeasurementDefinitionError(os.str());
        }
        p(k) = std::max(p(k), 0.0);
    }
    const double total = p.sum();
    if (std::abs(total - 1.0) > kPovmCompletenessTol) {
        std::ostringstream os;
        os << "probabilities sum to " << total;
        throw MeasurementDefinitionError(os.str());
    }
    return p;
}

}  // namespace

RVector induced_distribution(const Povm& povm, const CMatrix& rho) {
    return checked_distribution(povm.probabilities(rho));
}

RVector induced_distribution(const Povm& povm, const StateVector& state) {
    return checked_distribution(povm.probabilities(state));
}

RMatrix ClassicalFamily::jacobian_at(std::span<const double> theta) const {
    if (jacobian) return jacobian(theta);
    const std::size_t m = parameter_count;
    Theta t(theta.begin(), theta.end());
    RMatrix out;
    for (std::size_t i = 0; i < m; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(t[i]));
        Theta plus = t, minus = t;
        plus[i] += h;
        minus[i] -= h;
        const RVector d = (probabilities(plus) - probabilities(minus)) / (2.0 * h);
        if (i == 0) out.resize(d.size(), as_index(m));
        out.col(as_index(i)) = d;
    }
    return out;
}

ClassicalFamily induced_family(const Povm& povm, const PureStateModel& model) {
    check_space(povm.space(), model.space());
    ClassicalFamily f;
    f.parameter_count = model.parameter_count();
    f.mode = model.derivative_mode();
    f.probabilities = [povm, model](std::span<const double> theta) {
        return induced_distribution(povm, model.evaluate(theta));
    };
    f.jacobian = [povm, model](std::span<const double> theta) {
        const StateVector phi = model.evaluate(theta);
        RMatrix jac(as_index(povm.size()), as_index(model.parameter_count()));
        for (std::size_t i = 0; i < model.parameter_count(); ++i) {
            jac.col(as_index(i)) = povm.probability_derivative(phi, model.tangent(theta, i));
        }
        return jac;
    };
    return f;
}

RMatrix classical_fisher(const ClassicalFamily& family, std::span<const double> theta) {
    if (theta.size() != family.parameter_count) throw DimensionError("theta has the wrong dimension");
    const RVector p = family.probabilities(theta);
    const RMatrix jac = family.jacobian_at(theta);
    if (jac.rows() != p.size()) throw DimensionError("Jacobian and distribution disagree in outcome count");
    const auto m = as_index(family.parameter_count);
    RMatrix j = RMatrix::Zero(m, m);
    double excluded = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p(k) < kProbabilityFloor) {
            excluded += std::max(p(k), 0.0);
            const double slope = jac.row(k).cwiseAbs().maxCoeff();
            if (slope > 1e-8) {
                std::ostringstream os;
                os << "outcome " << k << " has probability " << p(k) << " but derivative " << slope;
                throw SingularSupportError(os.str());
            }
            continue;
        }
        j += jac.row(k).transpose() * jac.row(k) / p(k);
    }
    if (excluded > 1e-10) {
        std::ostringstream os;
        os << "outcomes below the probability floor carry mass " << excluded;
        throw SingularSupportError(os.str());
    }
    return 0.5 * (j + j.transpose());
}

Povm optimal_measurement_quasi_parallel(const PureStateModel& model, const std::vector<Theta>& samples,
                                        double tol) {
    const QuasiParallelResult qp = is_quasi_parallel(model, samples, tol);
    if (!qp.flag) {
        std::ostringstream os;
        os << "samples " << qp.witness_first << " and " << qp.witness_second
           << " have a non-real aligned overlap (relative imaginary part " << qp.witness_value << ")";
        throw NonRealOverlapError(os.str(), qp.witness_first, qp.witness_second, qp.witness_value);
    }

    std::vector<StateVector> family = qp.aligned;
    for (std::size_t a = 0; a < samples.size(); ++a) {
        const HorizontalLift lift = horizontal_lift(model, samples[a]);
        const cplx phase = inner(lift.phi, qp.aligned[a]);
        for (const auto& l : lift.lifts) family.push_back(phase * l);
    }
    const std::vector<StateVector> basis = gram_schmidt_real(family, tol);

    const auto r = as_index(basis.size());
    CMatrix q(as_index(dimension(model.space())), r);
    for (Eigen::Index k = 0; k < r; ++k) q.col(k) = basis[static_cast<std::size_t>(k)].orthonormal_coordinates();
    RMatrix coeffs(r, as_index(samples.size()));
    for (std::size_t a = 0; a < samples.size(); ++a) {
        coeffs.col(as_index(a)) = (q.adjoint() * qp.aligned[a].orthonormal_coordinates()).real();
    }

    // A sample orthogonal to a basis vector would lose that outcome's Fisher
    // contribution to the probability floor, so mix the basis by the best of
    // a few fixed real rotations.
    RMatrix best_rotation = RMatrix::Identity(r, r);
    double best_min = coeffs.size() ? coeffs.cwiseAbs().minCoeff() : 1.0;
    std::normal_distribution<double> normal;
    for (std::uint64_t seed = 1; seed <= 16 && best_min < 1e-3; ++seed) {
        std::mt19937_64 rng(seed);
        RMatrix g(r, r);
        for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
        const RMatrix rot = Eigen::HouseholderQR<RMatrix>(g).householderQ();
        const double worst = (rot.transpose() * coeffs).cwiseAbs().minCoeff();
        if (worst > best_min) {
            best_min = worst;
            best_rotation = rot;
        }
    }
    const CMatrix rotated = q * best_rotation.cast<cplx>();

    std::vector<StateVector> out;
    for (Eigen::Index k = 0; k < r; ++k) {
        out.push_back(StateVector::from_orthonormal_coordinates(model.space(), rotated.col(k)));
    }
    return pvm_from_basis(out);
}

namespace {

Outcomes draw(const RVector& p, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::discrete_distribution<std::size_t> dist(p.data(), p.data() + p.size());
    Outcomes out(n);
    for (auto& o : out) o = dist(rng);
    return out;
}

}  // namespace

Outcomes sample_outcomes(const Povm& povm, const StateVector& state, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream) {
    if (n < 1) throw SampleSizeError("at least one draw is required");
    return draw(induced_distribution(povm, state), n, seed, stream);
}

Outcomes sample_outcomes(const Povm& povm, const CMatrix& rho, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream) {
    if (n < 1) throw SampleSizeError("at least one draw is required");
    return draw(induced_distribution(povm, rho), n, seed, stream);
}

EstimatorStats estimator_covariance(const Outcomes& outcomes, const EstimateFn& estimate) {
    if (outcomes.size() < 2) throw SampleSizeError("the sample covariance needs at least two outcomes");
    std::vector<RVector> values;
    values.reserve(outcomes.size());
    for (auto o : outcomes) values.push_back(estimate(o));
    const Eigen::Index m = values.front().size();
    EstimatorStats s;
    s.n = outcomes.size();
    s.mean = RVector::Zero(m);
    for (const auto& v : values) {
        if (v.size() != m) throw DimensionError("estimates differ in dimension");
        s.mean += v;
    }
    s.mean /= static_cast<double>(s.n);
    s.covariance = RMatrix::Zero(m, m);
    for (const auto& v : values) s.covariance += (v - s.mean) * (v - s.mean).transpose();
    s.covariance /= static_cast<double>(s.n - 1);
    return s;
}

EstimateFn score_estimator(const ClassicalFamily& family, std::span<const double> theta0) {
    const RMatrix jc = classical_fisher(family, theta0);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(jc);
    if (!(es.eigenvalues().minCoeff() > kRankTolerance * std::max(1.0, es.eigenvalues().maxCoeff()))) {
        throw RankDeficiencyError("classical Fisher matrix is singular at theta0");
    }
    const RMatrix jinv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    const RVector p = family.probabilities(theta0);
    const RMatrix jac = family.jacobian_at(theta0);
    RVector t0(as_index(theta0.size()));
    for (std::size_t i = 0; i < theta0.size(); ++i) t0(as_index(i)) = theta0[i];
    return [=](std::size_t omega) -> RVector {
        const auto k = as_index(omega);
        if (k >= p.size() || p(k) < kProbabilityFloor) return t0;
        return t0 + jinv * (jac.row(k).transpose() / p(k));
    };
}

EstimateFn position_estimator(const GridSpace& grid) {
    return [grid](std::size_t k) {
        RVector v(1);
        v(0) = grid.point(k);
        return v;
    };
}

}  // namespace qgeom
