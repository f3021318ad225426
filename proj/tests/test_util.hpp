// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::testing {

inline CVector random_cvector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
    return v;
}

inline StateVector random_state(std::mt19937_64& rng, const Space& space) {
    const auto n = static_cast<Eigen::Index>(dimension(space));
    return StateVector(space, random_cvector(rng, n)).normalized();
}

/**
 * Smooth m-parameter family on C^dim: the normalization of
 * psi0 + sum_k theta_k v_k + sum_{k<=l} theta_k theta_l w_kl,
 * with closed-form derivatives.
 */
inline PureStateModel random_smooth_model(std::uint64_t seed, std::size_t dim, std::size_t m) {
    std::mt19937_64 rng(seed);
    const auto n = static_cast<Eigen::Index>(dim);
    const CVector psi0 = random_cvector(rng, n);
    std::vector<CVector> v, w;
    for (std::size_t k = 0; k < m; ++k) v.push_back(random_cvector(rng, n));
    for (std::size_t k = 0; k < m * m; ++k) w.push_back(random_cvector(rng, n, 0.3));

    auto raw = [=](std::span<const double> t) {
        CVector a = psi0;
        for (std::size_t k = 0; k < m; ++k) a += t[k] * v[k];
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = k; l < m; ++l) a += t[k] * t[l] * w[k * m + l];
        return a;
    };
    auto raw_d = [=](std::span<const double> t, std::size_t i) {
        CVector d = v[i];
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = k; l < m; ++l) {
                if (k == i) d += t[l] * w[k * m + l];
                if (l == i) d += t[k] * w[k * m + l];
            }
        return d;
    };
    auto amps = [=](std::span<const double> t) -> CVector {
        const CVector a = raw(t);
        return a / a.norm();
    };
    auto deriv = [=](std::span<const double> t, std::size_t i) -> CVector {
        const CVector a = raw(t);
        const CVector da = raw_d(t, i);
        const double nrm = a.norm();
        return da / nrm - a * (a.dot(da).real() / (nrm * nrm * nrm));
    };
    ParameterBox box{std::vector<double>(m, -1.0), std::vector<double>(m, 1.0)};
    return PureStateModel("random", BasisSpace(dim), box, amps, deriv);
}

/// Random smooth phase alpha(theta) = c0 + c.theta + theta^T Q theta + a sin(b.theta).
struct RandomPhase {
    double c0 = 0.0;
    RVector c;
    RMatrix q;
    double a = 0.0;
    RVector b;

    RandomPhase(std::mt19937_64& rng, std::size_t m) {
        std::normal_distribution<double> g;
        c0 = 3.0 * g(rng);
        c = RVector(static_cast<Eigen::Index>(m));
        b = RVector(static_cast<Eigen::Index>(m));
        q = RMatrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            c(i) = 2.0 * g(rng);
            b(i) = g(rng);
        }
        for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = g(rng);
        q = 0.5 * (q + q.transpose());
        a = g(rng);
    }

    [[nodiscard]] double value(std::span<const double> t) const {
        const Eigen::Map<const RVector> x(t.data(), static_cast<Eigen::Index>(t.size()));
        return c0 + c.dot(x) + x.dot(q * x) + a * std::sin(b.dot(x));
    }
    [[nodiscard]] RVector gradient(std::span<const double> t) const {
        const Eigen::Map<const RVector> x(t.data(), static_cast<Eigen::Index>(t.size()));
        return c + 2.0 * q * x + a * std::cos(b.dot(x)) * b;
    }
};

inline PureStateModel randomly_rephased(const PureStateModel& model, std::mt19937_64& rng) {
    const RandomPhase ph(rng, model.parameter_count());
    return rephase(
        model, [ph](std::span<const double> t) { return ph.value(t); },
        [ph](std::span<const double> t) { return ph.gradient(t); });
}

inline double max_abs(const RMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace qgeom::testing
