// helpers.hpp — deterministic random generators shared by the test suites.
#pragma once

#include "vibron/gauss_algebra.hpp"
#include "vibron/types.hpp"

#include <Eigen/QR>

#include <random>

namespace vibron::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline RealMatrix random_orthogonal(std::mt19937_64& rng, Index n) {
    RealMatrix a(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) a(r, c) = uniform(rng, -1.0, 1.0);
    Eigen::HouseholderQR<RealMatrix> qr(a);
    RealMatrix q = qr.householderQ();
    RealMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < n; ++c)
        if (rmat(c, c) < 0.0) q.col(c) *= -1.0;
    return q;
}

inline Matrix random_unitary(std::mt19937_64& rng, Index n) {
    Matrix a(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
            a(r, c) = cd(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < n; ++c) {
        const cd d = rmat(c, c);
        if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }
    return q;
}

// Random invertible J = O1·diag(exp(u))·O2 with u uniform in (−1, 1).
inline RealMatrix random_duschinsky(std::mt19937_64& rng, Index n) {
    const RealMatrix o1 = random_orthogonal(rng, n);
    const RealMatrix o2 = random_orthogonal(rng, n);
    RealVector s(n);
    for (Index j = 0; j < n; ++j) s(j) = std::exp(uniform(rng, -1.0, 1.0));
    return o1 * s.asDiagonal() * o2;
}

inline RealVector random_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
    RealVector v(n);
    for (Index j = 0; j < n; ++j) v(j) = uniform(rng, lo, hi);
    return v;
}

// Random valid Bloch-Messiah form: unitary V, W, σ in [0, sigma_max],
// |γ| entries bounded by gamma_max.
inline BlochMessiahForm random_form(std::mt19937_64& rng, Index n, double sigma_max,
                                    double gamma_max) {
    BlochMessiahForm form;
    form.v = random_unitary(rng, n);
    form.w = random_unitary(rng, n);
    form.sigma.resize(n);
    for (Index j = 0; j < n; ++j) form.sigma(j) = uniform(rng, 0.0, sigma_max);
    std::sort(form.sigma.data(), form.sigma.data() + n, std::greater<double>());
    form.gamma.resize(n);
    for (Index j = 0; j < n; ++j)
        form.gamma(j) = cd(uniform(rng, -gamma_max, gamma_max),
                           uniform(rng, -gamma_max, gamma_max));
    return form;
}

} // namespace vibron::testing
