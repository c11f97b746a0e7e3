#include "vibron/ht_factors.hpp"

#include <cmath>

namespace vibron {

namespace {

constexpr double kPoleGuard = 1e-12;

// atanh on [0, 1) with the domain guard shared by callers
double real_arctanh(double r) {
    if (r >= 1.0)
        throw DomainError("single_mode_factors: |t| >= 1, arctanh domain exceeded");
    return std::atanh(r);
}

} // namespace

SingleModeFactors single_mode_factors(cd kappa, double b, double d) {
    const cd kd = kappa * d;
    const cd one_minus = 1.0 - kd;
    if (std::abs(one_minus) <= kPoleGuard)
        throw PoleError("single_mode_factors: kappa*d at the pole of the factorization");

    const cd t = kd / one_minus;
    const double r = std::abs(t);
    const double theta = std::arg(t);
    const cd phase = (r == 0.0) ? cd(1.0, 0.0) : t / r;

    SingleModeFactors f;
    f.xi = real_arctanh(r) * std::exp(cd(0.0, theta));

    const double xr = std::abs(f.xi);
    const double sech = 1.0 / std::cosh(xr);
    const cd pexp = std::cosh(xr) + phase * std::sinh(xr);   // polar exp(ξ)

    const cd c0 = kappa * b / std::sqrt(2.0);
    f.alpha = c0 * pexp;

    // Scalar fixed by normal-ordering exp(κb q̂)exp(κd q̂²)|0⟩ against
    // C·S(ξ)·D(α)|0⟩; exact for complex κ, and equal to the first-order form
    // exp((κb)²/4 + |κb|²/4) when d = 0.
    const cd exponent = c0 * c0 * (1.0 + t) / 2.0 +
                        cd(0.5 * std::norm(f.alpha), 0.0) +
                        f.alpha * f.alpha * std::conj(t) / 2.0;
    f.c = std::exp(exponent) / std::sqrt(sech * one_minus);
    return f;
}

double HtModeFactors::probability_prefactor() const {
    double prod = std::exp(2.0 * kappa.real() * mu0);
    for (Index j = 0; j < c.size(); ++j) prod *= std::norm(c(j));
    return prod;
}

HtModeFactors build_ht_factors(cd kappa, const DimensionlessTdm& tdm) {
    const HtRotation rot = tdm.has_quadratic
        ? ht_rotation(tdm.lambda2, tdm.lambda)
        : HtRotation{RealMatrix::Identity(tdm.lambda.size(), tdm.lambda.size()),
                     RealVector::Zero(tdm.lambda.size()), tdm.lambda};

    const Index m = rot.b.size();
    HtModeFactors out;
    out.kappa = kappa;
    out.mu0 = tdm.mu0;
    out.u_ht = rot.u;
    out.c.resize(m);
    out.xi.resize(m);
    out.alpha.resize(m);
    for (Index j = 0; j < m; ++j) {
        const SingleModeFactors f = single_mode_factors(kappa, rot.b(j), rot.d(j));
        out.c(j) = f.c;
        out.xi(j) = f.xi;
        out.alpha(j) = f.alpha;
    }
    return out;
}

double axis_normalization(const DimensionlessTdm& tdm, HtOrder order) {
    double n = tdm.mu0 * tdm.mu0;
    if (order == HtOrder::condon) return n;

    n += 0.5 * tdm.lambda.squaredNorm();
    if (order == HtOrder::ht1) return n;

    const RealMatrix& l2 = tdm.lambda2;
    const Index m = l2.rows();
    const double trace = l2.trace();
    double diag_sq = 0.0, all_sq = 0.0;
    for (Index j = 0; j < m; ++j) {
        diag_sq += l2(j, j) * l2(j, j);
        for (Index k = 0; k < m; ++k) all_sq += l2(j, k) * l2(j, k);
    }
    n += tdm.mu0 * trace;
    n += 0.25 * (trace * trace - diag_sq);     // Σ_{j≠k} Λ_jj Λ_kk
    n += 0.5 * (all_sq - diag_sq);             // Σ_{j≠k} Λ_jk²
    n += 0.75 * diag_sq;
    return n;
}

NormalizationConstant normalization_constant(const std::vector<DimensionlessTdm>& tdms,
                                             HtOrder order) {
    NormalizationConstant out;
    out.order = order;
    for (const auto& tdm : tdms) {
        const double n = axis_normalization(tdm, order);
        out.per_axis[tdm.axis] = n;
        out.value += n;
    }
    if (!(out.value > 0.0))
        throw ValidationError("normalization_constant: total normalization must be positive");
    return out;
}

} // namespace vibron
