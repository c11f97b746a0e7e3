// ht_factors.hpp — per-mode Gaussian factorization of exp(κμ̂)|0⟩ and the
// closed-form normalization constants.
#pragma once

#include "vibron/molecule.hpp"
#include "vibron/types.hpp"

#include <map>
#include <vector>

namespace vibron {

// Scalars of the single-mode identity
//   exp(κ b q̂ + κ d q̂²)|0⟩ = C · S(ξ) · D(α)|0⟩.
struct SingleModeFactors {
    cd c;
    cd xi;
    cd alpha;
};

// Exact closed form.  Throws PoleError when κd ≈ 1 and DomainError when the
// induced |tanh| parameter leaves the arctanh domain.
SingleModeFactors single_mode_factors(cd kappa, double b, double d);

// All per-mode factors for one κ and one polarization axis, together with the
// rotation that diagonalizes Λ.
struct HtModeFactors {
    cd kappa;
    double mu0{0.0};
    Vector c;
    Vector xi;
    Vector alpha;
    RealMatrix u_ht;

    Index modes() const { return xi.size(); }
    // exp(2·Re(κ)·μ⁽⁰⁾)·Π_j |C_j|², the scalar in front of the Gaussian
    // probability.
    double probability_prefactor() const;
};

HtModeFactors build_ht_factors(cd kappa, const DimensionlessTdm& tdm);

// ⟨0|μ̂²|0⟩ per axis and the total over axes.
struct NormalizationConstant {
    double value{0.0};
    HtOrder order{HtOrder::condon};
    std::map<Axis, double> per_axis;
};

double axis_normalization(const DimensionlessTdm& tdm, HtOrder order);
NormalizationConstant normalization_constant(const std::vector<DimensionlessTdm>& tdms,
                                             HtOrder order);

} // namespace vibron
