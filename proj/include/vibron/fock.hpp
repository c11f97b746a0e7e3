// fock.hpp — Fock-basis amplitude evaluation for pure Gaussian states via the
// multidimensional Hermite-polynomial recursion.
#pragma once

#include "vibron/gauss_algebra.hpp"
#include "vibron/types.hpp"

#include <vector>

namespace vibron {

using Pattern = std::vector<int>;

// Practical guard on Σ m_j for single-amplitude evaluation.
inline constexpr int kMaxTotalPhotons = 60;

// All patterns with m_j ≤ per_mode_cutoff, ordered by total photon number and
// colexicographically within each total.  Throws CutoffExceeded when the box
// would exceed the enumeration budget.
std::vector<Pattern> enumerate_patterns(Index modes, int per_mode_cutoff);

// Recursion data of the pure Gaussian state R(V)S(Σ)R(W)†D(γ)|0⟩:
//   |ψ⟩ = N₀ · exp(½ a†ᵀA a† + bᵀa†)|0⟩
// with A = V̄·tanh(Σ)·V†, b = V̄·sech(Σ)·Wᵀγ and the vacuum amplitude N₀.
struct GaussianState {
    Matrix a;
    Vector b;
    cd vacuum;

    explicit GaussianState(const BlochMessiahForm& form);
    Index modes() const { return b.size(); }
};

// Dense amplitude table over the box {0..cutoff}^M.  Amplitudes are exact for
// the state (no truncation enters the recursion); the box only bounds which
// patterns are tabulated.
class FockAmplitudeTable {
public:
    FockAmplitudeTable(const GaussianState& state, int per_mode_cutoff);

    cd amplitude(const Pattern& m) const;
    double probability(const Pattern& m) const;
    Index modes() const { return modes_; }
    int cutoff() const { return cutoff_; }

private:
    Index modes_;
    int cutoff_;
    std::vector<Index> strides_;
    std::vector<cd> amps_;

    Index flat(const Pattern& m) const;
};

// Single-amplitude evaluation: scale·⟨m|R(V)S(Σ)R(W)†D(γ)|0⟩.
cd gaussian_fock_amplitude(const BlochMessiahForm& form, cd scale, const Pattern& m);

} // namespace vibron
