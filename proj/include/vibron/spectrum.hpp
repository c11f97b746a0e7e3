// spectrum.hpp — Condon, exact non-Condon, and τ-approximated non-Condon
// spectral profiles; broadening, error sweeps, and shot-noise sampling.
#pragma once

#include "vibron/fock.hpp"
#include "vibron/ht_factors.hpp"
#include "vibron/molecule.hpp"
#include "vibron/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vibron {

struct ProfileMetadata {
    std::string molecule;
    std::vector<Axis> axes;
    HtOrder order{HtOrder::condon};
    std::string tau_label;   // "condon", "exact", or the numeric τ
    double tau{0.0};
    int cutoff{0};
};

// Line list over Fock outcomes, in the fock-engine enumeration order.
// Exact/Condon values are probabilities ≥ 0; τ-approximated profiles may
// carry small negative bins that are retained in raw form.
struct SpectralProfile {
    std::vector<Pattern> patterns;
    RealVector values;
    RealVector frequencies;   // ω = m·ω′ in cm^-1
    ProfileMetadata meta;

    double total_mass() const;
    // (frequency, accumulated value) with lines within tol of each other
    // sharing a bin; sorted by frequency ascending.
    std::vector<std::pair<double, double>> merged_lines(double tol = 1e-6) const;
};

SpectralProfile condon_profile(const MoleculeSpec& spec, int cutoff);

// Unnormalized f_m(κ) = exp(2Re(κ)μ⁰)·Π|C_j|²·|⟨m|R(V)S(Σ)R(W)†D(γ)|0⟩|².
SpectralProfile aux_profile(const MoleculeSpec& spec, Axis axis, cd kappa,
                            int cutoff, HtOrder order);

// Four-point κ combination (iτ, τ, −τ, 0) per axis, normalized by Σ_r N_r.
SpectralProfile noncondon_profile(const MoleculeSpec& spec,
                                  const std::vector<Axis>& axes, double tau,
                                  HtOrder order, int cutoff);

// τ-free reference: ht1 by exact ladder insertion of μ̂ into the Gaussian
// amplitudes (any mode count), ht2 through the truncated oracle (dense guard).
SpectralProfile exact_profile(const MoleculeSpec& spec,
                              const std::vector<Axis>& axes, HtOrder order,
                              int cutoff);

enum class WidthMode { sigma, fwhm };

struct BroadenedSpectrum {
    RealVector grid;        // cm^-1, strictly increasing
    RealVector intensity;
    double width{0.0};      // Gaussian σ actually applied
    double clamped_mass{0.0};  // negative line mass dropped before broadening
};

BroadenedSpectrum broaden(const SpectralProfile& profile, double width_cm1,
                          double grid_step, WidthMode mode = WidthMode::sigma);

struct ErrorSweep {
    std::vector<double> taus;     // descending
    std::vector<double> errors;   // E(τ) = L1 over Fock outcomes
    double slope{0.0};            // log E per log(1/τ); −2 for quadratic decay
    bool slope_valid{false};
};

ErrorSweep error_sweep(const MoleculeSpec& spec, const std::vector<Axis>& axes,
                       HtOrder order, std::vector<double> taus, int cutoff);

// One sampling device: nonnegative within-cutoff distribution values plus the
// signed weight its empirical frequencies carry in the combination.
struct SampleDevice {
    RealVector values;   // aligned with the shared pattern list
    double weight{0.0};  // includes the device scale and the κ coefficient
};

struct SampleResult {
    SpectralProfile empirical;
    double tv_distance{0.0};   // ½·L1 against the noiseless combination
};

// Draws `shots` categorical samples from each device (one seed-derived stream
// per device) and forms the signed weighted combination.
SampleResult sample_combination(const std::vector<Pattern>& patterns,
                                const RealVector& frequencies,
                                const std::vector<SampleDevice>& devices,
                                std::int64_t shots, std::uint64_t seed);

// Convenience wrapper building the per-axis devices for the four κ values.
SampleResult sample_profile(const MoleculeSpec& spec, const std::vector<Axis>& axes,
                            HtOrder order, double tau, int cutoff,
                            std::int64_t shots, std::uint64_t seed);

} // namespace vibron
