// oracle.hpp — independent truncated-Fock validation path: dense application
// of Gaussian/non-Gaussian operator sequences to the vacuum.
#pragma once

#include "vibron/types.hpp"

#include <vector>

namespace vibron {

using Pattern = std::vector<int>;

// The TDM polynomial μ(q̂) = μ⁽⁰⁾ + Σ λ_j q̂_j + q̂ᵀ Λ q̂.
struct TdmPolynomial {
    double mu0{0.0};
    RealVector lambda;
    RealMatrix lambda2;   // may be 0x0 when absent
};

struct OracleOp {
    enum class Kind { rotation, squeeze, displacement, exp_tdm, apply_tdm };

    Kind kind{Kind::rotation};
    Matrix g;          // rotation
    Vector xi;         // squeeze (diagonal)
    Vector alpha;      // displacement
    cd kappa{0.0};     // exp_tdm
    TdmPolynomial mu;  // exp_tdm / apply_tdm

    bool unitary() const;

    static OracleOp rotation(Matrix g);
    static OracleOp squeeze(Vector xi);
    static OracleOp displacement(Vector alpha);
    static OracleOp exp_tdm(cd kappa, TdmPolynomial mu);
    static OracleOp apply_tdm(TdmPolynomial mu);
};

struct OracleOptions {
    int padding{-1};                 // <0 selects the policy default
    bool verify_convergence{true};   // compare against doubled padding
    double tolerance{1e-9};
};

// Dense state over the truncated product basis.  levels is the per-mode
// workspace size (requested cutoff + padding).
struct TruncatedState {
    Index modes{0};
    int levels{0};
    int requested_cutoff{0};
    std::vector<cd> amplitudes;

    cd amplitude(const Pattern& m) const;
    double norm() const;
};

// Applies ops right-to-left (the last entry acts on the vacuum first).  The
// workspace is padded above the requested cutoff; with verify_convergence the
// padding is doubled until the requested amplitudes settle below tolerance,
// throwing NonConvergence if two doublings are not enough.
TruncatedState truncated_oracle_state(Index modes, int cutoff,
                                      const std::vector<OracleOp>& ops,
                                      const OracleOptions& options = {});

} // namespace vibron
