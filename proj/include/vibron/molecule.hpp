// molecule.hpp — molecular data model, spectroscopic-to-dimensionless unit
// conversions, and construction of λ, Λ, J, δ from raw parameters.
#pragma once

#include "vibron/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vibron {

enum class Axis { x, y, z };
enum class LengthUnit { bohr, angstrom };
enum class HtOrder { condon, ht1, ht2 };

std::string axis_name(Axis a);
std::string order_name(HtOrder o);

// Transition dipole moment expansion for one polarization axis.
// mu0 in Debye, mu1 in D/(u^1/2·length), mu2 in D/(u^1/2·length)^2.
struct AxisTdm {
    double mu0{0.0};
    std::optional<RealVector> mu1;
    std::optional<RealMatrix> mu2;
};

struct MoleculeSpec {
    std::string name;
    Index modes{0};
    RealVector omega_initial;   // cm^-1
    RealVector omega_final;     // cm^-1
    RealMatrix duschinsky;
    std::optional<RealVector> displacement_d;  // u^1/2·length
    std::optional<RealVector> delta;           // dimensionless, pass-through
    LengthUnit length_unit{LengthUnit::bohr};
    std::map<Axis, AxisTdm> tdm;

    std::vector<Axis> axes() const;
    // Highest expansion order the data supports on any axis.
    HtOrder max_order() const;

    // Hard violations (throwing callers reject) and soft warnings
    // (near-orthogonality of quoted-precision Duschinsky matrices).
    std::vector<std::string> validate() const;
    std::vector<std::string> warnings() const;
};

// λ_j = sqrt(ħ/ω_j)·μ_j⁽¹⁾ and Λ_jk = (μ_jk⁽²⁾/2)·sqrt(ħ/ω_j)·sqrt(ħ/ω_k),
// both in Debye, using initial-state frequencies with ω = 2πc·ω̃.
struct DimensionlessTdm {
    Axis axis{Axis::x};
    double mu0{0.0};
    RealVector lambda;      // zero vector when mu1 absent
    RealMatrix lambda2;     // Λ, zero matrix when mu2 absent
    bool has_linear{false};
    bool has_quadratic{false};
};

// Eigensystem of Λ in the convention Λ = Uᵀ·diag(d)·U, plus b = U·λ.
struct HtRotation {
    RealMatrix u;
    RealVector d;
    RealVector b;
};

// sqrt(ħ/(2πc·ω̃)) expressed in u^1/2·length units.
double oscillator_length(double omega_cm1, LengthUnit unit);

// J = Ω′·U_D·Ω⁻¹ and δ (converted from d, or passed through when the file
// carries δ directly).
std::pair<RealMatrix, RealVector> build_bogoliubov_inputs(const MoleculeSpec& spec);

DimensionlessTdm dimensionless_tdm(const MoleculeSpec& spec, Axis axis);

// Eigendecomposition of a real symmetric Λ with deterministic ordering
// (descending eigenvalue, canonical eigenvector sign).
HtRotation ht_rotation(const RealMatrix& lambda2);
HtRotation ht_rotation(const RealMatrix& lambda2, const RealVector& lambda);

} // namespace vibron
