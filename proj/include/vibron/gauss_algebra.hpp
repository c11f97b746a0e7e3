// gauss_algebra.hpp — exact linear algebra of multimode Gaussian operators:
// Duschinsky-to-Bogoliubov conversion, Doktorov SVD factorization, composition
// of the full operator chain, and Bloch-Messiah refactorization.
#pragma once

#include "vibron/types.hpp"

#include <utility>

namespace vibron {

// Linear transform a'† = X a + Y a† + z of the bosonic creation operators.
// Any unitary Gaussian operator induces one; the pair (X, Y) must satisfy
//   Y·Y† − X·X† = I   and   X·Yᵀ symmetric.
struct BogoliubovTransform {
    Matrix x;
    Matrix y;
    Vector z;

    Index modes() const { return y.rows(); }

    // Frobenius norms of the two symplectic residuals.
    double unitarity_defect() const;   // ‖YY† − XX† − I‖_F
    double symmetry_defect() const;    // ‖XYᵀ − (XYᵀ)ᵀ‖_F
};

// J = U2·diag(l)·U1 with the singular values l sorted descending, plus the
// dimensionless displacement β = (1/√2)·J⁻¹·δ.  All blocks are real.
struct DoktorovFactors {
    RealMatrix u2;
    RealVector l;
    RealMatrix u1;
    RealVector beta;
    double condition{1.0};   // l_max / l_min of J

    Index modes() const { return l.size(); }
};

// Canonical factorization of a pure Gaussian unitary:
//   X = V·sinh(Σ)·Wᵀ,  Y = V·cosh(Σ)·W†,
// with Σ ≥ 0 descending and a deterministic phase convention.  gamma is the
// input-side displacement; for real transforms gamma = W·exp(−Σ)·V†·z.
struct BlochMessiahForm {
    Matrix v;
    RealVector sigma;
    Matrix w;
    Vector gamma;

    Index modes() const { return sigma.size(); }
};

// Condition number of the Duschinsky matrix (singular value ratio).
double duschinsky_condition(const RealMatrix& j);

// Bogoliubov form of the Duschinsky map:
//   X = ½(J − (Jᵀ)⁻¹),  Y = ½(J + (Jᵀ)⁻¹),  z = δ/√2.
// Throws SingularDuschinsky if J is numerically singular.
BogoliubovTransform bogoliubov_from_duschinsky(const RealMatrix& j,
                                               const RealVector& delta);

// SVD factorization of J with deterministic column signs and β = (1/√2)J⁻¹δ.
DoktorovFactors doktorov_factorize(const RealMatrix& j, const RealVector& delta);

// Bogoliubov transform of the full chain
//   R(U2) S(ln L) R(U1) D(β) R(U_htᵀ) S(Ξ) D(α),
// where Ξ = diag(xi) and alpha are the per-mode non-Condon factors for one κ.
// The per-mode squeeze entries act in polar form (cosh|ξ|, e^{i·arg ξ}sinh|ξ|),
// which keeps the symplectic invariants exact for complex κ.
BogoliubovTransform compose_chain(const DoktorovFactors& dok,
                                  const RealMatrix& u_ht,
                                  const Vector& xi,
                                  const Vector& alpha);

// Doktorov transform alone (the xi = alpha = 0, U_ht = I limit).
BogoliubovTransform doktorov_transform(const DoktorovFactors& dok);

// Bloch-Messiah refactorization.  Throws InvariantViolation if the input's
// symplectic residuals exceed 1e-8.
BlochMessiahForm bloch_messiah(const BogoliubovTransform& b);

// Rebuild (X, Y, z) from a form; bloch_messiah ∘ reconstruct is the identity
// to 1e-10 on valid transforms.
BogoliubovTransform reconstruct(const BlochMessiahForm& form);

// Takagi factorization G = W·diag(t)·Wᵀ of a complex symmetric matrix,
// t ≥ 0 descending, W unitary.  Deterministic for identical inputs.
std::pair<Matrix, RealVector> takagi(const Matrix& g);

// Polar entrywise functions of a diagonal squeeze matrix Ξ = diag(xi):
// cosh part diag(cosh|ξ_j|) and sinh part diag(e^{i·arg ξ_j}·sinh|ξ_j|).
Vector polar_cosh(const Vector& xi);
Vector polar_sinh(const Vector& xi);

} // namespace vibron
