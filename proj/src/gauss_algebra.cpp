#include "vibron/gauss_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace vibron {

namespace {

constexpr double kInvariantTol = 1e-8;    // gate for bloch_messiah inputs
constexpr double kPhaseTol = 1e-12;       // entry considered significant
constexpr double kSigmaZeroTol = 1e-12;   // unsqueezed mode threshold

void require_square(const RealMatrix& m, const char* where) {
    if (m.rows() != m.cols())
        throw DimensionMismatch(std::string(where) + ": matrix must be square");
}

} // namespace

double BogoliubovTransform::unitarity_defect() const {
    const Index m = modes();
    return (y * y.adjoint() - x * x.adjoint() - Matrix::Identity(m, m)).norm();
}

double BogoliubovTransform::symmetry_defect() const {
    Matrix s = x * y.transpose();
    return (s - s.transpose()).norm();
}

Vector polar_cosh(const Vector& xi) {
    Vector out(xi.size());
    for (Index j = 0; j < xi.size(); ++j)
        out(j) = std::cosh(std::abs(xi(j)));
    return out;
}

Vector polar_sinh(const Vector& xi) {
    Vector out(xi.size());
    for (Index j = 0; j < xi.size(); ++j) {
        const double r = std::abs(xi(j));
        out(j) = (r == 0.0) ? cd(0.0, 0.0)
                            : (xi(j) / r) * std::sinh(r);
    }
    return out;
}

double duschinsky_condition(const RealMatrix& j) {
    Eigen::JacobiSVD<RealMatrix> svd(j);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

BogoliubovTransform bogoliubov_from_duschinsky(const RealMatrix& j,
                                               const RealVector& delta) {
    require_square(j, "bogoliubov_from_duschinsky");
    if (delta.size() != j.rows())
        throw DimensionMismatch("bogoliubov_from_duschinsky: delta length mismatch");

    Eigen::JacobiSVD<RealMatrix> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > smax * j.rows() * std::numeric_limits<double>::epsilon()))
        throw SingularDuschinsky("bogoliubov_from_duschinsky: J singular (condition " +
                                 std::to_string(smax / std::max(smin, 1e-300)) + ")");

    const RealMatrix jti = svd.matrixU() *
                           svd.singularValues().cwiseInverse().asDiagonal() *
                           svd.matrixV().transpose();   // (Jᵀ)⁻¹ = U S⁻¹ Vᵀ

    BogoliubovTransform b;
    b.x = (0.5 * (j - jti)).cast<cd>();
    b.y = (0.5 * (j + jti)).cast<cd>();
    b.z = (delta / std::sqrt(2.0)).cast<cd>();
    return b;
}

DoktorovFactors doktorov_factorize(const RealMatrix& j, const RealVector& delta) {
    require_square(j, "doktorov_factorize");
    if (delta.size() != j.rows())
        throw DimensionMismatch("doktorov_factorize: delta length mismatch");

    Eigen::JacobiSVD<RealMatrix> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > smax * j.rows() * std::numeric_limits<double>::epsilon()))
        throw SingularDuschinsky("doktorov_factorize: J singular");

    DoktorovFactors dok;
    dok.u2 = svd.matrixU();
    dok.l = svd.singularValues();       // descending by Eigen convention
    dok.u1 = svd.matrixV().transpose(); // J = U2 diag(l) U1
    dok.condition = smax / smin;

    // Deterministic sign convention: first significant entry of each U2
    // column positive, compensated in the matching U1 row.
    for (Index c = 0; c < dok.u2.cols(); ++c) {
        Index r = 0;
        while (r < dok.u2.rows() - 1 && std::abs(dok.u2(r, c)) <= kPhaseTol) ++r;
        if (dok.u2(r, c) < 0.0) {
            dok.u2.col(c) *= -1.0;
            dok.u1.row(c) *= -1.0;
        }
    }

    dok.beta = svd.solve(delta) / std::sqrt(2.0);
    return dok;
}

BogoliubovTransform doktorov_transform(const DoktorovFactors& dok) {
    const RealVector sh = ((dok.l.array() - dok.l.array().inverse()) * 0.5).matrix();
    const RealVector ch = ((dok.l.array() + dok.l.array().inverse()) * 0.5).matrix();
    BogoliubovTransform b;
    b.x = (dok.u2 * sh.asDiagonal() * dok.u1).cast<cd>();
    b.y = (dok.u2 * ch.asDiagonal() * dok.u1).cast<cd>();
    b.z = (dok.u2 * dok.l.asDiagonal() * dok.u1 * dok.beta).cast<cd>();
    return b;
}

BogoliubovTransform compose_chain(const DoktorovFactors& dok,
                                  const RealMatrix& u_ht,
                                  const Vector& xi,
                                  const Vector& alpha) {
    const Index m = dok.modes();
    if (u_ht.rows() != m || u_ht.cols() != m)
        throw DimensionMismatch("compose_chain: u_ht dimension mismatch");
    if (xi.size() != m || alpha.size() != m)
        throw DimensionMismatch("compose_chain: xi/alpha length mismatch");

    const RealVector shl = ((dok.l.array() - dok.l.array().inverse()) * 0.5).matrix();
    const RealVector chl = ((dok.l.array() + dok.l.array().inverse()) * 0.5).matrix();
    const RealMatrix p = dok.u1 * u_ht.transpose();

    const Matrix a = (dok.u2 * shl.asDiagonal() * p).cast<cd>();  // sinh branch
    const Matrix c = (dok.u2 * chl.asDiagonal() * p).cast<cd>();  // cosh branch

    const Vector chx = polar_cosh(xi);
    const Vector shx = polar_sinh(xi);

    // Conjugation through S(Ξ) sends a† → cosh(Ξ)a† + sinh(Ξ)* a, so the
    // X block picks up the conjugated sinh; for real κ both agree.
    BogoliubovTransform b;
    b.x = a * chx.asDiagonal() + c * shx.conjugate().asDiagonal();
    b.y = c * chx.asDiagonal() + a * shx.asDiagonal();
    b.z = (dok.u2 * dok.l.asDiagonal() * dok.u1 * dok.beta).cast<cd>() +
          b.x * alpha + b.y * alpha.conjugate();
    return b;
}

// --------------------------- Takagi factorization ---------------------------
//
// Con-eigenvalue route: G w̄ = t w maps to the real symmetric eigenproblem
// H [u; v] = t [u; v] with H = [[Re G, Im G], [Im G, -Re G]] and w = u + i v.
// The spectrum of H is {±t_j}; the nonnegative half yields the Takagi basis.
// Near-zero clusters are handled by restricting G to the cluster subspace and
// recursing, which keeps the basis unitary when ±t gaps collapse.

namespace {

struct TakagiResult {
    Matrix w;
    RealVector t;
};

TakagiResult takagi_impl(const Matrix& g, int depth) {
    const Index n = g.rows();
    TakagiResult res;
    res.w = Matrix::Identity(n, n);
    res.t = RealVector::Zero(n);
    if (n == 0) return res;

    const double scale = g.cwiseAbs().maxCoeff();
    if (scale < 1e-300) return res;   // zero matrix: W = I, t = 0

    RealMatrix h(2 * n, 2 * n);
    h.topLeftCorner(n, n) = g.real();
    h.topRightCorner(n, n) = g.imag();
    h.bottomLeftCorner(n, n) = g.imag();
    h.bottomRightCorner(n, n) = -g.real();
    h = 0.5 * (h + h.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("takagi: eigen decomposition failed");

    // indices sorted by eigenvalue descending
    std::vector<Index> order(2 * n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return es.eigenvalues()(a) > es.eigenvalues()(b);
    });

    const double small = (depth < 8) ? 1e-5 * scale : 0.0;

    // large con-eigenvalues: take the top eigenvectors directly
    std::vector<Index> big;
    for (Index k = 0; k < n; ++k) {
        if (es.eigenvalues()(order[static_cast<std::size_t>(k)]) > small)
            big.push_back(order[static_cast<std::size_t>(k)]);
        else
            break;
    }

    Index col = 0;
    for (Index idx : big) {
        res.w.col(col) = es.eigenvectors().col(idx).head(n) +
                         cd(0, 1) * es.eigenvectors().col(idx).tail(n);
        res.t(col) = es.eigenvalues()(idx);
        ++col;
    }

    const Index k_small = n - col;
    if (k_small > 0) {
        // complex basis of the |t| ≤ small eigenspace; the space is closed
        // under w → i·w, so complex Gram-Schmidt drops the duplicates
        Matrix basis(n, k_small);
        Index have = 0;
        for (Index q = 0; q < 2 * n && have < k_small; ++q) {
            const Index idx = order[static_cast<std::size_t>(q)];
            if (std::abs(es.eigenvalues()(idx)) > small) continue;
            Vector wv = es.eigenvectors().col(idx).head(n) +
                        cd(0, 1) * es.eigenvectors().col(idx).tail(n);
            for (Index b = 0; b < have; ++b)
                wv -= basis.col(b) * (basis.col(b).dot(wv));
            const double nrm = wv.norm();
            if (nrm > 0.5) {
                basis.col(have) = wv / nrm;
                ++have;
            }
        }
        if (have < k_small)
            throw NumericalFailure("takagi: failed to extract zero-cluster basis");

        const Matrix gblk = basis.adjoint() * g * basis.conjugate();
        TakagiResult sub = takagi_impl(0.5 * (gblk + gblk.transpose()), depth + 1);
        res.w.block(0, col, n, k_small) = basis * sub.w;
        res.t.segment(col, k_small) = sub.t;
    }
    return res;
}

} // namespace

std::pair<Matrix, RealVector> takagi(const Matrix& g) {
    if (g.rows() != g.cols())
        throw DimensionMismatch("takagi: matrix must be square");
    TakagiResult r = takagi_impl(0.5 * (g + g.transpose()).eval(), 0);
    return {std::move(r.w), std::move(r.t)};
}

// ---------------------------- Bloch-Messiah ---------------------------------

namespace {

// Per-column phase canonicalization.  With σ > 0 the (V, W) pair only has a
// joint ±1 freedom; unsqueezed columns carry a full U(1) phase.
void canonicalize_phases(Matrix& v, Matrix& w, const RealVector& sigma) {
    for (Index c = 0; c < v.cols(); ++c) {
        Index r = 0;
        while (r < v.rows() - 1 && std::abs(v(r, c)) <= kPhaseTol) ++r;
        const cd pivot = v(r, c);
        if (std::abs(pivot) <= kPhaseTol) continue;
        if (sigma(c) <= kSigmaZeroTol) {
            const cd phase = std::conj(pivot) / std::abs(pivot);
            v.col(c) *= phase;
            w.col(c) *= phase;
        } else {
            const bool flip = (pivot.real() < -kPhaseTol * std::abs(pivot)) ||
                              (std::abs(pivot.real()) <= kPhaseTol * std::abs(pivot) &&
                               pivot.imag() < 0.0);
            if (flip) {
                v.col(c) *= -1.0;
                w.col(c) *= -1.0;
            }
        }
    }
}

bool column_precedes(const Matrix& v, Index a, Index b) {
    for (Index r = 0; r < v.rows(); ++r) {
        if (v(r, a).real() != v(r, b).real()) return v(r, a).real() > v(r, b).real();
        if (v(r, a).imag() != v(r, b).imag()) return v(r, a).imag() > v(r, b).imag();
    }
    return false;
}

} // namespace

BlochMessiahForm bloch_messiah(const BogoliubovTransform& b) {
    const Index m = b.modes();
    if (b.x.rows() != m || b.x.cols() != m || b.y.cols() != m || b.z.size() != m)
        throw DimensionMismatch("bloch_messiah: inconsistent block dimensions");
    if (b.unitarity_defect() > kInvariantTol || b.symmetry_defect() > kInvariantTol)
        throw InvariantViolation("bloch_messiah: symplectic invariants violated (defects " +
                                 std::to_string(b.unitarity_defect()) + ", " +
                                 std::to_string(b.symmetry_defect()) + ")");

    // G = Y⁻¹X is symmetric by the invariant; its Takagi form G = W tanh(Σ) Wᵀ
    // supplies a W that is jointly consistent with Y's SVD by construction.
    const Matrix g = b.y.partialPivLu().solve(b.x);
    auto [w, t] = takagi(0.5 * (g + g.transpose()).eval());

    BlochMessiahForm form;
    form.w = std::move(w);
    form.v = b.y * form.w;
    form.sigma.resize(m);
    for (Index c = 0; c < m; ++c) {
        const double cosh_sig = form.v.col(c).norm();   // ‖Y W e_c‖ = cosh σ_c
        form.v.col(c) /= cosh_sig;
        form.sigma(c) = std::asinh(t(c) * cosh_sig);    // sinh σ = tanh σ · cosh σ
    }

    canonicalize_phases(form.v, form.w, form.sigma);

    // descending σ; exact ties broken lexicographically on the V columns
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index c) {
        if (form.sigma(a) != form.sigma(c)) return form.sigma(a) > form.sigma(c);
        return column_precedes(form.v, a, c);
    });
    BlochMessiahForm out;
    out.v.resize(m, m);
    out.w.resize(m, m);
    out.sigma.resize(m);
    for (Index c = 0; c < m; ++c) {
        out.v.col(c) = form.v.col(order[static_cast<std::size_t>(c)]);
        out.w.col(c) = form.w.col(order[static_cast<std::size_t>(c)]);
        out.sigma(c) = form.sigma(order[static_cast<std::size_t>(c)]);
    }

    // Input displacement solving z = X γ + Y γ̄; reduces to W e^{−Σ} V† z for
    // real transforms.
    const Vector y1 = out.v.adjoint() * b.z;
    const Vector y2 = out.v.transpose() * b.z.conjugate();
    Vector p(m);
    for (Index c = 0; c < m; ++c)
        p(c) = std::cosh(out.sigma(c)) * y2(c) - std::sinh(out.sigma(c)) * y1(c);
    out.gamma = out.w.conjugate() * p;
    return out;
}

BogoliubovTransform reconstruct(const BlochMessiahForm& form) {
    const Index m = form.modes();
    RealVector sh(m), ch(m);
    for (Index c = 0; c < m; ++c) {
        sh(c) = std::sinh(form.sigma(c));
        ch(c) = std::cosh(form.sigma(c));
    }
    BogoliubovTransform b;
    b.x = form.v * sh.asDiagonal() * form.w.transpose();
    b.y = form.v * ch.asDiagonal() * form.w.adjoint();
    b.z = b.x * form.gamma + b.y * form.gamma.conjugate();
    return b;
}

} // namespace vibron
