#include "vibron/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace vibron {

namespace {

constexpr Index kWorkspaceBudget = Index{1} << 24;

// Dense workspace with strided per-mode ladder actions.
struct Workspace {
    Index modes;
    Index levels;
    std::vector<Index> strides;
    std::vector<double> sqrt_table;
    Index dim;

    Workspace(Index modes_, Index levels_) : modes(modes_), levels(levels_) {
        strides.assign(static_cast<std::size_t>(modes), 1);
        for (Index j = modes - 2; j >= 0; --j)
            strides[static_cast<std::size_t>(j)] =
                strides[static_cast<std::size_t>(j + 1)] * levels;
        dim = strides[0] * levels;
        if (dim > kWorkspaceBudget || dim <= 0)
            throw CutoffExceeded("truncated_oracle_state: workspace dimension exceeds budget");
        sqrt_table.resize(static_cast<std::size_t>(levels) + 1);
        for (std::size_t n = 0; n < sqrt_table.size(); ++n)
            sqrt_table[n] = std::sqrt(static_cast<double>(n));
    }

    // out += coef * a_j * in   ((a_j v)[m] = sqrt(m_j+1) v[m+e_j])
    void add_lower(Index j, cd coef, const std::vector<cd>& in, std::vector<cd>& out) const {
        const Index s = strides[static_cast<std::size_t>(j)];
        const Index block = s * levels;
        if (s == 1) {
            for (Index base = 0; base < dim; base += block)
                for (Index n = 0; n + 1 < levels; ++n)
                    out[static_cast<std::size_t>(base + n)] +=
                        coef * sqrt_table[static_cast<std::size_t>(n + 1)] *
                        in[static_cast<std::size_t>(base + n + 1)];
            return;
        }
        for (Index base = 0; base < dim; base += block)
            for (Index n = 0; n + 1 < levels; ++n) {
                const cd w = coef * sqrt_table[static_cast<std::size_t>(n + 1)];
                const Index off = base + n * s;
                Eigen::Map<Vector>(out.data() + off, s) +=
                    w * Eigen::Map<const Vector>(in.data() + off + s, s);
            }
    }

    // out += coef * a_j† * in  ((a_j† v)[m] = sqrt(m_j) v[m-e_j])
    void add_raise(Index j, cd coef, const std::vector<cd>& in, std::vector<cd>& out) const {
        const Index s = strides[static_cast<std::size_t>(j)];
        const Index block = s * levels;
        if (s == 1) {
            for (Index base = 0; base < dim; base += block)
                for (Index n = 1; n < levels; ++n)
                    out[static_cast<std::size_t>(base + n)] +=
                        coef * sqrt_table[static_cast<std::size_t>(n)] *
                        in[static_cast<std::size_t>(base + n - 1)];
            return;
        }
        for (Index base = 0; base < dim; base += block)
            for (Index n = 1; n < levels; ++n) {
                const cd w = coef * sqrt_table[static_cast<std::size_t>(n)];
                const Index off = base + n * s;
                Eigen::Map<Vector>(out.data() + off, s) +=
                    w * Eigen::Map<const Vector>(in.data() + off - s, s);
            }
    }

    // out += coef * q_j * in with q = (a + a†)/√2
    void add_q(Index j, cd coef, const std::vector<cd>& in, std::vector<cd>& out) const {
        const cd w = coef / std::sqrt(2.0);
        add_lower(j, w, in, out);
        add_raise(j, w, in, out);
    }
};

double vec_norm(const std::vector<cd>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())).norm();
}

Matrix unitary_log(const Matrix& g) {
    Eigen::ComplexEigenSolver<Matrix> es(g);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("truncated_oracle_state: rotation log failed");
    Vector logs(es.eigenvalues().size());
    for (Index j = 0; j < logs.size(); ++j) {
        const cd lam = es.eigenvalues()(j);
        const double mod = std::abs(lam);
        if (mod < 0.5)
            throw NumericalFailure("truncated_oracle_state: rotation matrix not unitary");
        logs(j) = cd(0.0, std::arg(lam));
    }
    return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().inverse();
}

// Hermitian action H·v of one operator family, with exp(op) = exp(ζ·H).
// Every generator here is either anti-Hermitian (rotation, squeeze,
// displacement: K = iH, ζ = i) or a real multiple of the Hermitian TDM
// polynomial; exp(κμ̂) splits into the two commuting Hermitian propagations
// exp(Re κ·μ̂)·exp(i·Im κ·μ̂).
struct HermitianAction {
    const Workspace& ws;
    Matrix theta;                     // rotation: H = −i a†ᵀΘa
    Vector xi;                        // squeeze:  H = −i K
    Vector alpha;                     // displacement
    const TdmPolynomial* mu{nullptr}; // H = μ̂(q)
    int kind;
    mutable std::vector<cd> scratch;

    HermitianAction(const Workspace& ws_, int kind_) : ws(ws_), kind(kind_) {
        scratch.assign(static_cast<std::size_t>(ws.dim), cd(0, 0));
    }

    void operator()(const std::vector<cd>& in, std::vector<cd>& out) const {
        std::fill(out.begin(), out.end(), cd(0, 0));
        const cd mi(0, -1);   // −i, turning the anti-Hermitian K into H
        switch (kind) {
            case 0:   // rotation: K = Σ Θ_jk a_j† a_k
                for (Index k = 0; k < ws.modes; ++k) {
                    bool used = false;
                    for (Index j = 0; j < ws.modes; ++j) used |= (theta(j, k) != cd(0, 0));
                    if (!used) continue;
                    std::fill(scratch.begin(), scratch.end(), cd(0, 0));
                    ws.add_lower(k, cd(1, 0), in, scratch);
                    for (Index j = 0; j < ws.modes; ++j)
                        if (theta(j, k) != cd(0, 0))
                            ws.add_raise(j, mi * theta(j, k), scratch, out);
                }
                break;
            case 1:   // squeeze: K = ½ Σ (ξ a†² − ξ̄ a²)
                for (Index j = 0; j < ws.modes; ++j) {
                    if (xi(j) == cd(0, 0)) continue;
                    std::fill(scratch.begin(), scratch.end(), cd(0, 0));
                    ws.add_raise(j, cd(1, 0), in, scratch);
                    ws.add_raise(j, mi * 0.5 * xi(j), scratch, out);
                    std::fill(scratch.begin(), scratch.end(), cd(0, 0));
                    ws.add_lower(j, cd(1, 0), in, scratch);
                    ws.add_lower(j, mi * -0.5 * std::conj(xi(j)), scratch, out);
                }
                break;
            case 2:   // displacement: K = Σ (α a† − ᾱ a)
                for (Index j = 0; j < ws.modes; ++j) {
                    if (alpha(j) == cd(0, 0)) continue;
                    ws.add_raise(j, mi * alpha(j), in, out);
                    ws.add_lower(j, mi * -std::conj(alpha(j)), in, out);
                }
                break;
            default:  // TDM polynomial, already Hermitian
                apply_mu(cd(1, 0), in, out);
                break;
        }
    }

    void apply_mu(cd scale, const std::vector<cd>& in, std::vector<cd>& out) const {
        if (mu->mu0 != 0.0)
            for (Index i = 0; i < ws.dim; ++i)
                out[static_cast<std::size_t>(i)] +=
                    scale * mu->mu0 * in[static_cast<std::size_t>(i)];
        for (Index j = 0; j < ws.modes; ++j)
            if (mu->lambda.size() > 0 && mu->lambda(j) != 0.0)
                ws.add_q(j, scale * mu->lambda(j), in, out);
        if (mu->lambda2.size() > 0) {
            for (Index k = 0; k < ws.modes; ++k) {
                bool used = false;
                for (Index j = 0; j < ws.modes; ++j) used |= (mu->lambda2(j, k) != 0.0);
                if (!used) continue;
                std::fill(scratch.begin(), scratch.end(), cd(0, 0));
                ws.add_q(k, cd(1, 0), in, scratch);
                for (Index j = 0; j < ws.modes; ++j)
                    if (mu->lambda2(j, k) != 0.0)
                        ws.add_q(j, scale * mu->lambda2(j, k), scratch, out);
            }
        }
    }
};

// One Lanczos propagation step v ← exp(ζH)v.  Returns false when the Krylov
// budget is exhausted before the coefficient tail settles.
bool lanczos_step(const HermitianAction& h, cd zeta, std::vector<cd>& v, Index k_max) {
    const std::size_t dim = v.size();
    const double norm0 = vec_norm(v);
    if (norm0 < 1e-300 || zeta == cd(0, 0)) return true;

    std::vector<std::vector<cd>> basis;
    basis.reserve(static_cast<std::size_t>(k_max));
    basis.emplace_back(v);
    for (auto& x : basis[0]) x /= norm0;

    std::vector<double> alpha, beta;
    std::vector<cd> w(dim);
    double hscale = 0.0;
    bool settled = false;

    auto coefficients = [&](std::size_t k) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Index>(k),
                                                  static_cast<Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            t(static_cast<Index>(i), static_cast<Index>(i)) = alpha[i];
            if (i + 1 < k) {
                t(static_cast<Index>(i), static_cast<Index>(i + 1)) = beta[i];
                t(static_cast<Index>(i + 1), static_cast<Index>(i)) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Vector y = Vector::Zero(static_cast<Index>(k));
        for (Index q = 0; q < static_cast<Index>(k); ++q) {
            cd acc(0, 0);
            for (Index p = 0; p < static_cast<Index>(k); ++p)
                acc += es.eigenvectors()(q, p) * std::exp(zeta * es.eigenvalues()(p)) *
                       es.eigenvectors()(0, p);
            y(q) = acc;
        }
        return y;
    };

    std::size_t k_done = 0;
    for (Index step = 0; step < k_max; ++step) {
        h(basis.back(), w);
        hscale = std::max(hscale, vec_norm(w));
        Eigen::Map<Vector> wm(w.data(), static_cast<Index>(dim));
        const Eigen::Map<const Vector> qm(basis.back().data(), static_cast<Index>(dim));
        const cd a = qm.dot(wm);
        alpha.push_back(a.real());
        wm -= a.real() * qm;
        if (basis.size() > 1)
            wm -= beta.back() *
                  Eigen::Map<const Vector>(basis[basis.size() - 2].data(),
                                           static_cast<Index>(dim));
        const double b = wm.norm();
        k_done = alpha.size();

        if (b <= 1e-13 * std::max(hscale, 1.0)) {
            settled = true;   // Krylov space closed: the result is exact
            break;
        }
        // tail coefficient decides convergence of the matrix function
        if (k_done >= 6 && k_done % 2 == 0) {
            const Vector y = coefficients(k_done);
            if (std::abs(y(y.size() - 1)) <= 1e-14 &&
                std::abs(y(y.size() - 2)) <= 1e-14) {
                settled = true;
                break;
            }
        }
        if (step + 1 == k_max) break;
        beta.push_back(b);
        basis.emplace_back(w);
        for (auto& x : basis.back()) x /= b;
    }
    if (!settled) return false;

    const Vector y = coefficients(k_done);
    Eigen::Map<Vector> vm(v.data(), static_cast<Index>(dim));
    vm.setZero();
    for (std::size_t q = 0; q < k_done; ++q)
        vm += (norm0 * y(static_cast<Index>(q))) *
              Eigen::Map<const Vector>(basis[q].data(), static_cast<Index>(dim));
    return true;
}

// v ← exp(ζH)·v with a-priori step splitting so each Lanczos run stays short
// (classical three-term recurrence, no reorthogonalization).
void lanczos_expm(const HermitianAction& h, cd zeta, std::vector<cd>& v, int depth) {
    if (depth > 24)
        throw NonConvergence("truncated_oracle_state: operator exponential did not converge");
    const std::size_t dim = v.size();
    const double norm0 = vec_norm(v);
    if (norm0 < 1e-300 || zeta == cd(0, 0)) return;

    const Index k_max = std::max<Index>(
        12, std::min<Index>(40, static_cast<Index>(4'000'000 / std::max<std::size_t>(dim, 1))));

    std::vector<cd> hv(dim);
    h(v, hv);
    const double rho = vec_norm(hv) / norm0;
    long steps = std::max(1L, std::lround(std::ceil(std::abs(zeta) * rho / 10.0)));
    if (depth == 0 && steps > 1L << 16)
        throw NonConvergence("truncated_oracle_state: operator norm too large for propagation");

    const cd dz = zeta / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        if (!lanczos_step(h, dz, v, k_max)) {
            // unconverged sub-step: halve it recursively
            lanczos_expm(h, dz * 0.5, v, depth + 1);
            lanczos_expm(h, dz * 0.5, v, depth + 1);
        }
    }
}

void apply_exponential(const Workspace& ws, const OracleOp& op, std::vector<cd>& v) {
    switch (op.kind) {
        case OracleOp::Kind::rotation: {
            HermitianAction h(ws, 0);
            h.theta = unitary_log(op.g.conjugate());   // R(G) = exp(a†ᵀ ln(Ḡ) a)
            lanczos_expm(h, cd(0, 1), v, 0);
            break;
        }
        case OracleOp::Kind::squeeze: {
            HermitianAction h(ws, 1);
            h.xi = op.xi;
            lanczos_expm(h, cd(0, 1), v, 0);
            break;
        }
        case OracleOp::Kind::displacement: {
            HermitianAction h(ws, 2);
            h.alpha = op.alpha;
            lanczos_expm(h, cd(0, 1), v, 0);
            break;
        }
        case OracleOp::Kind::exp_tdm: {
            HermitianAction h(ws, 3);
            h.mu = &op.mu;
            if (op.kappa.real() != 0.0) lanczos_expm(h, cd(op.kappa.real(), 0), v, 0);
            if (op.kappa.imag() != 0.0) lanczos_expm(h, cd(0, op.kappa.imag()), v, 0);
            break;
        }
        case OracleOp::Kind::apply_tdm:
            break;   // handled by the caller
    }
}

TruncatedState run_once(Index modes, int cutoff, const std::vector<OracleOp>& ops,
                        int levels) {
    Workspace ws(modes, levels);
    TruncatedState state;
    state.modes = modes;
    state.levels = levels;
    state.requested_cutoff = cutoff;
    state.amplitudes.assign(static_cast<std::size_t>(ws.dim), cd(0, 0));
    state.amplitudes[0] = cd(1, 0);

    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->kind == OracleOp::Kind::apply_tdm) {
            HermitianAction h(ws, 3);
            h.mu = &it->mu;
            std::vector<cd> out(static_cast<std::size_t>(ws.dim), cd(0, 0));
            h.apply_mu(cd(1, 0), state.amplitudes, out);
            state.amplitudes.swap(out);
        } else {
            apply_exponential(ws, *it, state.amplitudes);
        }
    }
    return state;
}

int default_padding(int cutoff, const std::vector<OracleOp>& ops) {
    double max_squeeze = 0.0;
    for (const auto& op : ops) {
        if (op.kind == OracleOp::Kind::squeeze)
            for (Index j = 0; j < op.xi.size(); ++j)
                max_squeeze = std::max(max_squeeze, std::abs(op.xi(j)));
    }
    const int policy = 2 * static_cast<int>(std::ceil(max_squeeze)) * cutoff;
    return std::max(10, policy);
}

double requested_box_difference(const TruncatedState& a, const TruncatedState& b) {
    double worst = 0.0;
    Pattern m(static_cast<std::size_t>(a.modes), 0);
    while (true) {
        worst = std::max(worst, std::abs(a.amplitude(m) - b.amplitude(m)));
        Index j = a.modes - 1;
        while (j >= 0 && m[static_cast<std::size_t>(j)] == a.requested_cutoff) {
            m[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++m[static_cast<std::size_t>(j)];
    }
    return worst;
}

} // namespace

bool OracleOp::unitary() const {
    if (kind == Kind::apply_tdm) return false;
    if (kind == Kind::exp_tdm) return kappa.real() == 0.0;
    return true;
}

OracleOp OracleOp::rotation(Matrix g) {
    OracleOp op;
    op.kind = Kind::rotation;
    op.g = std::move(g);
    return op;
}

OracleOp OracleOp::squeeze(Vector xi) {
    OracleOp op;
    op.kind = Kind::squeeze;
    op.xi = std::move(xi);
    return op;
}

OracleOp OracleOp::displacement(Vector alpha) {
    OracleOp op;
    op.kind = Kind::displacement;
    op.alpha = std::move(alpha);
    return op;
}

OracleOp OracleOp::exp_tdm(cd kappa, TdmPolynomial mu) {
    OracleOp op;
    op.kind = Kind::exp_tdm;
    op.kappa = kappa;
    op.mu = std::move(mu);
    return op;
}

OracleOp OracleOp::apply_tdm(TdmPolynomial mu) {
    OracleOp op;
    op.kind = Kind::apply_tdm;
    op.mu = std::move(mu);
    return op;
}

cd TruncatedState::amplitude(const Pattern& m) const {
    if (static_cast<Index>(m.size()) != modes)
        throw DimensionMismatch("TruncatedState: pattern length mismatch");
    Index idx = 0;
    Index stride = 1;
    for (Index j = modes - 1; j >= 0; --j) {
        const int mj = m[static_cast<std::size_t>(j)];
        if (mj < 0 || mj >= levels)
            throw CutoffExceeded("TruncatedState: pattern outside workspace");
        idx += stride * mj;
        stride *= levels;
    }
    return amplitudes[static_cast<std::size_t>(idx)];
}

double TruncatedState::norm() const {
    return vec_norm(amplitudes);
}

TruncatedState truncated_oracle_state(Index modes, int cutoff,
                                      const std::vector<OracleOp>& ops,
                                      const OracleOptions& options) {
    if (modes <= 0)
        throw DimensionMismatch("truncated_oracle_state: modes must be positive");
    if (cutoff < 0)
        throw CutoffExceeded("truncated_oracle_state: negative cutoff");

    const int pad = options.padding >= 0 ? options.padding : default_padding(cutoff, ops);
    TruncatedState state = run_once(modes, cutoff, ops, cutoff + 1 + pad);
    if (!options.verify_convergence) return state;

    TruncatedState doubled = run_once(modes, cutoff, ops, cutoff + 1 + 2 * pad);
    if (requested_box_difference(state, doubled) <= options.tolerance) return doubled;

    TruncatedState quadrupled = run_once(modes, cutoff, ops, cutoff + 1 + 4 * pad);
    if (requested_box_difference(doubled, quadrupled) <= options.tolerance)
        return quadrupled;

    throw NonConvergence("truncated_oracle_state: amplitudes not converged after padding doublings");
}

} // namespace vibron
